from __future__ import annotations

import numpy as np
import pytest

from pgcolor.property_e import (DatasetError, PropertyECertificate, dataset_hash, expand_base_spread,
                                family_size, load_golden_table, load_dataset, render_table,
                                transport, verify_property_e)
from pgcolor.spreads import search_spread, verify_spread

from conftest import dataset, space

PINNED = {
    "property_e_q2.txt": "9a7172e88449f1e1e5b443c3fbce15fb531ab8d045bce84c2e3c52328c96bc0f",
    "property_e_q3.txt": "2737b92b5235f21f494521dfd988c3364b667500ff9e930154afbb01cc0a37fa",
    "property_e_q4.txt": "06ddc4bf664860cea60f39728b93990527a6f45ed0c2a39d8b3068493fd03a88",
    "property_e_q8.txt": "9f86e7af1d0eba99f76449044659b9a21a6e5df8adc6bff58e30da61dcb5c528",
    "property_e_q2_table.txt": "1e73c22f83bba78d8cb1891a9bf4f92d89472c0a8fc1cc01cceed50ec6182ac8",
}


@pytest.mark.parametrize("name", sorted(PINNED))
def test_dataset_hash_pinned(name):
    assert dataset_hash(name) == PINNED[name]


@pytest.mark.parametrize("q,size", [(2, 15), (3, 40), (4, 85), (8, 585)])
def test_builtin_dataset_verifies(q, size):
    cert = dataset(q)
    v = verify_property_e(cert)
    assert v, v.message
    assert len(cert.S) == size == family_size(q)
    assert v.details["double_count_ok"]


def test_golden_table_reproduced():
    assert render_table(dataset(2)) == load_golden_table()


@pytest.mark.parametrize("q", [2, 3, 4, 8])
def test_member_labels(q):
    labels = dataset(q).member_labels()
    assert sorted(labels) == [(i, j) for i in range(q * q + 1) for j in range(q + 1)]


def test_unsupported_q():
    with pytest.raises(DatasetError):
        load_dataset(5)
    with pytest.raises(DatasetError):
        load_golden_table(4)


@pytest.mark.parametrize("q", [2, 4])
def test_searched_base_expands(q):
    s = space(3, q)
    base = search_spread(s, profile="withE", seed=1).solution
    assert verify_property_e(expand_base_spread(s, base))


def test_expand_rejects_wrong_profile():
    s = space(3, 3)
    sp = search_spread(s).solution
    with pytest.raises(ValueError):
        expand_base_spread(s, sp)


def test_condition_failures_reported():
    cert = dataset(2)
    # swap one member for a copy of another: sizes fine, multiplicities off
    S = [list(m) for m in cert.S]
    S[3] = list(S[7])
    v = verify_property_e(PropertyECertificate(cert.space, cert.P, S))
    assert not v
    assert v.details["condition1"] or v.details["condition2"]


def test_condition3_detected():
    cert = dataset(2)
    s = cert.space
    # P itself contains every P-line
    S = [list(m) for m in cert.S]
    S[0] = list(cert.P)
    v = verify_property_e(PropertyECertificate(s, cert.P, S))
    assert not v and v.details["condition3"] == [0]


def test_non_spread_member_rejected():
    cert = dataset(3)
    S = [list(m) for m in cert.S]
    S[5] = S[5][:-1] + [S[6][0]]
    if verify_spread(cert.space, S[5]):
        pytest.skip("replacement happened to be a spread")
    assert not verify_property_e(PropertyECertificate(cert.space, cert.P, S))


@pytest.mark.parametrize("q", [2, 3])
def test_transport_to_product_model(q):
    cert = dataset(q)
    dst = space(3, q, "product")
    P, S = transport(cert, dst)
    assert verify_property_e(PropertyECertificate(dst, P, S))


def test_multiset_counts():
    cert = dataset(3)
    counts = np.zeros(cert.space.num_lines, dtype=int)
    for m in cert.S:
        np.add.at(counts, m, 1)
    assert set(counts[cert.P].tolist()) == {4}
    others = np.setdiff1d(np.arange(cert.space.num_lines), cert.P)
    assert set(counts[others].tolist()) == {3}
