"""Certificate files: a JSON envelope with a content hash, and import that
always re-verifies.

Envelope: ``{kind, schema, space, payload, toolVersion, contentHash}``.  The
hash is SHA-256 over the canonical JSON of ``{kind, schema, space, payload}``
(sorted keys, no whitespace).  Point labels are Singer exponents for the
Singer model; for the product model each point is its coordinate tuple
written as discrete logs in GF(q), with -1 for zero.
"""

from __future__ import annotations

import gzip
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .coloring import UNCOLORED, Coloring, PropertyRCertificate, verify_coloring, verify_property_r
from .field import ZERO_LOG, base_field
from .property_e import PropertyECertificate, verify_property_e
from .space import ProjectiveSpace, space_from_json
from .spreads import verify_parallelism, verify_spread
from .verdict import Verdict

SCHEMA = 1
KINDS = ("spread", "parallelism", "propertyE", "coloring")


class CertificateError(ValueError):
    pass


@dataclass
class ColoringCertificate:
    """A coloring, optionally carrying a property R claim.

    With ``property_r`` set, lines inside its flat may be uncolored in
    ``coloring``; the full-coloring check applies only when every line is
    colored.
    """

    coloring: Coloring
    property_r: PropertyRCertificate | None = None

    @property
    def space(self) -> ProjectiveSpace:
        return self.coloring.space


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_hash(kind: str, space: dict, payload: dict) -> str:
    body = canonical_json({"kind": kind, "schema": SCHEMA, "space": space, "payload": payload})
    return hashlib.sha256(body.encode()).hexdigest()


# -- point labels -------------------------------------------------------------------

def _labels(space: ProjectiveSpace, pts) -> list:
    if space.model == "singer":
        return [int(p) for p in pts]
    log = base_field(space.q).log
    return [[int(log[c]) for c in space.coords(int(p))] for p in pts]


def _points(space: ProjectiveSpace, labels) -> list[int]:
    if space.model == "singer":
        out = [int(p) for p in labels]
        if any(not 0 <= p < space.v for p in out):
            raise CertificateError("point label out of range")
        return out
    f = base_field(space.q)
    out = []
    for lab in labels:
        if len(lab) != space.N:
            raise CertificateError(f"point {lab} has the wrong length")
        codes = [0 if int(l) == ZERO_LOG else int(f.exp[int(l) % f.q1]) for l in lab]
        pt = space.point_of(codes)
        if space.coords(pt) != codes:
            raise CertificateError(f"point {lab} is not normalized")
        out.append(pt)
    return out


def _line_labels(space: ProjectiveSpace, ids) -> list:
    return [_labels(space, pts) for pts in space.lines_of(sorted(int(i) for i in ids))]


def _line_ids(space: ProjectiveSpace, lines) -> list[int]:
    try:
        return [space.line_id(_points(space, l)) for l in lines]
    except KeyError as exc:
        raise CertificateError(f"not a line: {exc}") from None


# -- export -------------------------------------------------------------------------

def _envelope(kind: str, space: ProjectiveSpace, payload: dict) -> dict:
    desc = space.describe()
    return {"kind": kind, "schema": SCHEMA, "space": desc, "payload": payload,
            "toolVersion": __version__, "contentHash": content_hash(kind, desc, payload)}


def spread_envelope(space: ProjectiveSpace, lines) -> dict:
    return _envelope("spread", space, {"lines": _line_labels(space, lines)})


def parallelism_envelope(space: ProjectiveSpace, spreads) -> dict:
    return _envelope("parallelism", space, {"spreads": [_line_labels(space, s) for s in spreads]})


def property_e_envelope(cert: PropertyECertificate) -> dict:
    s = cert.space
    lab = lambda ids: [_labels(s, pts) for pts in s.lines_of(ids)]  # noqa: E731 - keep member order
    return _envelope("propertyE", s, {"q": cert.q, "P": lab(cert.P), "S": [lab(m) for m in cert.S]})


def coloring_envelope(cert: ColoringCertificate, budget: dict | None = None) -> dict:
    col = cert.coloring
    payload: dict[str, Any] = {"palette": int(col.palette),
                               "classes": [_line_labels(col.space, c) for c in col.classes()]}
    if budget is not None:
        payload["budget"] = budget
    if cert.property_r is not None:
        r = cert.property_r
        payload["propertyR"] = {"subgeometry": _labels(col.space, sorted(int(p) for p in r.flat)),
                                "incidentColors": sorted(int(c) for c in r.incident)}
    return _envelope("coloring", col.space, payload)


def export_certificate(obj, path: str | Path | None = None, kind: str | None = None,
                       budget: dict | None = None) -> dict:
    """Envelope for a verified object; written to ``path`` when given
    (gzip-compressed if the name ends in .gz).  Unverified objects are refused.

    Spreads and parallelisms are passed as ``(space, lines)`` tuples with
    ``kind`` set to ``"spread"`` or ``"parallelism"``.
    """
    if isinstance(obj, PropertyECertificate):
        verdict, env = verify_property_e(obj), property_e_envelope(obj)
    elif isinstance(obj, ColoringCertificate):
        verdict, env = _verify_coloring_cert(obj), coloring_envelope(obj, budget)
    elif isinstance(obj, tuple) and kind == "parallelism":
        verdict, env = verify_parallelism(*obj), parallelism_envelope(*obj)
    elif isinstance(obj, tuple) and kind == "spread":
        verdict, env = verify_spread(*obj), spread_envelope(*obj)
    else:
        raise TypeError(f"cannot export {type(obj).__name__} (kind={kind!r})")
    if not verdict:
        raise CertificateError(f"refusing to export an invalid object: {verdict.message}")
    if path is not None:
        write_envelope(env, path)
    return env


def write_envelope(env: dict, path: str | Path) -> None:
    data = (canonical_json(env) + "\n").encode()
    path = Path(path)
    if path.suffix == ".gz":
        data = gzip.compress(data, mtime=0)
    path.write_bytes(data)


# -- import -------------------------------------------------------------------------

def read_envelope(path: str | Path) -> dict:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        try:
            raw = gzip.decompress(raw)
        except (OSError, EOFError) as exc:
            raise CertificateError(f"corrupt gzip stream: {exc}") from None
    try:
        env = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CertificateError(f"malformed JSON: {exc}") from None
    if not isinstance(env, dict):
        raise CertificateError("certificate must be a JSON object")
    return env


def _check_envelope(env: dict) -> None:
    missing = {"kind", "schema", "space", "payload", "contentHash"} - set(env)
    if missing:
        raise CertificateError(f"missing fields {sorted(missing)}")
    if env["schema"] != SCHEMA:
        raise CertificateError(f"schema version {env['schema']} not supported (expected {SCHEMA})")
    if env["kind"] not in KINDS:
        raise CertificateError(f"unknown certificate kind {env['kind']!r}")
    want = content_hash(env["kind"], env["space"], env["payload"])
    if env["contentHash"] != want:
        raise CertificateError("content hash mismatch")


def _verify_coloring_cert(cert: ColoringCertificate) -> Verdict:
    col = cert.coloring
    if cert.property_r is None:
        return verify_coloring(col.space, col)
    v = verify_property_r(cert.property_r)
    if not v:
        return v
    if (col.colors != UNCOLORED).all():
        full = verify_coloring(col.space, col)
        if not full:
            return full
        return Verdict(True, f"{full.message}; {v.message}")
    return v


def decode(env: dict):
    """Rebuild the object an envelope describes (no verification)."""
    kind, payload = env["kind"], env["payload"]
    try:
        space = space_from_json(env["space"])
    except (KeyError, ValueError, TypeError) as exc:
        raise CertificateError(f"bad space descriptor: {exc}") from None
    try:
        if kind == "spread":
            return space, _line_ids(space, payload["lines"])
        if kind == "parallelism":
            return space, [_line_ids(space, s) for s in payload["spreads"]]
        if kind == "propertyE":
            return PropertyECertificate(space, _line_ids(space, payload["P"]),
                                        [_line_ids(space, m) for m in payload["S"]])
        if kind == "coloring":
            classes = [_line_ids(space, c) for c in payload["classes"]]
            col = Coloring.from_classes(space, classes, int(payload["palette"]))
            r = None
            if "propertyR" in payload:
                pr = payload["propertyR"]
                flat = np.array(sorted(_points(space, pr["subgeometry"])), dtype=np.int64)
                mask = np.zeros(space.v, dtype=bool)
                mask[flat] = True
                ipg = col.copy()
                ipg.colors[space.lines_inside(mask)] = UNCOLORED
                r = PropertyRCertificate(space, flat, ipg, np.array(pr["incidentColors"], dtype=np.int64))
            return ColoringCertificate(col, r)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CertificateError):
            raise
        raise CertificateError(f"malformed {kind} payload: {exc}") from None
    raise CertificateError(f"unknown certificate kind {kind!r}")


def verify_envelope(env: dict):
    """Check the envelope, decode it and run the matching verifier."""
    _check_envelope(env)
    obj = decode(env)
    kind = env["kind"]
    if kind == "spread":
        verdict = verify_spread(*obj)
    elif kind == "parallelism":
        verdict = verify_parallelism(*obj)
    elif kind == "propertyE":
        verdict = verify_property_e(obj)
    else:
        verdict = _verify_coloring_cert(obj)
    return obj, verdict


def import_certificate(source: str | Path | dict):
    """Load and verify a certificate; raises CertificateError unless valid."""
    env = source if isinstance(source, dict) else read_envelope(source)
    obj, verdict = verify_envelope(env)
    if not verdict:
        raise CertificateError(f"{env['kind']} certificate failed verification: {verdict.message}")
    return obj
