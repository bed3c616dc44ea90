"""Finite fields GF(p^m) in Zech-logarithm form.

Elements are stored two ways.  A *code* is the integer whose base-p digits
are the polynomial coefficients (lowest degree first), so in characteristic 2
addition of codes is plain XOR.  A *log* is the exponent of the fixed
primitive element ``x``; zero has no log and is represented by ``None``
(``-1`` inside numpy tables).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

ZERO_LOG = -1
MAX_ORDER = 1 << 24

# Polynomials used for the published point labels, low degree first.
NAMED_POLYS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 4): (1, 1, 0, 0, 1),                             # x^4+x+1
    (2, 8): (1, 0, 1, 1, 0, 0, 1, 0, 1),                 # x^8+x^6+x^3+x^2+1
    (2, 12): (1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1),    # x^12+x^10+x^2+x+1
    (3, 4): (2, 1, 0, 0, 1),                             # x^4+x+2
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise FieldError."""
    fs = prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    p, e = fs[0], 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# -- polynomial helpers over GF(p), coefficient lists low degree first --------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _polymulmod(a: list[int], b: list[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polymod(out, f, p)


def _xpow(k: int, f: Sequence[int], p: int) -> list[int]:
    result, base = [1], _polymod([0, 1], f, p)
    while k:
        if k & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        k >>= 1
    return result


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    m = len(poly) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    def xpow_minus_x(k: int) -> list[int]:
        h = _xpow(k, poly, p) + [0, 0]
        h[1] = (h[1] - 1) % p
        return _trim(h)

    if xpow_minus_x(p ** m):
        return False
    for r in prime_factors(m):
        if len(_polygcd(list(poly), xpow_minus_x(p ** (m // r)), p)) > 1:
            return False
    return True


def is_primitive(poly: Sequence[int], p: int) -> bool:
    m = len(poly) - 1
    if not is_irreducible(poly, p):
        return False
    order = p ** m - 1
    if order == 1:
        return True
    for r in prime_factors(order):
        if _xpow(order // r, poly, p) == [1]:
            return False
    return True


def least_primitive_poly(p: int, m: int) -> tuple[int, ...]:
    """Monic primitive polynomial with the smallest value sum(c_i p^i)."""
    for low in range(1, p ** m):
        coeffs = [(low // p ** i) % p for i in range(m)] + [1]
        if coeffs[0] and is_primitive(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no primitive polynomial of degree {m} over GF({p})")


# -----------------------------------------------------------------------------

@dataclass(eq=False)
class GF:
    """GF(p^m) with exp/log/Zech tables.  Built by :func:`build_field`."""

    p: int
    m: int
    poly: tuple[int, ...]
    exp: np.ndarray = dc_field(repr=False)      # log -> code
    log: np.ndarray = dc_field(repr=False)      # code -> log (ZERO_LOG at 0)
    zech: np.ndarray = dc_field(repr=False)     # k -> log(1 + x^k)

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def q1(self) -> int:
        return self.order - 1

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m}, poly={list(self.poly)})"

    def describe(self) -> dict:
        return {"p": self.p, "m": self.m, "poly": list(self.poly)}

    # -- code arithmetic (scalars and numpy arrays) --
    def add_codes(self, a, b):
        if self.p == 2:
            return a ^ b
        if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
            out, w = 0, 1
            a, b = int(a), int(b)
            while a or b:
                out += ((a % self.p + b % self.p) % self.p) * w
                a //= self.p
                b //= self.p
                w *= self.p
            return out
        return _digit_add(np.asarray(a), np.asarray(b), self.p, self.m)

    def neg_code(self, a: int) -> int:
        out, w = 0, 1
        while a:
            out += ((-(a % self.p)) % self.p) * w
            a //= self.p
            w *= self.p
        return out

    def mul_codes(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(int(self.log[a]) + int(self.log[b])) % self.q1])

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self.exp[(-int(self.log[a])) % self.q1])

    def element(self, log: int | None) -> "FieldElement":
        return FieldElement(self, None if log is None else log % self.q1)

    def from_code(self, code: int) -> "FieldElement":
        lg = int(self.log[code])
        return FieldElement(self, None if lg == ZERO_LOG else lg)

    def elements(self) -> list["FieldElement"]:
        return [self.from_code(c) for c in range(self.order)]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, None)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 0)

    def add_table(self) -> np.ndarray:
        c = np.arange(self.order)
        return self.add_codes(c[:, None], c[None, :])

    def mul_table(self) -> np.ndarray:
        lg = self.log
        c = np.arange(self.order)
        s = (lg[c][:, None] + lg[c][None, :]) % self.q1
        out = self.exp[s]
        out[(c[:, None] == 0) | (c[None, :] == 0)] = 0
        return out


def _digit_add(a: np.ndarray, b: np.ndarray, p: int, m: int) -> np.ndarray:
    a, b = np.broadcast_arrays(a.astype(np.int64), b.astype(np.int64))
    out = np.zeros(a.shape, dtype=np.int64)
    w = 1
    for _ in range(m):
        out += ((a // w % p + b // w % p) % p) * w
        w *= p
    return out


@dataclass(frozen=True)
class FieldElement:
    field: GF
    log: int | None

    @property
    def is_zero(self) -> bool:
        return self.log is None

    @property
    def code(self) -> int:
        return 0 if self.log is None else int(self.field.exp[self.log])

    def _check(self, other: "FieldElement") -> None:
        if other.field is not self.field:
            raise FieldError("elements from different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return zech_add(self, other)

    def __neg__(self) -> "FieldElement":
        f = self.field
        if self.log is None or f.p == 2:
            return self
        # -1 = x^((order-1)/2) in odd characteristic
        return FieldElement(f, (self.log + f.q1 // 2) % f.q1)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        if self.log is None or other.log is None:
            return self.field.zero
        return FieldElement(self.field, (self.log + other.log) % self.field.q1)

    def __pow__(self, k: int) -> "FieldElement":
        if self.log is None:
            if k == 0:
                return self.field.one
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return self
        return FieldElement(self.field, (self.log * k) % self.field.q1)

    def inverse(self) -> "FieldElement":
        return self ** -1

    def frobenius(self) -> "FieldElement":
        return self ** self.field.p

    def __repr__(self) -> str:
        return "0" if self.log is None else f"x^{self.log}"


def zech_add(a: FieldElement, b: FieldElement) -> FieldElement:
    """x^i + x^j = x^(i + Z(j - i)) with Z the Zech logarithm."""
    a._check(b)
    if a.log is None:
        return b
    if b.log is None:
        return a
    f = a.field
    z = int(f.zech[(b.log - a.log) % f.q1])
    if z == ZERO_LOG:
        return f.zero
    return FieldElement(f, (a.log + z) % f.q1)


def _exp_table(p: int, m: int, poly: Sequence[int]) -> np.ndarray:
    order = p ** m
    exp = np.empty(order - 1, dtype=np.int64)
    if m == 1:
        g = (-poly[0]) % p
        x = 1
        for k in range(order - 1):
            exp[k] = x
            x = x * g % p
        return exp
    if p == 2:
        red = sum(c << i for i, c in enumerate(poly[:m]))
        top = 1 << m
        x = 1
        for k in range(order - 1):
            exp[k] = x
            x <<= 1
            if x & top:
                x ^= top | red
        return exp
    digits = [1] + [0] * (m - 1)
    weights = [p ** i for i in range(m)]
    for k in range(order - 1):
        exp[k] = sum(d * w for d, w in zip(digits, weights))
        carry = digits[-1]
        digits = [0] + digits[:-1]
        if carry:
            digits = [(d - carry * c) % p for d, c in zip(digits, poly[:m])]
    return exp


@lru_cache(maxsize=None)
def build_field(p: int, m: int, poly: tuple[int, ...] | None = None) -> GF:
    """Build GF(p^m).

    Without ``poly`` the published polynomial is used for the four published
    fields and otherwise the least primitive polynomial.  A supplied poly must
    be monic, irreducible and primitive.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if p ** m > MAX_ORDER:
        raise FieldError(f"GF({p}^{m}) exceeds the table cap of 2^24 elements")
    if poly is None:
        poly = NAMED_POLYS.get((p, m)) or least_primitive_poly(p, m)
    poly = tuple(int(c) % p for c in poly)
    if len(poly) != m + 1 or poly[-1] != 1:
        raise FieldError(f"polynomial {list(poly)} is not monic of degree {m}")
    if not is_irreducible(poly, p):
        raise FieldError(f"polynomial {list(poly)} is reducible over GF({p})")
    if not is_primitive(poly, p):
        raise FieldError(f"polynomial {list(poly)} is irreducible but not primitive")
    order = p ** m
    exp = _exp_table(p, m, poly)
    log = np.full(order, ZERO_LOG, dtype=np.int64)
    log[exp] = np.arange(order - 1)
    if np.count_nonzero(log == ZERO_LOG) != 1:
        raise FieldError("x does not generate the multiplicative group")
    one_plus = _plus_one(exp, p, m)
    zech = log[one_plus]
    return GF(p, m, poly, exp, log, zech)


def _plus_one(codes: np.ndarray, p: int, m: int) -> np.ndarray:
    if p == 2:
        return codes ^ 1
    return _digit_add(codes, np.ones_like(codes), p, m)


def field_from_json(d: dict) -> GF:
    return build_field(int(d["p"]), int(d["m"]), tuple(d["poly"]))


# -----------------------------------------------------------------------------

@dataclass(eq=False)
class SubfieldEmbedding:
    """Injective homomorphism GF(p^d) -> GF(p^m) sending the subfield's
    primitive element to x^((p^m-1)/(p^d-1))."""

    sub: GF
    big: GF
    stride: int

    def log_image(self, log: int | None) -> int | None:
        return None if log is None else (log * self.stride) % self.big.q1

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.field is not self.sub:
            raise FieldError("element not in the subfield")
        return FieldElement(self.big, self.log_image(a.log))

    def code_table(self) -> np.ndarray:
        """Subfield code -> big-field code."""
        out = np.zeros(self.sub.order, dtype=np.int64)
        nz = np.arange(1, self.sub.order)
        out[nz] = self.big.exp[(self.sub.log[nz] * self.stride) % self.big.q1]
        return out


def minimal_polynomial(big: GF, log: int) -> tuple[int, ...]:
    """Minimal polynomial over GF(p) of x^log in ``big``, low degree first."""
    conj, k = [], log % big.q1
    while k not in conj:
        conj.append(k)
        k = (k * big.p) % big.q1
    # multiply out prod (X - x^c) with coefficients in big (as codes)
    coeffs = [1]
    for c in conj:
        root = int(big.exp[c])
        neg_root = big.neg_code(root)
        nxt = [0] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i + 1] = big.add_codes(nxt[i + 1], a)
            nxt[i] = big.add_codes(nxt[i], big.mul_codes(a, neg_root))
        coeffs = nxt
    if any(c >= big.p for c in coeffs):
        raise FieldError("minimal polynomial has coefficients outside GF(p)")
    return tuple(int(c) for c in coeffs)


def subfield_embedding(big: GF, d: int) -> SubfieldEmbedding:
    """Embed GF(p^d) into ``big``.

    The subfield is built on the minimal polynomial of the image generator so
    the log map is a field homomorphism by construction.
    """
    if d < 1 or big.m % d:
        raise FieldError(f"{d} does not divide {big.m}")
    stride = big.q1 // (big.p ** d - 1)
    sub = build_field(big.p, d, minimal_polynomial(big, stride))
    return SubfieldEmbedding(sub, big, stride)


@lru_cache(maxsize=None)
def base_field(q: int) -> GF:
    p, e = prime_power(q)
    return build_field(p, e)


class FieldTower:
    """GF(q^d) viewed as a d-dimensional vector space over a fixed GF(q).

    Coordinates are taken in the basis 1, x, ..., x^(d-1) of the big field,
    and each coordinate is a code of ``base`` (the canonical GF(q) shared by
    every tower over the same q).  A coordinate vector is packed into one
    integer with base-q digits, coordinate 0 least significant.
    """

    def __init__(self, q: int, d: int, poly: tuple[int, ...] | None = None):
        self.q, self.d = q, d
        self.base = base_field(q)
        p, e = self.base.p, self.base.m
        self.big = build_field(p, e * d, poly)
        self.v = (q ** d - 1) // (q - 1)
        self.to_big = self._embed_base()
        self._coordinates()

    def _embed_base(self) -> np.ndarray:
        base, big = self.base, self.big
        if base.m == 1:
            return np.arange(base.order, dtype=np.int64)
        stride = big.q1 // base.q1
        for s in range(1, base.q1):
            if np.gcd(s, base.q1) != 1:
                continue
            g = (stride * s) % big.q1
            # evaluate base.poly at x^g inside big
            acc = 0
            for i, c in enumerate(base.poly):
                term = 0
                for _ in range(c):
                    term = big.add_codes(term, int(big.exp[(g * i) % big.q1]))
                acc = big.add_codes(acc, term)
            if acc == 0:
                out = np.zeros(base.order, dtype=np.int64)
                nz = np.arange(1, base.order)
                out[nz] = big.exp[(base.log[nz] * g) % big.q1]
                return out
        raise FieldError("could not embed the base field")  # pragma: no cover

    def _coordinates(self) -> None:
        q, d, big = self.q, self.d, self.big
        n_vec = q ** d
        codes = np.arange(n_vec, dtype=np.int64)
        acc = np.zeros(n_vec, dtype=np.int64)
        mt = np.zeros((d, q), dtype=np.int64)
        for i in range(d):
            for c in range(q):
                mt[i, c] = big.mul_codes(int(self.to_big[c]), int(big.exp[i % big.q1]) if i else 1)
            digit = codes // q ** i % q
            acc = big.add_codes(acc, mt[i][digit])
        self.big_of_vec = acc
        vec_of_big = np.full(big.order, -1, dtype=np.int64)
        vec_of_big[acc] = codes
        if np.any(vec_of_big < 0):
            raise FieldError("1, x, ..., x^(d-1) is not a basis")  # pragma: no cover
        self.vec_of_big = vec_of_big
        self.vec_of_log = vec_of_big[big.exp]
        self.log_of_vec = big.log[acc]

    def mul_log_table(self, k: int) -> np.ndarray:
        """Vector code -> vector code of (x^k * element)."""
        lg = self.log_of_vec
        out = np.zeros_like(lg)
        nz = lg != ZERO_LOG
        out[nz] = self.vec_of_log[(lg[nz] + k) % self.big.q1]
        return out
