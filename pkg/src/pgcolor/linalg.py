"""Small dense linear algebra over GF(q), on lists of field codes."""

from __future__ import annotations

from functools import lru_cache

from .field import GF, base_field


class Scalars:
    """Plain-list add/mul/inverse tables for a small field."""

    def __init__(self, f: GF):
        self.f = f
        self.q = f.order
        self.add = f.add_table().tolist()
        self.mul = f.mul_table().tolist()
        self.neg = [f.neg_code(a) for a in range(self.q)]
        self.inv = [0] + [f.inv_code(a) for a in range(1, self.q)]

    def dot(self, a: list[int], b: list[int]) -> int:
        s = 0
        for x, y in zip(a, b):
            s = self.add[s][self.mul[x][y]]
        return s

    def axpy(self, lam: int, x: list[int], y: list[int]) -> list[int]:
        """lam*x + y"""
        return [self.add[self.mul[lam][a]][b] for a, b in zip(x, y)]

    def scale(self, lam: int, x: list[int]) -> list[int]:
        return [self.mul[lam][a] for a in x]


@lru_cache(maxsize=None)
def scalars(q: int) -> Scalars:
    return Scalars(base_field(q))


def rref(rows: list[list[int]], s: Scalars) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = s.scale(s.inv[m[r][c]], m[r])
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = s.axpy(s.neg[m[i][c]], m[r], m[i])
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list[int]], s: Scalars) -> int:
    return len(rref(rows, s)[0]) if rows else 0


def extend_to_basis(rows: list[list[int]], dim: int, s: Scalars) -> list[list[int]]:
    """Append standard basis vectors to independent ``rows`` to span GF(q)^dim."""
    out = [list(r) for r in rows]
    if rank(out, s) != len(out):
        raise ValueError("vectors are linearly dependent")
    for k in range(dim):
        e = [0] * dim
        e[k] = 1
        if rank(out + [e], s) > len(out):
            out.append(e)
        if len(out) == dim:
            break
    return out


def inverse(mat: list[list[int]], s: Scalars) -> list[list[int]]:
    n = len(mat)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(mat)]
    red, piv = rref(aug, s)
    if len(red) < n or piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def matmul(a: list[list[int]], b: list[list[int]], s: Scalars) -> list[list[int]]:
    bt = list(zip(*b))
    return [[s.dot(row, list(col)) for col in bt] for row in a]
