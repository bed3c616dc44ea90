"""Knuth's Algorithm X with dancing links, on flat integer arrays."""

from __future__ import annotations

from typing import Iterator, Sequence


class BudgetExceeded(Exception):
    def __init__(self, nodes: int):
        super().__init__(f"node budget exhausted after {nodes} nodes")
        self.nodes = nodes


class DLX:
    """Exact cover over ``n_primary`` primary and ``n_secondary`` secondary
    columns.  Rows are sequences of column indices; secondary columns are
    covered at most once.  Columns are chosen by minimum remaining size, ties
    to the lowest index, so runs are deterministic.
    """

    def __init__(self, n_primary: int, rows: Sequence[Sequence[int]], n_secondary: int = 0):
        n_cols = n_primary + n_secondary
        self.n_primary = n_primary
        # node 0 is the root, nodes 1..n_cols are column headers
        self.L = list(range(-1, n_cols))
        self.R = list(range(1, n_cols + 2))
        self.U = list(range(n_cols + 1))
        self.D = list(range(n_cols + 1))
        self.C = list(range(n_cols + 1))
        self.row_of = [-1] * (n_cols + 1)
        self.S = [0] * (n_cols + 1)
        self.L[0] = n_primary
        self.R[n_primary] = 0
        for c in range(n_primary + 1, n_cols + 1):
            # secondary headers are self-linked, outside the root ring
            self.L[c] = self.R[c] = c
        for r, cols in enumerate(rows):
            first = None
            for c in sorted(set(cols)):
                h = c + 1
                x = len(self.C)
                self.C.append(h)
                self.row_of.append(r)
                self.U.append(self.U[h])
                self.D.append(h)
                self.D[self.U[h]] = x
                self.U[h] = x
                self.S[h] += 1
                if first is None:
                    self.L.append(x)
                    self.R.append(x)
                    first = x
                else:
                    self.L.append(self.L[first])
                    self.R.append(first)
                    self.R[self.L[first]] = x
                    self.L[first] = x
        self.nodes = 0

    def _cover(self, c: int) -> None:
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        R[L[c]] = R[c]
        L[R[c]] = L[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                D[U[j]] = D[j]
                U[D[j]] = U[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def _uncover(self, c: int) -> None:
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                D[U[j]] = j
                U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[c]] = c
        L[R[c]] = c

    def _choose(self) -> int:
        best, best_size = -1, None
        c = self.R[0]
        while c != 0:
            if best_size is None or self.S[c] < best_size:
                best, best_size = c, self.S[c]
                if best_size == 0:
                    break
            c = self.R[c]
        return best

    def select(self, row: int) -> None:
        """Force ``row`` into every solution (call before :meth:`solutions`)."""
        x = next(i for i in range(len(self.row_of)) if self.row_of[i] == row)
        self._cover(self.C[x])
        j = self.R[x]
        while j != x:
            self._cover(self.C[j])
            j = self.R[j]

    def solutions(self, budget: int | None = None) -> Iterator[list[int]]:
        """Yield every exact cover as a list of row indices."""
        partial: list[int] = []

        def search() -> Iterator[list[int]]:
            self.nodes += 1
            if budget is not None and self.nodes > budget:
                raise BudgetExceeded(self.nodes)
            if self.R[0] == 0:
                yield list(partial)
                return
            c = self._choose()
            if self.S[c] == 0:
                return
            self._cover(c)
            r = self.D[c]
            while r != c:
                partial.append(self.row_of[r])
                j = self.R[r]
                while j != r:
                    self._cover(self.C[j])
                    j = self.R[j]
                yield from search()
                j = self.L[r]
                while j != r:
                    self._uncover(self.C[j])
                    j = self.L[j]
                partial.pop()
                r = self.D[r]
            self._uncover(c)

        yield from search()


def exact_covers(n_primary: int, rows: Sequence[Sequence[int]], n_secondary: int = 0,
                 forced: Sequence[int] = (), budget: int | None = None) -> Iterator[list[int]]:
    dlx = DLX(n_primary, rows, n_secondary)
    for r in forced:
        dlx.select(r)
    for sol in dlx.solutions(budget):
        yield sorted(list(forced) + sol)
