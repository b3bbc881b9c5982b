"""Exact sparse linear algebra over the rationals.

Rows are dicts mapping column index to Fraction.  Ranks and basis selection
can run in three modes:

  exact:    sparse fraction Gaussian elimination with Markowitz pivoting.
  modular:  dense int64 elimination modulo several 31-bit primes; a rank is
            accepted only when three primes agree, otherwise fall back to
            exact.  A dependence modulo any prime never certifies anything;
            an independence modulo one prime is already exact proof, which
            is what makes the modular basis selection sound.
  auto:     exact below a size threshold, certified modular above it.

Solutions of linear systems are always exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

Row = Mapping[int, Fraction]

# 31-bit primes, largest first; three must agree for a certified rank
PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549)

EXACT_LIMIT = 400  # auto mode switches to certified modular above this

MODES = ("auto", "exact", "modular")


class UnluckyPrime(Exception):
    """A denominator vanished modulo the chosen prime."""


def _as_fraction_rows(rows: Sequence[Row]) -> list[dict[int, Fraction]]:
    out = []
    for r in rows:
        out.append({c: Fraction(v) for c, v in r.items() if v != 0})
    return out


def row_from_list(values) -> dict[int, Fraction]:
    return {i: Fraction(v) for i, v in enumerate(values) if v != 0}


# -- exact elimination -----------------------------------------------------


def rank_exact(rows: Sequence[Row], ncols: int) -> int:
    active = [r for r in _as_fraction_rows(rows) if r]
    col_rows: dict[int, set[int]] = {}
    alive = set(range(len(active)))
    for i in alive:
        for c in active[i]:
            col_rows.setdefault(c, set()).add(i)
    rank = 0
    while alive:
        # Markowitz: cheapest fill-in first, deterministic tie-break
        best = None
        for i in alive:
            for c in active[i]:
                cost = (len(active[i]) - 1) * (len(col_rows[c]) - 1)
                key = (cost, i, c)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, pi, pc = best
        rank += 1
        pivot = active[pi]
        pval = pivot[pc]
        alive.discard(pi)
        for c in pivot:
            col_rows[c].discard(pi)
        for j in list(col_rows.get(pc, ())):
            if j not in alive:
                continue
            row = active[j]
            f = row[pc] / pval
            for c, v in pivot.items():
                cur = row.get(c, Fraction(0)) - f * v
                if cur == 0:
                    if c in row:
                        del row[c]
                        col_rows[c].discard(j)
                else:
                    if c not in row:
                        col_rows.setdefault(c, set()).add(j)
                    row[c] = cur
            if not row:
                alive.discard(j)
    return rank


def solve(rows: Sequence[Row], nunknowns: int, rhs: Sequence[Fraction]):
    """Exact solution x of A x = rhs, or None if inconsistent.  Free
    variables are set to zero; the result is deterministic."""
    aug = _as_fraction_rows(rows)
    b = [Fraction(v) for v in rhs]
    if len(b) != len(aug):
        raise ValueError("rhs length mismatch")
    for r, v in zip(aug, b):
        if v != 0:
            r[nunknowns] = v
    work = [r for r in aug if r]
    pivots: dict[int, dict[int, Fraction]] = {}  # pivot col -> reduced row
    for row in work:
        row = dict(row)
        for c in sorted(set(row) & set(pivots)):
            f = row.get(c)
            if not f:
                continue
            prow = pivots[c]
            for cc, vv in prow.items():
                cur = row.get(cc, Fraction(0)) - f * vv
                if cur == 0:
                    row.pop(cc, None)
                else:
                    row[cc] = cur
        if not row:
            continue
        c = min(row)
        if c == nunknowns:
            return None  # 0 = nonzero
        pval = row[c]
        row = {cc: vv / pval for cc, vv in row.items()}
        for c2, prow in pivots.items():
            f = prow.get(c)
            if f:
                for cc, vv in row.items():
                    cur = prow.get(cc, Fraction(0)) - f * vv
                    if cur == 0:
                        prow.pop(cc, None)
                    else:
                        prow[cc] = cur
        pivots[c] = row
    x = [Fraction(0)] * nunknowns
    for c, row in pivots.items():
        x[c] = row.get(nunknowns, Fraction(0))
    return x


def solve_left(basis_rows: Sequence[Row], ncols: int, target: Row):
    """Exact coefficients c with sum_i c_i basis_i = target, or None."""
    return Echelon(basis_rows, ncols).solve(target)


class Echelon:
    """Reduced echelon factorization of a fixed row set, built once so that
    repeated solve_left calls cost a single row elimination each.

    Each echelon row keeps its expression in the original rows; dependent
    input rows are dropped, so their coefficient is pinned to zero exactly
    like the free variables of the one-shot solver."""

    def __init__(self, rows: Sequence[Row], ncols: int):
        self.k = len(rows)
        self.ncols = ncols
        self.pivots: dict[int, tuple[dict, dict]] = {}  # col -> (row, expr)
        for i, raw in enumerate(_as_fraction_rows(rows)):
            row = dict(raw)
            expr = {i: Fraction(1)}
            self._eliminate(row, expr)
            if not row:
                continue
            c = min(row)
            pval = row[c]
            row = {cc: vv / pval for cc, vv in row.items()}
            expr = {j: v / pval for j, v in expr.items()}
            # keep fully reduced: lets solve() finish in one pass
            for prow, pexpr in self.pivots.values():
                f = prow.get(c)
                if f:
                    _axpy(prow, row, -f)
                    _axpy(pexpr, expr, -f)
            self.pivots[c] = (row, expr)

    def _eliminate(self, row: dict, expr: dict) -> None:
        for c in sorted(set(row) & set(self.pivots)):
            f = row.get(c)
            if not f:
                continue
            prow, pexpr = self.pivots[c]
            _axpy(row, prow, -f)
            _axpy(expr, pexpr, -f)

    def solve(self, target: Row):
        row = {c: Fraction(v) for c, v in target.items() if v != 0}
        expr: dict[int, Fraction] = {}
        self._eliminate(row, expr)
        if row:
            return None
        # row was reduced to zero by subtracting expr . original rows
        return [-expr.get(i, Fraction(0)) for i in range(self.k)]


def _axpy(acc: dict, row: dict, f: Fraction) -> None:
    for c, v in row.items():
        cur = acc.get(c, _ZERO) + f * v
        if cur == 0:
            acc.pop(c, None)
        else:
            acc[c] = cur


_ZERO = Fraction(0)


def _greedy_exact(rows: Sequence[Row], ncols: int) -> list[int]:
    pivots: dict[int, dict[int, Fraction]] = {}
    chosen = []
    for i, raw in enumerate(_as_fraction_rows(rows)):
        row = dict(raw)
        for c in sorted(set(row) & set(pivots)):
            f = row.get(c)
            if not f:
                continue
            for cc, vv in pivots[c].items():
                cur = row.get(cc, Fraction(0)) - f * vv
                if cur == 0:
                    row.pop(cc, None)
                else:
                    row[cc] = cur
        if not row:
            continue
        c = min(row)
        pval = row[c]
        row = {cc: vv / pval for cc, vv in row.items()}
        for prow in pivots.values():
            f = prow.get(c)
            if f:
                for cc, vv in row.items():
                    cur = prow.get(cc, Fraction(0)) - f * vv
                    if cur == 0:
                        prow.pop(cc, None)
                    else:
                        prow[cc] = cur
        pivots[c] = row
        chosen.append(i)
    return chosen


# -- modular path ----------------------------------------------------------


def _row_mod(row: Row, ncols: int, p: int) -> np.ndarray:
    v = np.zeros(ncols, dtype=np.int64)
    for c, val in row.items():
        f = Fraction(val)
        den = f.denominator % p
        if den == 0:
            raise UnluckyPrime(p)
        v[c] = (f.numerator % p) * pow(den, -1, p) % p
    return v


def rank_mod(rows: Sequence[Row], ncols: int, p: int) -> int:
    nr = len(rows)
    if nr == 0 or ncols == 0:
        return 0
    A = np.zeros((nr, ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        A[i] = _row_mod(r, ncols, p)
    r = 0
    for c in range(ncols):
        if r == nr:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        below = np.nonzero(A[r + 1 :, c])[0]
        if below.size:
            sel = r + 1 + below
            A[sel, c:] = (A[sel, c:] - np.outer(A[sel, c], A[r, c:])) % p
        r += 1
    return r


def _certified_rank_modular(rows: Sequence[Row], ncols: int) -> int:
    seen = []
    for p in PRIMES:
        try:
            seen.append(rank_mod(rows, ncols, p))
        except UnluckyPrime:
            continue
        if len(seen) == 3:
            break
    if len(seen) == 3 and len(set(seen)) == 1:
        return seen[0]
    return rank_exact(rows, ncols)


def _greedy_mod(rows: Sequence[Row], ncols: int, p: int) -> list[int]:
    basis = np.zeros((0, ncols), dtype=np.int64)
    pivot_cols: list[int] = []
    chosen = []
    for i, r in enumerate(rows):
        v = _row_mod(r, ncols, p)
        # one pivot at a time: a single product per entry stays below p**2,
        # inside int64; an accumulated dot product would overflow silently
        for k, c in enumerate(pivot_cols):
            f = int(v[c])
            if f:
                v = (v - f * basis[k]) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, p) % p
        if len(pivot_cols):
            col = basis[:, c].copy()
            if np.any(col):
                basis = (basis - np.outer(col, v)) % p
        basis = np.vstack([basis, v])
        pivot_cols.append(c)
        chosen.append(i)
    return chosen


# -- public dispatch -------------------------------------------------------


def rank(rows: Sequence[Row], ncols: int, mode: str = "auto") -> int:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        return rank_exact(rows, ncols)
    if mode == "auto" and max(len(rows), ncols) <= EXACT_LIMIT:
        return rank_exact(rows, ncols)
    return _certified_rank_modular(rows, ncols)


def independent_rows(rows: Sequence[Row], ncols: int, mode: str = "auto") -> list[int]:
    """Indices of a maximal independent subset, greedily in input order.

    The greedy modular pass only ever keeps rows that are exactly
    independent; maximality is certified by comparing against the full
    certified rank, with exact fallback when a prime was unlucky."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact" or (mode == "auto" and max(len(rows), ncols) <= EXACT_LIMIT):
        return _greedy_exact(rows, ncols)
    target = _certified_rank_modular(rows, ncols)
    for p in PRIMES:
        try:
            sel = _greedy_mod(rows, ncols, p)
            # a right-sized selection must also be independent on its own;
            # recheck so an arithmetic defect can never ship a singular basis
            if len(sel) == target and rank_mod([rows[i] for i in sel], ncols, p) == target:
                return sel
        except UnluckyPrime:
            continue
    return _greedy_exact(rows, ncols)


def matmul(a_rows: Sequence[Row], b_rows: Sequence[Row]) -> list[dict[int, Fraction]]:
    """Product of sparse row collections: rows of A times rows-of-B matrix."""
    out = []
    for ar in a_rows:
        acc: dict[int, Fraction] = {}
        for k, v in ar.items():
            if k >= len(b_rows):
                continue
            for c, w in b_rows[k].items():
                cur = acc.get(c, Fraction(0)) + Fraction(v) * Fraction(w)
                if cur == 0:
                    acc.pop(c, None)
                else:
                    acc[c] = cur
        out.append(acc)
    return out


def is_zero(rows: Iterable[Row]) -> bool:
    return all(all(v == 0 for v in r.values()) for r in rows)
