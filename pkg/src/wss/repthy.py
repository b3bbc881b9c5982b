"""Symmetric-group bookkeeping: Kostka numbers and the conversion of
Young-subgroup invariant dimensions into irreducible multiplicities.

dims[lam] = sum_mu m[mu] * K[mu][lam] with K unitriangular in the partition
order used here, so the system solves by forward substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """Partitions of n, largest first part first (reverse lexicographic,
    refining dominance)."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []

    def rec(left, cap, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for part in range(min(cap, left), 0, -1):
            rec(left - part, part, acc + [part])

    rec(n, n, [])
    return tuple(out)


def dominates(mu: tuple, lam: tuple) -> bool:
    """Partial sums of mu weakly exceed those of lam (same size)."""
    a = b = 0
    for i in range(max(len(mu), len(lam))):
        a += mu[i] if i < len(mu) else 0
        b += lam[i] if i < len(lam) else 0
        if a < b:
            return False
    return a == b


@lru_cache(maxsize=None)
def kostka(mu: tuple, lam: tuple) -> int:
    """Semistandard tableaux of shape mu and content lam, counted by
    peeling the largest entry off as a horizontal strip."""
    if sum(mu) != sum(lam):
        return 0
    if not lam:
        return 1
    last = lam[-1]
    rest = lam[:-1]
    total = 0
    for nu in _strip_removals(mu, last):
        total += kostka(nu, rest)
    return total


def _strip_removals(mu: tuple, k: int):
    """Shapes nu with mu/nu a horizontal strip of size k (at most one box
    removed per column, rows stay weakly decreasing)."""
    rows = len(mu)
    out = []

    def rec(r, left, acc):
        if r == rows:
            if left == 0:
                nu = tuple(x for x in acc if x)
                out.append(nu)
            return
        below = mu[r + 1] if r + 1 < rows else 0
        # row r shrinks to somewhere in [below, mu[r]], and must not cut
        # under the row above's new length
        hi = min(mu[r], mu[r] if r == 0 else acc[r - 1])
        for new in range(max(below, mu[r] - left), hi + 1):
            rec(r + 1, left - (mu[r] - new), acc + [new])

    rec(0, k, [])
    return out


@dataclass(frozen=True)
class KostkaSystem:
    n: int
    parts: tuple[tuple[int, ...], ...]

    def K(self, mu: tuple, lam: tuple) -> int:
        return kostka(tuple(mu), tuple(lam))

    def dim_irrep(self, mu: tuple) -> int:
        return kostka(tuple(mu), (1,) * self.n)


def kostka_system(n: int) -> KostkaSystem:
    if n < 1:
        raise ValueError("n must be positive")
    return KostkaSystem(n, partitions(n))


def multiplicities(invariant_dims: dict) -> dict:
    """Solve dims[lam] = sum_mu m[mu]*K[mu][lam] for m by forward
    substitution down the partition order.  Raises on negative or
    inconsistent solutions (an upstream bug, not bad user input)."""
    items = {tuple(k): v for k, v in invariant_dims.items()}
    if not items:
        raise ValueError("no dimensions given")
    n = sum(next(iter(items)))
    parts = partitions(n)
    if set(items) != set(parts):
        missing = [p for p in parts if p not in items]
        raise ValueError(f"dimensions missing for partitions {missing}")
    m: dict[tuple, int] = {}
    for lam in parts:
        val = items[lam]
        for mu in m:
            val -= m[mu] * kostka(mu, lam)
        if val != int(val):
            raise ValueError(f"non-integral multiplicity at {lam}")
        m[lam] = int(val)
    for mu, v in m.items():
        if v < 0:
            raise ValueError(f"negative multiplicity {v} at {mu}")
    return m


def schur_string(m: dict, tate_power: int = 0) -> str:
    """Render multiplicities as a Schur polynomial string, largest
    partition first, e.g. '(2*s[3] + s[2,1])*L^1'."""
    n = sum(next(iter(m))) if m else 0
    terms = []
    for mu in partitions(n):
        c = m.get(mu, 0)
        if not c:
            continue
        s = f"s[{','.join(str(x) for x in mu)}]"
        terms.append(s if c == 1 else f"{c}*{s}")
    if not terms:
        return "0"
    body = " + ".join(terms)
    if tate_power == 0:
        return body if len(terms) == 1 else f"({body})"
    return f"({body})*L^{tate_power}"
