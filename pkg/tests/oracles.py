"""Independent reference implementations used only by the test suite.

Everything here is deliberately written from first principles with different
algorithms and data layouts than the package, so agreement is meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product


# -- stable graph enumeration by exhaustive generation ---------------------


def _connected(k: int, edges) -> bool:
    seen = {0}
    stack = [0]
    adj = [[] for _ in range(k)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == k


def brute_force_graph_counts(g: int, n: int, max_edges: int) -> dict[int, int]:
    """Iso classes of connected stable (g, n) graphs by edge count, via raw
    generation and min-over-all-permutations dedup."""
    counts = {}
    for ne in range(max_edges + 1):
        reps = set()
        for k in range(1, ne + 2):
            pairs = [(a, b) for a in range(k) for b in range(a, k)]
            for genera in product(range(g + 1), repeat=k):
                if sum(genera) + ne - k + 1 != g:
                    continue
                for edges in combinations_with_replacement(pairs, ne):
                    if not _connected(k, edges):
                        continue
                    for legs in product(range(k), repeat=n):
                        val = [0] * k
                        for v in legs:
                            val[v] += 1
                        for a, b in edges:
                            val[a] += 1
                            val[b] += 1
                        if any(2 * genera[v] - 2 + val[v] <= 0 for v in range(k)):
                            continue
                        best = None
                        for vper in permutations(range(k)):
                            gg = [0] * k
                            for v in range(k):
                                gg[vper[v]] = genera[v]
                            ll = tuple(vper[v] for v in legs)
                            ee = tuple(
                                sorted(
                                    (min(vper[a], vper[b]), max(vper[a], vper[b]))
                                    for a, b in edges
                                )
                            )
                            key = (tuple(gg), ll, ee)
                            if best is None or key < best:
                                best = key
                        reps.add(best)
        counts[ne] = len(reps)
    return counts


# -- psi intersection numbers ----------------------------------------------


def _dfact(k: int) -> int:
    """(2k+1)!! with the convention (-1)!! = 1."""
    out = 1
    while k >= 0:
        out *= 2 * k + 1
        k -= 1
    return out


@lru_cache(maxsize=None)
def _psi_oracle(g: int, exps: tuple) -> Fraction:
    n = len(exps)
    if not (2 * g - 2 + n > 0):
        return Fraction(0)
    if sum(exps) != 3 * g - 3 + n:
        return Fraction(0)
    if any(a < 0 for a in exps):
        return Fraction(0)
    if g == 0:
        num = 1
        for a in exps:
            num *= _factorial(a)
        return Fraction(_factorial(n - 3), num)
    if g == 1 and exps == (1,):
        return Fraction(1, 24)
    # pull out the largest exponent and recurse
    k = max(exps)
    if k == 0:
        # only possible in genus 0, handled above
        return Fraction(0)
    rest = list(exps)
    rest.remove(k)
    k -= 1  # recursion produces tau_{k+1}
    total = Fraction(0)
    for j, a in enumerate(rest):
        others = tuple(rest[:j] + rest[j + 1 :])
        total += Fraction(_dfact(a + k), _dfact(a - 1)) * _psi_oracle(
            g, tuple(sorted(others + (a + k,)))
        )
    half = Fraction(0)
    for a in range(0, k):
        b = k - 1 - a
        coeff = _dfact(a) * _dfact(b)
        half += coeff * _psi_oracle(g - 1, tuple(sorted(rest + [a, b])))
        for g1 in range(0, g + 1):
            g2 = g - g1
            for r in range(len(rest) + 1):
                for sub in combinations_unique(tuple(rest), r):
                    left = tuple(sorted(sub + (a,)))
                    right = tuple(sorted(multiset_minus(rest, sub) + (b,)))
                    half += (
                        coeff
                        * multiset_choose(tuple(rest), sub)
                        * _psi_oracle(g1, left)
                        * _psi_oracle(g2, right)
                    )
    total += Fraction(1, 2) * half
    return total / _dfact(k + 1)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def combinations_unique(items: tuple, r: int):
    """Distinct sub-multisets of size r."""
    seen = set()
    from itertools import combinations

    for c in combinations(items, r):
        key = tuple(sorted(c))
        if key not in seen:
            seen.add(key)
            yield key


def multiset_minus(items, sub):
    out = list(items)
    for x in sub:
        out.remove(x)
    return tuple(out)


def multiset_choose(items: tuple, sub: tuple) -> int:
    """Number of ways to pick the sub-multiset sub out of items when the
    elements are pairwise distinguishable."""
    from collections import Counter

    ci, cs = {}, {}
    for x in items:
        ci[x] = ci.get(x, 0) + 1
    for x in sub:
        cs[x] = cs.get(x, 0) + 1
    out = 1
    for x, k in cs.items():
        out *= _binom(ci.get(x, 0), k)
    return out


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def psi_integral_oracle(g: int, exps) -> Fraction:
    """Integral of psi_1^a_1 ... psi_n^a_n over the compactified (g, n) space."""
    return _psi_oracle(g, tuple(sorted(exps)))


# -- kappa integrals by inclusion-exclusion over index subsets -------------


def kappa_integral_oracle(g: int, psi_exps, kappa_indices) -> Fraction:
    """Mixed kappa/psi top intersections via the subset expansion: trading
    one kappa for a new point absorbs any subset of the remaining kappa
    indices into the new psi power, with alternating signs."""
    psi = tuple(sorted(psi_exps))
    kappa = tuple(sorted(k for k in kappa_indices if k > 0))
    scale = 1
    for k in kappa_indices:
        if k == 0:
            scale *= 2 * g - 2 + len(psi)
    return scale * _kappa_rec(g, psi, kappa)


@lru_cache(maxsize=None)
def _kappa_rec(g: int, psi: tuple, kappa: tuple) -> Fraction:
    if not kappa:
        return _psi_oracle(g, psi)
    b1, rest = kappa[0], kappa[1:]
    total = Fraction(0)
    from itertools import combinations as _comb

    for r in range(len(rest) + 1):
        for pick in _comb(range(len(rest)), r):
            m = b1 + 1 + sum(rest[i] for i in pick)
            left = tuple(x for i, x in enumerate(rest) if i not in pick)
            total += (-1) ** r * _kappa_rec(g, tuple(sorted(psi + (m,))), left)
    return total


# -- Kostka numbers by semistandard tableau counting -----------------------


def kostka_oracle(shape: tuple, content: tuple) -> int:
    """Number of semistandard tableaux of the given shape and content,
    counted by brute-force row-by-row filling."""
    if sum(shape) != sum(content):
        return 0

    rows = len(shape)

    def fill(r, prev_row, remaining):
        if r == rows:
            return 1 if all(x == 0 for x in remaining) else 0
        width = shape[r]
        total = 0

        def build(col, row_so_far, rem):
            nonlocal total
            if col == width:
                total += fill(r + 1, row_so_far, rem)
                return
            lo = row_so_far[-1] if col > 0 else 1
            for v in range(lo, len(rem) + 1):
                if rem[v - 1] == 0:
                    continue
                if r > 0 and v <= prev_row[col]:
                    continue
                rem2 = list(rem)
                rem2[v - 1] -= 1
                build(col + 1, row_so_far + [v], tuple(rem2))

        build(0, [], remaining)
        return total

    return fill(0, None, tuple(content))


# -- dense exact rank ------------------------------------------------------


def dense_rank_oracle(rows: list[list]) -> int:
    """Rank over the rationals by plain fraction Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c]
        for i in range(r + 1, len(mat)):
            if mat[i][c] != 0:
                f = mat[i][c] / inv
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        r += 1
        rank += 1
    return rank


def hook_dim_oracle(shape: tuple) -> int:
    """Dimension of the irreducible labelled by shape, by the hook length
    product formula."""
    n = sum(shape)
    cols = [0] * (shape[0] if shape else 0)
    for row in shape:
        for c in range(row):
            cols[c] += 1
    hooks = 1
    for r, row in enumerate(shape):
        for c in range(row):
            hooks *= (row - c) + (cols[c] - r) - 1
    return _factorial(n) // hooks
