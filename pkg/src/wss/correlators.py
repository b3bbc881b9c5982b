"""Exact top intersections of psi and kappa classes on the compactified
moduli space of stable n-pointed genus-g curves.

psi exponents are per point; kappa classes are given as a multiset of
indices (kappa_0 is the scalar 2g - 2 + n and is factored out up front).
Integrals of wrong total degree are zero by convention, which lets callers
contract without degree bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from wss.graphs import is_stable, space_dim


def _dfac(k: int) -> int:
    """(2k+1)!! with (-1)!! = 1."""
    out = 1
    for i in range(1, k + 1):
        out *= 2 * i + 1
    return out


@lru_cache(maxsize=None)
def _sub_multisets(items: tuple, r: int) -> tuple:
    """Distinct sub-multisets of size r with their labeled multiplicities."""
    seen: dict[tuple, int] = {}
    for c in combinations(range(len(items)), r):
        key = tuple(sorted(items[i] for i in c))
        seen[key] = seen.get(key, 0) + 1
    return tuple(seen.items())


def _without(items: tuple, sub: tuple) -> tuple:
    out = list(items)
    for x in sub:
        out.remove(x)
    return tuple(out)


@lru_cache(maxsize=None)
def _psi(g: int, exps: tuple) -> Fraction:
    n = len(exps)
    if not is_stable(g, n) or any(a < 0 for a in exps):
        return Fraction(0)
    if sum(exps) != space_dim(g, n):
        return Fraction(0)
    if g == 0:
        den = 1
        for a in exps:
            den *= factorial(a)
        return Fraction(factorial(n - 3), den)
    if n == 1:
        # one-point closed form
        return Fraction(1, 24**g * factorial(g))
    k1 = exps[-1]  # largest exponent (tuple kept sorted ascending)
    if k1 == 0:
        return Fraction(0)  # positive genus, all exponents zero: wrong degree
    rest = exps[:-1]
    k = k1 - 1
    total = Fraction(0)
    for j in range(len(rest)):
        if j > 0 and rest[j] == rest[j - 1]:
            continue
        a = rest[j]
        mult = rest.count(a)
        others = tuple(sorted(rest[:j] + rest[j + 1 :] + (a + k,)))
        total += mult * Fraction(_dfac(a + k), _dfac(a - 1)) * _psi(g, others)
    half = Fraction(0)
    for a in range(0, k):
        b = k - 1 - a
        coeff = _dfac(a) * _dfac(b)
        half += coeff * _psi(g - 1, tuple(sorted(rest + (a, b))))
        for g1 in range(0, g + 1):
            g2 = g - g1
            for r in range(len(rest) + 1):
                for sub, mult in _sub_multisets(rest, r):
                    half += (
                        coeff
                        * mult
                        * _psi(g1, tuple(sorted(sub + (a,))))
                        * _psi(g2, tuple(sorted(_without(rest, sub) + (b,))))
                    )
    total += Fraction(1, 2) * half
    return total / _dfac(k + 1)


def psi_integral(g: int, exps) -> Fraction:
    """Integral of prod_i psi_i^{a_i}; zero off the top degree."""
    return _psi(g, tuple(sorted(exps)))


def _set_partitions(k: int):
    if k == 0:
        yield []
        return
    for part in _set_partitions(k - 1):
        yield part + [[k - 1]]
        for i in range(len(part)):
            yield part[:i] + [part[i] + [k - 1]] + part[i + 1 :]


@lru_cache(maxsize=None)
def _mixed(g: int, psi: tuple, kappa: tuple) -> Fraction:
    if not kappa:
        return _psi(g, psi)
    # trade every kappa for a psi power at a new point in one shot; merged
    # blocks carry sign (-1)^(size-1), the exponential inverse of the
    # (size-1)! weights of the forgetful pushforward
    total = Fraction(0)
    for part in _set_partitions(len(kappa)):
        weight = 1
        new = []
        for block in part:
            weight *= (-1) ** (len(block) - 1)
            new.append(sum(kappa[i] for i in block) + 1)
        total += weight * _psi(g, tuple(sorted(psi + tuple(new))))
    return total


def mixed_integral(g: int, psi_exps, kappa_indices) -> Fraction:
    """Integral of prod kappa_{b_j} prod psi_i^{a_i}; zero off the top degree."""
    psi = tuple(sorted(psi_exps))
    kappa = tuple(sorted(k for k in kappa_indices if k > 0))
    n = len(psi)
    if not is_stable(g, n):
        return Fraction(0)
    if sum(psi) + sum(kappa) != space_dim(g, n):
        return Fraction(0)
    scale = 1
    for k in kappa_indices:
        if k < 0:
            raise ValueError("negative kappa index")
        if k == 0:
            scale *= 2 * g - 2 + n
    return scale * _mixed(g, psi, kappa)
