"""Decorated boundary strata and tautological classes.

A decorated stratum on the compactified (g, n) space is a stable graph with
a kappa multiset on each vertex and psi powers at points (markings or half
edges).  A tautological class is a rational combination of canonical
decorated strata with RAW pushforward semantics: the stratum stands for the
full gluing pushforward of its decoration with no automorphism factor.
Averaged generators (with 1/|Aut|) appear only at documented interfaces.

Products and pullbacks of strata run over common degenerations with excess
classes -psi' - psi'' on doubled edges; the single routine `structures`
enumerates contraction data and everything else is bookkeeping on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from wss.correlators import mixed_integral
from wss.graphs import (
    Point,
    StableGraph,
    aut_order,
    canonicalize,
    contract_edge,
    find_isos,
    one_edge_degenerations,
    space_dim,
)


@dataclass(frozen=True)
class DecoratedStratum:
    """graph plus kappa[v] = sorted kappa indices at vertex v and
    psi = sorted ((point, exponent)) pairs with exponent >= 1."""

    graph: StableGraph
    kappa: tuple[tuple[int, ...], ...]
    psi: tuple[tuple[Point, int], ...]

    def __post_init__(self):
        if len(self.kappa) != self.graph.n_vertices:
            raise ValueError("kappa tuple per vertex required")
        if any(k < 1 for ks in self.kappa for k in ks):
            raise ValueError("kappa indices must be >= 1")
        for p, e in self.psi:
            if e < 1:
                raise ValueError("psi exponents must be >= 1")
            try:
                self.graph.vertex_of_point(p)
            except (IndexError, ValueError):
                raise ValueError(f"no point {p} on the graph") from None

    @property
    def degree(self) -> int:
        return (
            self.graph.n_edges
            + sum(k for ks in self.kappa for k in ks)
            + sum(e for _, e in self.psi)
        )

    def ambient(self) -> tuple[int, int]:
        return (self.graph.genus(), self.graph.n_markings)

    def vertex_degree(self, v: int) -> int:
        d = sum(self.kappa[v])
        for p, e in self.psi:
            if self.graph.vertex_of_point(p) == v:
                d += e
        return d

    def psi_at(self, v: int) -> dict[Point, int]:
        return {
            p: e for p, e in self.psi if self.graph.vertex_of_point(p) == v
        }


def make_stratum(graph: StableGraph, kappa=None, psi=None) -> DecoratedStratum:
    kap = tuple(tuple(sorted(k)) for k in (kappa or [()] * graph.n_vertices))
    ps = tuple(sorted(((tuple(p), int(e)) for p, e in (psi or {}).items())))
    return DecoratedStratum(graph, kap, ps)


def fundamental(g: int, n: int) -> DecoratedStratum:
    return make_stratum(StableGraph((g,), (0,) * n, ()))


def transport(s: DecoratedStratum, iso) -> DecoratedStratum:
    """Move decorations along an isomorphism of the underlying graph."""
    H = iso.target
    kappa = [()] * H.n_vertices
    for v, ks in enumerate(s.kappa):
        kappa[iso.vmap[v]] = ks
    psi = {iso.point(p): e for p, e in s.psi}
    return make_stratum(H, kappa, psi)


def vanishes(s: DecoratedStratum) -> bool:
    """Decoration degree above a vertex dimension kills the class."""
    G = s.graph
    return any(
        s.vertex_degree(v) > space_dim(G.genera[v], G.valence(v))
        for v in range(G.n_vertices)
    )


@lru_cache(maxsize=None)
def canonical_stratum(s: DecoratedStratum) -> DecoratedStratum:
    """Minimal transport onto the canonical graph; class representative."""
    C = canonicalize(s.graph)
    best = None
    for iso in find_isos(s.graph, C):
        cand = transport(s, iso)
        key = (cand.kappa, cand.psi)
        if best is None or key < (best.kappa, best.psi):
            best = cand
    return best


class TautClass:
    """Rational combination of canonical decorated strata on one space."""

    __slots__ = ("space", "terms")

    def __init__(self, space: tuple[int, int], terms=None):
        self.space = space
        self.terms: dict[DecoratedStratum, Fraction] = {}
        if terms:
            for s, c in terms.items():
                self.add_term(s, c)

    def add_term(self, s: DecoratedStratum, coeff) -> None:
        c = Fraction(coeff)
        if c == 0 or vanishes(s):
            return
        if s.ambient() != self.space:
            raise ValueError("stratum lives on a different space")
        key = canonical_stratum(s)
        cur = self.terms.get(key, Fraction(0)) + c
        if cur == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = cur

    def add(self, other: "TautClass", scale=1) -> "TautClass":
        if other.space != self.space:
            raise ValueError("space mismatch")
        for s, c in other.terms.items():
            self.add_term(s, Fraction(scale) * c)
        return self

    def scaled(self, f) -> "TautClass":
        out = TautClass(self.space)
        for s, c in self.terms.items():
            out.add_term(s, Fraction(f) * c)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, TautClass)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"TautClass({self.space}, {len(self.terms)} terms)"


# -- generator enumeration -------------------------------------------------


def _partitions_into_parts(total: int):
    """Nonincreasing tuples of positive ints summing to total (incl. ())."""
    if total == 0:
        yield ()
        return

    def rec(left, biggest):
        if left == 0:
            yield ()
            return
        for first in range(min(left, biggest), 0, -1):
            for rest in rec(left - first, first):
                yield (first,) + rest

    yield from rec(total, total)


def _compositions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _vertex_decorations(deg: int, npoints: int):
    """(kappa multiset, psi exponent tuple over the vertex points)."""
    for kdeg in range(deg + 1):
        for kap in _partitions_into_parts(kdeg):
            for psis in _compositions(deg - kdeg, npoints):
                yield kap, psis


@lru_cache(maxsize=None)
def generators(g: int, n: int, degree: int) -> tuple[DecoratedStratum, ...]:
    """Canonical decorated strata of the given degree, up to isomorphism,
    in deterministic order.  Per-vertex decorations are capped by the
    vertex dimension, everything deeper vanishes."""
    from wss.graphs import enumerate_stable_graphs

    out: dict[DecoratedStratum, None] = {}
    levels = enumerate_stable_graphs(g, n, max_edges=min(degree, space_dim(g, n)))
    for ne, level in enumerate(levels):
        rest = degree - ne
        if rest < 0:
            continue
        for G in level:
            caps = [
                min(rest, space_dim(G.genera[v], G.valence(v)))
                for v in range(G.n_vertices)
            ]
            pts = [G.points_at(v) for v in range(G.n_vertices)]
            for split in _compositions(rest, G.n_vertices):
                if any(d > c for d, c in zip(split, caps)):
                    continue
                per_vertex = [
                    list(_vertex_decorations(split[v], len(pts[v])))
                    for v in range(G.n_vertices)
                ]
                for combo in product(*per_vertex):
                    kappa = [kap for kap, _ in combo]
                    psi = {}
                    for v, (_, psis) in enumerate(combo):
                        for p, e in zip(pts[v], psis):
                            if e:
                                psi[p] = e
                    s = canonical_stratum(make_stratum(G, kappa, psi))
                    out.setdefault(s, None)
    return tuple(out)


def relabel_markings(s: DecoratedStratum, perm: dict) -> DecoratedStratum:
    """Apply a marking permutation (m -> perm[m], identity off the keys)."""
    G = s.graph
    legs = list(G.legs)
    for m in range(1, G.n_markings + 1):
        legs[perm.get(m, m) - 1] = G.legs[m - 1]
    H = StableGraph(G.genera, tuple(legs), G.edges)
    psi = {}
    for p, e in s.psi:
        if p[0] == "l":
            p = ("l", perm.get(p[1], p[1]))
        psi[p] = e
    return make_stratum(H, s.kappa, psi)


def swap_group(swaps) -> tuple[dict, ...]:
    """All products of the given commuting marking transpositions."""
    perms = []
    for picks in product((False, True), repeat=len(swaps)):
        perm = {}
        for take, (a, b) in zip(picks, swaps):
            if take:
                perm[a], perm[b] = b, a
        perms.append(perm)
    return tuple(perms)


def orbit_representatives(g: int, n: int, degree: int, swaps):
    """Orbits of the swap group on canonical decorated strata, each orbit a
    tuple of distinct members, ordered by first appearance."""
    group = swap_group(tuple(swaps))
    seen = set()
    orbits = []
    for s in generators(g, n, degree):
        if s in seen:
            continue
        orbit = []
        for perm in group:
            t = canonical_stratum(relabel_markings(s, perm))
            if t not in seen:
                seen.add(t)
                orbit.append(t)
        orbits.append(tuple(orbit))
    return tuple(orbits)


def consecutive_swaps(k: int) -> tuple[tuple[int, int], ...]:
    """Marking pairs (1,2), (3,4), ... as used for self-edge symmetries."""
    return tuple((2 * i + 1, 2 * i + 2) for i in range(k))


# -- iterated contraction --------------------------------------------------


@dataclass(frozen=True)
class MultiContraction:
    source: StableGraph
    result: StableGraph
    contracted: frozenset
    vmap: tuple[int, ...]
    emap: tuple  # source edge -> result edge or None

    def point_fwd(self, p: Point) -> Point:
        if p[0] == "l":
            return p
        e, s = p[1], p[2]
        if self.emap[e] is None:
            raise ValueError("point on a contracted edge")
        return ("h", self.emap[e], s)

    def point_back(self, p: Point) -> Point:
        if p[0] == "l":
            return p
        for e, im in enumerate(self.emap):
            if im == p[1]:
                return ("h", e, p[2])
        raise ValueError("no preimage")


def contract_edges(G: StableGraph, edges) -> MultiContraction:
    """Contract a set of edges, composing single contractions."""
    todo = sorted(edges, reverse=True)
    cur = G
    vmap = list(range(G.n_vertices))
    emap: list = list(range(G.n_edges))
    for e in todo:
        c = contract_edge(cur, e)
        cur = c.result
        vmap = [c.vmap[v] for v in vmap]
        emap = [None if x is None else c.emap[x] for x in emap]
    return MultiContraction(
        G, cur, frozenset(edges), tuple(vmap), tuple(emap)
    )


# -- structures: contraction data onto a target graph ----------------------


@dataclass(frozen=True)
class Structure:
    """Subset of surviving edges plus an isomorphism of the contracted graph
    with the target; enough to pull decorations back from the target."""

    lam: StableGraph
    target: StableGraph
    surviving: tuple[int, ...]
    vmap: tuple[int, ...]  # lam vertex -> target vertex
    edge_to_target: tuple  # lam edge -> (target edge, flip) or None

    def pull_point(self, p: Point) -> Point:
        """Point of the target -> point of lam."""
        if p[0] == "l":
            return p
        te, s = p[1], p[2]
        for e, im in enumerate(self.edge_to_target):
            if im is not None and im[0] == te:
                return ("h", e, s ^ im[1])
        raise ValueError("target half-edge has no source edge")

    def group(self, u: int) -> tuple[int, ...]:
        """Lam vertices over target vertex u."""
        return tuple(w for w in range(self.lam.n_vertices) if self.vmap[w] == u)


@lru_cache(maxsize=None)
def structures(lam: StableGraph, target: StableGraph) -> tuple[Structure, ...]:
    """All ways lam contracts onto the target: choices of surviving edge
    subset together with every isomorphism of the contracted graph."""
    k = target.n_edges
    if lam.n_edges < k:
        return ()
    out = []
    for surv in combinations(range(lam.n_edges), k):
        c = contract_edges(lam, [e for e in range(lam.n_edges) if e not in surv])
        for iso in find_isos(c.result, target):
            vmap = tuple(iso.vmap[c.vmap[w]] for w in range(lam.n_vertices))
            e2t: list = [None] * lam.n_edges
            for e in surv:
                mid = c.emap[e]
                te, flip = iso.emap[mid]
                e2t[e] = (te, flip)
            out.append(Structure(lam, target, surv, vmap, tuple(e2t)))
    return tuple(out)


@lru_cache(maxsize=None)
def degeneration_pool(base: StableGraph, extra: int) -> tuple[StableGraph, ...]:
    """Canonical iso classes reachable from base by up to `extra` one-edge
    degenerations (including base itself)."""
    seen: dict[StableGraph, None] = {canonicalize(base): None}
    frontier = [canonicalize(base)]
    for _ in range(extra):
        nxt = []
        for G in frontier:
            for d in one_edge_degenerations(G):
                c = canonicalize(d.graph)
                if c not in seen:
                    seen[c] = None
                    nxt.append(c)
        frontier = nxt
    return tuple(seen)


# -- pulled decorations ----------------------------------------------------


def _pulled_terms(st: Structure, s: DecoratedStratum):
    """Expansion of the decoration of s pulled back to lam: yields
    (kappa_by_lam_vertex dict, psi_by_lam_point dict) with coefficient 1.

    kappa classes pull back to sums over the vertex fibre, so a kappa
    multiset expands over assignments of each index to a fibre vertex."""
    psi = {}
    for p, e in s.psi:
        q = st.pull_point(p)
        psi[q] = psi.get(q, 0) + e
    slots = []  # (kappa index, candidate lam vertices)
    for u, ks in enumerate(s.kappa):
        grp = st.group(u)
        for k in ks:
            slots.append((k, grp))
    for choice in product(*(grp for _, grp in slots)):
        kappa: dict[int, list] = {}
        for (k, _), w in zip(slots, choice):
            kappa.setdefault(w, []).append(k)
        yield kappa, dict(psi)


def _excess_edges(st_a: Structure, st_b: Structure) -> list[int]:
    return sorted(set(st_a.surviving) & set(st_b.surviving))


def _covering_pairs(lam: StableGraph, a: DecoratedStratum, b: DecoratedStratum):
    for st_a in structures(lam, a.graph):
        sa = set(st_a.surviving)
        for st_b in structures(lam, b.graph):
            if sa | set(st_b.surviving) == set(range(lam.n_edges)):
                yield st_a, st_b


# -- integrals -------------------------------------------------------------


def stratum_integral(s: DecoratedStratum) -> Fraction:
    """Integral of the raw stratum class over its ambient space: product of
    vertex integrals, no automorphism factor."""
    G = s.graph
    total = Fraction(1)
    for v in range(G.n_vertices):
        pts = G.points_at(v)
        psis = s.psi_at(v)
        exps = [psis.get(p, 0) for p in pts]
        val = mixed_integral(G.genera[v], exps, s.kappa[v])
        if val == 0:
            return Fraction(0)
        total *= val
    return total


def _pair_on_lam(
    lam: StableGraph, a: DecoratedStratum, b: DecoratedStratum
) -> Fraction:
    total = Fraction(0)
    for st_a, st_b in _covering_pairs(lam, a, b):
        doubles = _excess_edges(st_a, st_b)
        for ka, pa in _pulled_terms(st_a, a):
            for kb, pb in _pulled_terms(st_b, b):
                psi = dict(pa)
                for p, e in pb.items():
                    psi[p] = psi.get(p, 0) + e
                # expand prod_e (-psi' - psi'') over the doubled edges
                for sides in product((0, 1), repeat=len(doubles)):
                    pp = dict(psi)
                    for e, side in zip(doubles, sides):
                        q = ("h", e, side)
                        pp[q] = pp.get(q, 0) + 1
                    term = Fraction((-1) ** len(doubles))
                    for v in range(lam.n_vertices):
                        pts = lam.points_at(v)
                        exps = [pp.get(p, 0) for p in pts]
                        kap = sorted(ka.get(v, []) + kb.get(v, []))
                        val = mixed_integral(lam.genera[v], exps, kap)
                        if val == 0:
                            term = Fraction(0)
                            break
                        term *= val
                    total += term
    return total


@lru_cache(maxsize=None)
def _stratum_pair_integral(a: DecoratedStratum, b: DecoratedStratum) -> Fraction:
    total = Fraction(0)
    for lam in degeneration_pool(b.graph, a.graph.n_edges):
        part = _pair_on_lam(lam, a, b)
        if part:
            total += Fraction(part, aut_order(lam))
    return total


def integrate_product(a: TautClass, b: TautClass) -> Fraction:
    """Integral over the ambient space of the product of two raw classes."""
    if a.space != b.space:
        raise ValueError("space mismatch")
    total = Fraction(0)
    for sa, ca in a.terms.items():
        for sb, cb in b.terms.items():
            total += ca * cb * _stratum_pair_integral(sa, sb)
    return total


# -- divisor pullback ------------------------------------------------------


class ProdClass:
    """Class on a product of vertex spaces, stored as combinations of
    per-factor decorated strata."""

    __slots__ = ("spaces", "terms")

    def __init__(self, spaces, terms=None):
        self.spaces = tuple(tuple(s) for s in spaces)
        self.terms: dict[tuple[DecoratedStratum, ...], Fraction] = {}
        if terms:
            for k, c in terms.items():
                self.add_term(k, c)

    def add_term(self, strata, coeff) -> None:
        c = Fraction(coeff)
        if c == 0:
            return
        strata = tuple(strata)
        if len(strata) != len(self.spaces):
            raise ValueError("factor count mismatch")
        if any(s.ambient() != sp for s, sp in zip(strata, self.spaces)):
            raise ValueError("factor on wrong space")
        if any(vanishes(s) for s in strata):
            return
        key = tuple(canonical_stratum(s) for s in strata)
        cur = self.terms.get(key, Fraction(0)) + c
        if cur == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = cur

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, ProdClass)
            and self.spaces == other.spaces
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"ProdClass({self.spaces}, {len(self.terms)} terms)"


def _sub_stratum(
    lam: StableGraph,
    st_delta: Structure,
    u: int,
    kappa: dict,
    psi: dict,
) -> DecoratedStratum:
    """Restriction of decorated lam to the fibre over vertex u of the
    one-edge target: a decorated stratum on the vertex space of u."""
    delta = st_delta.target
    grp = st_delta.group(u)
    pos = {w: i for i, w in enumerate(grp)}
    genera = tuple(lam.genera[w] for w in grp)
    inner = [
        e
        for e, (x, y) in enumerate(lam.edges)
        if st_delta.edge_to_target[e] is None and x in grp
    ]
    # marking j of the vertex space is the j-th point of u in delta
    legs = []
    point_of_leg = {}
    for j, p in enumerate(delta.points_at(u), 1):
        q = st_delta.pull_point(p)
        w = lam.vertex_of_point(q)
        legs.append(pos[w])
        point_of_leg[q] = j
    edges = tuple(
        (pos[lam.edges[e][0]], pos[lam.edges[e][1]]) for e in inner
    )
    sub = StableGraph(genera, tuple(legs), edges)
    edge_index = {e: i for i, e in enumerate(inner)}
    kap = [()] * len(grp)
    for w, ks in kappa.items():
        if w in pos:
            kap[pos[w]] = tuple(sorted(ks))
    ps = {}
    for q, e in psi.items():
        w = lam.vertex_of_point(q)
        if w not in pos:
            continue
        if q in point_of_leg:
            ps[("l", point_of_leg[q])] = e
        else:
            ps[("h", edge_index[q[1]], q[2])] = e
    return make_stratum(sub, kap, ps)


def divisor_pullback(delta: StableGraph, cls: TautClass) -> ProdClass:
    """Pullback of a raw class along the one-edge gluing of delta: a class
    on the product of delta's vertex spaces.  Doubled edges contribute the
    excess -psi' - psi''."""
    if delta.n_edges != 1:
        raise ValueError("delta must have exactly one edge")
    spaces = [delta.vertex_space(v) for v in range(delta.n_vertices)]
    out = ProdClass(spaces)
    if (delta.genus(), delta.n_markings) != cls.space:
        raise ValueError("delta not on the class's space")
    for b, cb in cls.terms.items():
        for lam in degeneration_pool(b.graph, 1):
            for st_d in structures(lam, delta):
                sd = set(st_d.surviving)
                for st_b in structures(lam, b.graph):
                    if sd | set(st_b.surviving) != set(range(lam.n_edges)):
                        continue
                    doubles = _excess_edges(st_d, st_b)
                    base = cb * Fraction(1, aut_order(lam))
                    for kb, pb in _pulled_terms(st_b, b):
                        for sides in product((0, 1), repeat=len(doubles)):
                            psi = dict(pb)
                            for e, side in zip(doubles, sides):
                                q = ("h", e, side)
                                psi[q] = psi.get(q, 0) + 1
                            coeff = base * (-1) ** len(doubles)
                            factors = [
                                _sub_stratum(lam, st_d, u, kb, psi)
                                for u in range(delta.n_vertices)
                            ]
                            out.add_term(factors, coeff)
    return out


# -- grafting --------------------------------------------------------------


def graft(base: StableGraph, inserts) -> DecoratedStratum:
    """Replace each vertex of base by a decorated stratum on its vertex
    space (marking j of the insert is the j-th point of the vertex).  The
    result is a stratum on base's ambient space; base edges come first in
    the edge order, then the inserted edges vertex by vertex."""
    nv = base.n_vertices
    offsets = []
    genera: list[int] = []
    for v in range(nv):
        offsets.append(len(genera))
        genera.extend(inserts[v].graph.genera)

    # where the j-th point of vertex v ends up in the composite
    attach: dict[tuple[int, int], int] = {}
    for v in range(nv):
        ins = inserts[v].graph
        for j in range(1, len(base.points_at(v)) + 1):
            attach[(v, j)] = offsets[v] + ins.legs[j - 1]

    legs = [0] * base.n_markings
    point_map: dict[tuple[int, Point], Point] = {}  # (vertex, local) -> composite
    edges: list[tuple[int, int]] = []
    for e, (a, b) in enumerate(base.edges):
        pa = base.points_at(a).index(("h", e, 0)) + 1
        pb = base.points_at(b).index(("h", e, 1)) + 1
        edges.append((attach[(a, pa)], attach[(b, pb)]))
        point_map[(a, ("l", pa))] = ("h", e, 0)
        point_map[(b, ("l", pb))] = ("h", e, 1)
    for m in range(1, base.n_markings + 1):
        v = base.legs[m - 1]
        j = base.points_at(v).index(("l", m)) + 1
        legs[m - 1] = attach[(v, j)]
        point_map[(v, ("l", j))] = ("l", m)
    edge_offsets = []
    ne = len(edges)
    for v in range(nv):
        edge_offsets.append(ne)
        ins = inserts[v].graph
        for ee, (x, y) in enumerate(ins.edges):
            edges.append((offsets[v] + x, offsets[v] + y))
            point_map[(v, ("h", ee, 0))] = ("h", ne, 0)
            point_map[(v, ("h", ee, 1))] = ("h", ne, 1)
        ne += ins.n_edges

    composite = StableGraph(tuple(genera), tuple(legs), tuple(edges))
    kappa = [()] * len(genera)
    psi: dict[Point, int] = {}
    for v in range(nv):
        ins = inserts[v]
        for w, ks in enumerate(ins.kappa):
            if ks:
                kappa[offsets[v] + w] = ks
        for p, e in ins.psi:
            q = point_map[(v, p)]
            psi[q] = psi.get(q, 0) + e
    return make_stratum(composite, kappa, psi)


def push_glue(delta: StableGraph, sides) -> TautClass:
    """Raw pushforward along the one-edge gluing of delta of a product of
    classes on its vertex spaces (one TautClass per delta vertex)."""
    if delta.n_edges != 1:
        raise ValueError("delta must have exactly one edge")
    out = TautClass((delta.genus(), delta.n_markings))
    for combo in product(*(s.terms.items() for s in sides)):
        strata = {v: s for v, (s, _) in enumerate(combo)}
        coeff = Fraction(1)
        for _, c in combo:
            coeff *= c
        out.add_term(graft(delta, strata), coeff)
    return out
