"""Stable n-pointed dual graphs with ordered edge lists.

A graph stores a genus per vertex, the vertex carrying each marking, and an
ordered tuple of edges written as ordered vertex pairs; a loop is a pair
(a, a).  Half-edges are addressed as (edge index, side) with side 0 attached
at the first vertex of the pair.  The edge ordering is significant: it is
fixed by canonicalisation and every determinant twist downstream reads its
sign off this ordering, so nothing outside this module may reorder edges.

Vertex moduli conventions: the points of a vertex are its markings in
increasing order followed by its half-edges in (edge, side) order; this
fixed ordering identifies the vertex with a standard (g_v, n_v) space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

Edge = tuple[int, int]
Point = tuple  # ('l', marking) or ('h', edge, side)

VARIANTS = ("open", "ct", "rt")


def space_dim(g: int, n: int) -> int:
    """Dimension 3g - 3 + n of the moduli space of stable n-pointed genus-g curves."""
    return 3 * g - 3 + n


def is_stable(g: int, n: int) -> bool:
    return 2 * g - 2 + n > 0


@dataclass(frozen=True)
class StableGraph:
    """Connected stable dual graph.

    genera[v] is the genus of vertex v, legs[m-1] the vertex carrying
    marking m, and edges an ordered tuple of vertex pairs.
    """

    genera: tuple[int, ...]
    legs: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        nv = len(self.genera)
        if nv == 0:
            raise ValueError("graph needs at least one vertex")
        if any(g < 0 for g in self.genera):
            raise ValueError("negative genus")
        if any(not 0 <= v < nv for v in self.legs):
            raise ValueError("marking attached to missing vertex")
        if any(not (0 <= a < nv and 0 <= b < nv) for a, b in self.edges):
            raise ValueError("edge endpoint out of range")
        for v in range(nv):
            if 2 * self.genera[v] - 2 + self.valence(v) <= 0:
                raise ValueError(f"unstable vertex {v}")
        if not self._connected():
            raise ValueError("graph not connected")

    # -- basic shape -------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_markings(self) -> int:
        return len(self.legs)

    def genus(self) -> int:
        return sum(self.genera) + self.n_edges - self.n_vertices + 1

    def markings_at(self, v: int) -> tuple[int, ...]:
        return tuple(m for m, w in enumerate(self.legs, 1) if w == v)

    def half_edges_at(self, v: int) -> tuple[tuple[int, int], ...]:
        out = []
        for e, (a, b) in enumerate(self.edges):
            if a == v:
                out.append((e, 0))
            if b == v:
                out.append((e, 1))
        return tuple(out)

    def valence(self, v: int) -> int:
        n = sum(1 for w in self.legs if w == v)
        for a, b in self.edges:
            n += (a == v) + (b == v)
        return n

    def points_at(self, v: int) -> tuple[Point, ...]:
        """Ordered points of vertex v: markings ascending, then half-edges."""
        pts = [("l", m) for m in self.markings_at(v)]
        pts += [("h", e, s) for (e, s) in self.half_edges_at(v)]
        return tuple(pts)

    def vertex_of_point(self, p: Point) -> int:
        if p[0] == "l":
            return self.legs[p[1] - 1]
        e, s = p[1], p[2]
        return self.edges[e][s]

    def vertex_space(self, v: int) -> tuple[int, int]:
        return (self.genera[v], self.valence(v))

    def loops_at(self, v: int) -> int:
        return sum(1 for a, b in self.edges if a == v and b == v)

    def _adjacency(self) -> list[dict[int, int]]:
        """Non-loop edge multiplicities between vertex pairs."""
        adj: list[dict[int, int]] = [dict() for _ in range(self.n_vertices)]
        for a, b in self.edges:
            if a != b:
                adj[a][b] = adj[a].get(b, 0) + 1
                adj[b][a] = adj[b].get(a, 0) + 1
        return adj

    def _connected(self) -> bool:
        nv = len(self.genera)
        seen = {0}
        stack = [0]
        adj = [[] for _ in range(nv)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == nv

    # -- text form ---------------------------------------------------------

    def render(self) -> str:
        g = ",".join(str(x) for x in self.genera)
        l = ",".join(str(x) for x in self.legs)
        e = ",".join(f"({a},{b})" for a, b in self.edges)
        return f"G[{g}];L[{l}];E[{e}]"

    @classmethod
    def parse(cls, text: str) -> "StableGraph":
        m = re.fullmatch(r"G\[([^\]]*)\];L\[([^\]]*)\];E\[([^\]]*)\]", text.strip())
        if not m:
            raise ValueError(f"bad graph encoding: {text!r}")
        genera = tuple(int(x) for x in m.group(1).split(",")) if m.group(1) else ()
        legs = tuple(int(x) for x in m.group(2).split(",")) if m.group(2) else ()
        edges = tuple(
            (int(a), int(b))
            for a, b in re.findall(r"\((\d+),(\d+)\)", m.group(3))
        )
        return cls(genera, legs, edges)


# -- isomorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class GraphMap:
    """Isomorphism of stable graphs: vertex bijection plus edge bijection
    with per-edge side flips.  Markings are fixed pointwise."""

    source: StableGraph
    target: StableGraph
    vmap: tuple[int, ...]
    emap: tuple[tuple[int, int], ...]  # edge -> (image edge, flip)

    def edge_sign(self) -> int:
        """Sign of the permutation the map induces on edge slots."""
        perm = [e for e, _ in self.emap]
        sign = 1
        seen = [False] * len(perm)
        for i in range(len(perm)):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def point(self, p: Point) -> Point:
        if p[0] == "l":
            return p
        e, s = p[1], p[2]
        e2, flip = self.emap[e]
        return ("h", e2, s ^ flip)

    def point_bijection(self, v: int) -> tuple[int, ...]:
        """result[i] = position among the image vertex's points of the image
        of the i-th point of vertex v."""
        tgt = self.target.points_at(self.vmap[v])
        index = {p: i for i, p in enumerate(tgt)}
        return tuple(index[self.point(p)] for p in self.source.points_at(v))

    def compose(self, inner: "GraphMap") -> "GraphMap":
        """self o inner (apply inner first)."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("maps not composable")
        vmap = tuple(self.vmap[v] for v in inner.vmap)
        emap = []
        for e, flip in inner.emap:
            e2, flip2 = self.emap[e]
            emap.append((e2, flip ^ flip2))
        return GraphMap(inner.source, self.target, vmap, tuple(emap))

    def inverse(self) -> "GraphMap":
        vmap = [0] * len(self.vmap)
        for v, w in enumerate(self.vmap):
            vmap[w] = v
        emap = [(0, 0)] * len(self.emap)
        for e, (e2, flip) in enumerate(self.emap):
            emap[e2] = (e, flip)
        return GraphMap(self.target, self.source, tuple(vmap), tuple(emap))


def _refine_colors(graphs: list[StableGraph]) -> list[tuple[int, ...]]:
    """Joint colour refinement; colours are comparable across the input graphs."""
    keys = []
    for G in graphs:
        for v in range(G.n_vertices):
            keys.append((G.genera[v], G.markings_at(v), G.loops_at(v), G.valence(v)))
    adjs = [G._adjacency() for G in graphs]
    offsets = []
    off = 0
    for G in graphs:
        offsets.append(off)
        off += G.n_vertices

    def compress(ks):
        table = {k: i for i, k in enumerate(sorted(set(ks)))}
        return [table[k] for k in ks]

    colors = compress(keys)
    while True:
        new_keys = []
        for gi, G in enumerate(graphs):
            off = offsets[gi]
            for v in range(G.n_vertices):
                nb = tuple(
                    sorted((colors[off + u], mult) for u, mult in adjs[gi][v].items())
                )
                new_keys.append((colors[off + v], nb))
        new_colors = compress(new_keys)
        if len(set(new_colors)) == len(set(colors)):
            break
        colors = new_colors
    out = []
    for gi, G in enumerate(graphs):
        off = offsets[gi]
        out.append(tuple(colors[off : off + G.n_vertices]))
    return out


def find_isos(G: StableGraph, H: StableGraph):
    """Yield every isomorphism G -> H (marking-preserving; loops may flip)."""
    if (
        sorted(G.genera) != sorted(H.genera)
        or G.n_edges != H.n_edges
        or G.n_markings != H.n_markings
    ):
        return
    cG, cH = _refine_colors([G, H])
    if sorted(cG) != sorted(cH):
        return
    nv = G.n_vertices
    by_color: dict[int, list[int]] = {}
    for w in range(nv):
        by_color.setdefault(cH[w], []).append(w)
    adjG, adjH = G._adjacency(), H._adjacency()
    order = sorted(range(nv), key=lambda v: len(by_color.get(cG[v], ())))
    assigned: dict[int, int] = {}
    used = [False] * nv

    def backtrack(i):
        if i == nv:
            vmap = tuple(assigned[v] for v in range(nv))
            if all(vmap[G.legs[m]] == H.legs[m] for m in range(G.n_markings)):
                yield vmap
            return
        v = order[i]
        for w in by_color.get(cG[v], ()):
            if used[w]:
                continue
            ok = True
            for u, mult in adjG[v].items():
                if u in assigned and adjH[w].get(assigned[u], 0) != mult:
                    ok = False
                    break
            if not ok:
                continue
            assigned[v] = w
            used[w] = True
            yield from backtrack(i + 1)
            del assigned[v]
            used[w] = False

    for vmap in backtrack(0):
        # group edges into parallel classes; within a class any bijection works
        classesG: dict[tuple[int, int], list[int]] = {}
        classesH: dict[tuple[int, int], list[int]] = {}
        for e, (a, b) in enumerate(G.edges):
            x, y = vmap[a], vmap[b]
            classesG.setdefault((min(x, y), max(x, y)), []).append(e)
        for e, (a, b) in enumerate(H.edges):
            classesH.setdefault((min(a, b), max(a, b)), []).append(e)
        if set(classesG) != set(classesH) or any(
            len(classesG[k]) != len(classesH[k]) for k in classesG
        ):
            continue
        pairs = sorted(classesG)
        choices = []
        for key in pairs:
            src, tgt = classesG[key], classesH[key]
            is_loop = key[0] == key[1]
            opts = []
            for perm in permutations(tgt):
                if is_loop:
                    for flips in product((0, 1), repeat=len(src)):
                        opts.append(tuple(zip(perm, flips)))
                else:
                    images = []
                    for e, e2 in zip(src, perm):
                        a, b = G.edges[e]
                        flip = 0 if (vmap[a], vmap[b]) == H.edges[e2] else 1
                        images.append((e2, flip))
                    opts.append(tuple(images))
            choices.append(opts)
        for combo in product(*choices):
            emap: list[tuple[int, int]] = [(0, 0)] * G.n_edges
            for key, images in zip(pairs, combo):
                for e, im in zip(classesG[key], images):
                    emap[e] = im
            yield GraphMap(G, H, vmap, tuple(emap))


@lru_cache(maxsize=None)
def automorphisms(G: StableGraph) -> tuple[GraphMap, ...]:
    return tuple(find_isos(G, G))


def aut_order(G: StableGraph) -> int:
    return len(automorphisms(G))


@lru_cache(maxsize=None)
def canonicalize(G: StableGraph) -> StableGraph:
    """Canonical representative of the isomorphism class of G.

    Minimises the encoded form over vertex orders compatible with colour
    classes; the minimising edge order (sorted normalised pairs) becomes the
    stored, and thereafter immutable, edge ordering.
    """
    colors = _refine_colors([G])[0]
    classes: dict[int, list[int]] = {}
    for v in range(G.n_vertices):
        classes.setdefault(colors[v], []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    best = None
    for parts in product(*(permutations(b) for b in blocks)):
        new_order = [v for part in parts for v in part]  # old vertex at new slot
        vper = [0] * G.n_vertices
        for slot, v in enumerate(new_order):
            vper[v] = slot
        genera = tuple(G.genera[v] for v in new_order)
        legs = tuple(vper[v] for v in G.legs)
        edges = tuple(
            sorted((min(vper[a], vper[b]), max(vper[a], vper[b])) for a, b in G.edges)
        )
        key = (genera, legs, edges)
        if best is None or key < best:
            best = key
    return StableGraph(*best)


def canonical_iso(G: StableGraph) -> GraphMap:
    """Some isomorphism from G onto its canonical representative."""
    C = canonicalize(G)
    for iso in find_isos(G, C):
        return iso
    raise RuntimeError("graph not isomorphic to its canonical form")


# -- contraction and degeneration -----------------------------------------


@dataclass(frozen=True)
class Contraction:
    """Contraction of a single edge.  vmap/emap send surviving structure of
    the source onto the result; the two half-edges of the contracted edge
    have no image (they are the branches of the smoothed node)."""

    source: StableGraph
    result: StableGraph
    edge: int
    vmap: tuple[int, ...]
    emap: tuple  # source edge -> result edge index, None at the contracted edge

    def point(self, p: Point) -> Point:
        if p[0] == "l":
            return p
        e, s = p[1], p[2]
        if e == self.edge:
            raise ValueError("contracted half-edge has no image")
        return ("h", self.emap[e], s)

    def branches(self) -> tuple[Point, Point]:
        return ("h", self.edge, 0), ("h", self.edge, 1)


def contract_edge(G: StableGraph, e: int) -> Contraction:
    a, b = G.edges[e]
    if a == b:
        genera = tuple(
            g + 1 if v == a else g for v, g in enumerate(G.genera)
        )
        edges = tuple(E for i, E in enumerate(G.edges) if i != e)
        emap = tuple(None if i == e else (i if i < e else i - 1) for i in range(G.n_edges))
        result = StableGraph(genera, G.legs, edges)
        return Contraction(G, result, e, tuple(range(G.n_vertices)), emap)
    lo, hi = min(a, b), max(a, b)
    vmap = tuple(v if v < hi else (lo if v == hi else v - 1) for v in range(G.n_vertices))
    genera = []
    for v in range(G.n_vertices):
        if v == hi:
            continue
        genera.append(G.genera[lo] + G.genera[hi] if v == lo else G.genera[v])
    legs = tuple(vmap[v] for v in G.legs)
    edges = []
    emap_list: list = []
    k = 0
    for i, (x, y) in enumerate(G.edges):
        if i == e:
            emap_list.append(None)
            continue
        edges.append((vmap[x], vmap[y]))
        emap_list.append(k)
        k += 1
    result = StableGraph(tuple(genera), legs, tuple(edges))
    return Contraction(G, result, e, vmap, tuple(emap_list))


def _bridge_sides(G: StableGraph, e: int):
    """Vertex sets of the two components of G minus edge e, or None if e is
    not a bridge.  Side 0 contains the first endpoint of e."""
    a, b = G.edges[e]
    if a == b:
        return None
    adj = [[] for _ in range(G.n_vertices)]
    for i, (x, y) in enumerate(G.edges):
        if i == e:
            continue
        adj[x].append(y)
        adj[y].append(x)
    seen = {a}
    stack = [a]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if b in seen:
        return None
    other = set(range(G.n_vertices)) - seen
    return seen, other


def _side_genus(G: StableGraph, side: set, skip_edge: int) -> int:
    inner = sum(
        1 for i, (x, y) in enumerate(G.edges) if i != skip_edge and x in side and y in side
    )
    return sum(G.genera[v] for v in side) + inner - len(side) + 1


def edge_type(G: StableGraph, e: int):
    """('irr',) for a non-separating edge, ('sep', h1, h2) for a bridge with
    side genera h1 <= h2.  Types are stable under contracting other edges."""
    sides = _bridge_sides(G, e)
    if sides is None:
        return ("irr",)
    g0 = _side_genus(G, sides[0], e)
    g1 = _side_genus(G, sides[1], e)
    return ("sep", min(g0, g1), max(g0, g1))


def edge_allowed(G: StableGraph, e: int, variant: str) -> bool:
    if variant == "open":
        return True
    t = edge_type(G, e)
    if t[0] == "irr":
        return True
    if variant == "ct":
        return False
    if variant == "rt":
        return t[1] > 0
    raise ValueError(f"unknown variant {variant!r}")


def graph_allowed(G: StableGraph, variant: str) -> bool:
    """Whether the graph indexes a term of the boundary complex for the
    given open/compact-type/rational-tails variant."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    return all(edge_allowed(G, e, variant) for e in range(G.n_edges))


@dataclass(frozen=True)
class Degeneration:
    """One-edge degeneration of a base graph.  The new edge is last; the old
    edges keep their indices, so contracting the last edge returns the base
    graph on the nose."""

    base: StableGraph
    graph: StableGraph

    def contraction(self) -> Contraction:
        c = contract_edge(self.graph, self.graph.n_edges - 1)
        assert c.result == self.base
        return c


def _iso_fixing_old_edges(A: StableGraph, B: StableGraph, n_old: int) -> bool:
    for iso in find_isos(A, B):
        if all(iso.emap[e][0] == e for e in range(n_old)):
            return True
    return False


def one_edge_degenerations(
    G: StableGraph, variant: str = "open"
) -> tuple[Degeneration, ...]:
    """All one-edge degenerations of G up to isomorphisms fixing the old edge
    labels, with the new edge filtered by the variant."""
    out: list[Degeneration] = []
    ne = G.n_edges

    def push(graph: StableGraph):
        if variant != "open" and not edge_allowed(graph, ne, variant):
            return
        for d in out:
            if _iso_fixing_old_edges(d.graph, graph, ne):
                return
        out.append(Degeneration(G, graph))

    for v in range(G.n_vertices):
        # non-separating: drop the genus, add a loop
        if G.genera[v] >= 1:
            genera = tuple(g - 1 if u == v else g for u, g in enumerate(G.genera))
            push(StableGraph(genera, G.legs, G.edges + ((v, v),)))
        # separating: split v, new vertex appended last, new edge last
        pts = G.points_at(v)
        w = G.n_vertices
        for g_new in range(G.genera[v] + 1):
            g_keep = G.genera[v] - g_new
            for mask in range(1 << len(pts)):
                moved = [pts[i] for i in range(len(pts)) if mask >> i & 1]
                if not is_stable(g_keep, len(pts) - len(moved) + 1):
                    continue
                if not is_stable(g_new, len(moved) + 1):
                    continue
                genera = tuple(
                    g_keep if u == v else g for u, g in enumerate(G.genera)
                ) + (g_new,)
                legs = list(G.legs)
                edges = [list(E) for E in G.edges]
                for p in moved:
                    if p[0] == "l":
                        legs[p[1] - 1] = w
                    else:
                        edges[p[1]][p[2]] = w
                edges.append([v, w])
                push(
                    StableGraph(
                        genera, tuple(legs), tuple(tuple(E) for E in edges)
                    )
                )
    return tuple(out)


def enumerate_stable_graphs(
    g: int, n: int, variant: str = "open", max_edges: int | None = None
) -> list[list[StableGraph]]:
    """Isomorphism classes of variant-allowed stable graphs of type (g, n),
    grouped by edge count.  Level 0 is the smooth graph."""
    if not is_stable(g, n):
        raise ValueError(f"(g, n) = ({g}, {n}) is not stable")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if max_edges is None:
        max_edges = space_dim(g, n)
    smooth = StableGraph((g,), (0,) * n, ())
    levels = [[canonicalize(smooth)]]
    for p in range(1, max_edges + 1):
        found: dict[StableGraph, None] = {}
        for G in levels[p - 1]:
            for d in one_edge_degenerations(G, variant):
                found.setdefault(canonicalize(d.graph), None)
        levels.append(sorted(found, key=lambda G: (G.genera, G.legs, G.edges)))
    return levels
