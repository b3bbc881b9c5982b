"""Weight spectral sequence pages on the boundary stratification.

Two first-quadrant complexes per space and variant, both indexed by the
number of edges p of variant-admissible stable graphs:

  push:  E1[p] = sum over graph orbits of (H^{q-2p}(prod of vertex spaces)
         tensor det E)^{Aut}, d1 contracts an edge (p -> p-1); homology at
         p gives gr_q H^{q-p} of the open space.
  pull:  E1[p] uses H^q and d1 degenerates by one edge (p -> p+1);
         homology at p gives gr_q H_c^{q+p}.

Marking symmetries: for a partition lam of n the S_lam-invariant sector is
computed with one representative graph per S_lam x iso orbit; invariance
under the colored stabilizer (marking permutation + graph iso, with the
determinant sign on edge permutations) is imposed by a Reynolds projector
over per-vertex ring bases.  The differentials follow the edge-slot sign
convention: contracted edge to slot 1 (push) or new edge last (pull).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product

from wss.formats import encode_graph
from wss.graphs import (
    GraphMap,
    StableGraph,
    aut_order,
    canonicalize,
    enumerate_stable_graphs,
    find_isos,
    one_edge_degenerations,
    space_dim,
)
from wss.linalg import Echelon, independent_rows, rank
from wss.repthy import multiplicities as _decompose
from wss.repthy import partitions
from wss.ring import (
    act,
    basis,
    glue_pushforward,
    orbit_class,
    young_blocks,
)
from wss.strata import TautClass, contract_edges, divisor_pullback

DIRECTIONS = ("push", "pull")
VARIANTS = ("open", "ct", "rt")


def _relabel_graph(G: StableGraph, perm: dict) -> StableGraph:
    legs = list(G.legs)
    for m in range(1, G.n_markings + 1):
        legs[perm.get(m, m) - 1] = G.legs[m - 1]
    return StableGraph(G.genera, tuple(legs), G.edges)


def _identity_iso(G: StableGraph) -> GraphMap:
    return GraphMap(
        G, G, tuple(range(G.n_vertices)), tuple((e, 0) for e in range(G.n_edges))
    )


def _compose_perm(outer: dict, inner: dict) -> dict:
    keys = set(outer) | set(inner)
    out = {}
    for m in keys:
        t = outer.get(inner.get(m, m), inner.get(m, m))
        if t != m:
            out[m] = t
    return out


def _block_perms(blocks):
    """All marking permutations of the Young subgroup, as dicts."""
    perms = [{}]
    for block in blocks:
        nxt = []
        for base in perms:
            for images in permutations(block):
                p = dict(base)
                for m, t in zip(block, images):
                    if m != t:
                        p[m] = t
                nxt.append(p)
        perms = nxt
    return perms


def _block_transpositions(blocks):
    gens = []
    for block in blocks:
        for a, b in zip(block, block[1:]):
            gens.append({a: b, b: a})
    return gens


@lru_cache(maxsize=None)
def _levels(g: int, n: int, variant: str):
    return tuple(tuple(lv) for lv in enumerate_stable_graphs(g, n, variant))


def _admissible(g: int, n: int, p: int, variant: str):
    levels = _levels(g, n, variant)
    return levels[p] if p < len(levels) else ()


@lru_cache(maxsize=None)
def _lambda_orbits(g: int, n: int, p: int, variant: str, lam: tuple):
    """Admissible p-edge graph classes grouped into S_lam orbits.  Each
    orbit is a tuple of (member class, marking perm rep->member as a sorted
    item tuple), representative first."""
    classes = _admissible(g, n, p, variant)
    gens = _block_transpositions(young_blocks(lam))
    seen = set()
    orbits = []
    for G in classes:
        if G in seen:
            continue
        members = {G: {}}
        frontier = [G]
        while frontier:
            cur = frontier.pop()
            tau = members[cur]
            for t in gens:
                nxt = canonicalize(_relabel_graph(cur, t))
                if nxt not in members:
                    members[nxt] = _compose_perm(t, tau)
                    frontier.append(nxt)
        seen |= set(members)
        orbits.append(
            tuple(
                (M, tuple(sorted(members[M].items())))
                for M in sorted(members, key=classes.index)
            )
        )
    return tuple(orbits)


def _colored_stabilizer(G: StableGraph, blocks):
    """Pairs (marking perm, iso from the relabeled graph to G)."""
    out = []
    for tau in _block_perms(blocks):
        H = _relabel_graph(G, tau)
        if canonicalize(H) != canonicalize(G):
            continue
        for iso in find_isos(H, G):
            out.append((tau, iso))
    return out


def _vertex_point_perm(G: StableGraph, tau: dict, H: StableGraph, iso, v: int):
    """Marking permutation of vertex v's space induced by relabeling G with
    tau (giving H) followed by the iso out of H."""
    src = G.points_at(v)
    mid = H.points_at(v)
    bij = iso.point_bijection(v)
    perm = {}
    for k, pt in enumerate(src, start=1):
        if pt[0] == "l":
            pt = ("l", tau.get(pt[1], pt[1]))
        perm[k] = bij[mid.index(pt)] + 1
    return perm


@dataclass(frozen=True)
class TermBlock:
    """One S_lam x iso graph orbit's contribution to a page term."""

    members: tuple  # ((graph, tau-items), ...), representative first
    rdegree: int
    monomials: tuple  # ((per-vertex r, per-vertex basis index), ...)
    vectors: tuple  # invariant basis over the monomial coordinates

    @property
    def graph(self) -> StableGraph:
        return self.members[0][0]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @cached_property
    def echelon(self) -> Echelon:
        return Echelon(list(self.vectors), len(self.monomials))


@dataclass(frozen=True)
class PageTerm:
    direction: str
    variant: str
    q: int
    p: int
    lam: tuple
    blocks: tuple[TermBlock, ...]

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    @property
    def tate_power(self) -> int:
        return self.p

    @property
    def rdegree(self) -> int:
        return (self.q - 2 * self.p) // 2 if self.direction == "push" else self.q // 2


def _vertex_spaces(G: StableGraph):
    return tuple(G.vertex_space(v) for v in range(G.n_vertices))


def _rcomps(R: int, caps):
    if not caps:
        return [()] if R == 0 else []
    out = []

    def rec(i, left, acc):
        if i == len(caps):
            if left == 0:
                out.append(tuple(acc))
            return
        for r in range(min(caps[i], left) + 1):
            rec(i + 1, left - r, acc + [r])

    rec(0, R, [])
    return out


@lru_cache(maxsize=None)
def _monomials(G: StableGraph, R: int):
    spaces = _vertex_spaces(G)
    caps = [space_dim(g, n) for g, n in spaces]
    monos = []
    for rc in _rcomps(R, caps):
        ranges = [range(basis(*spaces[v], rc[v]).dim) for v in range(len(spaces))]
        for idxs in product(*ranges):
            monos.append((rc, idxs))
    return tuple(monos)


@lru_cache(maxsize=None)
def _vertex_class(space, r: int, idx: int) -> TautClass:
    B = basis(*space, r)
    return orbit_class(space, B.orbits[B.basis[idx]])


@lru_cache(maxsize=None)
def _transport_matrix(space, r, perm_items):
    """Rows: reduction of each basis class after the marking relabeling."""
    B = basis(*space, r)
    perm = dict(perm_items)
    rows = []
    for idx in range(B.dim):
        co = B.reduce(act(_vertex_class(space, r, idx), perm))
        rows.append(tuple(co))
    return tuple(rows)


def _transport_mono_rows(G, monos, tgt_index, tau, iso):
    """Image rows of each of G's monomials under (tau, iso), det sign
    included; columns index the iso target's monomials."""
    H = _relabel_graph(G, tau)
    spaces = _vertex_spaces(G)
    nv = len(spaces)
    sgn = iso.edge_sign()
    perms = [
        tuple(sorted(_vertex_point_perm(G, tau, H, iso, v).items()))
        for v in range(nv)
    ]
    rows = []
    for rc, idxs in monos:
        rc2 = [0] * nv
        for v in range(nv):
            rc2[iso.vmap[v]] = rc[v]
        rc2 = tuple(rc2)
        partial = {(): Fraction(sgn)}
        for v in range(nv):
            mat = _transport_matrix(spaces[v], rc[v], perms[v])
            row = mat[idxs[v]]
            nxt = {}
            for key, c in partial.items():
                for j, cj in enumerate(row):
                    if cj:
                        nxt[key + ((iso.vmap[v], j),)] = c * cj
            partial = nxt
        out = {}
        for key, c in partial.items():
            tgt_idxs = [0] * nv
            for w, j in key:
                tgt_idxs[w] = j
            out[tgt_index[(rc2, tuple(tgt_idxs))]] = c
        rows.append(out)
    return rows


def _term_block(orbit, R: int, blocks) -> TermBlock | None:
    G = orbit[0][0]
    monos = _monomials(G, R)
    if not monos:
        return None
    mono_index = {m: i for i, m in enumerate(monos)}
    stab = _colored_stabilizer(G, blocks)
    if len(stab) == 1:
        vectors = tuple({i: Fraction(1)} for i in range(len(monos)))
        return TermBlock(orbit, R, monos, vectors)
    proj = [dict() for _ in monos]
    for tau, iso in stab:
        rows = _transport_mono_rows(G, monos, mono_index, tau, iso)
        for i, row in enumerate(rows):
            acc = proj[i]
            for j, c in row.items():
                acc[j] = acc.get(j, Fraction(0)) + Fraction(c, len(stab))
    for row in proj:
        for j in [k for k, v in row.items() if not v]:
            del row[j]
    keep = independent_rows(proj, len(monos))
    if not keep:
        return None
    return TermBlock(orbit, R, monos, tuple(proj[i] for i in keep))


def build_page(
    g: int,
    n: int,
    q: int,
    lam=(),
    variant: str = "open",
    direction: str = "push",
) -> tuple[PageTerm, ...]:
    """E1 terms for one weight row, indexed by edge count p."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    lam = tuple(lam)
    if lam and sum(lam) != n:
        raise ValueError("lam must be a partition of n")
    return _build_page(g, n, q, lam, variant, direction)


@lru_cache(maxsize=None)
def _build_page(g, n, q, lam, variant, direction):
    if q < 0 or q % 2:
        return ()
    d = space_dim(g, n)
    blocks = young_blocks(lam)
    terms = []
    for p in range(0, d + 1):
        R = (q - 2 * p) // 2 if direction == "push" else q // 2
        if R < 0 or R > d - p:
            terms.append(PageTerm(direction, variant, q, p, lam, ()))
            continue
        tblocks = []
        for orbit in _lambda_orbits(g, n, p, variant, lam):
            tb = _term_block(orbit, R, blocks)
            if tb is not None:
                tblocks.append(tb)
        terms.append(PageTerm(direction, variant, q, p, lam, tuple(tblocks)))
    while terms and terms[-1].dim == 0:
        terms.pop()
    return tuple(terms)


# -- differentials ---------------------------------------------------------


def _sign_of_slots(slots) -> int:
    sgn = 1
    seen = [False] * len(slots)
    perm = [s - 1 for s in slots]
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def _expand_member_vectors(block: TermBlock):
    """Invariant basis vectors transported to each orbit member: triples
    (member graph, member monomials, rows per basis vector)."""
    G = block.graph
    monos = block.monomials
    out = []
    for member, tau_items in block.members:
        tau = dict(tau_items)
        if member == G and not tau:
            out.append((member, monos, block.vectors))
            continue
        member_monos = _monomials(member, block.rdegree)
        tgt_index = {m: i for i, m in enumerate(member_monos)}
        iso = next(iter(find_isos(_relabel_graph(G, tau), member)))
        rows = _transport_mono_rows(G, monos, tgt_index, tau, iso)
        moved = []
        for vec in block.vectors:
            acc: dict = {}
            for i, c in vec.items():
                for j, cj in rows[i].items():
                    acc[j] = acc.get(j, Fraction(0)) + c * cj
            moved.append({k: v for k, v in acc.items() if v})
        out.append((member, member_monos, tuple(moved)))
    return out


def _reduce_prod(spaces, rcomp, classes):
    """Tensor product of per-vertex reductions: dict idxs tuple -> coeff."""
    partial = {(): Fraction(1)}
    for v, cls in enumerate(classes):
        co = basis(*spaces[v], rcomp[v]).reduce(cls)
        nxt = {}
        for key, c in partial.items():
            for j, cj in enumerate(co):
                if cj:
                    nxt[key + (j,)] = c * cj
        partial = nxt
        if not partial:
            return {}
    return partial


def differential(term_a: PageTerm, term_b: PageTerm):
    """Matrix of d1 from term_a to term_b as rows over term_b's basis."""
    if (term_a.q, term_a.lam, term_a.variant, term_a.direction) != (
        term_b.q,
        term_b.lam,
        term_b.variant,
        term_b.direction,
    ):
        raise ValueError("page terms belong to different pages")
    step = -1 if term_a.direction == "push" else 1
    if term_b.p != term_a.p + step:
        raise ValueError("page terms are not adjacent")
    if term_a.direction == "push":
        raw = _push_rows(term_a, term_b)
    else:
        raw = _pull_rows(term_a, term_b)
    return _solve_into_basis(raw, term_b)


def _target_lookup(term_b: PageTerm):
    lut = {}
    for tb in term_b.blocks:
        lut[tb.graph] = (tb, {m: i for i, m in enumerate(tb.monomials)})
    return lut


def _solve_into_basis(raw_rows, term_b: PageTerm):
    offsets = {}
    at = 0
    for tb in term_b.blocks:
        offsets[id(tb)] = at
        at += tb.dim
    out = []
    for raw in raw_rows:
        per_block: dict = {}
        for (bid, col), c in raw.items():
            if c:
                per_block.setdefault(bid, {})[col] = c
        row = {}
        for tb in term_b.blocks:
            sub = per_block.pop(id(tb), None)
            if sub is None:
                continue
            co = tb.echelon.solve(sub)
            if co is None:
                raise RuntimeError(
                    "differential image escapes the invariant subspace"
                )
            for k, c in enumerate(co):
                if c:
                    row[offsets[id(tb)] + k] = c
        if per_block:
            raise RuntimeError("differential hit a dropped block")
        out.append(row)
    return tuple(out)


# Per-member differential images.  An image maps each monomial of the
# member graph to its summed contribution per adjacent graph, with the
# 1/|Aut| scale and all slot signs folded in.  Images depend only on
# (member, decoration degree, direction), never on the variant or the
# marking symmetry, so ct/rt and sector runs reuse them; an optional
# store persists them across processes and the counters below let runs
# measure that reuse.

_STORE = None
_IMAGE_MEMO: dict = {}
IMAGE_STATS = {"requests": 0, "computed": 0}


def set_store(store) -> None:
    """Install a persistent artifact store: get(key) -> obj | None, put(key, obj)."""
    global _STORE
    _STORE = store


def reset_image_stats() -> None:
    IMAGE_STATS["requests"] = 0
    IMAGE_STATS["computed"] = 0


def _image(member: StableGraph, R: int, direction: str):
    IMAGE_STATS["requests"] += 1
    memo_key = (member, R, direction)
    hit = _IMAGE_MEMO.get(memo_key)
    if hit is not None:
        return hit
    key = f"{direction}img:{encode_graph(member)}|R={R}"
    img = _STORE.get(key) if _STORE is not None else None
    if img is None:
        IMAGE_STATS["computed"] += 1
        compute = _compute_push_image if direction == "push" else _compute_pull_image
        img = compute(member, R)
        if _STORE is not None:
            _STORE.put(key, img)
    _IMAGE_MEMO[memo_key] = img
    return img


def _accumulate_image(out, Hc, tgt_monos, j, contribs, factor):
    row = out.setdefault(Hc, {}).setdefault(j, {})
    for tkey, c2 in contribs:
        t = tgt_monos[tkey]
        row[t] = row.get(t, Fraction(0)) + factor * c2


def _strip_image(out):
    for Hc in list(out):
        rows = out[Hc]
        for j in list(rows):
            rows[j] = {t: c for t, c in rows[j].items() if c}
            if not rows[j]:
                del rows[j]
        if not rows:
            del out[Hc]
    return out


def _compute_push_image(member: StableGraph, R: int):
    monos = _monomials(member, R)
    spaces = _vertex_spaces(member)
    out: dict = {}
    for i in range(member.n_edges):
        C = contract_edges(member, (i,))
        Hc = canonicalize(C.result)
        tgt_monos = {m: t for t, m in enumerate(_monomials(Hc, R + 1))}
        tgt_spaces = _vertex_spaces(Hc)
        scale = Fraction(1, aut_order(Hc))
        a, b = member.edges[i]
        for rho in find_isos(C.result, Hc):
            slots = []
            for e in range(member.n_edges):
                if e == i:
                    slots.append(1)
                else:
                    slots.append(rho.emap[C.emap[e]][0] + 2)
            sgn = _sign_of_slots(slots)
            merged_src = C.vmap[a]
            for j, (rc, idxs) in enumerate(monos):
                contrib = _push_monomial(
                    member, spaces, rc, idxs, i, a, b, C, rho, merged_src, tgt_spaces
                )
                if contrib is None:
                    continue
                rc2, idx_coeffs = contrib
                _accumulate_image(
                    out,
                    Hc,
                    tgt_monos,
                    j,
                    (((rc2, idxs2), c2) for idxs2, c2 in idx_coeffs.items()),
                    scale * sgn,
                )
    return _strip_image(out)


def _assemble_rows(term_a: PageTerm, term_b: PageTerm, direction: str):
    lut = _target_lookup(term_b)
    rows_out = [dict() for _ in range(term_a.dim)]
    base_row = 0
    for block in term_a.blocks:
        for member, member_monos, vecs in _expand_member_vectors(block):
            img = _image(member, block.rdegree, direction)
            for Hc, jrows in img.items():
                hit = lut.get(Hc)
                if hit is None:
                    continue
                tb, _ = hit
                for vi, vec in enumerate(vecs):
                    row = rows_out[base_row + vi]
                    for j, coeff in vec.items():
                        for t, c2 in jrows.get(j, {}).items():
                            k2 = (id(tb), t)
                            row[k2] = row.get(k2, Fraction(0)) + coeff * c2
        base_row += block.dim
    return rows_out


def _push_rows(term_a: PageTerm, term_b: PageTerm):
    return _assemble_rows(term_a, term_b, "push")


def _push_monomial(member, spaces, rc, idxs, i, a, b, C, rho, merged_src, tgt_spaces):
    factors = {
        v: _vertex_class(spaces[v], rc[v], idxs[v])
        for v in ({a} if a == b else (a, b))
    }
    merged = glue_pushforward(member, i, factors)
    if merged.is_zero():
        return None
    nt = len(tgt_spaces)
    rc2 = [0] * nt
    classes: list = [None] * nt
    for v in range(member.n_vertices):
        if v == a or v == b:
            continue
        w = rho.vmap[C.vmap[v]]
        rc2[w] = rc[v]
        bij = rho.point_bijection(C.vmap[v])
        perm = {k: bij[k - 1] + 1 for k in range(1, len(bij) + 1)}
        classes[w] = act(_vertex_class(spaces[v], rc[v], idxs[v]), perm)
    w0 = rho.vmap[merged_src]
    rc2[w0] = rc[a] + (rc[b] if a != b else 0) + 1
    if rc2[w0] > space_dim(*tgt_spaces[w0]):
        return None
    bij = rho.point_bijection(merged_src)
    perm0 = {k: bij[k - 1] + 1 for k in range(1, len(bij) + 1)}
    classes[w0] = act(merged, perm0)
    return tuple(rc2), _reduce_prod(tgt_spaces, tuple(rc2), classes)


def _compute_pull_image(member: StableGraph, R: int):
    # degeneration types of surviving edges never change, so the variant
    # restriction is exactly a restriction of target graphs; the image is
    # computed once over all degenerations and filtered at assembly
    monos = _monomials(member, R)
    spaces = _vertex_spaces(member)
    out: dict = {}
    for deg in one_edge_degenerations(member, "open"):
        Ghat = deg.graph
        Hc = canonicalize(Ghat)
        tgt_monos = {m: t for t, m in enumerate(_monomials(Hc, R))}
        tgt_spaces = _vertex_spaces(Hc)
        scale = Fraction(1, aut_order(Hc))
        new_edge = Ghat.n_edges - 1
        a, b = Ghat.edges[new_edge]
        C = deg.contraction()
        v0 = C.vmap[a]
        delta, perms = _local_one_edge(Ghat, new_edge)
        inv_perms = [{v: k for k, v in p.items()} for p in perms]
        for rho in find_isos(Ghat, Hc):
            slots = [rho.emap[e][0] + 1 for e in range(Ghat.n_edges)]
            sgn = _sign_of_slots(slots)
            for j, (rc, idxs) in enumerate(monos):
                contribs = _pull_monomial(
                    spaces, rc, idxs, Ghat, a, b, C, v0, delta, inv_perms, rho, tgt_spaces
                )
                _accumulate_image(
                    out,
                    Hc,
                    tgt_monos,
                    j,
                    (((rc2, idxs2), c2) for rc2, idxs2, c2 in contribs),
                    scale * sgn,
                )
    return _strip_image(out)


def _pull_rows(term_a: PageTerm, term_b: PageTerm):
    return _assemble_rows(term_a, term_b, "pull")


def _local_one_edge(G: StableGraph, i: int):
    """Local one-edge graph of edge i on the merged vertex's space, with
    per-side maps from the incident vertices' own point orders into the
    local marking orders (attachment points last)."""
    a, b = G.edges[i]
    c = contract_edges(G, (i,))
    merged = c.result.points_at(c.vmap[a])
    side = []
    for p in merged:
        q = c.point_back(p)
        side.append(0 if G.vertex_of_point(q) == a else 1)
    if a == b:
        delta = StableGraph((G.genera[a],), tuple(side), ((0, 0),))
    else:
        delta = StableGraph((G.genera[a], G.genera[b]), tuple(side), ((0, 1),))
    perms = []
    for local_v, v in enumerate((a,) if a == b else (a, b)):
        pts = G.points_at(v)
        mine = [j for j in range(len(merged)) if side[j] == local_v]
        perm = {}
        for k, q in enumerate(pts, start=1):
            if q[0] == "h" and q[1] == i:
                perm[k] = len(mine) + 1 + (q[2] if a == b else 0)
            else:
                j = merged.index(c.point_fwd(q))
                perm[k] = mine.index(j) + 1
        perms.append(perm)
    return delta, perms


def _pull_monomial(
    spaces, rc, idxs, Ghat, a, b, C, v0, delta, inv_perms, rho, tgt_spaces
):
    """Pull one source monomial through the degeneration: triples of
    (target rcomp, target idxs, coeff)."""
    cls0 = _vertex_class(spaces[v0], rc[v0], idxs[v0])
    pulled = divisor_pullback(delta, cls0)
    nt = len(tgt_spaces)
    loop = a == b
    locals_ = (a,) if loop else (a, b)
    base_rc = [0] * nt
    base_cls: list = [None] * nt
    for w in range(Ghat.n_vertices):
        if w in locals_:
            continue
        v = C.vmap[w]
        tw = rho.vmap[w]
        base_rc[tw] = rc[v]
        bij = rho.point_bijection(w)
        perm = {k: bij[k - 1] + 1 for k in range(1, len(bij) + 1)}
        base_cls[tw] = act(_vertex_class(spaces[v], rc[v], idxs[v]), perm)
    out: list = []
    for combo, c in pulled.terms.items():
        rc2 = list(base_rc)
        classes = list(base_cls)
        ok = True
        for local_v, s in enumerate(combo):
            w = locals_[local_v]
            tw = rho.vmap[w]
            deg_v = s.degree
            if deg_v > space_dim(*tgt_spaces[tw]):
                ok = False
                break
            rc2[tw] = deg_v
            x = TautClass(tgt_spaces[tw])
            x.add_term(s, 1)
            bij = rho.point_bijection(w)
            perm = {
                k: bij[inv_perms[local_v][k] - 1] + 1 for k in inv_perms[local_v]
            }
            classes[tw] = act(x, perm)
        if not ok:
            continue
        for idxs2, c2 in _reduce_prod(tgt_spaces, tuple(rc2), classes).items():
            out.append((tuple(rc2), idxs2, c * c2))
    return out


# -- second page and weight tables -----------------------------------------


def page_ranks(terms) -> tuple[int, ...]:
    """Rank of d1 between consecutive terms (length len(terms) - 1)."""
    ranks = []
    for i in range(len(terms) - 1):
        if terms[i].dim == 0 or terms[i + 1].dim == 0:
            ranks.append(0)
            continue
        # push differentials run toward fewer edges
        src, tgt = (
            (terms[i + 1], terms[i])
            if terms[i].direction == "push"
            else (terms[i], terms[i + 1])
        )
        mat = differential(src, tgt)
        ranks.append(rank(list(mat), tgt.dim))
    return tuple(ranks)


def e2_dims(terms) -> tuple[int, ...]:
    """E2 dimensions at each p for one weight row."""
    if not terms:
        return ()
    ranks = page_ranks(terms)
    out = []
    for p, t in enumerate(terms):
        din = ranks[p - 1] if p > 0 else 0
        dout = ranks[p] if p < len(ranks) else 0
        out.append(t.dim - din - dout)
    return tuple(out)


@dataclass(frozen=True)
class WeightTable:
    """lam-sector E2 dimensions per (weight q, cohomological degree r)."""

    g: int
    n: int
    variant: str
    direction: str
    sectors: tuple  # ((q, r, lam, dim), ...) sorted, zero entries dropped

    def dim(self, q: int, r: int, lam=()) -> int:
        lam = _norm_lam(lam, self.n)
        for qq, rr, ll, dd in self.sectors:
            if (qq, rr, ll) == (q, r, lam):
                return dd
        return 0

    def cells(self):
        triv = _norm_lam((), self.n)
        return tuple((q, r) for q, r, ll, _ in self.sectors if ll == triv)

    def multiplicities(self, q: int, r: int):
        """Irreducible decomposition of the (q, r) cell; needs the table to
        carry every partition of n as a sector."""
        if self.n == 0:
            return {(): self.dim(q, r)}
        dims = {lam: self.dim(q, r, lam) for lam in partitions(self.n)}
        return _decompose(dims)


def _norm_lam(lam, n: int) -> tuple:
    lam = tuple(lam)
    if not lam:
        return (1,) * n
    return lam


def _sector_dims(g, n, q, lam, variant, direction):
    terms = build_page(g, n, q, lam, variant, direction)
    dims = e2_dims(terms)
    out = {}
    for p, dd in enumerate(dims):
        if not dd:
            continue
        r = q - p if direction == "push" else q + p
        out[(q, r)] = dd
    return out


def e2_table(
    g: int,
    n: int,
    variant: str = "open",
    direction: str = "push",
    q_range=None,
    lam_set=None,
    exhaustive: bool = False,
) -> WeightTable:
    """Weight table of lam-sector E2 dimensions.

    Nontrivial sectors are skipped at weights where the trivial sector
    vanishes identically, unless exhaustive is set."""
    d = space_dim(g, n)
    if q_range is None:
        q_range = range(0, 2 * d + 1, 2)
    lams = [_norm_lam(lam, n) for lam in (lam_set if lam_set is not None else [()])]
    trivial = _norm_lam((), n)
    entries = []
    trivial_cells: dict = {}
    for q in q_range:
        if q % 2:
            continue
        base = _sector_dims(g, n, q, trivial, variant, direction)
        trivial_cells[q] = base
        for (qq, r), dd in base.items():
            entries.append((qq, r, trivial, dd))
    for lam in lams:
        if lam == trivial:
            continue
        for q in q_range:
            if q % 2:
                continue
            if not trivial_cells.get(q) and not exhaustive:
                continue
            for (qq, r), dd in _sector_dims(g, n, q, lam, variant, direction).items():
                entries.append((qq, r, lam, dd))
    return WeightTable(g, n, variant, direction, tuple(sorted(entries)))


def euler_check(g, n, q, lam=(), variant="open", direction="push") -> bool:
    """Per-weight Euler invariance of the page passage."""
    terms = build_page(g, n, q, tuple(lam), variant, direction)
    e1 = sum((-1) ** t.p * t.dim for t in terms)
    dims = e2_dims(terms)
    e2 = sum((-1) ** p * dd for p, dd in enumerate(dims))
    return e1 == e2


def duality_mismatches(push_table: WeightTable, pull_table: WeightTable):
    """Entries violating gr_q H_c^r = gr_{2d-q} H^{2d-r}."""
    if (push_table.g, push_table.n) != (pull_table.g, pull_table.n):
        raise ValueError("tables on different spaces")
    D = 2 * space_dim(push_table.g, push_table.n)
    cells = {(q, r, ll) for q, r, ll, _ in pull_table.sectors}
    cells |= {(D - q, D - r, ll) for q, r, ll, _ in push_table.sectors}
    bad = []
    for q, r, ll in sorted(cells):
        a = pull_table.dim(q, r, ll)
        b = push_table.dim(D - q, D - r, ll)
        if a != b:
            bad.append((q, r, ll, a, b))
    return tuple(bad)


def duality_check(push_table: WeightTable, pull_table: WeightTable, g, n) -> bool:
    if (push_table.g, push_table.n) != (g, n):
        raise ValueError("tables on different spaces")
    return not duality_mismatches(push_table, pull_table)
