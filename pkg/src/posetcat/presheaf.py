"""Finite presheaves over truncated poset-sites.

A site is a finite full subcategory of posets (e.g. the chains [0]..[d] or the
cubes [1]^0..[1]^d) with every hom-set materialized in enumeration order.  A
presheaf stores a cell count per object and one action table per site
morphism.  Everything downstream (colimits, left Kan extension along the
inclusion of chains into complete posets, horns, pushouts) is finite and
checked exhaustively at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Optional, Sequence

from . import catalog
from .errors import (
    BadIndexSet,
    BoundExceeded,
    InvariantViolation,
    NotComplete,
    SiteMismatch,
    TruncationUnstable,
)
from .karoubi import retract_certificate
from .poset import (
    MonotoneMap,
    Poset,
    chain,
    induced_subposet,
    interval_power,
    is_complete,
    poset_from_json,
    poset_to_json,
)
from .poset import product as poset_product

DELTA_SITE_BOUND = 5
BOX_SITE_BOUND = 2
TRIANGULATE_BOUND = 4
HORN_DIM_BOUND = 4


class PosetSite:
    """Full subcategory of posets on a finite object list, homs materialized."""

    def __init__(self, objects: Sequence[Poset], kind: str = "custom"):
        self.kind = kind
        self.objects = tuple(objects)
        n = len(self.objects)
        self.homs = tuple(
            tuple(catalog.monotone_maps(self.objects[i], self.objects[j]) for j in range(n))
            for i in range(n)
        )
        self._index = [
            [{f.image: a for a, f in enumerate(self.homs[i][j])} for j in range(n)]
            for i in range(n)
        ]
        self.identity_index = tuple(
            self._index[i][i][tuple(range(self.objects[i].size))] for i in range(n)
        )
        # composition tables; building them asserts closure of the hom-sets
        self._compose: dict[tuple[int, int, int], list[list[int]]] = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    idx = self._index[i][k]
                    table = []
                    for f in self.homs[i][j]:
                        row = []
                        for g in self.homs[j][k]:
                            image = tuple(g.image[x] for x in f.image)
                            c = idx.get(image)
                            if c is None:
                                raise SiteMismatch("hom-sets are not closed under composition")
                            row.append(c)
                        table.append(row)
                    self._compose[(i, j, k)] = table

    def hom_index(self, i: int, j: int, image: tuple[int, ...]) -> int:
        return self._index[i][j][image]

    def compose_index(self, i: int, j: int, k: int, a: int, b: int) -> int:
        """Index in hom(i,k) of homs[j][k][b] . homs[i][j][a]."""
        return self._compose[(i, j, k)][a][b]

    def object_index(self, P: Poset) -> Optional[int]:
        for i, Q in enumerate(self.objects):
            if Q == P:
                return i
        return None

    def __eq__(self, other):
        return isinstance(other, PosetSite) and self.objects == other.objects

    def __hash__(self):
        return hash(self.objects)

    def __repr__(self):
        return f"PosetSite({self.kind}, sizes={[P.size for P in self.objects]})"


@lru_cache(maxsize=None)
def delta_site(d: int) -> PosetSite:
    """Truncated chain site with objects [0], [1], ..., [d]."""
    if d > DELTA_SITE_BOUND:
        raise BoundExceeded(f"chain site capped at dimension {DELTA_SITE_BOUND}")
    return PosetSite([chain(k) for k in range(d + 1)], kind="delta")


@lru_cache(maxsize=None)
def box_site(d: int) -> PosetSite:
    """Truncated cube site with objects [1]^0, ..., [1]^d.

    Capped low: the closure assertion needs every pairwise composite, and
    |End([1]^3)| = 8000 already makes that quadratic check unreasonable.
    """
    if d > BOX_SITE_BOUND:
        raise BoundExceeded(f"cube site capped at dimension {BOX_SITE_BOUND}")
    return PosetSite([interval_power(k) for k in range(d + 1)], kind="box")


class Presheaf:
    """Set-valued contravariant functor on a site; cells are 0..count-1 labels."""

    def __init__(self, site: PosetSite, cells: Sequence[int], actions: dict, validate: bool = True):
        self.site = site
        self.cells = tuple(cells)
        self.actions = dict(actions)
        if validate:
            self.validate()

    def action(self, i: int, j: int, h: int) -> tuple[int, ...]:
        """Table of X(f): X(obj j) -> X(obj i) for f = homs[i][j][h]."""
        return self.actions[(i, j, h)]

    def validate(self):
        site = self.site
        n = len(site.objects)
        for i in range(n):
            for j in range(n):
                for h in range(len(site.homs[i][j])):
                    tab = self.actions.get((i, j, h))
                    if tab is None or len(tab) != self.cells[j]:
                        raise InvariantViolation(f"missing or misshapen action table ({i},{j},{h})")
                    if any(not 0 <= v < self.cells[i] for v in tab):
                        raise InvariantViolation(f"action table ({i},{j},{h}) out of range")
            ident = self.actions[(i, i, site.identity_index[i])]
            if ident != tuple(range(self.cells[i])):
                raise InvariantViolation(f"identity law fails at object {i}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    table = site._compose[(i, j, k)]
                    for a in range(len(site.homs[i][j])):
                        af = self.actions[(i, j, a)]
                        row = table[a]
                        for b in range(len(site.homs[j][k])):
                            ag = self.actions[(j, k, b)]
                            if self.actions[(i, k, row[b])] != tuple(af[x] for x in ag):
                                raise InvariantViolation(
                                    f"composition law fails for ({i},{j},{k}) homs ({a},{b})"
                                )

    def __eq__(self, other):
        return (
            isinstance(other, Presheaf)
            and self.site == other.site
            and self.cells == other.cells
            and self.actions == other.actions
        )

    def __repr__(self):
        return f"Presheaf(cells={list(self.cells)})"


class PresheafMap:
    """Natural transformation; one component table per site object."""

    def __init__(self, source: Presheaf, target: Presheaf, components: Sequence[Sequence[int]],
                 validate: bool = True):
        if source.site != target.site:
            raise SiteMismatch("natural transformations require a common site")
        self.source = source
        self.target = target
        self.components = tuple(tuple(c) for c in components)
        if validate:
            self.validate()

    def validate(self):
        site = self.source.site
        n = len(site.objects)
        if len(self.components) != n:
            raise InvariantViolation("one component per site object required")
        for i in range(n):
            comp = self.components[i]
            if len(comp) != self.source.cells[i]:
                raise InvariantViolation(f"component {i} has wrong length")
            if any(not 0 <= v < self.target.cells[i] for v in comp):
                raise InvariantViolation(f"component {i} out of range")
        for i in range(n):
            for j in range(n):
                for h in range(len(site.homs[i][j])):
                    ax = self.source.actions[(i, j, h)]
                    ay = self.target.actions[(i, j, h)]
                    ci, cj = self.components[i], self.components[j]
                    for x in range(self.source.cells[j]):
                        if ay[cj[x]] != ci[ax[x]]:
                            raise InvariantViolation(f"naturality fails at hom ({i},{j},{h})")

    def __eq__(self, other):
        return (
            isinstance(other, PresheafMap)
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def __repr__(self):
        return f"PresheafMap(cells={list(self.source.cells)} -> {list(self.target.cells)})"


def is_mono(F: PresheafMap) -> bool:
    """Levelwise injectivity (= monomorphism of presheaves)."""
    return all(len(set(c)) == len(c) for c in F.components)


# ---------------------------------------------------------------------------
# representables and restriction


def representable(site: PosetSite, P: Poset) -> Presheaf:
    """Cells at Q are the monotone maps Q -> P; action is precomposition.

    P need not be an object of the site (restricted representable).
    """
    n = len(site.objects)
    hom_to_p = [catalog.monotone_maps(Q, P) for Q in site.objects]
    index = [{f.image: c for c, f in enumerate(hom_to_p[i])} for i in range(n)]
    actions = {}
    for i in range(n):
        for j in range(n):
            for h, f in enumerate(site.homs[i][j]):
                fimg = f.image
                actions[(i, j, h)] = tuple(
                    index[i][tuple(g.image[x] for x in fimg)] for g in hom_to_p[j]
                )
    return Presheaf(site, [len(hs) for hs in hom_to_p], actions)


def representable_cells(site: PosetSite, P: Poset, level: int) -> tuple[MonotoneMap, ...]:
    """The maps indexing the cells of representable(site, P) at the given object."""
    return catalog.monotone_maps(site.objects[level], P)


def representable_map(site: PosetSite, f: MonotoneMap) -> PresheafMap:
    """Postcomposition with f as a map of representables y(dom f) -> y(cod f)."""
    src = representable(site, f.dom)
    tgt = representable(site, f.cod)
    comps = []
    for i, Q in enumerate(site.objects):
        idx = {g.image: c for c, g in enumerate(catalog.monotone_maps(Q, f.cod))}
        comps.append(
            tuple(idx[tuple(f.image[v] for v in g.image)] for g in catalog.monotone_maps(Q, f.dom))
        )
    return PresheafMap(src, tgt, comps)


def triangulate(n: int, d: int) -> Presheaf:
    """Simplicial triangulation of the n-cube: [m] -> Poset([m], [1]^n)."""
    if n > TRIANGULATE_BOUND or d > TRIANGULATE_BOUND:
        raise BoundExceeded(f"triangulation capped at dimension {TRIANGULATE_BOUND}")
    return representable(delta_site(d), interval_power(n))


def restrict(X: Presheaf, subsite: PosetSite) -> Presheaf:
    """Precomposition with a subsite inclusion: keep matching objects and homs."""
    obj_map = []
    for Q in subsite.objects:
        idx = X.site.object_index(Q)
        if idx is None:
            raise SiteMismatch("subsite object missing from the presheaf's site")
        obj_map.append(idx)
    actions = {}
    for i2 in range(len(subsite.objects)):
        for j2 in range(len(subsite.objects)):
            i, j = obj_map[i2], obj_map[j2]
            for h2, f in enumerate(subsite.homs[i2][j2]):
                try:
                    h = X.site.hom_index(i, j, f.image)
                except KeyError:
                    raise SiteMismatch("subsite hom missing from the presheaf's site")
                actions[(i2, j2, h2)] = X.actions[(i, j, h)]
    return Presheaf(subsite, [X.cells[obj_map[i2]] for i2 in range(len(subsite.objects))], actions)


# ---------------------------------------------------------------------------
# sub-presheaves and horns


def subpresheaf(X: Presheaf, keep: Sequence[Iterable[int]]) -> tuple[Presheaf, PresheafMap]:
    """Sub-presheaf on the given cells (must be closed under the actions)."""
    kept = [sorted(set(k)) for k in keep]
    pos = [{c: s for s, c in enumerate(ks)} for ks in kept]
    site = X.site
    actions = {}
    for (i, j, h), tab in X.actions.items():
        sub_tab = []
        for c in kept[j]:
            target = tab[c]
            s = pos[i].get(target)
            if s is None:
                raise InvariantViolation("cell selection is not closed under the actions")
            sub_tab.append(s)
        actions[(i, j, h)] = tuple(sub_tab)
    sub = Presheaf(site, [len(ks) for ks in kept], actions)
    incl = PresheafMap(sub, X, [tuple(ks) for ks in kept])
    return sub, incl


def _face_union_keep(n: int, I: frozenset[int], site: PosetSite) -> list[list[int]]:
    keep = []
    for m, Q in enumerate(site.objects):
        cells = catalog.monotone_maps(Q, chain(n))
        keep.append(
            [c for c, h in enumerate(cells) if any(i not in set(h.image) for i in I)]
        )
    return keep


def face_union(n: int, I: Iterable[int], d: Optional[int] = None) -> tuple[Presheaf, PresheafMap]:
    """Union of the i-th faces of the representable n-simplex, i in I.

    I may be empty (empty sub-presheaf) or everything (the boundary has I
    proper; horns add that restriction on top).
    """
    if d is None:
        d = n
    site = delta_site(d)
    Iset = frozenset(I)
    if any(not 0 <= i <= n for i in Iset):
        raise BadIndexSet("face indices must lie in 0..n")
    rep = representable(site, chain(n))
    return subpresheaf(rep, _face_union_keep(n, Iset, site))


def horn(n: int, I: Iterable[int], d: Optional[int] = None) -> PresheafMap:
    """Inclusion of the generalized horn (union of the faces indexed by I).

    Cells are the chain maps into [n] that factor through the i-th face for
    some i in I, i.e. miss some i in I.  I must be a nonempty proper subset of
    the vertices.
    """
    if n > HORN_DIM_BOUND:
        raise BoundExceeded(f"horns capped at dimension {HORN_DIM_BOUND}")
    Iset = frozenset(I)
    if not Iset or not Iset < set(range(n + 1)):
        raise BadIndexSet("need a nonempty proper subset of {0..n}")
    _, incl = face_union(n, Iset, d)
    return incl


# ---------------------------------------------------------------------------
# colimits


@dataclass(frozen=True)
class ColimResult:
    """Connected components of the category of elements."""

    count: int
    labels: tuple[tuple[int, ...], ...]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def colim(X: Presheaf) -> ColimResult:
    """Quotient of the disjoint union of cells by the zig-zag action relation."""
    offsets = []
    total = 0
    for c in X.cells:
        offsets.append(total)
        total += c
    uf = _UnionFind(total)
    for (i, j, _h), tab in X.actions.items():
        oi, oj = offsets[i], offsets[j]
        for c, target in enumerate(tab):
            uf.union(oj + c, oi + target)
    label_of_root: dict[int, int] = {}
    labels = []
    for i, c in enumerate(X.cells):
        row = []
        for x in range(c):
            r = uf.find(offsets[i] + x)
            row.append(label_of_root.setdefault(r, len(label_of_root)))
        labels.append(tuple(row))
    return ColimResult(len(label_of_root), tuple(labels))


def coproduct(X: Presheaf, Y: Presheaf) -> Presheaf:
    """Levelwise disjoint union (X cells first)."""
    if X.site != Y.site:
        raise SiteMismatch("coproduct requires a common site")
    actions = {}
    for key, tx in X.actions.items():
        i = key[0]
        ty = Y.actions[key]
        actions[key] = tx + tuple(X.cells[i] + v for v in ty)
    return Presheaf(X.site, [a + b for a, b in zip(X.cells, Y.cells)], actions)


# ---------------------------------------------------------------------------
# left Kan extension along chains -> complete posets


class KanResult:
    """Pointwise left Kan extension value: components of the comma diagram.

    Components are connected components of the category of elements of the
    presheaf pulled back along the projection (M down i) -> chains, where the
    comma objects are pairs ([k], map M -> [k]) up to the working truncation.
    """

    def __init__(self, count: int, depth: int, labels: dict, phis: list):
        self.count = count
        self.depth = depth
        self._labels = labels
        self._phis = phis

    def component(self, k: int, phi_index: int, cell: int) -> int:
        return self._labels[(k, phi_index, cell)]

    def phi_index(self, k: int, phi: MonotoneMap) -> int:
        return self._phis[k][phi.image]


def _comma_phis(M: Poset, D: int) -> list[dict[tuple[int, ...], int]]:
    return [
        {f.image: idx for idx, f in enumerate(catalog.monotone_maps(M, chain(k)))}
        for k in range(D + 1)
    ]


def _kan_once(X: Presheaf, M: Poset, D: int) -> KanResult:
    site = X.site
    d = len(site.objects) - 1
    phis = _comma_phis(M, D)
    phi_lists = [list(p.keys()) for p in phis]
    # global ids for cells of the pulled-back presheaf (levels beyond d carry none)
    gid: dict[tuple[int, int], int] = {}
    total = 0
    starts: dict[tuple[int, int], int] = {}
    for k in range(min(D, d) + 1):
        ck = X.cells[k]
        if ck == 0:
            continue
        for pi in range(len(phi_lists[k])):
            starts[(k, pi)] = total
            total += ck
    uf = _UnionFind(total)
    for k in range(min(D, d) + 1):
        for k2 in range(min(D, d) + 1):
            if X.cells[k] == 0 or X.cells[k2] == 0:
                continue
            homs = site.homs[k][k2]
            for h, u in enumerate(homs):
                tab = X.actions[(k, k2, h)]
                uimg = u.image
                for pi, phi in enumerate(phi_lists[k]):
                    phi2 = tuple(uimg[v] for v in phi)
                    pi2 = phis[k2][phi2]
                    base = starts[(k, pi)]
                    base2 = starts[(k2, pi2)]
                    for c2, c in enumerate(tab):
                        uf.union(base + c, base2 + c2)
    label_of_root: dict[int, int] = {}
    labels: dict[tuple[int, int, int], int] = {}
    for (k, pi), base in starts.items():
        for c in range(X.cells[k]):
            r = uf.find(base + c)
            labels[(k, pi, c)] = label_of_root.setdefault(r, len(label_of_root))
    return KanResult(len(label_of_root), D, labels, phis)


def _require_chain_site(X: Presheaf) -> int:
    d = len(X.site.objects) - 1
    for k, Q in enumerate(X.site.objects):
        if Q != chain(k):
            raise SiteMismatch("left Kan extension requires the chain-site truncation")
    return d


def left_kan(X: Presheaf, M: Poset, trunc: Optional[int] = None) -> KanResult:
    """Value of the extension of X along chains -> complete posets, at M.

    Builds the comma category of pairs ([k], M -> [k]) with k up to the
    working truncation (default d+1), pulls X back, and takes connected
    components.  Recomputes at trunc+1 and insists the component count is
    unchanged.
    """
    d = _require_chain_site(X)
    if not is_complete(M):
        raise NotComplete("left Kan extension is evaluated at complete posets only")
    D = d + 1 if trunc is None else trunc
    if not d <= D <= d + 2:
        raise BoundExceeded("working truncation must lie in [d, d+2]")
    result = _kan_once(X, M, D)
    recheck = _kan_once(X, M, D + 1)
    if result.count != recheck.count:
        raise TruncationUnstable(
            f"component count changed from {result.count} to {recheck.count}; raise the truncation"
        )
    return result


def left_kan_map(
    F: PresheafMap,
    M: Poset,
    trunc: Optional[int] = None,
    target: Optional[KanResult] = None,
) -> tuple[tuple[int, ...], KanResult, KanResult]:
    """Induced function between pointwise Kan values, as a component mapping.

    Pass a precomputed `target` KanResult (for F.target at the same M and
    truncation) to share it across several maps into the same presheaf.
    """
    src = left_kan(F.source, M, trunc)
    tgt = target if target is not None else left_kan(F.target, M, trunc)
    mapping: list[Optional[int]] = [None] * src.count
    for (k, pi, c), lab in src._labels.items():
        t = tgt._labels[(k, pi, F.components[k][c])]
        if mapping[lab] is None:
            mapping[lab] = t
        elif mapping[lab] != t:
            raise InvariantViolation("induced component map is not well defined")
    if any(v is None for v in mapping):
        raise InvariantViolation("component without representative cell")
    return tuple(mapping), src, tgt


# ---------------------------------------------------------------------------
# pushouts and the horn attachment square


def pushout(f: PresheafMap, g: PresheafMap) -> tuple[Presheaf, PresheafMap, PresheafMap]:
    """Levelwise pushout of sets along the shared source, with cocone maps."""
    if f.source != g.source:
        raise SiteMismatch("pushout legs must share their source presheaf")
    A, B, C = f.source, f.target, g.target
    site = A.site
    n = len(site.objects)
    lab_b, lab_c, counts = [], [], []
    for i in range(n):
        nb, nc = B.cells[i], C.cells[i]
        uf = _UnionFind(nb + nc)
        for a in range(A.cells[i]):
            uf.union(f.components[i][a], nb + g.components[i][a])
        label_of_root: dict[int, int] = {}
        lb = [label_of_root.setdefault(uf.find(x), len(label_of_root)) for x in range(nb)]
        lc = [
            label_of_root.setdefault(uf.find(nb + x), len(label_of_root))
            for x in range(nc)
        ]
        lab_b.append(lb)
        lab_c.append(lc)
        counts.append(len(label_of_root))
    actions = {}
    for (i, j, h), tb in B.actions.items():
        tc = C.actions[(i, j, h)]
        tab: list[Optional[int]] = [None] * counts[j]
        for b, lab in enumerate(lab_b[j]):
            val = lab_b[i][tb[b]]
            if tab[lab] is None:
                tab[lab] = val
            elif tab[lab] != val:
                raise InvariantViolation("pushout action not well defined on B cells")
        for c, lab in enumerate(lab_c[j]):
            val = lab_c[i][tc[c]]
            if tab[lab] is None:
                tab[lab] = val
            elif tab[lab] != val:
                raise InvariantViolation("pushout action not well defined on C cells")
        if any(v is None for v in tab):
            raise InvariantViolation("pushout cell without representative")
        actions[(i, j, h)] = tuple(tab)
    P = Presheaf(site, counts, actions)
    in_b = PresheafMap(B, P, lab_b)
    in_c = PresheafMap(C, P, lab_c)
    if any(
        tuple(in_b.components[i][f.components[i][a]] for a in range(A.cells[i]))
        != tuple(in_c.components[i][g.components[i][a]] for a in range(A.cells[i]))
        for i in range(n)
    ):
        raise InvariantViolation("pushout square does not commute")
    return P, in_b, in_c


def horn_attachment_square(n: int, I: Iterable[int], i: int, d: Optional[int] = None) -> dict:
    """Check the face-attachment pushout: glueing the i-th face onto the horn
    with faces I-{i} along their overlap yields the horn with faces I.

    Returns per-level cell counts; raises InvariantViolation if the canonical
    comparison map from the pushout to the directly built horn fails to be a
    levelwise bijection.
    """
    Iset = frozenset(I)
    if not Iset or not Iset < set(range(n + 1)) or i not in Iset:
        raise BadIndexSet("need i in I, a nonempty proper subset of {0..n}")
    if d is None:
        d = n
    site = delta_site(d)
    delta_i = MonotoneMap(
        chain(n - 1), chain(n), tuple(j if j < i else j + 1 for j in range(n))
    )
    Iprime = Iset - {i}
    J = frozenset(j for j in range(n) if delta_i.image[j] in Iprime)

    rep_n = representable(site, chain(n))
    rep_n1 = representable(site, chain(n - 1))
    keep_big = _face_union_keep(n, Iset, site)
    keep_prime = _face_union_keep(n, Iprime, site) if Iprime else [[] for _ in site.objects]
    keep_small = _face_union_keep(n - 1, J, site) if J else [[] for _ in site.objects]
    big, _ = subpresheaf(rep_n, keep_big)
    prime, _ = subpresheaf(rep_n, keep_prime)
    small, small_incl = subpresheaf(rep_n1, keep_small)

    # positions of kept cells inside the ambient representables
    pos_big = [{c: s for s, c in enumerate(ks)} for ks in keep_big]
    pos_prime = [{c: s for s, c in enumerate(ks)} for ks in keep_prime]
    cells_n = [catalog.monotone_maps(Q, chain(n)) for Q in site.objects]
    idx_n = [{h.image: c for c, h in enumerate(cs)} for cs in cells_n]
    cells_n1 = [catalog.monotone_maps(Q, chain(n - 1)) for Q in site.objects]

    def post_delta(level: int, cell_n1: int) -> int:
        h = cells_n1[level][cell_n1]
        return idx_n[level][tuple(delta_i.image[v] for v in h.image)]

    a = PresheafMap(
        small,
        prime,
        [
            tuple(pos_prime[lvl][post_delta(lvl, c)] for c in keep_small[lvl])
            for lvl in range(len(site.objects))
        ],
    )
    b = small_incl
    P, in_prime, in_face = pushout(a, b)

    # canonical comparison map into the directly built horn
    compare: list[list[Optional[int]]] = [[None] * P.cells[lvl] for lvl in range(len(site.objects))]
    for lvl in range(len(site.objects)):
        for s, c in enumerate(keep_prime[lvl]):
            compare[lvl][in_prime.components[lvl][s]] = pos_big[lvl][c]
        for c1 in range(rep_n1.cells[lvl]):
            target = pos_big[lvl][post_delta(lvl, c1)]
            lab = in_face.components[lvl][c1]
            if compare[lvl][lab] is None:
                compare[lvl][lab] = target
            elif compare[lvl][lab] != target:
                raise InvariantViolation("comparison map to the horn is not well defined")
    counts = {}
    for lvl in range(len(site.objects)):
        if None in compare[lvl] or len(set(compare[lvl])) != len(compare[lvl]):
            raise InvariantViolation(f"pushout differs from the horn at level {lvl}")
        if P.cells[lvl] != big.cells[lvl]:
            raise InvariantViolation(f"pushout differs from the horn at level {lvl}")
        counts[lvl] = P.cells[lvl]
    return counts


# ---------------------------------------------------------------------------
# hom transport along retract certificates


def nat_hom_via_retract(L: Poset, L2: Poset, trunc_dim: int) -> tuple[MonotoneMap, ...]:
    """Monotone maps L -> L2 obtained as r2 . g . s1 over monotone g between cubes.

    The composite depends only on the restriction of g to the section image,
    and every monotone function there extends to the whole cube (join
    extension into a complete target), so restrictions are enumerated and one
    extension g is materialized for each.  The result is asserted equal to the
    directly enumerated hom-set.
    """
    cert1 = retract_certificate(L)
    cert2 = retract_certificate(L2)
    if cert1.cube_dim > trunc_dim or cert2.cube_dim > trunc_dim:
        raise BoundExceeded("certificate cube dimension exceeds the truncation")
    cube1 = interval_power(cert1.cube_dim)
    cube2 = interval_power(cert2.cube_dim)
    s_elems = sorted(cert1.section.image)
    S, _incl = induced_subposet(cube1, s_elems)
    composites = set()
    for rho in catalog.enumerate_monotone_maps(S, cube2):
        # join extension: g(x) is the join of rho over section elements below x
        g_image = []
        for x in range(cube1.size):
            acc = 0
            for p, s_el in enumerate(s_elems):
                if s_el & ~x == 0:
                    acc |= rho.image[p]
            g_image.append(acc)
        g = MonotoneMap(cube1, cube2, tuple(g_image))
        composites.add(
            tuple(
                cert2.retraction.image[g.image[cert1.section.image[c]]]
                for c in range(L.size)
            )
        )
    direct = {f.image for f in catalog.enumerate_monotone_maps(L, L2)}
    if composites != direct:
        raise InvariantViolation("transported hom-set differs from direct enumeration")
    return tuple(MonotoneMap(L, L2, img) for img in sorted(composites))


def contracting_homotopy(n: int) -> MonotoneMap:
    """Homotopy [1] x [n] -> [n] sending (0, k) to 0 and (1, k) to k."""
    dom = poset_product(chain(1), chain(n))
    image = []
    for k in range(n + 1):
        for x in (0, 1):
            image.append(0 if x == 0 else k)
    return MonotoneMap(dom, chain(n), tuple(image))


# ---------------------------------------------------------------------------
# natural transformations by filtered search (Yoneda-scale)


def natural_transformations(X: Presheaf, Y: Presheaf) -> list[PresheafMap]:
    """All natural transformations X -> Y, by per-object backtracking.

    Candidate component values are pruned by naturality against the objects
    already assigned; intended for desk-scale sites and cell counts.
    """
    if X.site != Y.site:
        raise SiteMismatch("natural transformations require a common site")
    site = X.site
    n = len(site.objects)
    comps: list[Optional[tuple[int, ...]]] = [None] * n
    results: list[tuple[tuple[int, ...], ...]] = []

    def assign(q: int):
        if q == n:
            results.append(tuple(comps))  # type: ignore[arg-type]
            return
        cand = [set(range(Y.cells[q])) for _ in range(X.cells[q])]
        for p in range(q):
            for h in range(len(site.homs[p][q])):
                ax = X.actions[(p, q, h)]
                ay = Y.actions[(p, q, h)]
                for xq in range(X.cells[q]):
                    want = comps[p][ax[xq]]
                    cand[xq] = {y for y in cand[xq] if ay[y] == want}
            for h in range(len(site.homs[q][p])):
                ax = X.actions[(q, p, h)]
                ay = Y.actions[(q, p, h)]
                for xp in range(X.cells[p]):
                    cand[ax[xp]] &= {ay[comps[p][xp]]}
        if any(not c for c in cand):
            return
        endo = [
            (X.actions[(q, q, h)], Y.actions[(q, q, h)])
            for h in range(len(site.homs[q][q]))
        ]
        for choice in iproduct(*[sorted(c) for c in cand]):
            if all(
                choice[ax[x]] == ay[choice[x]]
                for ax, ay in endo
                for x in range(X.cells[q])
            ):
                comps[q] = choice
                assign(q + 1)
                comps[q] = None

    assign(0)
    return [PresheafMap(X, Y, c) for c in results]


def are_isomorphic(X: Presheaf, Y: Presheaf) -> bool:
    """Levelwise-bijective natural transformation exists."""
    if X.site != Y.site or X.cells != Y.cells:
        return False
    return any(is_mono(t) for t in natural_transformations(X, Y))


# ---------------------------------------------------------------------------
# serialization


def site_to_json(site: PosetSite) -> dict:
    if site.kind in ("delta", "box"):
        return {"kind": site.kind, "dim": len(site.objects) - 1}
    return {"kind": "custom", "objects": [poset_to_json(P) for P in site.objects]}


def site_from_json(data: dict) -> PosetSite:
    if data["kind"] == "delta":
        return delta_site(data["dim"])
    if data["kind"] == "box":
        return box_site(data["dim"])
    return PosetSite([poset_from_json(p) for p in data["objects"]], kind="custom")


def presheaf_to_json(X: Presheaf) -> dict:
    actions = {}
    n = len(X.site.objects)
    for i in range(n):
        for j in range(n):
            for h in range(len(X.site.homs[i][j])):
                actions[f"{i},{j},{h}"] = list(X.actions[(i, j, h)])
    return {"site": site_to_json(X.site), "cells": list(X.cells), "actions": actions}


def presheaf_from_json(data: dict) -> Presheaf:
    site = site_from_json(data["site"])
    actions = {}
    for key, tab in data["actions"].items():
        i, j, h = (int(v) for v in key.split(","))
        actions[(i, j, h)] = tuple(tab)
    return Presheaf(site, data["cells"], actions)
