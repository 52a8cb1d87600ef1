"""Labeled trees, their label-preserving automorphism groups, fixed sets,
and the cut/restrict/glue machinery used by the splitting pipeline.

Automorphisms are stored as explicit vertex permutations (tuples).  Groups
are explicit element lists; the supported bound is 10^4 elements, far above
anything the generators produce.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from math import gcd

from .errors import (
    EdgeNotFound,
    GroupTooLarge,
    InternalInconsistency,
    InvalidTree,
    SideNotInvariant,
)

Perm = tuple[int, ...]

MAX_GROUP_ORDER = 10_000


# ----------------------------------------------------------------------
# trees

class LabeledTree:
    """Tree with one real label per vertex; adjacent labels must differ.

    An optional marked vertex constrains automorphisms to fix it (used for
    the cut point created when a tree is cut inside an edge).
    """

    def __init__(self, labels, edges, marked: int | None = None):
        self.labels = tuple(float(x) for x in labels)
        n = len(self.labels)
        es = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InvalidTree(f"bad edge {(u, v)}")
            es.append((u, v) if u < v else (v, u))
        if len(set(es)) != len(es):
            raise InvalidTree("duplicate edge")
        self.edges = tuple(es)
        self.marked = marked
        if marked is not None and not 0 <= marked < n:
            raise InvalidTree(f"marked vertex {marked} out of range")
        self.adj = [[] for _ in range(n)]
        for u, v in self.edges:
            self.adj[u].append(v)
            self.adj[v].append(u)
        for a in self.adj:
            a.sort()
        if len(self.edges) != n - 1 or not self._connected():
            raise InvalidTree("not a tree")
        for u, v in self.edges:
            if self.labels[u] == self.labels[v]:
                raise InvalidTree(f"adjacent vertices {(u, v)} share a label")

    def _connected(self) -> bool:
        n = len(self.labels)
        if n == 0:
            return False
        seen = [False] * n
        stack = [0]
        seen[0] = True
        k = 1
        while stack:
            u = stack.pop()
            for w in self.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    k += 1
                    stack.append(w)
        return k == n

    @property
    def n(self) -> int:
        return len(self.labels)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.edges.index(key)
        except ValueError:
            raise EdgeNotFound(f"no edge {key}") from None

    def with_marked(self, marked: int | None) -> "LabeledTree":
        return LabeledTree(self.labels, self.edges, marked)

    def __repr__(self):
        mk = f", marked={self.marked}" if self.marked is not None else ""
        return f"LabeledTree(n={self.n}{mk})"


def tree_isomorphic(t1: LabeledTree, t2: LabeledTree,
                    pin: tuple[int, int] | None = None) -> bool:
    """Label-preserving isomorphism test via canonical rooted forms.

    With ``pin=(v1, v2)`` the isomorphism must map v1 to v2, so both trees
    are rooted there; otherwise both are rooted at the (label-aware) center.
    """
    if t1.n != t2.n or sorted(t1.labels) != sorted(t2.labels):
        return False

    def canon(tree: LabeledTree, root: int):
        def rec(v, parent):
            kids = sorted(rec(w, v) for w in tree.adj[v] if w != parent)
            return (tree.labels[v], tuple(kids))
        return rec(root, -1)

    if pin is not None:
        return canon(t1, pin[0]) == canon(t2, pin[1])
    c1 = _centers(t1)
    c2 = _centers(t2)
    forms1 = sorted(canon(t1, r) for r in c1)
    forms2 = sorted(canon(t2, r) for r in c2)
    return forms1 == forms2


def _centers(tree: LabeledTree) -> list[int]:
    n = tree.n
    if n == 1:
        return [0]
    deg = [tree.degree(v) for v in range(n)]
    layer = [v for v in range(n) if deg[v] == 1]
    removed = len(layer)
    while removed < n:
        nxt = []
        for v in layer:
            for w in tree.adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        if not nxt:
            break
        layer = nxt
        removed += len(layer)
    return sorted(layer)


# ----------------------------------------------------------------------
# permutations and groups

def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_order(p: Perm) -> int:
    n = len(p)
    seen = [False] * n
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        order = order * length // gcd(order, length)
    return order


def close_under_composition(gens, n: int, max_order: int = MAX_GROUP_ORDER) -> list[Perm]:
    """Subgroup generated by ``gens`` (breadth-first products)."""
    elems = {identity_perm(n)}
    frontier = [g for g in gens]
    for g in frontier:
        elems.add(g)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                e = compose(g, h)
                if e not in elems:
                    elems.add(e)
                    nxt.append(e)
                    if len(elems) > max_order:
                        raise GroupTooLarge(f"group exceeds {max_order} elements")
        frontier = nxt
    return sorted(elems)


@dataclass(frozen=True)
class AutGroup:
    """Explicit finite permutation group: sorted element list plus generators."""

    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def n(self) -> int:
        return len(self.elements[0])

    def __contains__(self, p: Perm) -> bool:
        return p in set(self.elements)

    def to_dict(self) -> dict:
        return {
            "schema": "reeb-split/1",
            "order": self.order,
            "histogram": {str(k): v for k, v in
                          sorted(element_order_histogram(self).items())},
            "generators": [list(g) for g in self.generators],
            "elements": [list(p) for p in self.elements],
        }


def group_order(group: AutGroup) -> int:
    return group.order


def element_order_histogram(group) -> dict[int, int]:
    elems = group.elements if isinstance(group, AutGroup) else tuple(group)
    return dict(Counter(perm_order(p) for p in elems))


def verify_group_axioms(group) -> bool:
    """Exhaustive closure / identity / inverse check."""
    elems = list(group.elements if isinstance(group, AutGroup) else group)
    if not elems:
        return False
    n = len(elems[0])
    s = set(elems)
    if identity_perm(n) not in s:
        return False
    for p in elems:
        if invert(p) not in s:
            return False
    for p in elems:
        for q in elems:
            if compose(p, q) not in s:
                return False
    return True


def _minimal_generators(elements: list[Perm], n: int) -> tuple[Perm, ...]:
    gens: list[Perm] = []
    span = {identity_perm(n)}
    for g in elements:
        if g not in span:
            gens.append(g)
            # the span cannot outgrow the group the elements came from
            span = set(close_under_composition(gens, n, max_order=len(elements)))
            if len(span) == len(elements):
                break
    return tuple(gens)


# ----------------------------------------------------------------------
# enumeration

def _refine_colors(tree: LabeledTree, initial: list) -> list[int]:
    """Iterated neighbourhood refinement of an initial vertex colouring."""
    key = {c: i for i, c in enumerate(sorted(set(initial)))}
    colors = [key[c] for c in initial]
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in tree.adj[v])))
                for v in range(tree.n)]
        key = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [key[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _enumerate(tree: LabeledTree, use_labels: bool,
               max_order: int) -> list[Perm]:
    n = tree.n
    if n == 1:
        return [(0,)]
    if use_labels:
        initial = [(tree.labels[v], tree.degree(v), v == tree.marked)
                   for v in range(n)]
    else:
        initial = [(tree.degree(v), v == tree.marked) for v in range(n)]
    colors = _refine_colors(tree, initial)
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(colors[v], []).append(v)

    # search order: BFS from a deterministic root so every later vertex has a
    # mapped neighbour to anchor its candidates
    root = min(range(n), key=lambda v: (len(classes[colors[v]]), colors[v], v))
    bfs = [root]
    parent = {root: -1}
    qi = 0
    while qi < len(bfs):
        u = bfs[qi]
        qi += 1
        for w in tree.adj[u]:
            if w not in parent:
                parent[w] = u
                bfs.append(w)

    results: list[Perm] = []
    image = [-1] * n
    used = [False] * n

    def extend(i: int):
        if i == len(bfs):
            results.append(tuple(image))
            if len(results) > max_order:
                raise GroupTooLarge(f"group exceeds {max_order} elements")
            return
        v = bfs[i]
        if parent[v] == -1:
            candidates = classes[colors[v]]
        else:
            candidates = tree.adj[image[parent[v]]]
        for w in candidates:
            if used[w] or colors[w] != colors[v]:
                continue
            image[v] = w
            used[w] = True
            extend(i + 1)
            used[w] = False
            image[v] = -1

    extend(0)

    # the BFS-anchored search preserves every tree edge; double-check labels
    # and the mark, then sort for a canonical element order
    out = []
    for p in results:
        if use_labels and any(tree.labels[p[v]] != tree.labels[v] for v in range(n)):
            raise InternalInconsistency("enumerated map breaks labels")
        if tree.marked is not None and p[tree.marked] != tree.marked:
            raise InternalInconsistency("enumerated map moves the marked vertex")
        out.append(p)
    return sorted(out)


def enumerate_aut(tree: LabeledTree, max_order: int = MAX_GROUP_ORDER) -> AutGroup:
    """All label-preserving automorphisms (fixing the mark when present)."""
    elems = _enumerate(tree, use_labels=True, max_order=max_order)
    return AutGroup(elements=tuple(elems),
                    generators=_minimal_generators(elems, tree.n))


def enumerate_general_aut(tree: LabeledTree,
                          max_order: int = MAX_GROUP_ORDER) -> AutGroup:
    """All cellular automorphisms, labels ignored."""
    elems = _enumerate(tree, use_labels=False, max_order=max_order)
    return AutGroup(elements=tuple(elems),
                    generators=_minimal_generators(elems, tree.n))


# ----------------------------------------------------------------------
# fixed sets

@dataclass(frozen=True)
class FixedSet:
    """Common fixed points of a group acting on a tree.

    Either a nonempty connected subtree (vertices plus the edges joining
    them) or, when no vertex is fixed, the single invariant edge whose
    midpoint is fixed, together with an element reversing that edge.
    """

    variant: str  # "subtree" | "midpoint"
    vertices: tuple[int, ...] = ()
    edge_ids: tuple[int, ...] = ()
    midpoint_edge: int | None = None
    flip_witness: Perm | None = None

    @property
    def has_edge(self) -> bool:
        return self.variant == "subtree" and bool(self.edge_ids)


def fixed_set(group, tree: LabeledTree) -> FixedSet:
    """Fixed vertices and pointwise-fixed edges of a group of automorphisms.

    Raises InternalInconsistency when neither a nonempty subtree nor a single
    flipped invariant edge exists, which would contradict the fixed-point
    property of finite groups acting on trees.
    """
    elems = list(group.elements if isinstance(group, AutGroup) else group)
    if not verify_group_axioms(elems):
        raise ValueError("fixed_set needs a group (closure check failed)")
    n = tree.n
    fixed_vertices = [v for v in range(n) if all(p[v] == v for p in elems)]
    if fixed_vertices:
        fixed_edges = []
        for eid, (u, v) in enumerate(tree.edges):
            if all(p[u] == u and p[v] == v for p in elems):
                fixed_edges.append(eid)
        if not _subtree_connected(tree, fixed_vertices):
            raise InternalInconsistency("fixed vertex set is not connected")
        return FixedSet(variant="subtree",
                        vertices=tuple(fixed_vertices),
                        edge_ids=tuple(fixed_edges))
    candidates = []
    for eid, (u, v) in enumerate(tree.edges):
        if all({p[u], p[v]} == {u, v} for p in elems):
            witness = next((p for p in elems if p[u] == v), None)
            if witness is not None:
                candidates.append((eid, witness))
    if len(candidates) != 1:
        raise InternalInconsistency(
            f"no fixed vertex and {len(candidates)} flipped invariant edges")
    eid, witness = candidates[0]
    return FixedSet(variant="midpoint", midpoint_edge=eid, flip_witness=witness)


def _subtree_connected(tree: LabeledTree, vertices: list[int]) -> bool:
    vs = set(vertices)
    start = vertices[0]
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in tree.adj[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


# ----------------------------------------------------------------------
# cutting, restriction, gluing

@dataclass(frozen=True)
class MarkedSubtree:
    tree: LabeledTree          # has its marked vertex set to the cut point
    orig: tuple[int, ...]      # subtree index -> base-tree vertex (-1 for the cut point)

    @property
    def marked(self) -> int:
        return self.tree.marked  # type: ignore[return-value]

    def index_of(self, base_vertex: int) -> int:
        return self.orig.index(base_vertex)


@dataclass(frozen=True)
class TreeCut:
    """A tree cut inside an edge: the edge is subdivided by a new point and
    each side, closed up with that point as a marked leaf, becomes a subtree.
    Side A holds the lower endpoint of the cut edge."""

    base: LabeledTree
    edge_id: int
    cut_label: float
    side_a: MarkedSubtree
    side_b: MarkedSubtree

    def side(self, which: str) -> MarkedSubtree:
        if which == "A":
            return self.side_a
        if which == "B":
            return self.side_b
        raise ValueError("side must be 'A' or 'B'")


def cut_tree_at(tree: LabeledTree, edge_id: int,
                cut_label: float | None = None) -> TreeCut:
    """Cut a tree inside an edge; the new point's label defaults to the
    midpoint of the endpoint labels."""
    if not 0 <= edge_id < len(tree.edges):
        raise EdgeNotFound(f"no edge {edge_id}")
    u, v = tree.edges[edge_id]
    if cut_label is None:
        cut_label = (tree.labels[u] + tree.labels[v]) / 2.0
    lo, hi = (u, v) if (tree.labels[u], u) < (tree.labels[v], v) else (v, u)

    def component(start: int, banned: int) -> list[int]:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for w in tree.adj[x]:
                if w != banned and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return sorted(seen)

    def side_from(start: int, banned: int) -> MarkedSubtree:
        members = component(start, banned)
        index = {o: i for i, o in enumerate(members)}
        labels = [tree.labels[o] for o in members] + [cut_label]
        x = len(members)
        edges = [(index[a], index[b]) for a, b in tree.edges
                 if a in index and b in index]
        edges.append((index[start], x))
        sub = LabeledTree(labels, edges, marked=x)
        return MarkedSubtree(tree=sub, orig=tuple(members) + (-1,))

    return TreeCut(
        base=tree,
        edge_id=edge_id,
        cut_label=float(cut_label),
        side_a=side_from(lo, hi),
        side_b=side_from(hi, lo),
    )


def restrict_aut(cut: TreeCut, gamma: Perm, which: str) -> Perm:
    """Restriction of a base-tree automorphism to one cut side.

    The automorphism must fix both endpoints of the cut edge and map the
    side's vertex set to itself; otherwise SideNotInvariant is raised.
    """
    u, v = cut.base.edges[cut.edge_id]
    if gamma[u] != u or gamma[v] != v:
        raise SideNotInvariant("cut edge endpoints move")
    side = cut.side(which)
    members = set(side.orig) - {-1}
    out = [0] * side.tree.n
    for i, o in enumerate(side.orig):
        if o == -1:
            out[i] = i  # the cut point stays put
            continue
        img = gamma[o]
        if img not in members:
            raise SideNotInvariant(f"vertex {o} leaves side {which}")
        out[i] = side.index_of(img)
    return tuple(out)


def glue_aut(cut: TreeCut, alpha: Perm, beta: Perm) -> Perm:
    """Automorphism of the base tree restricting to ``alpha`` and ``beta``."""
    a, b = cut.side_a, cut.side_b
    if alpha[a.marked] != a.marked or beta[b.marked] != b.marked:
        raise ValueError("glued pieces must fix their marked leaves")
    out = [0] * cut.base.n
    for i, o in enumerate(a.orig):
        if o != -1:
            out[o] = a.orig[alpha[i]]
    for i, o in enumerate(b.orig):
        if o != -1:
            out[o] = b.orig[beta[i]]
    return tuple(out)


# ----------------------------------------------------------------------
# isomorphism verification

@dataclass(frozen=True)
class IsoVerdict:
    injective: bool
    surjective: bool
    homomorphism: bool
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.injective and self.surjective and self.homomorphism

    def to_dict(self) -> dict:
        return {
            "injective": self.injective,
            "surjective": self.surjective,
            "homomorphism": self.homomorphism,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def verify_isomorphism_pairs(elements, side_a: AutGroup, side_b: AutGroup,
                             pair_of, glue) -> IsoVerdict:
    """Exhaustively check that element -> (pair_of(element)) is a group
    isomorphism onto side_a x side_b, with ``glue`` producing preimages."""
    elements = list(elements)
    notes = []
    pairs = {}
    ok_map = True
    for g in elements:
        try:
            pairs[g] = pair_of(g)
        except SideNotInvariant as exc:
            notes.append(f"restriction undefined: {exc}")
            ok_map = False
    if not ok_map:
        return IsoVerdict(False, False, False, tuple(notes))
    for g, (pa, pb) in pairs.items():
        if pa not in side_a or pb not in side_b:
            notes.append("restriction leaves the side group")
            return IsoVerdict(False, False, False, tuple(notes))

    n = len(elements[0])
    ident = identity_perm(n)
    injective = all(g == ident for g in elements
                    if pairs[g] == (identity_perm(side_a.n), identity_perm(side_b.n)))

    homomorphism = True
    elem_set = set(elements)
    for g, h in product(elements, repeat=2):
        gh = compose(g, h)
        if gh not in elem_set:
            homomorphism = False
            notes.append("element set not closed under composition")
            break
        want = (compose(pairs[g][0], pairs[h][0]), compose(pairs[g][1], pairs[h][1]))
        if pairs[gh] != want:
            homomorphism = False
            notes.append("pairing is not multiplicative")
            break

    surjective = True
    hit = set(pairs.values())
    for pa, pb in product(side_a.elements, side_b.elements):
        if (pa, pb) in hit:
            continue
        glued = glue(pa, pb)
        if glued not in elem_set or pairs.get(glued) != (pa, pb):
            surjective = False
            notes.append("a side pair has no preimage")
            break

    return IsoVerdict(injective, surjective, homomorphism, tuple(notes))


def verify_isomorphism(cut: TreeCut, group: AutGroup,
                       side_a_group: AutGroup, side_b_group: AutGroup) -> IsoVerdict:
    """Check that restriction to the two cut sides is an isomorphism of the
    full group onto the product of the side groups."""
    def pair_of(g: Perm):
        return (restrict_aut(cut, g, "A"), restrict_aut(cut, g, "B"))

    def glue(pa: Perm, pb: Perm):
        return glue_aut(cut, pa, pb)

    return verify_isomorphism_pairs(group.elements, side_a_group, side_b_group,
                                    pair_of, glue)
