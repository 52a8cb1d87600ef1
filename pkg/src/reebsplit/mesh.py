"""Triangulated surfaces: combinatorial adjacency, manifold validation, and
cutting a sphere along a regular level cycle into two disks.

Coordinates are carried for export only; every check and construction in this
module is purely combinatorial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

__all__ = [
    "TriangleMesh",
    "SurfaceReport",
    "LevelCycle",
    "CutPiece",
    "validate_surface",
    "check_level_cycle",
    "cut_along_cycle",
]

from .errors import (
    CutNotSeparating,
    CycleNotLevel,
    DegenerateTriangle,
    NonManifoldEdge,
    NonOrientable,
    PinchedVertex,
)

if TYPE_CHECKING:  # pragma: no cover
    from .field import ScalarField


class TriangleMesh:
    """Triangle mesh with derived edge table, vertex links and boundary cycles.

    Construction validates the local manifold structure: every edge must lie
    in one or two triangles, and every vertex link must be a single cycle
    (interior vertex) or a single path (boundary vertex).  Degenerate
    triangles are rejected, never repaired.
    """

    def __init__(self, vertices, triangles):
        self.vertices = np.asarray(vertices, dtype=float).reshape(-1, 3)
        nv = len(self.vertices)
        if nv == 0:
            raise ValueError("empty vertex list")
        tris = []
        for t in np.asarray(triangles, dtype=int).reshape(-1, 3):
            a, b, c = int(t[0]), int(t[1]), int(t[2])
            if len({a, b, c}) != 3:
                raise DegenerateTriangle(f"triangle {(a, b, c)} repeats a vertex")
            if min(a, b, c) < 0 or max(a, b, c) >= nv:
                raise ValueError(f"triangle {(a, b, c)} references a missing vertex")
            tris.append((a, b, c))
        if not tris:
            raise ValueError("empty triangle list")
        self.triangles = tris

        self._build_edges()
        self._build_links()
        self._build_boundary_cycles()
        self._orientable = None  # computed lazily

    # ------------------------------------------------------------------
    # derived structure

    def _build_edges(self):
        edge_tris: dict[tuple[int, int], list[int]] = {}
        for ti, (a, b, c) in enumerate(self.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                edge_tris.setdefault(key, []).append(ti)
        for key, ts in edge_tris.items():
            if len(ts) > 2:
                raise NonManifoldEdge(f"edge {key} lies in {len(ts)} triangles")
        self.edge_pairs = sorted(edge_tris)
        self.edge_id = {pair: i for i, pair in enumerate(self.edge_pairs)}
        self.edge_triangles = [edge_tris[pair] for pair in self.edge_pairs]

        self.vertex_triangles = [[] for _ in range(len(self.vertices))]
        for ti, tri in enumerate(self.triangles):
            for v in tri:
                self.vertex_triangles[v].append(ti)
        nbrs = [set() for _ in range(len(self.vertices))]
        for u, v in self.edge_pairs:
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.neighbors = [sorted(s) for s in nbrs]

    def _build_links(self):
        """Walk the link of every vertex; raise PinchedVertex on failure.

        The link is stored as an ordered list of neighbour vertices, plus a
        flag telling whether it closes into a cycle.  Repeated neighbours are
        legal (two triangles may span the same pair, as in the two-triangle
        sphere), so the walk is over triangle-labelled multigraph edges.
        """
        self.links = []
        self.link_closed = []
        for v in range(len(self.vertices)):
            ts = self.vertex_triangles[v]
            if not ts:
                raise PinchedVertex(f"vertex {v} has no incident triangle")
            # multigraph on link vertices: one edge per incident triangle
            adj: dict[int, list[tuple[int, int]]] = {}
            for ti in ts:
                a, b, c = self.triangles[ti]
                others = [x for x in (a, b, c) if x != v]
                p, q = others
                adj.setdefault(p, []).append((q, ti))
                adj.setdefault(q, []).append((p, ti))
            ends = sorted(u for u, es in adj.items() if len(es) == 1)
            for u, es in adj.items():
                if len(es) > 2:
                    raise PinchedVertex(f"link of vertex {v} branches at {u}")
            if len(ends) not in (0, 2):
                raise PinchedVertex(f"link of vertex {v} has {len(ends)} loose ends")
            closed = not ends
            start = min(adj) if closed else ends[0]
            used = set()
            walk = [start]
            cur = start
            while True:
                step = None
                for nxt, ti in sorted(adj[cur]):
                    if ti not in used:
                        step = (nxt, ti)
                        break
                if step is None:
                    break
                used.add(step[1])
                cur = step[0]
                walk.append(cur)
            if len(used) != len(ts):
                raise PinchedVertex(f"link of vertex {v} is disconnected")
            if closed:
                if walk[0] != walk[-1]:
                    raise PinchedVertex(f"link of vertex {v} does not close")
                walk = walk[:-1]
            self.links.append(walk)
            self.link_closed.append(closed)

    def _build_boundary_cycles(self):
        boundary_edges = [pair for pair, ts in zip(self.edge_pairs, self.edge_triangles)
                          if len(ts) == 1]
        succ: dict[int, set[int]] = {}
        for u, v in boundary_edges:
            succ.setdefault(u, set()).add(v)
            succ.setdefault(v, set()).add(u)
        cycles = []
        remaining = {frozenset(e) for e in boundary_edges}
        while remaining:
            first = min(remaining, key=sorted)
            u, v = sorted(first)
            cyc = [u, v]
            remaining.discard(first)
            while True:
                cur = cyc[-1]
                nxt = None
                for w in sorted(succ[cur]):
                    if frozenset((cur, w)) in remaining:
                        nxt = w
                        break
                if nxt is None:
                    break
                remaining.discard(frozenset((cur, nxt)))
                cyc.append(nxt)
            if cyc[0] != cyc[-1]:
                raise PinchedVertex("boundary walk did not close")
            cycles.append(cyc[:-1])
        self.boundary_cycles = cycles
        on_boundary = [False] * len(self.vertices)
        for cyc in cycles:
            for v in cyc:
                on_boundary[v] = True
        self.is_boundary_vertex = on_boundary

    # ------------------------------------------------------------------
    # queries

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_pairs)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def euler(self) -> int:
        return self.n_vertices - self.n_edges + self.n_triangles

    @property
    def closed(self) -> bool:
        return not self.boundary_cycles

    def link(self, v: int) -> tuple[list[int], bool]:
        """Ordered link of ``v`` and whether it is a cycle."""
        return self.links[v], self.link_closed[v]

    def connected(self) -> bool:
        seen = [False] * self.n_vertices
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for w in self.neighbors[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n_vertices

    def check_orientable(self) -> bool:
        """True when triangles admit a globally consistent winding."""
        if self._orientable is not None:
            return self._orientable
        flip = [None] * self.n_triangles

        def directed(ti: int) -> list[tuple[int, int]]:
            a, b, c = self.triangles[ti]
            es = [(a, b), (b, c), (c, a)]
            if flip[ti]:
                es = [(v, u) for u, v in es]
            return es

        def raw_directed(ti: int):
            a, b, c = self.triangles[ti]
            return ((a, b), (b, c), (c, a))

        ok = True
        for seed in range(self.n_triangles):
            if flip[seed] is not None:
                continue
            flip[seed] = False
            stack = [seed]
            while stack and ok:
                ti = stack.pop()
                for u, v in directed(ti):
                    key = (u, v) if u < v else (v, u)
                    for tj in self.edge_triangles[self.edge_id[key]]:
                        if tj == ti:
                            continue
                        # consistent winding traverses a shared edge in
                        # opposite directions in its two triangles
                        want_flipped = (u, v) in raw_directed(tj)
                        if flip[tj] is None:
                            flip[tj] = want_flipped
                            stack.append(tj)
                        elif flip[tj] != want_flipped:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        self._orientable = ok
        return ok


@dataclass(frozen=True)
class SurfaceReport:
    """Validation summary of a triangulated surface."""

    closed: bool
    orientable: bool
    genus: int
    boundary_count: int
    euler: int
    connected: bool
    vertex_count: int
    edge_count: int
    triangle_count: int

    def to_dict(self) -> dict:
        return {
            "closed": self.closed,
            "orientable": self.orientable,
            "genus": self.genus,
            "boundary_count": self.boundary_count,
            "euler": self.euler,
            "connected": self.connected,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "triangle_count": self.triangle_count,
        }


def validate_surface(mesh: TriangleMesh) -> SurfaceReport:
    """Validate manifold structure and summarize the surface topology.

    Local structure (edge multiplicity, vertex links) is already checked by
    the ``TriangleMesh`` constructor; this adds the global orientability
    check and the Euler bookkeeping.  Raises ``NonOrientable`` when no
    consistent winding exists.
    """
    if not mesh.check_orientable():
        raise NonOrientable("triangles admit no consistent winding")
    connected = mesh.connected()
    boundary_count = len(mesh.boundary_cycles)
    euler = mesh.euler
    # one 2-sphere worth of Euler characteristic per connected component
    ncomp = 1 if connected else _component_count(mesh)
    genus = (2 * ncomp - euler - boundary_count) // 2
    return SurfaceReport(
        closed=mesh.closed,
        orientable=True,
        genus=genus,
        boundary_count=boundary_count,
        euler=euler,
        connected=connected,
        vertex_count=mesh.n_vertices,
        edge_count=mesh.n_edges,
        triangle_count=mesh.n_triangles,
    )


def _component_count(mesh: TriangleMesh) -> int:
    seen = [False] * mesh.n_vertices
    count = 0
    for s in range(mesh.n_vertices):
        if seen[s]:
            continue
        count += 1
        stack = [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            for w in mesh.neighbors[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


@dataclass(frozen=True)
class LevelCycle:
    """A simple closed curve of a regular level set, stored as the ordered
    list of crossed mesh edges with interpolation parameters.

    The parameter of a crossing on edge ``(u, v)`` (ascending vertex index)
    is ``t = (value - f(u)) / (f(v) - f(u))``, strictly inside (0, 1).
    """

    crossings: tuple[tuple[int, float], ...]  # (edge id, t)
    closed: bool
    value: float

    def __len__(self) -> int:
        return len(self.crossings)


def check_level_cycle(mesh: TriangleMesh, values, cycle: LevelCycle) -> list[int]:
    """Validate a level cycle against a mesh and value array.

    Returns the list of crossed triangles, aligned with consecutive crossing
    pairs (triangle ``i`` is shared by crossings ``i`` and ``i+1``).
    """
    values = np.asarray(values, dtype=float)
    c = cycle.value
    if np.any(values == c):
        raise CycleNotLevel(f"a vertex has value exactly {c}")
    if not cycle.closed or len(cycle) < 3:
        raise CycleNotLevel("cycle must be closed with at least three crossings")
    eids = [e for e, _ in cycle.crossings]
    if len(set(eids)) != len(eids):
        raise CycleNotLevel("cycle crosses a mesh edge twice")
    for e, t in cycle.crossings:
        u, v = mesh.edge_pairs[e]
        fu, fv = values[u], values[v]
        if not (min(fu, fv) < c < max(fu, fv)):
            raise CycleNotLevel(f"edge {(u, v)} does not straddle {c}")
        t_ref = (c - fu) / (fv - fu)
        if not (0.0 < t < 1.0) or abs(t - t_ref) > 1e-9:
            raise CycleNotLevel(f"parameter {t} inconsistent on edge {(u, v)}")
    tris = []
    n = len(eids)
    for i in range(n):
        e1, e2 = eids[i], eids[(i + 1) % n]
        shared = set(mesh.edge_triangles[e1]) & set(mesh.edge_triangles[e2])
        if len(shared) != 1:
            raise CycleNotLevel("consecutive crossings do not share one triangle")
        tris.append(shared.pop())
    if len(set(tris)) != len(tris):
        raise CycleNotLevel("cycle passes through a triangle twice")
    return tris


@dataclass(frozen=True)
class CutPiece:
    """One side of a cut sphere: a disk with its restricted field.

    ``orig_vertex[i]`` is the source vertex of piece vertex ``i``, or -1 for a
    vertex created on the cut.  ``boundary`` lists the new boundary vertices
    in cycle order.
    """

    mesh: TriangleMesh
    field: "ScalarField"
    orig_vertex: np.ndarray
    boundary: tuple[int, ...]

    def new_index(self, orig: int) -> int | None:
        hits = np.nonzero(self.orig_vertex == orig)[0]
        return int(hits[0]) if len(hits) else None

    def contains_orig(self, orig: int) -> bool:
        return self.new_index(orig) is not None


def cut_along_cycle(mesh: TriangleMesh, field: "ScalarField",
                    cycle: LevelCycle) -> tuple[CutPiece, CutPiece]:
    """Cut a closed sphere along a regular level cycle into two disks.

    Every crossed edge is split at its interpolation point and every crossed
    triangle is retriangulated into the piece holding its lone vertex (one
    triangle) and the piece holding the opposite pair (a quad, split
    deterministically from the first cut point).  New boundary vertices carry
    the cut value exactly; both pieces receive their own copy of the cut
    polygon.
    """
    from .field import ScalarField  # local import to avoid a module cycle

    values = np.asarray(field.values, dtype=float)
    c = cycle.value
    crossed_tris = check_level_cycle(mesh, values, cycle)
    if not mesh.closed:
        raise CycleNotLevel("cut requires a closed surface")

    ncross = len(cycle)
    cross_index = {eid: i for i, (eid, _) in enumerate(cycle.crossings)}
    tri_cross = {}  # crossed triangle -> (index of crossing pair start)
    for i, ti in enumerate(crossed_tris):
        tri_cross[ti] = i

    # piece nodes: uncrossed triangles keep one node; crossed triangles get
    # an apex node and a quad node
    def apex_of(ti: int) -> tuple[int, int, int]:
        """Rotate a crossed triangle so its lone vertex comes first."""
        i = tri_cross[ti]
        e1 = cycle.crossings[i][0]
        e2 = cycle.crossings[(i + 1) % ncross][0]
        s1 = set(mesh.edge_pairs[e1])
        s2 = set(mesh.edge_pairs[e2])
        apex = (s1 & s2).pop()
        a, b, cc = mesh.triangles[ti]
        while a != apex:
            a, b, cc = b, cc, a
        return a, b, cc

    node_of = {}  # ('t', ti) | ('a', ti) | ('q', ti) -> serial
    nodes = []

    def node(key):
        if key not in node_of:
            node_of[key] = len(nodes)
            nodes.append(key)
        return node_of[key]

    for ti in range(mesh.n_triangles):
        if ti in tri_cross:
            node(("a", ti))
            node(("q", ti))
        else:
            node(("t", ti))

    def piece_containing(ti: int, vert: int):
        """Node of the piece of triangle ``ti`` containing vertex ``vert``."""
        if ti not in tri_cross:
            return node(("t", ti))
        apex = apex_of(ti)[0]
        return node(("a", ti)) if vert == apex else node(("q", ti))

    # union-find over piece nodes
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for eid, (u, v) in enumerate(mesh.edge_pairs):
        ts = mesh.edge_triangles[eid]
        if len(ts) != 2:
            raise CycleNotLevel("cut requires a closed surface")
        t1, t2 = ts
        if eid in cross_index:
            union(piece_containing(t1, u), piece_containing(t2, u))
            union(piece_containing(t1, v), piece_containing(t2, v))
        else:
            union(piece_containing(t1, u), piece_containing(t2, u))

    roots = sorted({find(i) for i in range(len(nodes))})
    if len(roots) != 2:
        raise CutNotSeparating(f"cut produced {len(roots)} pieces")

    # crossing vertices: one per crossed edge, duplicated into both pieces
    cross_coord = []
    for eid, t in cycle.crossings:
        u, v = mesh.edge_pairs[eid]
        cross_coord.append((1.0 - t) * mesh.vertices[u] + t * mesh.vertices[v])

    pieces = []
    first_eid = cycle.crossings[0][0]
    u0, v0 = mesh.edge_pairs[first_eid]
    below_first = u0 if values[u0] < c else v0

    for root in roots:
        tri_list = []  # triangles in original vertex ids, crossings as ('x', i)
        used_orig = set()
        used_cross = set()

        def emit(tri):
            tri_list.append(tri)
            for w in tri:
                if isinstance(w, tuple):
                    used_cross.add(w[1])
                else:
                    used_orig.add(w)

        for key in nodes:
            if find(node_of[key]) != root:
                continue
            kind, ti = key
            if kind == "t":
                emit(mesh.triangles[ti])
            else:
                apex, a, b = apex_of(ti)
                i = tri_cross[ti]
                p1 = ("x", cycle.crossings[i][0])          # on edge (apex, a)
                p2 = ("x", cycle.crossings[(i + 1) % ncross][0])  # on (b, apex)
                e1 = set(mesh.edge_pairs[cycle.crossings[i][0]])
                if a not in e1:  # first crossing sits on (b, apex) instead
                    p1, p2 = p2, p1
                if kind == "a":
                    emit((apex, p1, p2))
                else:
                    emit((p1, a, b))
                    emit((p1, b, p2))

        orig_sorted = sorted(used_orig)
        cross_sorted = sorted(used_cross, key=lambda eid: cross_index[eid])
        index = {}
        coords = []
        vals = []
        orig_vertex = []
        for w in orig_sorted:
            index[w] = len(coords)
            coords.append(mesh.vertices[w])
            vals.append(values[w])
            orig_vertex.append(w)
        cross_new = {}
        for eid in cross_sorted:
            cross_new[eid] = len(coords)
            coords.append(cross_coord[cross_index[eid]])
            vals.append(c)
            orig_vertex.append(-1)

        def resolve(w):
            return cross_new[w[1]] if isinstance(w, tuple) else index[w]

        new_tris = [tuple(resolve(w) for w in tri) for tri in tri_list]
        piece_mesh = TriangleMesh(np.asarray(coords), new_tris)
        boundary = tuple(cross_new[eid] for eid, _ in cycle.crossings
                         if eid in cross_new)
        pieces.append(CutPiece(
            mesh=piece_mesh,
            field=ScalarField(np.asarray(vals)),
            orig_vertex=np.asarray(orig_vertex, dtype=int),
            boundary=boundary,
        ))

    if not pieces[0].contains_orig(below_first):
        pieces.reverse()
    return pieces[0], pieces[1]
