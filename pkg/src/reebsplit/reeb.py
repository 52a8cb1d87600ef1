"""Level-set tree (Kronrod-Reeb graph) construction for genus-0 surfaces.

The construction merges two union-find sweeps, one ascending and one
descending, into the contour tree.  On a sphere (or disk with constant
regular boundary) the contour tree equals the quotient of the surface by
connected components of level sets, so no general-genus machinery is needed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    EdgeNotFound,
    GenusNotZero,
    InternalInconsistency,
    InvalidFieldClass,
    ValueCollision,
)
from .field import ScalarField, classify_field, flat_contract
from .mesh import LevelCycle, TriangleMesh, validate_surface


@dataclass(frozen=True)
class ReebVertex:
    id: int
    label: float
    kind: str             # minimum | maximum | saddle | boundary
    multiplicity: int
    preimage: tuple[int, ...]   # mesh vertices of the critical/boundary component


@dataclass(frozen=True)
class ReebEdge:
    id: int
    lower: int
    upper: int
    preimage: tuple[int, ...]   # regular mesh vertices swept along the edge


class ReebGraph:
    """Labeled tree of level-set components with mesh preimage bookkeeping."""

    def __init__(self, vertices: list[ReebVertex], edges: list[ReebEdge]):
        self.vertices = vertices
        self.edges = edges
        self.down_edges = [[] for _ in vertices]
        self.up_edges = [[] for _ in vertices]
        for e in edges:
            self.up_edges[e.lower].append(e.id)
            self.down_edges[e.upper].append(e.id)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, vid: int) -> int:
        return len(self.down_edges[vid]) + len(self.up_edges[vid])

    def leaves(self) -> list[int]:
        return [v.id for v in self.vertices if self.degree(v.id) == 1]

    def is_tree(self) -> bool:
        if self.n_edges != self.n_vertices - 1:
            return False
        seen = [False] * self.n_vertices
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            v = stack.pop()
            for eid in self.up_edges[v] + self.down_edges[v]:
                e = self.edges[eid]
                w = e.upper if e.lower == v else e.lower
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n_vertices

    def edge_between(self, a: int, b: int) -> int | None:
        for eid in self.up_edges[a]:
            if self.edges[eid].upper == b:
                return eid
        for eid in self.down_edges[a]:
            if self.edges[eid].lower == b:
                return eid
        return None

    def to_dict(self) -> dict:
        return {
            "schema": "reeb-split/1",
            "vertices": [
                {
                    "id": v.id,
                    "label": v.label,
                    "kind": v.kind,
                    "multiplicity": v.multiplicity,
                    "preimage": list(v.preimage),
                }
                for v in self.vertices
            ],
            "edges": [
                {"id": e.id, "lower": e.lower, "upper": e.upper}
                for e in self.edges
            ],
        }


def export_dot(graph: ReebGraph) -> str:
    """Deterministic DOT text; edges point from lower to upper label."""
    lines = ["digraph reeb {"]
    for v in graph.vertices:
        lines.append(f'  n{v.id} [label="{v.id}: {v.kind} @ {v.label!r}"];')
    for e in graph.edges:
        lines.append(f"  n{e.lower} -> n{e.upper};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# construction

def _contour_tree(values, ties, neighbors):
    """Contour tree of a graph under a total vertex order.

    ``values``/``ties`` give node heights and the total order key; ``neighbors``
    is an adjacency list.  Returns (arcs, order) where arcs are (lower, upper)
    node pairs covering every node.  Assumes the swept space is simply
    connected; the caller checks the arc count.
    """
    n = len(values)
    order = sorted(range(n), key=lambda v: ties[v])
    indptr = [0]
    indices = []
    for v in range(n):
        indices.extend(neighbors[v])
        indptr.append(len(indices))
    order_arr = np.asarray(order, dtype=np.int64)
    indptr_arr = np.asarray(indptr, dtype=np.int64)
    indices_arr = np.asarray(indices, dtype=np.int64)

    jt_parent = kernels.merge_forest(order_arr, indptr_arr, indices_arr)
    st_parent = kernels.merge_forest(order_arr[::-1].copy(), indptr_arr, indices_arr)

    jt_children = [set() for _ in range(n)]
    st_children = [set() for _ in range(n)]
    jt_par = [int(x) for x in jt_parent]
    st_par = [int(x) for x in st_parent]
    for v in range(n):
        if jt_par[v] >= 0:
            jt_children[jt_par[v]].add(v)
        if st_par[v] >= 0:
            st_children[st_par[v]].add(v)

    def lower_leaf(v):
        return not jt_children[v] and len(st_children[v]) <= 1

    def upper_leaf(v):
        return not st_children[v] and len(jt_children[v]) <= 1

    queue = deque(v for v in order if lower_leaf(v) or upper_leaf(v))
    queued = [False] * n
    for v in queue:
        queued[v] = True
    done = [False] * n
    arcs = []
    remaining = n

    def requeue(v):
        if v >= 0 and not done[v] and not queued[v] and (lower_leaf(v) or upper_leaf(v)):
            queued[v] = True
            queue.append(v)

    while remaining > 1 and queue:
        v = queue.popleft()
        queued[v] = False
        if done[v]:
            continue
        if lower_leaf(v):
            w = jt_par[v]
            if w < 0:
                continue
            arcs.append((v, w))
            jt_children[w].discard(v)
            # contract v out of the split tree
            ch = next(iter(st_children[v])) if st_children[v] else -1
            p = st_par[v]
            if ch >= 0:
                st_par[ch] = p
                if p >= 0:
                    st_children[p].discard(v)
                    st_children[p].add(ch)
            elif p >= 0:
                st_children[p].discard(v)
        elif upper_leaf(v):
            w = st_par[v]
            if w < 0:
                continue
            arcs.append((w, v))
            st_children[w].discard(v)
            ch = next(iter(jt_children[v])) if jt_children[v] else -1
            p = jt_par[v]
            if ch >= 0:
                jt_par[ch] = p
                if p >= 0:
                    jt_children[p].discard(v)
                    jt_children[p].add(ch)
            elif p >= 0:
                jt_children[p].discard(v)
        else:
            continue
        done[v] = True
        remaining -= 1
        w = arcs[-1][0] if arcs[-1][1] == v else arcs[-1][1]
        requeue(w)
        for x in list(st_children[v]) + list(jt_children[v]):
            requeue(x)
        requeue(st_par[v])
        requeue(jt_par[v])

    if len(arcs) != n - 1:
        raise GenusNotZero(
            f"contour merge produced {len(arcs)} arcs for {n} nodes")
    return arcs, order


def _tree_from_sweeps(values, ties, neighbors, kinds, mults,
                      members) -> tuple[list[ReebVertex], list[ReebEdge]]:
    """Contour tree of a node graph with degree-2 regular nodes suppressed.

    ``members`` expands each node back to its mesh vertices for preimage
    bookkeeping.  Raises InvalidFieldClass when a surviving edge fails to
    increase the label strictly, which happens exactly when two critical
    components share a level component.
    """
    nz = len(values)
    arcs, _ = _contour_tree(values, ties, neighbors)

    down = [[] for _ in range(nz)]
    up = [[] for _ in range(nz)]
    for lo, hi in arcs:
        up[lo].append(hi)
        down[hi].append(lo)

    keep = []
    for z in range(nz):
        deg2 = len(down[z]) == 1 and len(up[z]) == 1
        if kinds[z] == "regular" and deg2:
            continue
        keep.append(z)
    keep_set = set(keep)

    # sanity: kept nodes must be events, dropped nodes plain chain links
    for z in keep:
        if kinds[z] == "regular":
            raise InternalInconsistency(
                f"regular component {z} has tree degree {len(down[z]) + len(up[z])}")

    ordered_keep = sorted(keep, key=lambda z: ties[z])
    vid_of = {z: i for i, z in enumerate(ordered_keep)}
    vertices = []
    for i, z in enumerate(ordered_keep):
        vertices.append(ReebVertex(
            id=i, label=values[z], kind=kinds[z], multiplicity=mults[z],
            preimage=tuple(members[z])))

    raw_edges = []
    for z in keep:
        for nxt in up[z]:
            chain = []
            cur = nxt
            while cur not in keep_set:
                chain.extend(members[cur])
                nxts = up[cur]
                if len(nxts) != 1 or len(down[cur]) != 1:
                    raise InternalInconsistency("suppressed node is not a chain link")
                cur = nxts[0]
            lo, hi = vid_of[z], vid_of[cur]
            if not vertices[lo].label < vertices[hi].label:
                raise InvalidFieldClass(
                    "two critical components share one level value on a "
                    "common level component")
            raw_edges.append((lo, hi, tuple(sorted(chain))))

    raw_edges.sort(key=lambda t: ((vertices[t[0]].label, t[0]),
                                  (vertices[t[1]].label, t[1])))
    edges = [ReebEdge(id=i, lower=lo, upper=hi, preimage=pre)
             for i, (lo, hi, pre) in enumerate(raw_edges)]
    return vertices, edges


def build_reeb(mesh: TriangleMesh, field: ScalarField) -> ReebGraph:
    """Build the level-set tree of a field on a genus-0 surface.

    Flat zones (only whole constant boundary cycles are admissible) are
    contracted to single nodes first; the two sweeps then run over the
    contracted adjacency.  Chain nodes that are regular and of degree two are
    suppressed, so the result keeps exactly the critical components and the
    boundary components as vertices.  Every edge strictly increases the
    label; an edge between two events at the same value means two critical
    vertices share a level component, which is rejected.
    """
    report = validate_surface(mesh)
    if report.genus != 0 or not report.connected:
        raise GenusNotZero(
            f"need a connected genus-0 surface, got genus {report.genus}")
    fclass = classify_field(mesh, field)
    if not fclass.valid:
        raise InvalidFieldClass("; ".join(fclass.reasons) or "unclassifiable field")

    contraction = flat_contract(mesh, field)
    zones = contraction.zones
    zone_values = contraction.zone_values
    nz = len(zones)
    zone_ties = [(zone_values[z], zones[z][0]) for z in range(nz)]
    zone_neighbors = contraction.zone_neighbors(mesh)

    boundary_zones = set()
    for cyc in mesh.boundary_cycles:
        boundary_zones.add(int(contraction.zone_of[cyc[0]]))

    kinds = []
    mults = []
    for z in range(nz):
        if z in boundary_zones:
            kinds.append("boundary")
            mults.append(0)
        else:
            crit = fclass.per_vertex[zones[z][0]]
            kinds.append(crit.kind)
            mults.append(crit.multiplicity)

    vertices, edges = _tree_from_sweeps(zone_values, zone_ties, zone_neighbors,
                                        kinds, mults, zones)
    graph = ReebGraph(vertices, edges)

    if not graph.is_tree():
        raise GenusNotZero("level-set graph is not a tree")
    for v in graph.vertices:
        deg = graph.degree(v.id)
        if v.kind in ("minimum", "maximum", "boundary"):
            if deg != 1:
                raise InternalInconsistency(f"leaf-kind vertex {v.id} has degree {deg}")
        elif v.kind == "saddle":
            if deg != v.multiplicity + 2:
                raise InternalInconsistency(
                    f"saddle {v.id}: degree {deg} vs multiplicity {v.multiplicity}")
    return graph


# ----------------------------------------------------------------------
# level cycles

def mesh_vertex_assignment(graph: ReebGraph, n_vertices: int) -> list[tuple[str, int]]:
    """Map every mesh vertex to its tree element ('v', id) or ('e', id)."""
    where: list[tuple[str, int] | None] = [None] * n_vertices
    for v in graph.vertices:
        for w in v.preimage:
            where[w] = ("v", v.id)
    for e in graph.edges:
        for w in e.preimage:
            where[w] = ("e", e.id)
    if any(x is None for x in where):
        raise InternalInconsistency("preimages do not cover the mesh")
    return where  # type: ignore[return-value]


def choose_cut_value(field: ScalarField, graph: ReebGraph, edge_id: int) -> float:
    """Midpoint of the largest value gap strictly inside an edge's label span.

    Ties between equally large gaps resolve to the lowest one, so the choice
    is deterministic and never collides with a vertex value.
    """
    if not 0 <= edge_id < graph.n_edges:
        raise EdgeNotFound(f"no edge {edge_id}")
    e = graph.edges[edge_id]
    lo = graph.vertices[e.lower].label
    hi = graph.vertices[e.upper].label
    inside = sorted({float(v) for v in field.values if lo < v < hi})
    stops = [lo] + inside + [hi]
    best = 0
    for i in range(1, len(stops)):
        if stops[i] - stops[i - 1] > stops[best + 1] - stops[best] + 0.0:
            best = i - 1
    return (stops[best] + stops[best + 1]) / 2.0


def level_cycle(mesh: TriangleMesh, field: ScalarField, graph: ReebGraph,
                edge_id: int, c: float) -> LevelCycle:
    """The unique level-``c`` cycle lying over the interior of a tree edge.

    ``c`` must be strictly inside the edge's label span and distinct from
    every vertex value.  Among all components of the level set at ``c``, the
    one belonging to the requested edge is identified by the pair (component
    of the strict sublevel graph holding the lower endpoint's preimage,
    component of the strict superlevel graph holding the upper endpoint's);
    on a tree that pair is unique to the edge.
    """
    if not 0 <= edge_id < graph.n_edges:
        raise EdgeNotFound(f"no edge {edge_id}")
    e = graph.edges[edge_id]
    lo = graph.vertices[e.lower].label
    hi = graph.vertices[e.upper].label
    vals = field.values
    if not lo < c < hi:
        raise ValueCollision(f"{c} is outside the edge span ({lo}, {hi})")
    if np.any(vals == c):
        raise ValueCollision(f"{c} collides with a vertex value")

    n = mesh.n_vertices

    def comp_roots(side_above: bool):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in mesh.edge_pairs:
            inu = (vals[u] > c) == side_above
            inv = (vals[v] > c) == side_above
            if inu and inv:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        return find

    find_below = comp_roots(False)
    find_above = comp_roots(True)
    root_lo = find_below(graph.vertices[e.lower].preimage[0])
    root_hi = find_above(graph.vertices[e.upper].preimage[0])

    crossed = [eid for eid, (u, v) in enumerate(mesh.edge_pairs)
               if min(vals[u], vals[v]) < c < max(vals[u], vals[v])]
    crossed_set = set(crossed)

    # pair crossings inside triangles and walk components
    tri_pair: dict[int, list[int]] = {}
    for eid in crossed:
        for ti in mesh.edge_triangles[eid]:
            tri_pair.setdefault(ti, []).append(eid)
    for ti, es in tri_pair.items():
        if len(es) != 2:
            raise InternalInconsistency(f"triangle {ti} has {len(es)} crossings")

    unused = set(crossed_set)
    while unused:
        start = min(unused)
        cyc = [start]
        unused.discard(start)
        ts = sorted(mesh.edge_triangles[start])
        walk_tri = ts[0]
        cur = start
        while True:
            a, b = tri_pair[walk_tri]
            nxt = b if a == cur else a
            if nxt == start:
                break
            cyc.append(nxt)
            unused.discard(nxt)
            t1, t2 = mesh.edge_triangles[nxt]
            walk_tri = t2 if t1 == walk_tri else t1
            cur = nxt
        u, v = mesh.edge_pairs[cyc[0]]
        below = u if vals[u] < c else v
        above = v if below == u else u
        if find_below(below) == root_lo and find_above(above) == root_hi:
            crossings = []
            for eid in cyc:
                uu, vv = mesh.edge_pairs[eid]
                t = (c - vals[uu]) / (vals[vv] - vals[uu])
                crossings.append((eid, float(t)))
            return LevelCycle(crossings=tuple(crossings), closed=True, value=float(c))
    raise InternalInconsistency("no level component matches the requested edge")
