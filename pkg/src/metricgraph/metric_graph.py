"""Finite metric graphs with shortest-path geometry.

Vertices are opaque string ids. Edges carry their own ids, so parallel edges
are unambiguous. A self-loop is split at its midpoint on construction; this
changes nothing metrically but keeps both endpoints of every stored edge
distinct, which the sweep algorithms downstream rely on.

Points of the geodesic space are either vertices or interior positions
(edge id, offset from the edge's u endpoint). All float comparisons use an
absolute tolerance of 1e-9.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: float


@dataclass(frozen=True)
class GraphPoint:
    """A point of the graph: a vertex, or an interior position on an edge.

    Exactly one of ``vertex`` / ``edge`` is set. Offsets are measured from
    the edge's u endpoint. Instances compare exactly (they are dict keys);
    use points_equal() for tolerance-aware comparison of canonical forms.
    """

    vertex: Optional[str] = None
    edge: Optional[str] = None
    offset: float = 0.0

    def __post_init__(self):
        if (self.vertex is None) == (self.edge is None):
            raise ValueError("a point is either a vertex or an edge position")

    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self):
        if self.vertex is not None:
            return f"GraphPoint({self.vertex!r})"
        return f"GraphPoint({self.edge!r}@{self.offset:.6g})"


@dataclass(frozen=True)
class EdgePath:
    """An ordered walk through edges.

    Each step is (edge id, from-offset, to-offset) in the edge's own
    coordinates; a full traversal runs 0 -> length or length -> 0. Partial
    steps are allowed at the two ends of the path. Consecutive steps join at
    a shared vertex, or at a shared interior coordinate when both steps lie
    on the same edge (which arises transiently while simplifying).

    An empty path is a constant path; ``anchor`` then records where it sits.
    """

    steps: Tuple[Tuple[str, float, float], ...] = ()
    anchor: Optional[GraphPoint] = None


class MetricGraph:
    """Immutable connected multigraph with positive edge lengths."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Tuple[str, str, str, float]]):
        vset: Set[str] = set(str(v) for v in vertices)
        edef: List[Edge] = []
        ids: Set[str] = set()
        for (eid, u, v, length) in edges:
            eid, u, v = str(eid), str(u), str(v)
            if eid in ids:
                raise ValueError(f"duplicate edge id: {eid}")
            ids.add(eid)
            for w in (u, v):
                if w not in vset:
                    raise ValueError(f"edge {eid}: unknown endpoint {w}")
            if not (isinstance(length, (int, float)) and math.isfinite(length)) or length <= 0:
                raise ValueError(f"edge {eid}: length must be > 0")
            edef.append(Edge(eid, u, v, float(length)))

        # split self-loops at the midpoint so every stored edge has two
        # distinct endpoints
        final: List[Edge] = []
        loop_halves: Dict[str, Tuple[str, str, str]] = {}
        for e in edef:
            if e.u != e.v:
                final.append(e)
                continue
            mid, a, b = e.id + "|m", e.id + "|a", e.id + "|b"
            for name in (a, b):
                if name in ids:
                    raise ValueError(f"generated edge id {name} already in use")
                ids.add(name)
            if mid in vset:
                raise ValueError(f"generated vertex id {mid} already in use")
            vset.add(mid)
            final.append(Edge(a, e.u, mid, e.length / 2.0))
            final.append(Edge(b, mid, e.v, e.length / 2.0))
            loop_halves[e.id] = (a, b, mid)

        if not vset:
            raise ValueError("graph must have at least one vertex")

        self._vertices: Tuple[str, ...] = tuple(sorted(vset))
        self._edges: Dict[str, Edge] = {e.id: e for e in final}
        self._edge_order: Tuple[str, ...] = tuple(e.id for e in final)
        self._loop_halves = loop_halves
        adj: Dict[str, List[str]] = {v: [] for v in self._vertices}
        for e in final:
            adj[e.u].append(e.id)
            adj[e.v].append(e.id)
        self._adj = {v: tuple(lst) for v, lst in adj.items()}
        self._check_connected()
        self._dist_cache: Dict[str, Dict[str, float]] = {}
        self._diam_cache: Optional[float] = None

    def _check_connected(self):
        seen = {self._vertices[0]}
        stack = [self._vertices[0]]
        while stack:
            v = stack.pop()
            for eid in self._adj[v]:
                e = self._edges[eid]
                w = e.v if e.u == v else e.u
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(self._vertices):
            raise ValueError("graph not connected")

    # -- read access -------------------------------------------------------

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self._edges[i] for i in self._edge_order)

    def edge(self, eid: str) -> Edge:
        if eid not in self._edges:
            raise ValueError(f"unknown edge: {eid}")
        return self._edges[eid]

    def incident(self, vertex: str) -> Tuple[str, ...]:
        if vertex not in self._adj:
            raise ValueError(f"unknown vertex: {vertex}")
        return self._adj[vertex]

    @property
    def betti1(self) -> int:
        return len(self._edges) - len(self._vertices) + 1

    @property
    def total_length(self) -> float:
        return sum(e.length for e in self._edges.values())

    # -- points ------------------------------------------------------------

    def canonical(self, pt: GraphPoint) -> GraphPoint:
        """Normalize a point: offsets within TOL of an endpoint become that
        vertex. Validates the reference."""
        if pt.vertex is not None:
            if pt.vertex not in self._adj:
                raise ValueError(f"unknown vertex: {pt.vertex}")
            return pt if pt.offset == 0.0 else GraphPoint(vertex=pt.vertex)
        e = self.edge(pt.edge)
        t = float(pt.offset)
        if t < -TOL or t > e.length + TOL:
            raise ValueError(f"offset {t} outside edge {e.id} of length {e.length}")
        if t <= TOL:
            return GraphPoint(vertex=e.u)
        if t >= e.length - TOL:
            return GraphPoint(vertex=e.v)
        return GraphPoint(edge=e.id, offset=t)

    # -- shortest paths ----------------------------------------------------

    def _vertex_dists(self, source: str) -> Dict[str, float]:
        if source in self._dist_cache:
            return self._dist_cache[source]
        dist: Dict[str, float] = {source: 0.0}
        done: Set[str] = set()
        heap: List[Tuple[float, int, str]] = [(0.0, 0, source)]
        counter = 1
        while heap:
            d, _, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            for eid in self._adj[v]:
                e = self._edges[eid]
                w = e.v if e.u == v else e.u
                nd = d + e.length
                if w not in dist or nd < dist[w] - 1e-15:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, counter, w))
                    counter += 1
        self._dist_cache[source] = dist
        return dist

    def _exits(self, pt: GraphPoint) -> List[Tuple[str, float]]:
        """(vertex, cost to reach it) pairs through which geodesics from pt
        leave its carrier."""
        if pt.vertex is not None:
            return [(pt.vertex, 0.0)]
        e = self.edge(pt.edge)
        return [(e.u, pt.offset), (e.v, e.length - pt.offset)]


def points_equal(G: MetricGraph, a: GraphPoint, b: GraphPoint, tol: float = TOL) -> bool:
    ca, cb = G.canonical(a), G.canonical(b)
    if ca.is_vertex() != cb.is_vertex():
        return False
    if ca.is_vertex():
        return ca.vertex == cb.vertex
    return ca.edge == cb.edge and abs(ca.offset - cb.offset) <= tol


def distance(G: MetricGraph, a: GraphPoint, b: GraphPoint) -> float:
    """Geodesic distance between two points."""
    ca, cb = G.canonical(a), G.canonical(b)
    best = math.inf
    if not ca.is_vertex() and not cb.is_vertex() and ca.edge == cb.edge:
        best = abs(ca.offset - cb.offset)
    for (va, costa) in G._exits(ca):
        dv = G._vertex_dists(va)
        for (vb, costb) in G._exits(cb):
            cand = costa + dv[vb] + costb
            if cand < best:
                best = cand
    return best


def f_values(G: MetricGraph, p: GraphPoint) -> Dict[str, float]:
    """Distance from p to every vertex."""
    cp = G.canonical(p)
    if cp.is_vertex():
        return dict(G._vertex_dists(cp.vertex))
    e = G.edge(cp.edge)
    du = G._vertex_dists(e.u)
    dv = G._vertex_dists(e.v)
    t = cp.offset
    return {w: min(t + du[w], e.length - t + dv[w]) for w in G.vertices}


def finite_metric(G: MetricGraph, points: Sequence[GraphPoint]):
    """Pairwise distance matrix of the given points (numpy array).

    Duplicate points are fine; the result is then a pseudometric.
    """
    import numpy as np

    pts = [G.canonical(p) for p in points]
    n = len(pts)
    vidx = {v: i for i, v in enumerate(G.vertices)}
    need = sorted({v for p in pts for (v, _) in G._exits(p)})
    vd = {v: G._vertex_dists(v) for v in need}

    # exit representation: up to two (vertex, cost) rows per point
    exit_v = np.zeros((n, 2), dtype=np.int64)
    exit_c = np.zeros((n, 2), dtype=np.float64)
    for i, p in enumerate(pts):
        ex = G._exits(p)
        if len(ex) == 1:
            ex = [ex[0], ex[0]]
        for k, (v, c) in enumerate(ex):
            exit_v[i, k] = vidx[v]
            exit_c[i, k] = c

    nv = len(G.vertices)
    VD = np.zeros((nv, nv), dtype=np.float64)
    for v in need:
        row = vd[v]
        VD[vidx[v], :] = [row[w] for w in G.vertices]
    for v in need:  # symmetrize the rows we filled
        VD[:, vidx[v]] = VD[vidx[v], :]

    D = np.full((n, n), np.inf)
    for ka in range(2):
        for kb in range(2):
            cand = (exit_c[:, ka][:, None] + VD[np.ix_(exit_v[:, ka], exit_v[:, kb])]
                    + exit_c[:, kb][None, :])
            np.minimum(D, cand, out=D)

    # direct along a shared edge can beat every exit route
    by_edge: Dict[str, List[int]] = {}
    for i, p in enumerate(pts):
        if not p.is_vertex():
            by_edge.setdefault(p.edge, []).append(i)
    for eid, idxs in by_edge.items():
        off = np.array([pts[i].offset for i in idxs])
        direct = np.abs(off[:, None] - off[None, :])
        sub = np.ix_(idxs, idxs)
        D[sub] = np.minimum(D[sub], direct)

    np.fill_diagonal(D, 0.0)
    return D


# -- diameter (exact) ------------------------------------------------------

def _max_min_affine(funcs, corners):
    """Maximum over a convex polygon of the pointwise min of affine
    functions (alpha*s + beta*t + c). Candidates: corners, switch-line
    crossings with the boundary, and pairwise switch-line intersections."""
    cands = list(corners)
    m = len(corners)
    edges = [(corners[i], corners[(i + 1) % m]) for i in range(m)]

    lines = []
    for i in range(len(funcs)):
        for j in range(i + 1, len(funcs)):
            a1, b1, c1 = funcs[i]
            a2, b2, c2 = funcs[j]
            lines.append((a1 - a2, b1 - b2, c1 - c2))
    for (A, B, C) in lines:
        for (p, q) in edges:
            # intersect A*s+B*t+C=0 with segment p..q
            (x0, y0), (x1, y1) = p, q
            den = A * (x1 - x0) + B * (y1 - y0)
            if abs(den) < 1e-15:
                continue
            lam = -(A * x0 + B * y0 + C) / den
            if -1e-9 <= lam <= 1 + 1e-9:
                cands.append((x0 + lam * (x1 - x0), y0 + lam * (y1 - y0)))
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            A1, B1, C1 = lines[i]
            A2, B2, C2 = lines[j]
            den = A1 * B2 - A2 * B1
            if abs(den) < 1e-15:
                continue
            s = (-C1 * B2 + C2 * B1) / den
            t = (-A1 * C2 + A2 * C1) / den
            cands.append((s, t))

    # polygon membership via half-planes (corners are CCW for our callers)
    def inside(x):
        for (p, q) in edges:
            cross = (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0])
            if cross < -1e-9 * (1 + abs(x[0]) + abs(x[1])):
                return False
        return True

    best = -math.inf
    for x in cands:
        if not inside(x):
            continue
        val = min(a * x[0] + b * x[1] + c for (a, b, c) in funcs)
        if val > best:
            best = val
    return best


def diameter(G: MetricGraph) -> float:
    """Exact diameter of the geodesic space."""
    if G._diam_cache is not None:
        return G._diam_cache
    if not G._edge_order:
        G._diam_cache = 0.0
        return 0.0
    es = G.edges
    best = 0.0
    for i in range(len(es)):
        e1 = es[i]
        d_u = G._vertex_dists(e1.u)
        d_v = G._vertex_dists(e1.v)
        for j in range(i, len(es)):
            e2 = es[j]
            l1, l2 = e1.length, e2.length
            funcs = [
                (1.0, 1.0, d_u[e2.u]),
                (1.0, -1.0, d_u[e2.v] + l2),
                (-1.0, 1.0, d_v[e2.u] + l1),
                (-1.0, -1.0, d_v[e2.v] + l1 + l2),
            ]
            if i == j:
                lo = _max_min_affine(funcs + [(1.0, -1.0, 0.0)],
                                     [(0.0, 0.0), (l1, 0.0), (l1, l1)])
                hi = _max_min_affine(funcs + [(-1.0, 1.0, 0.0)],
                                     [(0.0, 0.0), (l1, l1), (0.0, l1)])
                val = max(lo, hi)
            else:
                val = _max_min_affine(funcs,
                                      [(0.0, 0.0), (l1, 0.0), (l1, l2), (0.0, l2)])
            if val > best:
                best = val
    G._diam_cache = best
    return best


# -- nets -------------------------------------------------------------------

def epsilon_net(G: MetricGraph, eps: float) -> List[GraphPoint]:
    """Vertices plus equally spaced interior points at spacing <= eps.

    Deterministic: vertices in sorted order, then edges in construction
    order with ascending offsets. Covering radius is at most eps/2 along
    each edge, so at most eps in the graph.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    pts: List[GraphPoint] = [GraphPoint(vertex=v) for v in G.vertices]
    for e in G.edges:
        m = int(math.ceil(e.length / eps - 1e-12))
        for k in range(1, m):
            pts.append(GraphPoint(edge=e.id, offset=e.length * k / m))
    return pts


# -- edge paths --------------------------------------------------------------

def validate_path(G: MetricGraph, path: EdgePath):
    if not path.steps:
        if path.anchor is None:
            raise ValueError("empty path needs an anchor point")
        G.canonical(path.anchor)
        return
    n = len(path.steps)
    for idx, (eid, a, b) in enumerate(path.steps):
        e = G.edge(eid)
        for c in (a, b):
            if c < -TOL or c > e.length + TOL:
                raise ValueError(f"step {idx}: coordinate {c} outside edge {eid}")
        if abs(b - a) <= TOL:
            raise ValueError(f"step {idx}: zero-length step on edge {eid}")
        if 0 < idx < n - 1:
            full = (abs(a) <= TOL and abs(b - e.length) <= TOL) or \
                   (abs(b) <= TOL and abs(a - e.length) <= TOL)
            if not full:
                # interior coordinates are allowed mid-path only where two
                # consecutive steps sit on one edge and meet exactly
                prev_ok = path.steps[idx - 1][0] == eid and \
                    abs(path.steps[idx - 1][2] - a) <= TOL
                next_ok = path.steps[idx + 1][0] == eid and \
                    abs(path.steps[idx + 1][1] - b) <= TOL
                start_v = abs(a) <= TOL or abs(a - e.length) <= TOL
                end_v = abs(b) <= TOL or abs(b - e.length) <= TOL
                if not ((start_v or prev_ok) and (end_v or next_ok)):
                    raise ValueError(f"step {idx}: partial traversal inside the path")
    for idx in range(n - 1):
        p_end = _step_point(G, path.steps[idx], "end")
        p_start = _step_point(G, path.steps[idx + 1], "start")
        if not points_equal(G, p_end, p_start):
            raise ValueError(f"steps {idx} and {idx + 1} do not meet")


def _step_point(G: MetricGraph, step: Tuple[str, float, float], which: str) -> GraphPoint:
    eid, a, b = step
    return G.canonical(GraphPoint(edge=eid, offset=a if which == "start" else b))


def path_start(G: MetricGraph, path: EdgePath) -> GraphPoint:
    if not path.steps:
        return G.canonical(path.anchor)
    return _step_point(G, path.steps[0], "start")


def path_end(G: MetricGraph, path: EdgePath) -> GraphPoint:
    if not path.steps:
        return G.canonical(path.anchor)
    return _step_point(G, path.steps[-1], "end")


def path_length(G: MetricGraph, path: EdgePath) -> float:
    return sum(abs(b - a) for (_, a, b) in path.steps)


def path_from_traversals(G: MetricGraph, start_vertex: str, edge_ids: Sequence[str]) -> EdgePath:
    """Build a full-traversal path from a start vertex through named edges."""
    if start_vertex not in G._adj:
        raise ValueError(f"unknown vertex: {start_vertex}")
    at = start_vertex
    steps: List[Tuple[str, float, float]] = []
    for eid in edge_ids:
        e = G.edge(eid)
        if e.u == at:
            steps.append((eid, 0.0, e.length))
            at = e.v
        elif e.v == at:
            steps.append((eid, e.length, 0.0))
            at = e.u
        else:
            raise ValueError(f"edge {eid} is not incident to {at}")
    if not steps:
        return EdgePath(steps=(), anchor=GraphPoint(vertex=start_vertex))
    return EdgePath(steps=tuple(steps))


# path simplification --------------------------------------------------------

def _point_key(G: MetricGraph, pt: GraphPoint):
    c = G.canonical(pt)
    if c.is_vertex():
        return ("v", c.vertex)
    return ("e", c.edge, round(c.offset / TOL))


def _occurrences(G: MetricGraph, steps: List[Tuple[str, float, float]], pt: GraphPoint) -> List[float]:
    """Arclength positions at which the path passes through pt."""
    c = G.canonical(pt)
    pos: List[float] = []
    acc = 0.0
    for (eid, a, b) in steps:
        if c.is_vertex():
            e = G.edge(eid)
            for (coord, vtx) in ((0.0, e.u), (e.length, e.v)):
                if vtx == c.vertex and min(a, b) - TOL <= coord <= max(a, b) + TOL:
                    pos.append(acc + abs(coord - a))
        elif c.edge == eid and min(a, b) - TOL <= c.offset <= max(a, b) + TOL:
            pos.append(acc + abs(c.offset - a))
        acc += abs(b - a)
    # merge positions that coincide (step junctions)
    pos.sort()
    merged: List[float] = []
    for x in pos:
        if not merged or x - merged[-1] > TOL:
            merged.append(x)
    return merged


def _repeat_candidates(G: MetricGraph, steps: List[Tuple[str, float, float]]) -> List[GraphPoint]:
    pts: List[GraphPoint] = []
    seen = set()

    def add(pt: GraphPoint):
        k = _point_key(G, pt)
        if k not in seen:
            seen.add(k)
            pts.append(G.canonical(pt))

    for (eid, a, b) in steps:
        add(GraphPoint(edge=eid, offset=a))
        add(GraphPoint(edge=eid, offset=b))
    # same-edge interval overlaps contribute their extreme points
    n = len(steps)
    for i in range(n):
        ei, ai, bi = steps[i]
        lo_i, hi_i = min(ai, bi), max(ai, bi)
        for j in range(i + 1, n):
            ej, aj, bj = steps[j]
            if ej != ei:
                continue
            lo = max(lo_i, min(aj, bj))
            hi = min(hi_i, max(aj, bj))
            if hi - lo >= -TOL:
                add(GraphPoint(edge=ei, offset=lo))
                add(GraphPoint(edge=ei, offset=hi))
    return pts


def _cut(G: MetricGraph, steps: List[Tuple[str, float, float]], lo: float, hi: float) -> List[Tuple[str, float, float]]:
    """Remove the arclength range (lo, hi) from the path, keeping [0, lo]
    and [hi, total]."""
    out: List[Tuple[str, float, float]] = []
    acc = 0.0
    for (eid, a, b) in steps:
        ln = abs(b - a)
        sgn = 1.0 if b >= a else -1.0
        s0, s1 = acc, acc + ln
        for (klo, khi) in ((max(s0, 0.0), min(s1, lo)), (max(s0, hi), s1)):
            if khi - klo > TOL:
                ca = a + sgn * (klo - s0)
                cb = a + sgn * (khi - s0)
                out.append((eid, ca, cb))
        acc = s1
    # merge same-direction continuations on one edge
    merged: List[Tuple[str, float, float]] = []
    for st in out:
        if merged and merged[-1][0] == st[0] and abs(merged[-1][2] - st[1]) <= TOL \
                and (merged[-1][2] - merged[-1][1]) * (st[2] - st[1]) > 0:
            merged[-1] = (st[0], merged[-1][1], st[2])
        else:
            merged.append(st)
    return merged


def _earliest_repeat(G: MetricGraph, steps: List[Tuple[str, float, float]]):
    """(first, last) arclength positions of the best repeated point, or
    None if the path is injective."""
    best = None
    for pt in _repeat_candidates(G, steps):
        occ = _occurrences(G, steps, pt)
        if len(occ) >= 2:
            key = (occ[0], -occ[-1])
            if best is None or key < best[0]:
                best = (key, occ[0], occ[-1])
    if best is None:
        return None
    return best[1], best[2]


def simplify_path(G: MetricGraph, path: EdgePath) -> EdgePath:
    """Excise detours until the path is injective.

    Among all repeated points, the one met earliest along the path is
    excised first, cutting through to its last occurrence. A closed loop
    collapses to the constant path at its start point.
    """
    validate_path(G, path)
    start = path_start(G, path)
    steps = list(path.steps)
    for _ in range(4 * (len(steps) + 2) ** 2):
        hit = _earliest_repeat(G, steps)
        if hit is None:
            break
        steps = _cut(G, steps, hit[0], hit[1])
    else:
        raise AssertionError("path simplification did not terminate")
    if not steps:
        return EdgePath(steps=(), anchor=start)
    return EdgePath(steps=tuple(steps))


def is_simple_path(G: MetricGraph, path: EdgePath) -> bool:
    """Injective, except that start == end (a simple loop) is allowed."""
    validate_path(G, path)
    steps = list(path.steps)
    if not steps:
        return True
    total = sum(abs(b - a) for (_, a, b) in steps)
    for pt in _repeat_candidates(G, steps):
        occ = _occurrences(G, steps, pt)
        if len(occ) >= 2:
            if len(occ) == 2 and occ[0] <= TOL and occ[-1] >= total - TOL:
                continue  # simple loop closure
            return False
    return True


# -- monotone subdivision ----------------------------------------------------

@dataclass(frozen=True)
class MonotoneModel:
    """Subdivision of a graph on which d(p, .) is affine with slope +-1
    along every edge."""

    graph: MetricGraph
    f: Dict[str, float]
    p_vertex: str
    # host edge id -> ordered segments (host_lo, host_hi, model edge id,
    # model u, model v); model u sits at host_lo
    host_segments: Dict[str, Tuple[Tuple[float, float, str, str, str], ...]]
    new_vertices: Dict[str, Tuple[str, float]]


def _build_from_cuts(G: MetricGraph, cuts: Dict[str, List[Tuple[float, str]]]) -> Tuple[MetricGraph, Dict[str, Tuple], Dict[str, Tuple[str, float]]]:
    verts = list(G.vertices)
    new_vertices: Dict[str, Tuple[str, float]] = {}
    edges: List[Tuple[str, str, str, float]] = []
    host: Dict[str, Tuple] = {}
    for e in G.edges:
        cl = sorted(cuts.get(e.id, []))
        segs = []
        prev_off, prev_v = 0.0, e.u
        pieces = []
        for (off, vid) in cl:
            if vid in G._adj or vid in new_vertices:
                raise ValueError(f"generated vertex id {vid} already in use")
            verts.append(vid)
            new_vertices[vid] = (e.id, off)
            pieces.append((prev_off, off, prev_v, vid))
            prev_off, prev_v = off, vid
        pieces.append((prev_off, e.length, prev_v, e.v))
        if len(pieces) == 1:
            edges.append((e.id, e.u, e.v, e.length))
            segs.append((0.0, e.length, e.id, e.u, e.v))
        else:
            for k, (a, b, uu, vv) in enumerate(pieces):
                mid = f"{e.id}|{k}"
                edges.append((mid, uu, vv, b - a))
                segs.append((a, b, mid, uu, vv))
        host[e.id] = tuple(segs)
    return MetricGraph(verts, edges), host, new_vertices


def _monotone_model(G: MetricGraph, p: GraphPoint) -> MonotoneModel:
    cp = G.canonical(p)
    cuts: Dict[str, List[Tuple[float, str]]] = {}
    if not cp.is_vertex():
        cuts[cp.edge] = [(cp.offset, f"{cp.edge}|p")]
    G0, host0, newv0 = _build_from_cuts(G, cuts)
    p0 = f"{cp.edge}|p" if not cp.is_vertex() else cp.vertex
    f0 = G0._vertex_dists(p0)

    # split each edge at the interior point farthest from p along it
    for e0 in G0.edges:
        tstar = (e0.length + f0[e0.v] - f0[e0.u]) / 2.0
        if TOL < tstar < e0.length - TOL:
            # translate back to host coordinates
            for heid, segs in host0.items():
                for (a, b, mid, uu, vv) in segs:
                    if mid == e0.id:
                        counter = len(cuts.setdefault(heid, []))
                        cuts[heid].append((a + tstar, f"{heid}|t{counter}"))
                        break
                else:
                    continue
                break

    H, host, newv = _build_from_cuts(G, cuts)
    pv = p0
    f = H._vertex_dists(pv)
    for e in H.edges:  # slopes must be +-1 now
        if abs(abs(f[e.u] - f[e.v]) - e.length) > 5e-9:
            raise AssertionError(f"edge {e.id} is not monotone after subdivision")
    return MonotoneModel(graph=H, f=dict(f), p_vertex=pv, host_segments=host,
                         new_vertices=newv)


def monotone_subdivision(G: MetricGraph, p: GraphPoint) -> Tuple[MetricGraph, Dict[str, Tuple[str, float]]]:
    """Subdivide so that distance-from-p is monotone along every edge.

    Returns the subdivided graph and a map from each new vertex to its
    (host edge, offset) position on G.
    """
    model = _monotone_model(G, p)
    return model.graph, dict(model.new_vertices)


def _to_model_point(model: MonotoneModel, pt: GraphPoint) -> GraphPoint:
    H = model.graph
    if pt.vertex is not None:
        return H.canonical(GraphPoint(vertex=pt.vertex))
    for (a, b, mid, uu, vv) in model.host_segments[pt.edge]:
        if a - TOL <= pt.offset <= b + TOL:
            return H.canonical(GraphPoint(edge=mid, offset=pt.offset - a))
    raise ValueError(f"point {pt} not covered by the subdivision")


def _from_model_point(model: MonotoneModel, pt: GraphPoint) -> GraphPoint:
    H = model.graph
    c = H.canonical(pt)
    if c.is_vertex():
        if c.vertex in model.new_vertices:
            eid, off = model.new_vertices[c.vertex]
            return GraphPoint(edge=eid, offset=off)
        return c
    for heid, segs in model.host_segments.items():
        for (a, b, mid, uu, vv) in segs:
            if mid == c.edge:
                return GraphPoint(edge=heid, offset=a + c.offset)
    raise AssertionError(f"model edge {c.edge} has no host")


def _path_to_model(model: MonotoneModel, path: EdgePath) -> List[Tuple[str, float, float]]:
    """Transfer a path on the host graph to steps on the model graph."""
    out: List[Tuple[str, float, float]] = []
    for (eid, a, b) in path.steps:
        segs = model.host_segments[eid]
        order = segs if a <= b else tuple(reversed(segs))
        lo, hi = min(a, b), max(a, b)
        for (sa, sb, mid, uu, vv) in order:
            ov_lo, ov_hi = max(sa, lo), min(sb, hi)
            if ov_hi - ov_lo <= TOL:
                continue
            if a <= b:
                out.append((mid, ov_lo - sa, ov_hi - sa))
            else:
                out.append((mid, ov_hi - sa, ov_lo - sa))
    return out


def _model_with_points(model: MonotoneModel, pts: Sequence[GraphPoint]) -> Tuple[MonotoneModel, List[str]]:
    """Subdivide the model further so every listed host point is a vertex.

    Returns the refined model and, for each input point, its vertex id.
    f extends by interpolation; slopes stay +-1.
    """
    H = model.graph
    cuts: Dict[str, List[Tuple[float, str]]] = {}
    names: List[Optional[str]] = []
    taken = set(H.vertices)
    for pt in pts:
        mp = _to_model_point(model, pt)
        if mp.is_vertex():
            names.append(mp.vertex)
            continue
        lst = cuts.setdefault(mp.edge, [])
        vid = None
        for (off, known) in lst:
            if abs(off - mp.offset) <= TOL:
                vid = known
                break
        if vid is None:
            vid = f"{mp.edge}|q{len(lst)}"
            while vid in taken:
                vid += "x"
            taken.add(vid)
            lst.append((mp.offset, vid))
        names.append(vid)

    H2, host2, newv2 = _build_from_cuts(H, cuts)
    f2 = dict(model.f)
    for vid, (meid, off) in newv2.items():
        e = H.edge(meid)
        sgn = 1.0 if model.f[e.v] >= model.f[e.u] else -1.0
        f2[vid] = model.f[e.u] + sgn * off

    # compose host segment maps: host edge of G -> segments of H2
    comp: Dict[str, Tuple] = {}
    for geid, segs in model.host_segments.items():
        acc = []
        for (a, b, mid, uu, vv) in segs:
            for (a2, b2, mid2, uu2, vv2) in host2[mid]:
                acc.append((a + a2, a + b2, mid2, uu2, vv2))
        comp[geid] = tuple(acc)
    newv = dict(model.new_vertices)
    for vid, (meid, off) in newv2.items():
        hp = _from_model_point(model, GraphPoint(edge=meid, offset=off))
        newv[vid] = (hp.edge, hp.offset) if not hp.is_vertex() else (meid, off)
    refined = MonotoneModel(graph=H2, f=f2, p_vertex=model.p_vertex,
                            host_segments=comp, new_vertices=newv)
    return refined, [n for n in names]


def monotone_decomposition(G: MetricGraph, p: GraphPoint, path: EdgePath) -> List[EdgePath]:
    """Split a simple path into maximal pieces on which distance-from-p is
    strictly monotone. Piece boundaries can sit at interior points of G's
    edges (the turning points), so pieces may start or end mid-edge."""
    if not is_simple_path(G, path):
        raise ValueError("path is not simple")
    if not path.steps:
        return []
    model = _monotone_model(G, p)
    msteps = _path_to_model(model, path)
    f, H = model.f, model.graph

    runs: List[List[Tuple[str, float, float]]] = []
    signs: List[int] = []
    for (mid, a, b) in msteps:
        e = H.edge(mid)
        up = f[e.v] - f[e.u]  # +-length
        delta = up * (b - a) / e.length
        sgn = 1 if delta > 0 else -1
        if signs and signs[-1] == sgn:
            runs[-1].append((mid, a, b))
        else:
            runs.append([(mid, a, b)])
            signs.append(sgn)

    segments: List[EdgePath] = []
    for run in runs:
        gsteps: List[Tuple[str, float, float]] = []
        for (mid, a, b) in run:
            hp_a = _from_model_point(model, GraphPoint(edge=mid, offset=a))
            hp_b = _from_model_point(model, GraphPoint(edge=mid, offset=b))
            ca = hp_a.offset if not hp_a.is_vertex() else _host_coord(model, mid, a)
            cb = hp_b.offset if not hp_b.is_vertex() else _host_coord(model, mid, b)
            heid = _host_edge(model, mid)
            if gsteps and gsteps[-1][0] == heid and abs(gsteps[-1][2] - ca) <= TOL:
                gsteps[-1] = (heid, gsteps[-1][1], cb)
            else:
                gsteps.append((heid, ca, cb))
        segments.append(EdgePath(steps=tuple(gsteps)))
    return segments


def _host_edge(model: MonotoneModel, mid: str) -> str:
    for heid, segs in model.host_segments.items():
        for (a, b, m, uu, vv) in segs:
            if m == mid:
                return heid
    raise AssertionError(f"model edge {mid} has no host")


def _host_coord(model: MonotoneModel, mid: str, off: float) -> float:
    for heid, segs in model.host_segments.items():
        for (a, b, m, uu, vv) in segs:
            if m == mid:
                return a + off
    raise AssertionError(f"model edge {mid} has no host")


def f_variation(G: MetricGraph, p: GraphPoint, path: EdgePath) -> float:
    """Total variation of distance-from-p along the path. Because the
    distance function has slope +-1 on each piece of the monotone
    subdivision, this equals the geometric length of the path."""
    validate_path(G, path)
    if not path.steps:
        return 0.0
    model = _monotone_model(G, p)
    msteps = _path_to_model(model, path)
    f, H = model.f, model.graph
    total = 0.0
    for (mid, a, b) in msteps:
        e = H.edge(mid)
        up = f[e.v] - f[e.u]
        total += abs(up * (b - a) / e.length)
    return total


def shortest_path(G: MetricGraph, a: GraphPoint, b: GraphPoint) -> EdgePath:
    """One geodesic from a to b as an edge path."""
    ca, cb = G.canonical(a), G.canonical(b)
    if points_equal(G, ca, cb):
        return EdgePath(steps=(), anchor=ca)

    # run Dijkstra with parent edges from a's exit vertices
    dist: Dict[str, float] = {}
    parent: Dict[str, Tuple[Optional[str], Optional[str]]] = {}
    heap: List[Tuple[float, int, str, Optional[str], Optional[str]]] = []
    counter = 0
    for (v, c) in G._exits(ca):
        heap.append((c, counter, v, None, None))
        counter += 1
    heapq.heapify(heap)
    done: Set[str] = set()
    while heap:
        d, _, v, pv, pe = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        dist[v] = d
        parent[v] = (pv, pe)
        for eid in G._adj[v]:
            e = G._edges[eid]
            w = e.v if e.u == v else e.u
            if w not in done:
                heapq.heappush(heap, (d + e.length, counter, w, v, eid))
                counter += 1

    # choose the best arrival at b
    best = None
    if not ca.is_vertex() and not cb.is_vertex() and ca.edge == cb.edge:
        best = (abs(ca.offset - cb.offset), None, None)
    for (v, c) in G._exits(cb):
        cand = dist[v] + c
        if best is None or cand < best[0] - 1e-15:
            best = (cand, v, c)

    if best[1] is None:  # direct along the shared edge
        return EdgePath(steps=((ca.edge, ca.offset, cb.offset),))

    arrive = best[1]
    chain: List[Tuple[str, float, float]] = []
    v = arrive
    while parent[v][0] is not None:
        pv, pe = parent[v]
        e = G._edges[pe]
        if e.u == pv:
            chain.append((pe, 0.0, e.length))
        else:
            chain.append((pe, e.length, 0.0))
        v = pv
    chain.reverse()

    steps: List[Tuple[str, float, float]] = []
    if not ca.is_vertex():
        e = G.edge(ca.edge)
        target = e.u if v == e.u else e.v
        steps.append((ca.edge, ca.offset, 0.0 if target == e.u else e.length))
    steps.extend(chain)
    if not cb.is_vertex():
        e = G.edge(cb.edge)
        steps.append((cb.edge, 0.0 if arrive == e.u else e.length, cb.offset))
    steps = [s for s in steps if abs(s[2] - s[1]) > TOL]
    return EdgePath(steps=tuple(steps))


# -- serialization -----------------------------------------------------------

def graph_to_json_obj(G: MetricGraph) -> dict:
    # emit original self-loops back as loops? the split is part of the
    # graph's identity once constructed, so serialize what we have
    return {
        "vertices": list(G.vertices),
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "length": e.length}
                  for e in G.edges],
    }


def graph_from_json_obj(obj: dict) -> MetricGraph:
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise ValueError("graph json needs 'vertices' and 'edges'")
    edges = []
    for e in obj["edges"]:
        for k in ("id", "u", "v", "length"):
            if k not in e:
                raise ValueError(f"edge entry missing '{k}'")
        edges.append((e["id"], e["u"], e["v"], e["length"]))
    return MetricGraph(obj["vertices"], edges)


def point_to_json_obj(pt: GraphPoint) -> dict:
    if pt.vertex is not None:
        return {"vertex": pt.vertex}
    return {"edge": pt.edge, "offset": pt.offset}


def point_from_json_obj(obj: dict) -> GraphPoint:
    if "vertex" in obj:
        return GraphPoint(vertex=obj["vertex"])
    if "edge" in obj:
        return GraphPoint(edge=obj["edge"], offset=float(obj.get("offset", 0.0)))
    raise ValueError("point json needs 'vertex' or 'edge'")
