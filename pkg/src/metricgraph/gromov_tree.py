"""Merge trees of distance-from-basepoint, Gromov products, and the tree
metric t_p they induce.

For points x, y and basepoint p, m_p(x, y) is the largest level m such that
x and y lie in one component of the superlevel set {d(p, .) >= m}; then
t_p(x, y) = d(p, x) + d(p, y) - 2 m_p(x, y). The merge tree realizes m_p as
the level of the lowest common ancestor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .metric_graph import (
    GraphPoint,
    MetricGraph,
    MonotoneModel,
    TOL,
    _model_with_points,
    _monotone_model,
    distance,
    epsilon_net,
    finite_metric,
)


def gromov_product(obj, p, x, y) -> float:
    """(d(p,x) + d(p,y) - d(x,y)) / 2.

    ``obj`` is a MetricGraph with GraphPoint arguments, or a square distance
    matrix with integer indices.
    """
    if isinstance(obj, MetricGraph):
        return (distance(obj, p, x) + distance(obj, p, y) - distance(obj, x, y)) / 2.0
    D = obj
    return (D[p][x] + D[p][y] - D[x][y]) / 2.0


@dataclass(frozen=True)
class TreeNode:
    id: int
    level: float
    parent: Optional[int]
    members: Tuple[str, ...] = ()


@dataclass(frozen=True)
class MergeTree:
    nodes: Tuple[TreeNode, ...]
    root: int
    node_of: Dict[str, int]

    def lca(self, a: int, b: int) -> int:
        anc = set()
        i: Optional[int] = a
        while i is not None:
            anc.add(i)
            i = self.nodes[i].parent
        j: Optional[int] = b
        while j is not None:
            if j in anc:
                return j
            j = self.nodes[j].parent
        raise AssertionError("nodes share no ancestor")

    def merge_level(self, a: int, b: int) -> float:
        return self.nodes[self.lca(a, b)].level

    def to_json_obj(self) -> dict:
        return {"nodes": [{"id": n.id, "level": n.level, "parent": n.parent}
                          for n in self.nodes]}


class TreeDistortionResult(NamedTuple):
    value: float
    tau_upper: float


def _merge_tree_from_model(model: MonotoneModel) -> MergeTree:
    H, f = model.graph, model.f
    order = sorted(H.vertices, key=lambda v: (-f[v], v))

    parent_uf: Dict[str, str] = {}

    def find(v: str) -> str:
        r = v
        while parent_uf[r] != r:
            r = parent_uf[r]
        while parent_uf[v] != r:
            parent_uf[v], v = r, parent_uf[v]
        return r

    # provisional nodes in creation order
    levels: List[float] = []
    parents: List[Optional[int]] = []
    members: List[List[str]] = []
    root_node: Dict[str, int] = {}  # union-find root vertex -> its node

    i = 0
    while i < len(order):
        j = i
        lvl = f[order[i]]
        while j < len(order) and lvl - f[order[j]] <= TOL:
            j += 1
        group = order[i:j]
        i = j

        for v in group:
            parent_uf[v] = v
        prev_roots: Dict[str, int] = dict(root_node)
        for v in group:
            for eid in H.incident(v):
                e = H.edge(eid)
                w = e.v if e.u == v else e.u
                if w in parent_uf:
                    ra, rb = find(v), find(w)
                    if ra != rb:
                        parent_uf[rb] = ra

        comps: Dict[str, List[str]] = {}
        for v in group:
            comps.setdefault(find(v), []).append(v)
        handled: Dict[str, int] = {}
        for rv in sorted(comps, key=lambda r: min(comps[r])):
            children = sorted({nid for (old_root, nid) in prev_roots.items()
                               if find(old_root) == rv})
            nid = len(levels)
            levels.append(lvl)
            parents.append(None)
            members.append(sorted(comps[rv]))
            for c in children:
                parents[c] = nid
            handled[rv] = nid
        root_node = {}
        seen_roots = set()
        for v in parent_uf:
            r = find(v)
            if r in seen_roots:
                continue
            seen_roots.add(r)
            root_node[r] = handled.get(r)
            if root_node[r] is None:
                # untouched component keeps its old node
                olds = [nid for (old_root, nid) in prev_roots.items()
                        if find(old_root) == r]
                root_node[r] = olds[0]

    live = [nid for nid, par in enumerate(parents) if par is None]
    if len(live) != 1:
        raise AssertionError("merge tree did not close to a single root")

    # renumber so ids ascend with level from the root
    order_ids = sorted(range(len(levels)), key=lambda nid: (levels[nid], nid))
    remap = {old: new for new, old in enumerate(order_ids)}
    nodes = tuple(
        TreeNode(id=remap[old],
                 level=levels[old],
                 parent=None if parents[old] is None else remap[parents[old]],
                 members=tuple(members[old]))
        for old in order_ids
    )
    node_of: Dict[str, int] = {}
    for n in nodes:
        for v in n.members:
            node_of[v] = n.id
    return MergeTree(nodes=nodes, root=remap[live[0]], node_of=node_of)


def build_merge_tree(G: MetricGraph, p: GraphPoint) -> MergeTree:
    """Merge tree of d(p, .) over the monotone subdivision's vertices."""
    return _merge_tree_from_model(_monotone_model(G, p))


def bottleneck_m(G: MetricGraph, p: GraphPoint, x: GraphPoint, y: GraphPoint) -> float:
    """Highest level at which x and y share a superlevel component of
    d(p, .): maximum over x-y paths of the minimum of the function.

    Kruskal over the monotone subdivision with x and y made vertices: edges
    join in decreasing order of min(f(u), f(v)); the connecting weight is
    m_p, capped by min(f(x), f(y)).
    """
    model = _monotone_model(G, p)
    refined, names = _model_with_points(model, [x, y])
    vx, vy = names[0], names[1]
    f, H = refined.f, refined.graph
    cap = min(f[vx], f[vy])
    if vx == vy:
        return cap

    parent: Dict[str, str] = {v: v for v in H.vertices}

    def find(v: str) -> str:
        r = v
        while parent[r] != r:
            r = parent[r]
        while parent[v] != r:
            parent[v], v = r, parent[v]
        return r

    ranked = sorted(H.edges, key=lambda e: (-min(f[e.u], f[e.v]), e.id))
    for e in ranked:
        ra, rb = find(e.u), find(e.v)
        if ra != rb:
            parent[ra] = rb
        if find(vx) == find(vy):
            return min(cap, min(f[e.u], f[e.v]))
    raise AssertionError("endpoints never connected")


def t_p(G: MetricGraph, p: GraphPoint, x: GraphPoint, y: GraphPoint) -> float:
    """Tree distance induced by the merge tree of d(p, .). Never exceeds
    the graph distance."""
    fx = distance(G, p, x)
    fy = distance(G, p, y)
    return fx + fy - 2.0 * bottleneck_m(G, p, x, y)


def tree_distortion(G: MetricGraph, p: GraphPoint, mesh: float) -> TreeDistortionResult:
    """Max of d(x,y) - t_p(x,y) over pairs of an eps-net at the given mesh.

    The identity relation between G and its merge-tree quotient has this
    distortion on the net, so value/2 is reported as tau_upper, an upper
    bound for the Gromov-Hausdorff distance to the tree.
    """
    if mesh <= 0:
        raise ValueError("mesh must be > 0")
    net = epsilon_net(G, mesh)
    model = _monotone_model(G, p)
    refined, names = _model_with_points(model, net)
    tree = _merge_tree_from_model(refined)
    f = refined.f
    D = finite_metric(G, net)

    n = len(net)
    node_ids = [tree.node_of[v] for v in names]
    flev = [f[v] for v in names]

    # cache ancestor chains once; pairwise LCA via the chains
    chains: List[Dict[int, int]] = []
    for nid in node_ids:
        depth: Dict[int, int] = {}
        k, cur = 0, nid
        while cur is not None:
            depth[cur] = k
            cur = tree.nodes[cur].parent
            k += 1
        chains.append(depth)

    worst = 0.0
    for i in range(n):
        ci = chains[i]
        for j in range(i + 1, n):
            cur = node_ids[j]
            while cur not in ci:
                cur = tree.nodes[cur].parent
            tp = flev[i] + flev[j] - 2.0 * tree.nodes[cur].level
            gap = D[i, j] - tp
            if gap < -1e-9:
                raise AssertionError("tree metric exceeded the graph metric")
            if gap > worst:
                worst = gap
    return TreeDistortionResult(value=worst, tau_upper=worst / 2.0)
