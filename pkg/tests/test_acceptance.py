"""End-to-end acceptance checks.

Each test covers one headline behavior of the package on fixed inputs and
prints a single PASS line when it succeeds (run with -s to see them; a
pytest FAILED line marks the opposite outcome).
"""

import math

import numpy as np
import pytest

from metricgraph import (
    EnsembleSpec,
    GraphPoint,
    MetricGraph,
    betti_after_smoothing,
    bottleneck_distance,
    brute_force_dgh,
    build_merge_tree,
    delta_n_bounds,
    distance,
    epsilon_net,
    epsilon_smoothing,
    finite_metric,
    hyp_graph,
    hyperbolicity,
    minimal_cycle_basis,
    monotone_decomposition,
    monotone_subdivision,
    persistence_sequence,
    t_p,
    tree_distortion,
    verify,
    vr_h1_barcode,
)
from metricgraph.metric_graph import path_from_traversals

from conftest import random_euclidean_metric


def _cycle12():
    return MetricGraph(
        vertices=("p", "q"),
        edges=(("arc1", "p", "q", 6.0), ("arc2", "p", "q", 6.0)),
    )


def _theta():
    return MetricGraph(
        vertices=("u", "v"),
        edges=(("e1", "u", "v", 1.0), ("e2", "u", "v", 2.0),
               ("e3", "u", "v", 3.0)),
    )


def _decorated_cycle12():
    return MetricGraph(
        vertices=("p", "a", "b", "q"),
        edges=(("stem", "p", "a", 2.0), ("c1", "a", "b", 6.0),
               ("c2", "a", "b", 6.0), ("tail", "b", "q", 2.0)),
    )


def test_criterion_1_circle_invariants():
    """The 12-cycle: sequence, barcode, hyperbolicity, merge tree."""
    G = _cycle12()
    p, q = GraphPoint(vertex="p"), GraphPoint(vertex="q")

    seq = persistence_sequence(G)
    assert seq.entries == (4.0,)

    net = epsilon_net(G, 0.25)
    assert len(net) == 48
    bc = vr_h1_barcode(finite_metric(G, net))
    assert len(bc.bars) == 1
    birth, death = bc.bars[0]
    assert 3.5 <= death <= 4.0
    assert birth < 1.0

    hv, herr = hyp_graph(G, 0.1)
    assert 2.9 <= hv <= 3.1
    assert herr == pytest.approx(0.4)

    tree = build_merge_tree(G, p)
    levels = [n.level for n in tree.nodes]
    assert max(levels) == pytest.approx(6.0)
    assert min(levels) == pytest.approx(0.0)
    assert t_p(G, p, p, q) == 6.0

    td = tree_distortion(G, p, 0.1)
    assert abs(td.value - 6.0) <= 0.2
    # comparison with the hyperbolicity route: 2*log2(4*1+4) = 6
    assert td.value <= 2.0 * math.log2(8.0) * (hv + herr) + 1e-9

    print("acceptance 1 (circle invariants): PASS")


def test_criterion_2_smoothing_profile():
    """Betti drop of the 12-cycle and the shrunken cycle at eps=2."""
    G = _cycle12()
    p = GraphPoint(vertex="p")

    assert betti_after_smoothing(G, p, 5.9) == 1
    assert betti_after_smoothing(G, p, 6.0) == 0

    sm = epsilon_smoothing(G, p, 2.0)
    cycles = minimal_cycle_basis(sm.graph)
    assert len(cycles) == 1
    assert abs(cycles[0] - 8.0) <= 1e-6

    print("acceptance 2 (smoothing profile): PASS")


def test_criterion_3_theta_structure():
    """The theta graph: sequence values and monotone path structure."""
    G = _theta()
    u = GraphPoint(vertex="u")

    assert G.betti1 == 2
    seq = persistence_sequence(G)
    assert seq.entries[0] == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert seq.entries[1] == pytest.approx(1.0, abs=1e-12)

    H, hosts = monotone_subdivision(G, u)
    splits = sorted(hosts.values())
    assert splits == [("e2", 1.5), ("e3", 2.0)]
    from metricgraph import f_values
    fH = f_values(H, GraphPoint(vertex="u"))
    for w, (eid, off) in hosts.items():
        want = {"e2": 1.5, "e3": 2.0}[eid]
        assert fH[w] == pytest.approx(want)

    # every simple path decomposes into at most 6 monotone segments
    simple_paths = []
    for eid in ("e1", "e2", "e3"):
        simple_paths.append(path_from_traversals(G, "u", [eid]))
    for first in ("e1", "e2", "e3"):
        for second in ("e1", "e2", "e3"):
            if first != second:
                simple_paths.append(
                    path_from_traversals(G, "u", [first, second]))
    for path in simple_paths:
        pieces = monotone_decomposition(G, u, path)
        assert 1 <= len(pieces) <= 6

    print("acceptance 3 (theta structure): PASS")


def test_criterion_4_trees_are_exact():
    """Random trees with dyadic edge lengths: every tree comparison is
    exact at mesh 1/8 because all net distances are exact binary floats."""
    rng = np.random.default_rng(2026)
    for _ in range(25):
        nv = int(rng.integers(3, 9))
        vertices = tuple(f"v{i}" for i in range(nv))
        edges = []
        for i in range(1, nv):
            parent = int(rng.integers(0, i))
            k = int(rng.integers(4, 17))  # lengths k/8 in [0.5, 2]
            edges.append((f"e{i}", f"v{parent}", f"v{i}", k / 8.0))
        G = MetricGraph(vertices, tuple(edges))
        assert G.betti1 == 0
        p = GraphPoint(vertex="v0")

        td = tree_distortion(G, p, 0.125)
        assert td.value <= 1e-9

        hv, _ = hyp_graph(G, 0.125)
        assert hv == 0.0

        pts = [GraphPoint(vertex=v) for v in vertices]
        n = len(pts)
        M = np.zeros((n, n))
        for a in range(n):
            for b in range(a + 1, n):
                M[a, b] = M[b, a] = t_p(G, p, pts[a], pts[b])
        assert hyperbolicity(M) <= 1e-9

    print("acceptance 4 (exact trees): PASS")


def test_criterion_5_exact_search_oracle():
    """Closed forms for the exact distance search on small spaces."""
    rng = np.random.default_rng(31)

    for _ in range(10):
        n = int(rng.integers(2, 7))
        DX = random_euclidean_metric(rng, n)
        assert abs(brute_force_dgh(DX, np.zeros((1, 1)))
                   - DX.max() / 2.0) <= 1e-9

    for _ in range(10):
        d1, d2 = rng.uniform(0.2, 4.0, size=2)
        DX = np.array([[0.0, d1], [d1, 0.0]])
        DY = np.array([[0.0, d2], [d2, 0.0]])
        assert abs(brute_force_dgh(DX, DY) - abs(d1 - d2) / 2.0) <= 1e-9

    spaces = [random_euclidean_metric(rng, int(rng.integers(2, 6)))
              for _ in range(3)]
    d01 = brute_force_dgh(spaces[0], spaces[1])
    d02 = brute_force_dgh(spaces[0], spaces[2])
    d12 = brute_force_dgh(spaces[1], spaces[2])
    assert d02 <= d01 + d12 + 1e-9

    print("acceptance 5 (exact search oracle): PASS")


def test_criterion_6_stability_of_invariants():
    """Hyperbolicity and barcodes move at most linearly with the
    distance between small spaces."""
    rng = np.random.default_rng(47)
    spaces = [random_euclidean_metric(rng, int(rng.integers(2, 6)))
              for _ in range(200)]
    for k in range(100):
        DX, DY = spaces[2 * k], spaces[2 * k + 1]
        d = brute_force_dgh(DX, DY)
        assert abs(hyperbolicity(DX) - hyperbolicity(DY)) <= 4.0 * d + 1e-9
        bX = vr_h1_barcode(DX)
        bY = vr_h1_barcode(DY)
        assert bottleneck_distance(bX, bY) <= 2.0 * d + 1e-9

    print("acceptance 6 (stability of invariants): PASS")


def test_criterion_7_verification_suite():
    """The default 100-graph verification ensemble reports no failures."""
    report = verify(EnsembleSpec())
    counts = report.counts
    assert counts["fail"] == 0
    assert report.passed
    assert len(report.rows) > 1000

    print(f"acceptance 7 (verification suite, {len(report.rows)} rows): PASS")


def test_criterion_8_bound_report():
    """Certified interval for the distance to trees on the decorated
    cycle, with the tree route giving the best upper bound."""
    G = _decorated_cycle12()
    p = GraphPoint(vertex="p")
    rep = delta_n_bounds(G, 0, p, mesh=0.1)

    assert rep.lower == pytest.approx(1.0, abs=1e-12)
    certs = dict(rep.certificates)
    assert abs(certs["merge tree distortion / 2"] - 3.0) <= 0.1
    assert certs["tree distortion / 6 (reported)"] == pytest.approx(1.0)
    assert rep.lower <= rep.upper + 1e-12
    ratio = rep.upper / rep.lower

    print(f"acceptance 8 (bound report, upper/lower = {ratio:.3f}): PASS")
