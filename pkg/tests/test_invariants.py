import math
import random
from itertools import combinations

import numpy as np
import pytest

from epos.certificates import count_claws
from epos.errors import ValidationError
from epos.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    enumerate_connected_graphs,
    from_edges,
    path_graph,
    relabel,
    star_graph,
)
from epos.invariants import (
    compute_features,
    eigenvalues_symmetric,
    feature_schema,
)


def feature(g, name):
    return compute_features(g)[feature_schema().index(name)]


def test_schema_shape():
    schema = feature_schema()
    assert len(schema) == 44
    assert len(set(schema.names)) == 44
    for required in ["num_claws", "transitivity", "degree_std", "independence_number"]:
        assert required in schema.names
    assert all(schema.kind(n) in ("discrete", "continuous") for n in schema.names)


def test_features_k3():
    g = complete_graph(3)
    assert feature(g, "transitivity") == 1.0
    assert feature(g, "num_claws") == 0.0
    assert feature(g, "independence_number") == 1.0
    assert feature(g, "degree_std") == 0.0
    assert feature(g, "is_regular") == 1.0
    assert feature(g, "chromatic_number") == 3.0


def test_features_c5():
    g = cycle_graph(5)
    assert feature(g, "transitivity") == 0.0
    assert feature(g, "independence_number") == 2.0
    assert feature(g, "degree_std") == 0.0
    assert feature(g, "diameter") == 2.0
    assert feature(g, "girth") == 5.0
    assert feature(g, "chromatic_number") == 3.0
    assert feature(g, "is_bipartite") == 0.0


def test_features_claw():
    g = star_graph(3)
    assert feature(g, "num_claws") == 1.0
    assert feature(g, "degree_std") == pytest.approx(math.sqrt(0.75), abs=1e-12)
    assert feature(g, "num_leaves") == 3.0
    assert feature(g, "girth") == 0.0
    assert feature(g, "matching_number") == 1.0
    assert feature(g, "domination_number") == 1.0
    assert feature(g, "vertex_connectivity") == 1.0
    assert feature(g, "edge_connectivity") == 1.0
    assert feature(g, "num_bridges") == 3.0
    assert feature(g, "num_cut_vertices") == 1.0


def test_features_reject_disconnected_and_large():
    with pytest.raises(ValidationError):
        compute_features(Graph(2, (0, 0)))


def test_eigenvalues_trivial():
    assert eigenvalues_symmetric(np.eye(3)) == pytest.approx([1, 1, 1])
    assert eigenvalues_symmetric([[0, 1], [1, 0]]) == pytest.approx([1, -1])


def test_eigenvalues_c4():
    a = np.zeros((4, 4))
    for u, v in cycle_graph(4).edges():
        a[u, v] = a[v, u] = 1
    assert eigenvalues_symmetric(a) == pytest.approx([2, 0, 0, -2], abs=1e-9)


def test_eigenvalues_against_numpy():
    rng = np.random.default_rng(0)
    for n in range(2, 12):
        m = rng.normal(size=(n, n))
        m = (m + m.T) / 2
        ours = np.array(eigenvalues_symmetric(m))
        ref = np.sort(np.linalg.eigvalsh(m))[::-1]
        assert np.allclose(ours, ref, atol=1e-9)


def brute_girth(g):
    best = 0
    for r in range(3, g.n + 1):
        for subset in combinations(range(g.n), r):
            deg_in = [
                sum(1 for u in subset if u != v and g.has_edge(u, v)) for v in subset
            ]
            if any(d != 2 for d in deg_in):
                continue
            # 2-regular induced subgraph; connected iff it is a single cycle
            mask = 0
            for v in subset:
                mask |= 1 << v
            seed = subset[0]
            reach = 1 << seed
            frontier = [seed]
            while frontier:
                nxt = []
                for v in frontier:
                    for u in range(g.n):
                        if (mask >> u) & 1 and g.has_edge(u, v) and not (reach >> u) & 1:
                            reach |= 1 << u
                            nxt.append(u)
                frontier = nxt
            if reach == mask:
                return r
    return best


def test_girth_against_bruteforce():
    for n in range(3, 7):
        for g in enumerate_connected_graphs(n):
            assert feature(g, "girth") == brute_girth(g)


def brute_c4_count(g):
    total = 0
    for quad in combinations(range(g.n), 4):
        for perm in [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)]:
            cyc = [quad[i] for i in perm]
            if all(
                g.has_edge(cyc[i], cyc[(i + 1) % 4]) for i in range(4)
            ):
                total += 1
    return total


def test_count_c4_against_bruteforce():
    assert feature(complete_graph(4), "count_C4") == 3.0
    for n in range(4, 7):
        for g in enumerate_connected_graphs(n):
            assert feature(g, "count_C4") == brute_c4_count(g)


def test_num_claws_matches_certificates_route():
    for n in range(2, 8):
        for g in enumerate_connected_graphs(n):
            assert feature(g, "num_claws") == count_claws(g)


def test_isomorphism_invariance():
    rng = random.Random(19)
    schema = feature_schema()
    discrete_idx = [i for i, n in enumerate(schema.names) if schema.kind(n) == "discrete"]
    continuous_idx = [i for i, n in enumerate(schema.names) if schema.kind(n) == "continuous"]
    for n in range(2, 7):
        for g in list(enumerate_connected_graphs(n))[:: max(1, n - 3)]:
            base = compute_features(g)
            perm = list(range(n))
            rng.shuffle(perm)
            other = compute_features(relabel(g, perm))
            assert all(base[i] == other[i] for i in discrete_idx)
            assert np.allclose(base[continuous_idx], other[continuous_idx], atol=1e-9)


def test_range_invariants():
    for n in range(2, 7):
        for g in enumerate_connected_graphs(n):
            f = compute_features(g)
            schema = feature_schema()
            transitivity = f[schema.index("transitivity")]
            density = f[schema.index("density")]
            assert 0.0 <= transitivity <= 1.0
            assert 0.0 <= density <= 1.0
            assert f[schema.index("algebraic_connectivity")] > 0.0
            mean_deg = 2.0 * g.num_edges / g.n
            rho = f[schema.index("spectral_radius")]
            assert rho >= mean_deg - 1e-9
            assert rho <= max(g.degrees()) + 1e-9


def test_spanning_tree_count_on_known_graphs():
    # Cayley: n^(n-2) spanning trees of K_n; trees have exactly one
    for n in range(2, 7):
        assert feature(complete_graph(n), "log_spanning_tree_count") == pytest.approx(
            (n - 2) * math.log(n), abs=1e-8
        )
        assert feature(path_graph(n), "log_spanning_tree_count") == pytest.approx(
            0.0, abs=1e-8
        )
    assert feature(cycle_graph(5), "log_spanning_tree_count") == pytest.approx(
        math.log(5), abs=1e-8
    )


def test_clique_cover_and_friends():
    g = cycle_graph(5)
    assert feature(g, "clique_number") == 2.0
    assert feature(g, "clique_cover_number") == 3.0
    assert feature(g, "max_core_number") == 2.0
    assert feature(g, "num_maximal_cliques") == 5.0
    k4 = complete_graph(4)
    assert feature(k4, "num_maximal_cliques") == 1.0
    assert feature(k4, "vertex_connectivity") == 3.0
    assert feature(k4, "edge_connectivity") == 3.0


def test_assortativity_degenerate_is_zero():
    assert feature(cycle_graph(6), "degree_assortativity") == 0.0


def test_betweenness_star():
    # center of K_{1,m} lies on every pair's unique path
    g = star_graph(4)
    n = g.n
    values = compute_features(g)
    mean_b = values[feature_schema().index("mean_betweenness")]
    assert mean_b == pytest.approx(1.0 / n, abs=1e-12)
