import random
from itertools import combinations, product

import pytest

from epos.certificates import (
    alpha_condition_holds,
    connected_partition_exists,
    count_claws,
    default_theorem2_family,
    independence_number,
    is_claw_contractible,
    is_co_triangle_free,
    theorem2_certificate,
)
from epos.errors import ValidationError
from epos.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    enumerate_connected_graphs,
    from_edges,
    is_connected,
    path_graph,
    star_graph,
)


def brute_independence_number(g):
    best = 0
    for r in range(g.n, 0, -1):
        for subset in combinations(range(g.n), r):
            if all(not g.has_edge(u, v) for u, v in combinations(subset, 2)):
                return r
    return best


def test_independence_number_basic():
    for n in range(1, 8):
        assert independence_number(complete_graph(n)) == 1
        assert independence_number(Graph(n, (0,) * n)) == n
    assert independence_number(cycle_graph(5)) == 2


def test_independence_number_bruteforce():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(2, 7)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
        g = from_edges(n, edges)
        assert independence_number(g) == brute_independence_number(g)


def test_independence_monotone_under_edge_addition():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(3, 7)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
        g = from_edges(n, edges)
        non_edges = [
            (u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)
        ]
        if not non_edges:
            continue
        u, v = rng.choice(non_edges)
        g2 = from_edges(n, edges + [(u, v)])
        assert independence_number(g2) <= independence_number(g)


def test_is_co_triangle_free():
    assert is_co_triangle_free(complete_graph(5))
    assert not is_co_triangle_free(star_graph(3))
    assert is_co_triangle_free(cycle_graph(5))


def test_co_triangle_free_equals_alpha_le_2():
    for n in range(2, 7):
        for g in enumerate_connected_graphs(n):
            assert is_co_triangle_free(g) == (independence_number(g) <= 2)


def test_alpha_condition():
    assert alpha_condition_holds(star_graph(3))  # n=4, alpha=3
    assert not alpha_condition_holds(complete_graph(4))
    assert not alpha_condition_holds(star_graph(8))  # n=9, alpha=8 != 6


def brute_connected_partition_exists(g, lam):
    """Exhaustive search over all ordered assignments of vertices to blocks."""
    lam = tuple(sorted(lam, reverse=True))
    k = len(lam)
    for assignment in product(range(k), repeat=g.n):
        sizes = [0] * k
        for b in assignment:
            sizes[b] += 1
        if tuple(sizes) != lam:
            continue
        ok = True
        for b in range(k):
            mask = 0
            for v, a in enumerate(assignment):
                if a == b:
                    mask |= 1 << v
            sub_vertices = [v for v in range(g.n) if (mask >> v) & 1]
            sub = from_edges(
                len(sub_vertices),
                [
                    (i, j)
                    for i, u in enumerate(sub_vertices)
                    for j, v in enumerate(sub_vertices)
                    if i < j and g.has_edge(u, v)
                ],
            )
            if not is_connected(sub):
                ok = False
                break
        if ok:
            return True
    return False


def test_connected_partition_trivial_shapes():
    for g in [path_graph(5), cycle_graph(6), star_graph(4)]:
        assert connected_partition_exists(g, (g.n,))
        assert connected_partition_exists(g, tuple([1] * g.n))


def test_connected_partition_examples():
    assert connected_partition_exists(path_graph(4), (2, 2))
    assert not connected_partition_exists(star_graph(3), (2, 2))


def test_connected_partition_bruteforce():
    rng = random.Random(23)
    from epos.symfunc import partitions_of

    for _ in range(12):
        n = rng.randint(2, 6)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.45]
        g = from_edges(n, edges)
        for lam in partitions_of(n):
            assert connected_partition_exists(g, lam) == brute_connected_partition_exists(
                g, lam
            ), (g, lam)


def test_connected_partition_weight_mismatch():
    with pytest.raises(ValidationError):
        connected_partition_exists(path_graph(4), (2, 1))


def test_default_theorem2_family():
    assert default_theorem2_family(6) == [(2, 2, 2)]
    assert default_theorem2_family(7) == [(2, 2, 2, 1), (3, 2, 2)]


def test_theorem2_certificate():
    assert theorem2_certificate(star_graph(3))
    # n=5 instance of the alpha condition: ceil(5/2)+1 = 4, realized by K_{1,4}
    k14 = star_graph(4)
    assert alpha_condition_holds(k14)
    assert theorem2_certificate(k14)
    assert not connected_partition_exists(k14, (2, 2, 1))
    assert not connected_partition_exists(k14, (3, 2))
    with pytest.raises(ValidationError):
        theorem2_certificate(path_graph(4))  # alpha = 2, precondition fails


def brute_count_claws(g):
    total = 0
    for quad in combinations(range(g.n), 4):
        for center in quad:
            leaves = [v for v in quad if v != center]
            if all(g.has_edge(center, leaf) for leaf in leaves) and all(
                not g.has_edge(u, v) for u, v in combinations(leaves, 2)
            ):
                total += 1
    return total


def test_count_claws():
    assert count_claws(star_graph(3)) == 1
    assert count_claws(complete_graph(4)) == 0
    assert count_claws(star_graph(4)) == 4
    for n in range(2, 7):
        for g in enumerate_connected_graphs(n):
            assert count_claws(g) == brute_count_claws(g)


def test_count_claws_zero_for_max_degree_two():
    for g in [path_graph(6), cycle_graph(7), complete_graph(3)]:
        if max(g.degrees()) <= 2:
            assert count_claws(g) == 0


def brute_is_claw_contractible(g):
    """Oracle: search all assignments into 4 blocks, quotient must be K_{1,3}."""
    from epos.graphs import canonical_certificate, quotient

    claw_cert = canonical_certificate(star_graph(3))
    for assignment in product(range(4), repeat=g.n):
        if len(set(assignment)) != 4:
            continue
        blocks = [[v for v in range(g.n) if assignment[v] == b] for b in range(4)]
        sub_connected = True
        for block in blocks:
            mask = 0
            for v in block:
                mask |= 1 << v
            reach = 1 << block[0]
            frontier = reach
            while frontier:
                nxt = 0
                for v in range(g.n):
                    if (frontier >> v) & 1:
                        nxt |= g.adj[v]
                frontier = nxt & mask & ~reach
                reach |= frontier
            if reach != mask:
                sub_connected = False
                break
        if not sub_connected:
            continue
        if canonical_certificate(quotient(g, blocks)) == claw_cert:
            return True
    return False


def test_is_claw_contractible_examples():
    assert is_claw_contractible(star_graph(3))
    assert not is_claw_contractible(complete_graph(4))
    spider = from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)])
    assert is_claw_contractible(spider)
    net = from_edges(6, [(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)])
    assert is_claw_contractible(net)


def test_is_claw_contractible_bruteforce():
    for n in range(4, 7):
        for g in enumerate_connected_graphs(n):
            assert is_claw_contractible(g) == brute_is_claw_contractible(g)


def test_is_claw_contractible_rejects_small():
    with pytest.raises(ValidationError):
        is_claw_contractible(path_graph(3))
