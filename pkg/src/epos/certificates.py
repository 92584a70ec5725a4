"""Exact structural checkers: independence number, co-triangle-freeness, the
alpha = ceil(n/2)+1 condition, connected partitions of a prescribed shape,
claw counting, and claw-contractibility.

Everything here certifies finite data; nothing is approximated.
"""

from __future__ import annotations

from itertools import combinations

from .errors import InternalConsistencyError, ValidationError
from .graphs import Graph, _bits

__all__ = [
    "independence_number",
    "is_co_triangle_free",
    "alpha_condition_holds",
    "connected_partition_exists",
    "default_theorem2_family",
    "theorem2_certificate",
    "count_claws",
    "is_claw_contractible",
]


def independence_number(g: Graph) -> int:
    """Maximum independent set size by branch-and-bound over vertex inclusion."""
    adj = g.adj
    best = 0

    def rec(candidates: int, size: int) -> None:
        nonlocal best
        if size + candidates.bit_count() <= best:
            return
        if candidates == 0:
            best = max(best, size)
            return
        low = candidates & -candidates
        v = low.bit_length() - 1
        rec(candidates & ~(low | adj[v]), size + 1)
        rec(candidates ^ low, size)

    rec((1 << g.n) - 1, 0)
    return best


def _complement_has_triangle(g: Graph) -> bool:
    full = (1 << g.n) - 1
    comp = [(full ^ g.adj[v]) & ~(1 << v) for v in range(g.n)]
    for u in range(g.n):
        for v in _bits(comp[u]):
            if v > u and comp[u] & comp[v]:
                return True
    return False


def is_co_triangle_free(g: Graph) -> bool:
    """True iff the complement has no triangle. Computed both directly and as
    independence_number(g) <= 2; the two routes must agree."""
    direct = not _complement_has_triangle(g)
    via_alpha = independence_number(g) <= 2
    if direct != via_alpha:
        raise InternalConsistencyError(
            "co-triangle-free routes disagree: complement scan vs independence number"
        )
    return direct


def alpha_condition_holds(g: Graph) -> bool:
    """True iff the independence number equals ceil(n/2) + 1."""
    return independence_number(g) == (g.n + 1) // 2 + 1


def _connected_subsets_with(adj, allowed: int, v: int, size: int):
    """Connected vertex sets of the given size containing v inside allowed,
    each yielded exactly once (canonical frontier-expansion enumeration)."""
    start = 1 << v

    def grow(current: int, frontier: int, banned: int):
        if current.bit_count() == size:
            yield current
            return
        ext = frontier & ~banned
        newly_banned = banned
        for u in _bits(ext):
            bit = 1 << u
            newly_banned |= bit
            new_frontier = (frontier | adj[u]) & allowed & ~ (current | bit)
            yield from grow(current | bit, new_frontier, newly_banned)

    if size == 0 or not (allowed >> v) & 1:
        return
    yield from grow(start, adj[v] & allowed & ~start, 0)


def connected_partition_exists(g: Graph, lam) -> bool:
    """True iff V(g) splits into blocks of sizes lam, each inducing a connected
    subgraph. Backtracking over the block containing the lowest unused vertex,
    memoized on (used-vertex mask, remaining sizes)."""
    lam = tuple(sorted(lam, reverse=True))
    if sum(lam) != g.n:
        raise ValidationError(f"partition weight {sum(lam)} != vertex count {g.n}")
    if any(p < 1 for p in lam):
        raise ValidationError("partition parts must be positive")
    adj = g.adj
    full = (1 << g.n) - 1
    memo: dict[tuple[int, tuple[int, ...]], bool] = {}

    def rec(used: int, remaining: tuple[int, ...]) -> bool:
        if used == full:
            return True
        key = (used, remaining)
        cached = memo.get(key)
        if cached is not None:
            return cached
        free = full & ~used
        v = (free & -free).bit_length() - 1
        result = False
        tried_sizes = set()
        for i, size in enumerate(remaining):
            if size in tried_sizes:
                continue
            tried_sizes.add(size)
            rest = remaining[:i] + remaining[i + 1 :]
            for block in _connected_subsets_with(adj, free, v, size):
                if rec(used | block, rest):
                    result = True
                    break
            if result:
                break
        memo[key] = result
        return result

    return rec(0, lam)


def default_theorem2_family(n: int) -> list[tuple[int, ...]]:
    """Witness shapes whose connected partitions must all fail: all parts 2 for
    even n; for odd n both readings of "all parts 2 except the last": last part
    1, and last part 3 (stated sorted decreasingly)."""
    if n < 2:
        raise ValidationError("witness family needs n >= 2")
    if n % 2 == 0:
        return [tuple([2] * (n // 2))]
    family = [tuple([2] * ((n - 1) // 2) + [1])]
    if n >= 3:
        family.append(tuple([3] + [2] * ((n - 3) // 2)))
    return family


def theorem2_certificate(g: Graph, family=None) -> bool:
    """For graphs with alpha = ceil(n/2)+1: certify that no connected partition
    of any witness shape exists (the combinatorial reason for e-negativity)."""
    if not alpha_condition_holds(g):
        raise ValidationError(
            "theorem2_certificate requires independence number ceil(n/2)+1"
        )
    shapes = default_theorem2_family(g.n) if family is None else [tuple(s) for s in family]
    return all(not connected_partition_exists(g, lam) for lam in shapes)


def count_claws(g: Graph) -> int:
    """Number of induced K_{1,3} subgraphs: independent 3-subsets inside a
    neighborhood, summed over centers."""
    total = 0
    for v in range(g.n):
        nbrs = list(_bits(g.adj[v]))
        for a, b, c in combinations(nbrs, 3):
            if not (g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c)):
                total += 1
    return total


def _components(adj, mask: int) -> list[int]:
    comps = []
    remaining = mask
    while remaining:
        seed = remaining & -remaining
        reach = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            frontier = nxt & mask & ~reach
            reach |= frontier
        comps.append(reach)
        remaining &= ~reach
    return comps


def is_claw_contractible(g: Graph) -> bool:
    """True iff V(g) partitions into four nonempty connected blocks whose
    quotient is exactly K_{1,3}.

    In such a partition the three leaf blocks are connected and pairwise
    non-adjacent, hence they are precisely the connected components of the
    graph minus the center block. So it suffices to scan center candidates:
    a connected proper subset C such that G - C has exactly three components,
    each adjacent to C.
    """
    if g.n < 4:
        raise ValidationError("claw-contractibility needs n >= 4")
    adj = g.adj
    full = (1 << g.n) - 1
    for center in range(1, full):
        rest = full ^ center
        if rest.bit_count() < 3:
            continue
        if len(_components(adj, center)) != 1:
            continue
        comps = _components(adj, rest)
        if len(comps) != 3:
            continue
        center_nbrs = 0
        for v in _bits(center):
            center_nbrs |= adj[v]
        if all(center_nbrs & comp for comp in comps):
            return True
    return False
