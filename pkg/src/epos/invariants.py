"""The 44-invariant feature catalog used as model input, spanning topological,
combinatorial, and spectral axes, plus the small-matrix Jacobi eigensolver
behind the spectral entries.

The catalog is versioned (see SCHEMA_VERSION); feature order is fixed and the
dataset CSV column order follows it. Degree standard deviation uses the
population convention (divide by n). Ratios with zero denominators (clustering,
assortativity, transitivity, density at n=1) are defined as 0 so vectors stay
finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import certificates
from .errors import ValidationError
from .graphs import Graph, _bits, complement, is_connected

__all__ = [
    "SCHEMA_VERSION",
    "FeatureCatalog",
    "feature_schema",
    "compute_features",
    "eigenvalues_symmetric",
]

SCHEMA_VERSION = "epos-44-v1"

DISCRETE = "discrete"
CONTINUOUS = "continuous"

_CATALOG: tuple[tuple[str, str], ...] = (
    ("n_vertices", DISCRETE),
    ("n_edges", DISCRETE),
    ("density", CONTINUOUS),
    ("min_degree", DISCRETE),
    ("max_degree", DISCRETE),
    ("degree_std", CONTINUOUS),
    ("diameter", DISCRETE),
    ("radius", DISCRETE),
    ("avg_shortest_path", CONTINUOUS),
    ("wiener_index", DISCRETE),
    ("girth", DISCRETE),
    ("triangle_count", DISCRETE),
    ("num_claws", DISCRETE),
    ("count_C4", DISCRETE),
    ("count_P3_paths", DISCRETE),
    ("independence_number", DISCRETE),
    ("clique_number", DISCRETE),
    ("chromatic_number", DISCRETE),
    ("clique_cover_number", DISCRETE),
    ("matching_number", DISCRETE),
    ("domination_number", DISCRETE),
    ("vertex_connectivity", DISCRETE),
    ("edge_connectivity", DISCRETE),
    ("num_cut_vertices", DISCRETE),
    ("num_bridges", DISCRETE),
    ("num_leaves", DISCRETE),
    ("max_core_number", DISCRETE),
    ("num_maximal_cliques", DISCRETE),
    ("is_regular", DISCRETE),
    ("is_bipartite", DISCRETE),
    ("complement_triangle_count", DISCRETE),
    ("transitivity", CONTINUOUS),
    ("avg_clustering", CONTINUOUS),
    ("degree_assortativity", CONTINUOUS),
    ("mean_betweenness", CONTINUOUS),
    ("mean_closeness", CONTINUOUS),
    ("spectral_radius", CONTINUOUS),
    ("second_adj_eigenvalue", CONTINUOUS),
    ("smallest_adj_eigenvalue", CONTINUOUS),
    ("graph_energy", CONTINUOUS),
    ("algebraic_connectivity", CONTINUOUS),
    ("laplacian_spectral_radius", CONTINUOUS),
    ("laplacian_energy", CONTINUOUS),
    ("log_spanning_tree_count", CONTINUOUS),
)


@dataclass(frozen=True)
class FeatureCatalog:
    version: str
    entries: tuple[tuple[str, str], ...]

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.entries]

    def kind(self, name: str) -> str:
        for entry_name, kind in self.entries:
            if entry_name == name:
                return kind
        raise KeyError(name)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __len__(self) -> int:
        return len(self.entries)


def feature_schema() -> FeatureCatalog:
    return FeatureCatalog(SCHEMA_VERSION, _CATALOG)


# ---------------------------------------------------------------------------
# Jacobi eigensolver
# ---------------------------------------------------------------------------

def eigenvalues_symmetric(matrix, tol: float = 1e-12, max_sweeps: int = 60) -> list[float]:
    """All eigenvalues of a small symmetric matrix via cyclic Jacobi rotations,
    sorted descending. Stops once the off-diagonal Frobenius norm drops below tol."""
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValidationError("eigenvalues_symmetric expects a square matrix")
    if n == 1:
        return [float(a[0, 0])]
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float((a * a).sum() - (np.diag(a) ** 2).sum())))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol / (n * n):
                    continue
                app, aqq = a[p, p], a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                col_p = c * a[:, p] - s * a[:, q]
                col_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
                a[p, q] = a[q, p] = 0.0
    return sorted((float(x) for x in np.diag(a)), reverse=True)


# ---------------------------------------------------------------------------
# Structural helpers (all exact, n <= 11)
# ---------------------------------------------------------------------------

def _bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for u in _bits(g.adj[v]):
                if dist[u] < 0:
                    dist[u] = d
                    nxt.append(u)
        frontier = nxt
    return dist


def _triangle_count(g: Graph) -> int:
    total = 0
    for u in range(g.n):
        for v in _bits(g.adj[u]):
            if v > u:
                total += (g.adj[u] & g.adj[v] & ~((1 << (v + 1)) - 1)).bit_count()
    return total


def _girth(g: Graph) -> int:
    """Shortest cycle length, 0 for forests: for every edge, the shortest
    alternative path between its endpoints closes the shortest cycle through it."""
    best = 0
    for u, v in g.edges():
        adj = list(g.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        dist = [-1] * g.n
        dist[u] = 0
        frontier = [u]
        while frontier and dist[v] < 0:
            nxt = []
            for w in frontier:
                for x in _bits(adj[w]):
                    if dist[x] < 0:
                        dist[x] = dist[w] + 1
                        nxt.append(x)
            frontier = nxt
        if dist[v] >= 0:
            cycle = dist[v] + 1
            if best == 0 or cycle < best:
                best = cycle
    return best


def _count_c4(g: Graph) -> int:
    """4-cycles as subgraphs: half the sum over vertex pairs of C(codegree, 2)."""
    total = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            co = (g.adj[u] & g.adj[v]).bit_count()
            total += co * (co - 1) // 2
    return total // 2


def _num_claws_by_subsets(g: Graph) -> int:
    """Induced K_{1,3} count by scanning 4-subsets (independent of the
    certificates-module neighborhood route)."""
    total = 0
    for quad in combinations(range(g.n), 4):
        for center in quad:
            leaves = [x for x in quad if x != center]
            if all((g.adj[center] >> leaf) & 1 for leaf in leaves) and not (
                g.has_edge(leaves[0], leaves[1])
                or g.has_edge(leaves[0], leaves[2])
                or g.has_edge(leaves[1], leaves[2])
            ):
                total += 1
    return total


def _chromatic_number(g: Graph) -> int:
    n = g.n
    if g.num_edges == 0:
        return 1
    order = sorted(range(n), key=lambda v: -g.adj[v].bit_count())

    def colorable(k: int) -> bool:
        colors = [-1] * n

        def rec(i: int) -> bool:
            if i == n:
                return True
            v = order[i]
            used = set()
            for u in _bits(g.adj[v]):
                if colors[u] >= 0:
                    used.add(colors[u])
            limit = min(k, max([colors[order[j]] for j in range(i)], default=-1) + 2)
            for c in range(limit):
                if c not in used:
                    colors[v] = c
                    if rec(i + 1):
                        return True
                    colors[v] = -1
            return False

        return rec(0)

    for k in range(2, n + 1):
        if colorable(k):
            return k
    return n


def _matching_number(g: Graph) -> int:
    memo: dict[int, int] = {0: 0}

    def rec(mask: int) -> int:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        low = mask & -mask
        v = low.bit_length() - 1
        best = rec(mask ^ low)  # leave v unmatched
        for u in _bits(g.adj[v] & mask & ~low):
            best = max(best, 1 + rec(mask & ~(low | (1 << u))))
        memo[mask] = best
        return best

    return rec((1 << g.n) - 1)


def _domination_number(g: Graph) -> int:
    closed = [g.adj[v] | (1 << v) for v in range(g.n)]
    full = (1 << g.n) - 1
    for size in range(1, g.n + 1):
        for subset in combinations(range(g.n), size):
            cover = 0
            for v in subset:
                cover |= closed[v]
            if cover == full:
                return size
    return g.n


def _mask_connected(adj, mask: int) -> bool:
    if mask == 0:
        return True
    seed = mask & -mask
    reach = seed
    frontier = seed
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        frontier = nxt & mask & ~reach
        reach |= frontier
    return reach == mask


def _vertex_connectivity(g: Graph) -> int:
    n = g.n
    if g.num_edges == n * (n - 1) // 2:
        return n - 1
    full = (1 << n) - 1
    for k in range(n - 1):
        for removed in combinations(range(n), k):
            mask = full
            for v in removed:
                mask &= ~(1 << v)
            if mask and not _mask_connected(g.adj, mask):
                return k
    return n - 1


def _edge_connectivity(g: Graph) -> int:
    """Minimum edge cut over all bipartitions (vertex 0 pinned to one side)."""
    n = g.n
    if not is_connected(g):
        return 0
    best = g.num_edges
    full = (1 << n) - 1
    for rest in range(1 << (n - 1)):
        side = (rest << 1) | 1
        other = full ^ side
        if other == 0:
            continue
        cut = 0
        for v in _bits(side):
            cut += (g.adj[v] & other).bit_count()
        best = min(best, cut)
    return best


def _num_cut_vertices(g: Graph) -> int:
    full = (1 << g.n) - 1
    count = 0
    for v in range(g.n):
        mask = full ^ (1 << v)
        if mask and not _mask_connected(g.adj, mask):
            count += 1
    return count


def _num_bridges(g: Graph) -> int:
    count = 0
    full = (1 << g.n) - 1
    for u, v in g.edges():
        adj = list(g.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        if not _mask_connected(tuple(adj), full):
            count += 1
    return count


def _max_core(g: Graph) -> int:
    degrees = g.degrees()
    alive = (1 << g.n) - 1
    best = 0
    for _ in range(g.n):
        live = [v for v in range(g.n) if (alive >> v) & 1]
        if not live:
            break
        v = min(live, key=lambda x: degrees[x])
        best = max(best, degrees[v])
        alive &= ~(1 << v)
        for u in _bits(g.adj[v]):
            if (alive >> u) & 1:
                degrees[u] -= 1
    return best


def _count_maximal_cliques(g: Graph) -> int:
    count = 0

    def bron_kerbosch(r: int, p: int, x: int) -> None:
        nonlocal count
        if p == 0 and x == 0:
            count += 1
            return
        pivot_pool = p | x
        pivot = (pivot_pool & -pivot_pool).bit_length() - 1
        best_cover = -1
        for u in _bits(pivot_pool):
            cover = (p & g.adj[u]).bit_count()
            if cover > best_cover:
                best_cover, pivot = cover, u
        for v in _bits(p & ~g.adj[pivot]):
            bit = 1 << v
            bron_kerbosch(r | bit, p & g.adj[v], x & g.adj[v])
            p &= ~bit
            x |= bit

    bron_kerbosch(0, (1 << g.n) - 1, 0)
    return count


def _is_bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in _bits(g.adj[v]):
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def _betweenness_values(g: Graph) -> list[float]:
    """Brandes' algorithm for unweighted graphs, normalized by 2/((n-1)(n-2))."""
    n = g.n
    bc = [0.0] * n
    if n < 3:
        return bc
    for s in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0.0] * n
        sigma[s] = 1.0
        dist = [-1] * n
        dist[s] = 0
        queue = [s]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            stack.append(v)
            for w in _bits(g.adj[v]):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
        # each unordered pair counted from both endpoints; normalize below
    scale = 1.0 / ((n - 1) * (n - 2))
    return [x * scale for x in bc]


def _assortativity(g: Graph) -> float:
    deg = g.degrees()
    xs: list[float] = []
    ys: list[float] = []
    for u, v in g.edges():
        xs.extend([deg[u], deg[v]])
        ys.extend([deg[v], deg[u]])
    if not xs:
        return 0.0
    x = np.array(xs, dtype=float)
    y = np.array(ys, dtype=float)
    sx = x.std()
    sy = y.std()
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


# ---------------------------------------------------------------------------
# Feature vector
# ---------------------------------------------------------------------------

def compute_features(g: Graph) -> np.ndarray:
    """Feature vector in catalog order for a connected graph with n <= 11."""
    if g.n > 11:
        raise ValidationError(f"featurization supports n <= 11, got {g.n}")
    if not is_connected(g):
        raise ValidationError("featurization needs a connected graph (distances undefined)")
    n = g.n
    m = g.num_edges
    deg = g.degrees()
    mean_deg = 2.0 * m / n

    dists = [_bfs_distances(g, v) for v in range(n)]
    ecc = [max(row) for row in dists]
    pair_dists = [dists[u][v] for u in range(n) for v in range(u + 1, n)]

    triangles = _triangle_count(g)
    p3_paths = sum(d * (d - 1) // 2 for d in deg)
    alpha = certificates.independence_number(g)
    omega = certificates.independence_number(complement(g))
    chi = _chromatic_number(g)

    clustering = []
    for v in range(n):
        d = deg[v]
        if d < 2:
            clustering.append(0.0)
            continue
        links = 0
        nbrs = list(_bits(g.adj[v]))
        for i, u in enumerate(nbrs):
            for w in nbrs[i + 1 :]:
                if g.has_edge(u, w):
                    links += 1
        clustering.append(2.0 * links / (d * (d - 1)))

    adj_matrix = np.zeros((n, n))
    for v in range(n):
        for u in _bits(g.adj[v]):
            adj_matrix[v, u] = 1.0
    adj_eigs = eigenvalues_symmetric(adj_matrix)
    lap_matrix = np.diag([float(d) for d in deg]) - adj_matrix
    lap_eigs = eigenvalues_symmetric(lap_matrix)

    if n >= 2:
        # connected: exactly one zero Laplacian eigenvalue (the last after sorting)
        log_trees = sum(math.log(x) for x in lap_eigs[: n - 1]) - math.log(n)
    else:
        log_trees = 0.0

    values = {
        "n_vertices": float(n),
        "n_edges": float(m),
        "density": (2.0 * m / (n * (n - 1))) if n > 1 else 0.0,
        "min_degree": float(min(deg)),
        "max_degree": float(max(deg)),
        "degree_std": float(math.sqrt(sum((d - mean_deg) ** 2 for d in deg) / n)),
        "diameter": float(max(ecc)),
        "radius": float(min(ecc)),
        "avg_shortest_path": (sum(pair_dists) / len(pair_dists)) if pair_dists else 0.0,
        "wiener_index": float(sum(pair_dists)),
        "girth": float(_girth(g)),
        "triangle_count": float(triangles),
        "num_claws": float(_num_claws_by_subsets(g)),
        "count_C4": float(_count_c4(g)),
        "count_P3_paths": float(p3_paths),
        "independence_number": float(alpha),
        "clique_number": float(omega),
        "chromatic_number": float(chi),
        "clique_cover_number": float(_chromatic_number(complement(g))),
        "matching_number": float(_matching_number(g)),
        "domination_number": float(_domination_number(g)),
        "vertex_connectivity": float(_vertex_connectivity(g)),
        "edge_connectivity": float(_edge_connectivity(g)),
        "num_cut_vertices": float(_num_cut_vertices(g)),
        "num_bridges": float(_num_bridges(g)),
        "num_leaves": float(sum(1 for d in deg if d == 1)),
        "max_core_number": float(_max_core(g)),
        "num_maximal_cliques": float(_count_maximal_cliques(g)),
        "is_regular": 1.0 if min(deg) == max(deg) else 0.0,
        "is_bipartite": 1.0 if _is_bipartite(g) else 0.0,
        "complement_triangle_count": float(_triangle_count(complement(g))),
        "transitivity": (3.0 * triangles / p3_paths) if p3_paths else 0.0,
        "avg_clustering": float(sum(clustering) / n),
        "degree_assortativity": _assortativity(g),
        "mean_betweenness": float(sum(_betweenness_values(g)) / n),
        "mean_closeness": float(
            sum((n - 1) / sum(row[u] for u in range(n) if u != v) for v, row in enumerate(dists))
            / n
        )
        if n > 1
        else 0.0,
        "spectral_radius": float(max(abs(adj_eigs[0]), abs(adj_eigs[-1]))),
        "second_adj_eigenvalue": float(adj_eigs[1]) if n > 1 else 0.0,
        "smallest_adj_eigenvalue": float(adj_eigs[-1]),
        "graph_energy": float(sum(abs(x) for x in adj_eigs)),
        "algebraic_connectivity": float(lap_eigs[-2]) if n > 1 else 0.0,
        "laplacian_spectral_radius": float(lap_eigs[0]),
        "laplacian_energy": float(sum(abs(x - mean_deg) for x in lap_eigs)),
        "log_spanning_tree_count": float(log_trees),
    }
    schema = feature_schema()
    vector = np.array([values[name] for name in schema.names], dtype=float)
    if not np.all(np.isfinite(vector)):
        bad = [schema.names[i] for i in range(len(vector)) if not np.isfinite(vector[i])]
        raise ValidationError(f"non-finite feature values: {bad}")
    return vector
