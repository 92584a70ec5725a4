"""Small simple graphs: bitmask representation, graph6 codec, canonical forms,
and exhaustive enumeration of connected graphs up to isomorphism.

Vertices are labeled 0..n-1 and adjacency is stored as one neighbor bitmask
per vertex, which keeps every structural query a couple of integer ops at the
sizes handled here (n <= 11 for the exact pipeline, n <= 62 for the codec).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import Graph6Error, ValidationError

__all__ = [
    "Graph",
    "from_edges",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "relabel",
    "parse_graph6",
    "encode_graph6",
    "canonical_certificate",
    "canonical_form",
    "automorphism_generators",
    "enumerate_connected_graphs",
    "count_connected_classes",
    "is_connected",
    "complement",
    "quotient",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with per-vertex neighbor bitmasks."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= 62:
            raise ValidationError(f"vertex count {self.n} outside supported range 1..62")
        if len(self.adj) != self.n:
            raise ValidationError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for v, mask in enumerate(self.adj):
            if mask & ~full:
                raise ValidationError(f"vertex {v} has neighbors outside 0..{self.n - 1}")
            if (mask >> v) & 1:
                raise ValidationError(f"self-loop at vertex {v}")
        for v in range(self.n):
            for u in _bits(self.adj[v]):
                if not (self.adj[u] >> v) & 1:
                    raise ValidationError(f"adjacency not symmetric at ({v}, {u})")

    @property
    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u]) if u < v]

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.adj]


def _bits(mask: int):
    """Iterate set-bit indices of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def from_edges(n: int, edges) -> Graph:
    adj = [0] * n
    for u, v in edges:
        if u == v:
            raise ValidationError(f"self-loop at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def path_graph(n: int) -> Graph:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at vertex 0."""
    return from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def relabel(g: Graph, perm) -> Graph:
    """Image of g under the permutation old-label -> perm[old-label]."""
    adj = [0] * g.n
    for v in range(g.n):
        m = 0
        for u in _bits(g.adj[v]):
            m |= 1 << perm[u]
        adj[perm[v]] = m
    return Graph(g.n, tuple(adj))


def is_connected(g: Graph) -> bool:
    full = (1 << g.n) - 1
    reach = 1
    frontier = 1
    adj = g.adj
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~reach
        reach |= frontier
    return reach == full


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple((full ^ g.adj[v]) & ~(1 << v) for v in range(g.n)))


def quotient(g: Graph, blocks) -> Graph:
    """Contract each block to one vertex; block images adjacent iff a cross edge exists."""
    masks = []
    for block in blocks:
        m = 0
        for v in block:
            if not 0 <= v < g.n:
                raise ValidationError(f"block vertex {v} outside 0..{g.n - 1}")
            m |= 1 << v
        if m == 0:
            raise ValidationError("empty block in quotient partition")
        masks.append(m)
    union = 0
    for m in masks:
        if union & m:
            raise ValidationError("quotient blocks overlap")
        union |= m
    if union != (1 << g.n) - 1:
        raise ValidationError("quotient blocks do not cover the vertex set")
    k = len(masks)
    adj = [0] * k
    for a in range(k):
        nbrs = 0
        for v in _bits(masks[a]):
            nbrs |= g.adj[v]
        for b in range(k):
            if b != a and nbrs & masks[b]:
                adj[a] |= 1 << b
    return Graph(k, tuple(adj))


# ---------------------------------------------------------------------------
# graph6 codec (short form, n <= 62)
# ---------------------------------------------------------------------------

def encode_graph6(g: Graph) -> str:
    n = g.n
    chars = [chr(63 + n)]
    acc = 0
    nbits = 0
    for j in range(1, n):
        col = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | ((col >> i) & 1)
            nbits += 1
            if nbits == 6:
                chars.append(chr(63 + acc))
                acc = 0
                nbits = 0
    if nbits:
        chars.append(chr(63 + (acc << (6 - nbits))))
    return "".join(chars)


def parse_graph6(line: str) -> Graph:
    s = line.rstrip("\n").rstrip("\r")
    if not s:
        raise Graph6Error("empty graph6 line")
    for off, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {off}: value {ord(ch)} outside graph6 range 63..126")
    n = ord(s[0]) - 63
    if n == 0:
        raise Graph6Error("byte 0: zero-vertex graphs are not supported")
    nbits = n * (n - 1) // 2
    need = 1 + (nbits + 5) // 6
    if len(s) != need:
        raise Graph6Error(
            f"byte {len(s)}: expected {need} bytes for n={n}, got {len(s)}"
        )
    adj = [0] * n
    idx = 0
    pairs = [(i, j) for j in range(1, n) for i in range(j)]
    for off in range(1, len(s)):
        group = ord(s[off]) - 63
        for bitpos in range(5, -1, -1):
            bit = (group >> bitpos) & 1
            if idx < nbits:
                if bit:
                    i, j = pairs[idx]
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
                idx += 1
            elif bit:
                raise Graph6Error(f"byte {off}: nonzero padding bit")
    return Graph(n, tuple(adj))


# ---------------------------------------------------------------------------
# Canonical labeling
# ---------------------------------------------------------------------------

def _refine_cells(n: int, adj: tuple[int, ...]) -> list[list[int]]:
    """Iterated neighbor-color refinement; cells come back in a canonical order."""
    colors = [0] * n
    ncolors = 1
    while True:
        sigs = []
        for v in range(n):
            nbr = tuple(sorted(colors[u] for u in _bits(adj[v])))
            sigs.append((colors[v], nbr))
        table = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        colors = [table[sig] for sig in sigs]
        if len(table) == ncolors:
            break
        ncolors = len(table)
    cells: list[list[int]] = [[] for _ in range(ncolors)]
    for v in range(n):
        cells[colors[v]].append(v)
    return cells


def _search_min_order(n: int, adj: tuple[int, ...], cells: list[list[int]]):
    """Lexicographically minimal placement order over cell-respecting orderings.

    Returns (order, gens) where gens are automorphisms discovered whenever two
    complete orderings produce identical adjacency encodings; they drive orbit
    pruning, which is what keeps highly symmetric graphs (K_n, C_n, ...) cheap.
    """
    INF = 1 << 62
    best_cols = [INF] * n
    best_order = [0] * n
    order = [0] * n
    state = {"have_best": False, "placed": 0}
    gens: list[tuple[int, ...]] = []

    pos_cell: list[int] = []
    for ci, cell in enumerate(cells):
        pos_cell.extend([ci] * len(cell))

    def orbit_equiv(v: int, tried: list[int], depth: int) -> bool:
        if not tried or not gens:
            return False
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        prefix = order[:depth]
        for sigma in gens:
            if all(sigma[p] == p for p in prefix):
                for x in range(n):
                    rx, ry = find(x), find(sigma[x])
                    if rx != ry:
                        parent[rx] = ry
        rv = find(v)
        return any(find(u) == rv for u in tried)

    def rec(i: int) -> None:
        if i == n:
            if state["have_best"]:
                sigma = [0] * n
                for j in range(n):
                    sigma[best_order[j]] = order[j]
                sigma_t = tuple(sigma)
                if sigma_t not in gens and any(sigma[x] != x for x in range(n)):
                    gens.append(sigma_t)
            else:
                best_order[:] = order
                state["have_best"] = True
            return
        cell = cells[pos_cell[i]]
        placed = state["placed"]
        cands = []
        for v in cell:
            if (placed >> v) & 1:
                continue
            col = 0
            av = adj[v]
            for k in range(i):
                col = (col << 1) | ((av >> order[k]) & 1)
            cands.append((col, v))
        cands.sort()
        tried: list[int] = []
        for col, v in cands:
            if col > best_cols[i]:
                break
            if orbit_equiv(v, tried, i):
                continue
            tried.append(v)
            if col < best_cols[i]:
                best_cols[i] = col
                for j in range(i + 1, n):
                    best_cols[j] = INF
                state["have_best"] = False
            order[i] = v
            state["placed"] = placed | (1 << v)
            rec(i + 1)
            state["placed"] = placed
        return

    rec(0)
    return best_order, gens


def _canonicalize(g: Graph) -> tuple[str, Graph, list[tuple[int, ...]]]:
    """Returns (certificate string, canonical form, automorphism generators).

    Generators are conjugated into the canonical labeling, i.e. they are
    automorphisms of the returned canonical graph.
    """
    if g.n > 11:
        raise ValidationError(f"canonical labeling supports n <= 11, got {g.n}")
    if g.n == 1:
        return encode_graph6(g), g, []
    cells = _refine_cells(g.n, g.adj)
    order, gens = _search_min_order(g.n, g.adj, cells)
    perm = [0] * g.n
    for new, old in enumerate(order):
        perm[old] = new
    canon = relabel(g, perm)
    canon_gens = [
        tuple(perm[sigma[order[x]]] for x in range(g.n)) for sigma in gens
    ]
    return encode_graph6(canon), canon, canon_gens


def canonical_certificate(g: Graph) -> bytes:
    """Permutation-invariant certificate; equal certificates iff isomorphic graphs.

    The certificate is the graph6 encoding of the lexicographically minimal
    adjacency labeling, so it doubles as a canonical form.
    """
    return _canonicalize(g)[0].encode("ascii")


def canonical_form(g: Graph) -> Graph:
    return _canonicalize(g)[1]


def automorphism_generators(g: Graph) -> list[tuple[int, ...]]:
    """Automorphisms of g discovered during canonicalization (a generating subset
    in practice, but callers must only rely on every element being an automorphism)."""
    if g.n == 1:
        return []
    cells = _refine_cells(g.n, g.adj)
    _, gens = _search_min_order(g.n, g.adj, cells)
    return gens


def _pair_orbit_reps(n: int, pairs: list[tuple[int, int]], gens) -> list[tuple[int, int]]:
    """One representative per orbit of the given vertex pairs under gens."""
    if not gens:
        return pairs
    index = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sigma in gens:
        for i, (u, v) in enumerate(pairs):
            a, b = sigma[u], sigma[v]
            if a > b:
                a, b = b, a
            j = index.get((a, b))
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    reps = []
    seen = set()
    for i, p in enumerate(pairs):
        r = find(i)
        if r not in seen:
            seen.add(r)
            reps.append(p)
    return reps


@lru_cache(maxsize=4)
def _connected_classes(n: int) -> tuple[Graph, ...]:
    """All connected graphs on n vertices up to isomorphism, certificate-sorted.

    Edge augmentation: starting from the empty graph, add one edge at a time and
    deduplicate by canonical certificate at each edge count. Disconnected classes
    are kept as intermediates and filtered at the end.
    """
    empty = Graph(n, (0,) * n)
    cert0, canon0, gens0 = _canonicalize(empty)
    current: dict[str, tuple[Graph, list[tuple[int, ...]]]] = {cert0: (canon0, gens0)}
    all_classes: dict[str, Graph] = {cert0: canon0}
    max_edges = n * (n - 1) // 2
    for _ in range(max_edges):
        nxt: dict[str, tuple[Graph, list[tuple[int, ...]]]] = {}
        for g, gens in current.values():
            non_edges = [
                (u, v)
                for u in range(n)
                for v in range(u + 1, n)
                if not (g.adj[u] >> v) & 1
            ]
            for u, v in _pair_orbit_reps(n, non_edges, gens):
                adj = list(g.adj)
                adj[u] |= 1 << v
                adj[v] |= 1 << u
                h = Graph(n, tuple(adj))
                cert, canon, hgens = _canonicalize(h)
                if cert not in nxt:
                    nxt[cert] = (canon, hgens)
        current = nxt
        for cert, (canon, _) in nxt.items():
            all_classes[cert] = canon
    connected = [g for cert, g in sorted(all_classes.items()) if is_connected(g)]
    return tuple(connected)


def enumerate_connected_graphs(n: int):
    """Yield one canonical representative per isomorphism class of connected
    graphs on n vertices, sorted by certificate."""
    if not 1 <= n <= 9:
        raise ValidationError(
            f"built-in enumeration supports 1 <= n <= 9 (got {n}); ingest graph6 files for larger n"
        )
    yield from _connected_classes(n)


def count_connected_classes(n: int) -> int:
    return len(_connected_classes(n))
