"""Exact chromatic symmetric functions of small graphs and the e-positivity label.

The monomial expansion is assembled from stable partitions (partitions of the
vertex set into independent sets): the coefficient of m_lam is the number of
stable partitions whose block sizes sort to lam, times the product of
factorials of the part-size multiplicities of lam. Conversion to the
elementary basis is exact, so e-positivity is a sharp yes/no.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial

from .errors import ValidationError
from .graphs import Graph, encode_graph6
from .symfunc import MAX_DEGREE, SymFunc, e_eval_ones, m_to_e

__all__ = [
    "stable_partitions",
    "stable_type_counts",
    "csf_m",
    "csf_e",
    "is_e_positive",
    "chromatic_count_brute",
    "chromatic_count_via_e",
    "LabelRow",
    "label_graph",
]


def _require_small(g: Graph) -> None:
    if g.n > MAX_DEGREE:
        raise ValidationError(f"chromatic symmetric functions support n <= {MAX_DEGREE}, got {g.n}")


def stable_partitions(g: Graph):
    """Yield every partition of the vertex set into independent sets, once each,
    as a list of vertex bitmasks ordered by minimal element."""
    _require_small(g)
    n, adj = g.n, g.adj
    blocks: list[int] = []

    def rec(v: int):
        if v == n:
            yield list(blocks)
            return
        bit = 1 << v
        av = adj[v]
        for i, mask in enumerate(blocks):
            if not (mask & av):
                blocks[i] = mask | bit
                yield from rec(v + 1)
                blocks[i] = mask
        blocks.append(bit)
        yield from rec(v + 1)
        blocks.pop()

    yield from rec(0)


def stable_type_counts(g: Graph) -> dict[tuple[int, ...], int]:
    """Number of stable partitions per block-size type (sorted descending)."""
    _require_small(g)
    n, adj = g.n, g.adj
    counts: dict[tuple[int, ...], int] = {}
    blocks: list[int] = []

    def rec(v: int) -> None:
        if v == n:
            key = tuple(sorted((m.bit_count() for m in blocks), reverse=True))
            counts[key] = counts.get(key, 0) + 1
            return
        bit = 1 << v
        av = adj[v]
        for i in range(len(blocks)):
            mask = blocks[i]
            if not (mask & av):
                blocks[i] = mask | bit
                rec(v + 1)
                blocks[i] = mask
        blocks.append(bit)
        rec(v + 1)
        blocks.pop()

    rec(0)
    return counts


def csf_m(g: Graph) -> SymFunc:
    """Monomial-basis expansion of the chromatic symmetric function of g."""
    coeffs: dict[tuple[int, ...], int] = {}
    for lam, count in stable_type_counts(g).items():
        mults: dict[int, int] = {}
        for part in lam:
            mults[part] = mults.get(part, 0) + 1
        factor = 1
        for m in mults.values():
            factor *= factorial(m)
        coeffs[lam] = count * factor
    return SymFunc(g.n, "m", coeffs)


def csf_e(g: Graph) -> SymFunc:
    """Elementary-basis expansion (exact integers, possibly negative)."""
    return m_to_e(csf_m(g))


def is_e_positive(g: Graph) -> bool:
    return csf_e(g).is_nonnegative()


def chromatic_count_brute(g: Graph, k: int) -> int:
    """Proper colorings with colors 1..k by direct enumeration of all k^n maps."""
    if k > 4 or g.n > 8:
        raise ValidationError("brute-force coloring oracle is limited to k <= 4, n <= 8")
    if k < 0:
        raise ValidationError("k must be nonnegative")
    edges = g.edges()
    count = 0
    for coloring in product(range(k), repeat=g.n):
        if all(coloring[u] != coloring[v] for u, v in edges):
            count += 1
    return count


def chromatic_count_via_e(g: Graph, k: int) -> int:
    """Proper-coloring count recovered by specializing the e-expansion at k ones."""
    e = csf_e(g)
    return sum(c * e_eval_ones(lam, k) for lam, c in e.coeffs.items())


@dataclass(frozen=True)
class LabelRow:
    """One line of the label file: the e-positivity verdict plus a witness of
    negativity (a most-negative partition) when there is one."""

    graph6: str
    e_positive: bool
    min_e_coeff: int
    witness_partition: tuple[int, ...] | None

    def to_csv_fields(self) -> list[str]:
        witness = (
            ";".join(str(p) for p in self.witness_partition)
            if self.witness_partition is not None
            else ""
        )
        return [self.graph6, str(int(self.e_positive)), str(self.min_e_coeff), witness]


def label_graph(g: Graph, graph6: str | None = None) -> LabelRow:
    e = csf_e(g)
    positive = e.is_nonnegative()
    min_c, min_lam = e.min_coeff()
    return LabelRow(
        graph6=graph6 if graph6 is not None else encode_graph6(g),
        e_positive=positive,
        min_e_coeff=min_c,
        witness_partition=None if positive else min_lam,
    )
