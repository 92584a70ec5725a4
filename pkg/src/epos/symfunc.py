"""Integer partitions and exact basis conversion for homogeneous symmetric
functions of degree n <= 11, between the monomial and elementary bases.

All coefficients are exact Python integers. The elementary-to-monomial
transition matrix entry for (lam, mu) counts 0-1 matrices with row sums lam
and column sums mu, computed by a column-by-column dynamic program; the
inverse direction is a unitriangular back-substitution after conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .errors import InternalConsistencyError, ValidationError

__all__ = [
    "MAX_DEGREE",
    "partitions_of",
    "conjugate",
    "dominates",
    "TransitionMatrix",
    "e_to_m_matrix",
    "SymFunc",
    "m_to_e",
    "e_eval_ones",
]

MAX_DEGREE = 11

Partition = tuple[int, ...]


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse-lexicographic order: (n) first, (1,...,1) last."""
    if not 0 <= n <= MAX_DEGREE:
        raise ValidationError(f"partition degree {n} outside 0..{MAX_DEGREE}")
    result: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            result.append(prefix)
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return tuple(result)


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


def dominates(lam: Partition, mu: Partition) -> bool:
    """True iff lam dominates mu (prefix sums of lam >= prefix sums of mu)."""
    acc_l = acc_m = 0
    for i in range(max(len(lam), len(mu))):
        acc_l += lam[i] if i < len(lam) else 0
        acc_m += mu[i] if i < len(mu) else 0
        if acc_l < acc_m:
            return False
    return True


def _group_counts(state: Partition) -> list[tuple[int, int]]:
    groups: list[tuple[int, int]] = []
    for part in state:
        if groups and groups[-1][0] == part:
            groups[-1] = (part, groups[-1][1] + 1)
        else:
            groups.append((part, 1))
    return groups


@lru_cache(maxsize=None)
def _zero_one_matrix_count(rows: Partition, cols: Partition) -> int:
    """Number of 0-1 matrices with the given row and column sums."""
    if sum(rows) != sum(cols):
        return 0
    if not cols:
        return 1
    c = cols[0]
    rest = cols[1:]
    groups = _group_counts(rows)
    total = 0

    def pick(gi: int, need: int, ways: int, chosen: tuple[int, ...]) -> None:
        nonlocal total
        if need == 0:
            new_rows = []
            for (value, count), taken in zip(groups, chosen + (0,) * (len(groups) - len(chosen))):
                new_rows.extend([value] * (count - taken))
                if value > 1:
                    new_rows.extend([value - 1] * taken)
            new_state = tuple(sorted(new_rows, reverse=True))
            total += ways * _zero_one_matrix_count(new_state, rest)
            return
        if gi == len(groups):
            return
        value, count = groups[gi]
        for take in range(min(count, need) + 1):
            pick(gi + 1, need - take, ways * comb(count, take), chosen + (take,))

    pick(0, c, 1, ())
    return total


@dataclass(frozen=True)
class TransitionMatrix:
    """Expansion of e_lam over m_mu for all partitions of n, in canonical order."""

    n: int
    parts: tuple[Partition, ...]
    rows: tuple[tuple[int, ...], ...]

    def coeff(self, lam: Partition, mu: Partition) -> int:
        index = {p: i for i, p in enumerate(self.parts)}
        return self.rows[index[lam]][index[mu]]


@lru_cache(maxsize=None)
def e_to_m_matrix(n: int) -> TransitionMatrix:
    if not 1 <= n <= MAX_DEGREE:
        raise ValidationError(f"degree {n} outside 1..{MAX_DEGREE}")
    parts = partitions_of(n)
    rows = tuple(
        tuple(_zero_one_matrix_count(lam, mu) for mu in parts) for lam in parts
    )
    return TransitionMatrix(n, parts, rows)


@dataclass(frozen=True)
class SymFunc:
    """Homogeneous symmetric function of fixed degree in one basis, with exact
    integer coefficients keyed by partition. Zero coefficients are dropped."""

    degree: int
    basis: str
    coeffs: dict[Partition, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.basis not in ("m", "e"):
            raise ValidationError(f"unknown basis {self.basis!r}")
        if not 0 <= self.degree <= MAX_DEGREE:
            raise ValidationError(f"degree {self.degree} outside 0..{MAX_DEGREE}")
        cleaned = {}
        for lam, c in self.coeffs.items():
            lam = tuple(lam)
            if sum(lam) != self.degree or any(p < 1 for p in lam) or list(lam) != sorted(lam, reverse=True):
                raise ValidationError(f"{lam} is not a partition of {self.degree}")
            if c != 0:
                cleaned[lam] = int(c)
        object.__setattr__(self, "coeffs", cleaned)

    def coeff(self, lam) -> int:
        return self.coeffs.get(tuple(lam), 0)

    def min_coeff(self) -> tuple[int, Partition | None]:
        """Minimum coefficient over all partitions of the degree (absent = 0) and
        the first minimizing partition in canonical order."""
        best = None
        best_lam = None
        for lam in partitions_of(self.degree):
            c = self.coeffs.get(lam, 0)
            if best is None or c < best:
                best, best_lam = c, lam
        return (best if best is not None else 0), best_lam

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs.values())

    def to_json_obj(self) -> dict:
        ordered = [
            [list(lam), self.coeffs[lam]]
            for lam in partitions_of(self.degree)
            if lam in self.coeffs
        ]
        return {"degree": self.degree, "basis": self.basis, "coeffs": ordered}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SymFunc":
        coeffs = {tuple(lam): int(c) for lam, c in obj["coeffs"]}
        return cls(int(obj["degree"]), str(obj["basis"]), coeffs)


def m_to_e(f: SymFunc) -> SymFunc:
    """Exact change of basis from monomial to elementary coefficients.

    Solves a * M = f by back-substitution in dominance-ascending order, where
    M = e_to_m_matrix(degree) has unit pivots M[lam][conjugate(lam)]. The
    residual is recomputed and must vanish exactly.
    """
    if f.basis != "m":
        raise ValidationError("m_to_e expects a monomial-basis input")
    n = f.degree
    if n == 0:
        return SymFunc(0, "e", {(): f.coeff(())} if f.coeff(()) else {})
    matrix = e_to_m_matrix(n)
    parts = matrix.parts
    index = {p: i for i, p in enumerate(parts)}
    target = [f.coeff(lam) for lam in parts]
    a = [0] * len(parts)
    # reversed canonical order is dominance-ascending: every nu with a/=0 in the
    # pivot equation of lam satisfies nu dominated-by lam and is already solved.
    for i in reversed(range(len(parts))):
        lam = parts[i]
        pivot_col = index[conjugate(lam)]
        s = target[pivot_col]
        for j in range(i + 1, len(parts)):
            if a[j]:
                s -= a[j] * matrix.rows[j][pivot_col]
        pivot = matrix.rows[i][pivot_col]
        if pivot != 1:
            raise InternalConsistencyError(f"pivot for {lam} is {pivot}, expected 1")
        a[i] = s
    for col in range(len(parts)):
        residual = target[col] - sum(
            a[i] * matrix.rows[i][col] for i in range(len(parts)) if a[i]
        )
        if residual != 0:
            raise InternalConsistencyError(
                f"nonzero residual {residual} at {parts[col]} in m_to_e"
            )
    return SymFunc(n, "e", {parts[i]: a[i] for i in range(len(parts)) if a[i]})


def e_eval_ones(lam, k: int) -> int:
    """Value of e_lam with x_1..x_k = 1 and all other variables 0."""
    if k < 0:
        raise ValidationError("k must be nonnegative")
    result = 1
    for part in lam:
        result *= comb(k, part)
    return result
