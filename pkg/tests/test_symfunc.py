import itertools
from math import comb, factorial

import pytest

from epos.errors import ValidationError
from epos.symfunc import (
    SymFunc,
    conjugate,
    dominates,
    e_eval_ones,
    e_to_m_matrix,
    m_to_e,
    partitions_of,
)


def brute_partition_count(n):
    """Independent partition counter: p(n) via the p(n, max part) recursion."""

    def p(n, k):
        if n == 0:
            return 1
        if k == 0:
            return 0
        return sum(p(n - j, min(j, n - j)) for j in range(1, k + 1))

    return p(n, n)


def expand_e_bruteforce(lam, nvars):
    """Monomial dict of e_lam in nvars variables by explicit polynomial products."""
    poly = {(0,) * nvars: 1}
    for part in lam:
        factor = {}
        for subset in itertools.combinations(range(nvars), part):
            expo = [0] * nvars
            for i in subset:
                expo[i] = 1
            factor[tuple(expo)] = 1
        new = {}
        for e1, c1 in poly.items():
            for e2, c2 in factor.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                new[key] = new.get(key, 0) + c1 * c2
        poly = new
    return poly


def monomial_type_coeff(poly, mu, nvars):
    expo = tuple(list(mu) + [0] * (nvars - len(mu)))
    return poly.get(expo, 0)


def m_eval_ones(mu, k):
    """Number of monomials of exponent type mu in k variables."""
    mults = {}
    for part in mu:
        mults[part] = mults.get(part, 0) + 1
    ell = len(mu)
    if ell > k:
        return 0
    ways = comb(k, ell) * factorial(ell)
    for m in mults.values():
        ways //= factorial(m)
    return ways


def test_partitions_trivial():
    assert partitions_of(0) == ((),)
    assert partitions_of(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))


def test_partition_counts_bruteforce():
    for n in range(12):
        assert len(partitions_of(n)) == brute_partition_count(n)
    assert len(partitions_of(11)) == 56


def test_partitions_rejects_out_of_range():
    with pytest.raises(ValidationError):
        partitions_of(12)


def test_conjugate():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate((2, 2)) == (2, 2)
    assert conjugate(()) == ()
    for n in range(8):
        for lam in partitions_of(n):
            assert conjugate(conjugate(lam)) == lam


def test_e_to_m_n2():
    m = e_to_m_matrix(2)
    assert m.coeff((2,), (1, 1)) == 1
    assert m.coeff((2,), (2,)) == 0
    assert m.coeff((1, 1), (2,)) == 1
    assert m.coeff((1, 1), (1, 1)) == 2


def test_e_to_m_n3_row_e111():
    m = e_to_m_matrix(3)
    assert m.coeff((1, 1, 1), (3,)) == 1
    assert m.coeff((1, 1, 1), (2, 1)) == 3
    assert m.coeff((1, 1, 1), (1, 1, 1)) == 6


def test_e_to_m_n4_row_e22():
    m = e_to_m_matrix(4)
    expected = {(2, 2): 1, (2, 1, 1): 2, (1, 1, 1, 1): 6}
    for mu in partitions_of(4):
        assert m.coeff((2, 2), mu) == expected.get(mu, 0)


def test_e_to_m_matches_polynomial_expansion():
    for n in range(1, 5):
        mat = e_to_m_matrix(n)
        for lam in partitions_of(n):
            poly = expand_e_bruteforce(lam, n)
            for mu in partitions_of(n):
                assert mat.coeff(lam, mu) == monomial_type_coeff(poly, mu, n)


def test_dominance_triangularity_and_unit_pivots():
    for n in range(1, 9):
        mat = e_to_m_matrix(n)
        parts = mat.parts
        for i, lam in enumerate(parts):
            lam_conj = conjugate(lam)
            assert mat.coeff(lam, lam_conj) == 1
            for j, mu in enumerate(parts):
                entry = mat.rows[i][j]
                assert entry >= 0
                if entry:
                    assert dominates(lam_conj, mu)


def test_every_monomial_reached():
    for n in range(1, 9):
        mat = e_to_m_matrix(n)
        for j in range(len(mat.parts)):
            assert sum(row[j] for row in mat.rows) > 0


def test_m_to_e_matrix_rows_roundtrip():
    for n in range(1, 12):
        mat = e_to_m_matrix(n)
        for i, lam in enumerate(mat.parts):
            f = SymFunc(n, "m", dict(zip(mat.parts, mat.rows[i])))
            g = m_to_e(f)
            assert g.coeffs == {lam: 1}


def test_m_to_e_examples():
    f = SymFunc(2, "m", {(1, 1): 1})
    g = m_to_e(f)
    assert g.coeff((2,)) == 1 and g.coeff((1, 1)) == 0

    f = SymFunc(2, "m", {(2,): 1, (1, 1): 2})
    assert m_to_e(f).coeffs == {(1, 1): 1}

    claw_m = SymFunc(4, "m", {(3, 1): 1, (2, 1, 1): 6, (1, 1, 1, 1): 24})
    e = m_to_e(claw_m)
    assert e.coeffs == {(4,): 4, (3, 1): 5, (2, 2): -2, (2, 1, 1): 1}
    # cross-check by principal specialization at k ones
    for k in range(2, 5):
        via_e = sum(c * e_eval_ones(lam, k) for lam, c in e.coeffs.items())
        via_m = sum(c * m_eval_ones(mu, k) for mu, c in claw_m.coeffs.items())
        assert via_e == via_m


def test_m_to_e_rejects_wrong_basis():
    with pytest.raises(ValidationError):
        m_to_e(SymFunc(2, "e", {(2,): 1}))


def test_e_eval_ones():
    assert e_eval_ones((2,), 2) == 1
    assert e_eval_ones((3,), 2) == 0
    assert e_eval_ones((2, 1), 3) == 9
    assert e_eval_ones((1,), 0) == 0


def test_e_eval_ones_matches_monomial_expansion():
    for n in range(1, 7):
        mat = e_to_m_matrix(n)
        for lam in partitions_of(n):
            for k in range(5):
                via_m = sum(
                    mat.coeff(lam, mu) * m_eval_ones(mu, k) for mu in partitions_of(n)
                )
                assert via_m == e_eval_ones(lam, k)


def test_symfunc_json_roundtrip():
    f = SymFunc(4, "e", {(4,): 4, (3, 1): 5, (2, 2): -2, (2, 1, 1): 1})
    obj = f.to_json_obj()
    assert obj["coeffs"][0] == [[4], 4]  # canonical order
    assert SymFunc.from_json_obj(obj) == f


def test_symfunc_validates_partitions():
    with pytest.raises(ValidationError):
        SymFunc(3, "m", {(1, 2): 1})  # not weakly decreasing
    with pytest.raises(ValidationError):
        SymFunc(3, "m", {(2, 2): 1})  # wrong weight
