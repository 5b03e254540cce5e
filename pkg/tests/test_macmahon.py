import numpy as np
import pytest
from numpy.testing import assert_allclose

from permint import linops
from permint.macmahon import (
    SparsePolynomial,
    build_linear_forms,
    expand_multilinear,
    permanent_via_macmahon,
)
from permint.permanent import permanent_ryser


def test_forms_identity_matrix():
    forms = build_linear_forms(np.eye(2, dtype=complex), 2)
    assert forms[0].terms == {0b01: 1.0 + 0.0j}
    assert forms[1].terms == {0b10: 1.0 + 0.0j}


def test_forms_all_ones():
    forms = build_linear_forms(np.ones((2, 2), dtype=complex), 2)
    for form in forms:
        assert form.terms == {0b01: 1.0 + 0.0j, 0b10: 1.0 + 0.0j}


def test_forms_dense_haar_column():
    forms = build_linear_forms(linops.haar_random_unitary(5, 31), 4)
    assert len(forms) == 4
    for form in forms:
        assert len(form) == 4


def test_forms_guard():
    with pytest.raises(ValueError):
        build_linear_forms(np.eye(2, dtype=complex), 3)


def test_expand_two_disjoint_forms():
    product_poly = expand_multilinear(build_linear_forms(np.eye(2, dtype=complex), 2))
    assert product_poly.terms == {0b11: 1.0 + 0.0j}


def test_expand_prunes_squares():
    # (x1 + x2)^2 -> 2 x1 x2, the x1^2 and x2^2 terms dropped
    form = SparsePolynomial(n_vars=2, terms={0b01: 1.0 + 0j, 0b10: 1.0 + 0j})
    product_poly = expand_multilinear([form, form])
    assert product_poly.terms == {0b11: 2.0 + 0.0j}


def test_expand_form_count_guard():
    form = SparsePolynomial(n_vars=1, terms={0b1: 1.0 + 0j})
    with pytest.raises(ValueError):
        expand_multilinear([form] * 13)


def test_expansion_coefficient_matches_ryser_n6():
    u = linops.haar_random_unitary(6, 6)
    product_poly = expand_multilinear(build_linear_forms(u, 6))
    coeff = product_poly.coefficient(range(6))
    assert_allclose(coeff, permanent_ryser(u[:6, :6]), rtol=1e-9)


def test_pruning_is_sound_at_small_n():
    # expand without any pruning (exponent vectors, not bitmasks) and compare
    def expand_unpruned(u, n):
        terms = {tuple([0] * n): 1.0 + 0.0j}
        for j in range(n):
            nxt = {}
            for expo, coeff in terms.items():
                for k in range(n):
                    e = list(expo)
                    e[k] += 1
                    key = tuple(e)
                    nxt[key] = nxt.get(key, 0.0 + 0.0j) + coeff * u[k, j]
            terms = nxt
        return terms[tuple([1] * n)]

    for n in range(1, 5):
        u = linops.haar_random_unitary(n + 1, 70 + n)
        assert_allclose(
            permanent_via_macmahon(u, n), expand_unpruned(u, n), rtol=1e-12, atol=1e-15
        )


def test_term_count_bounded_by_2_pow_n():
    for n in (4, 6, 8):
        u = linops.haar_random_unitary(n, 80 + n)
        product_poly = expand_multilinear(build_linear_forms(u, n))
        assert len(product_poly) <= 2**n
        assert all(0 <= mask < 2**n for mask in product_poly.terms)


def test_no_zero_coefficients_stored():
    u = linops.permutation_unitary([2, 1, 4, 3])
    product_poly = expand_multilinear(build_linear_forms(u, 4))
    assert all(abs(c) > 1e-15 for c in product_poly.terms.values())


def test_coefficient_accessor():
    poly = SparsePolynomial(n_vars=3, terms={0b101: 2.0 + 1.0j})
    assert poly.coefficient([0, 2]) == 2.0 + 1.0j
    assert poly.coefficient([1]) == 0.0
    with pytest.raises(ValueError):
        poly.coefficient([0, 0])


def test_permanent_identity():
    assert permanent_via_macmahon(np.eye(4, dtype=complex), 4) == 1.0


def test_permanent_embedded_all_ones():
    u = linops.haar_random_unitary(5, 33).copy()
    u[:3, :3] = 1.0
    assert_allclose(permanent_via_macmahon(u, 3), 6.0, rtol=1e-12)


def test_permanent_haar_n5_matches_ryser():
    u = linops.haar_random_unitary(7, 35)
    assert_allclose(permanent_via_macmahon(u, 5), permanent_ryser(u[:5, :5]), rtol=1e-9)


def test_permanent_magnitude_invariant_through_n8():
    for n in range(1, 9):
        u = linops.haar_random_unitary(n + 1, 100 + n)
        got = abs(permanent_via_macmahon(u, n)) ** 2
        want = abs(permanent_ryser(u[:n, :n])) ** 2
        assert_allclose(got, want, rtol=1e-9)


def test_permanent_guards():
    with pytest.raises(ValueError):
        permanent_via_macmahon(np.eye(13, dtype=complex), 13)
    with pytest.raises(ValueError):
        permanent_via_macmahon(np.eye(3, dtype=complex), 4)
