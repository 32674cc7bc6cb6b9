"""Differential forms: the operators d, b, b', kappa, B and both products."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncforms.algebra import (
    dual_numbers,
    laurent_window,
    matrix_algebra,
    rationals,
    upper_triangular,
)
from ncforms.forms import (
    FORMAL_UNIT,
    FormVector,
    b,
    bprime,
    connes_B,
    d,
    fedosov,
    form_mul,
    guarded_omega_basis,
    kappa,
    lmul_element,
    omega_basis,
    omega_dim,
)
from ncforms.identities import identity_suite
from ncforms.scalars import ONE, Scalar

D = dual_numbers()
M2 = matrix_algebra(2)


def mono(A, lead, *tail):
    return FormVector(A, {(lead, tuple(tail)): ONE})


# -- pinned examples ----------------------------------------------------------


def test_d_definition():
    a0, a1 = 0, 1
    assert d(mono(D, a0, a1)) == mono(D, FORMAL_UNIT, a0, a1)
    assert d(mono(D, FORMAL_UNIT, a1)).is_zero()
    assert d(mono(D, a0)) == mono(D, FORMAL_UNIT, a0)


def test_b_on_degree_one():
    # b(a0 da1) = a0 a1 - a1 a0
    for a0 in range(M2.dim):
        for a1 in range(M2.dim):
            e0, e1 = M2.basis_element(a0), M2.basis_element(a1)
            want = M2.multiply(e0, e1) - M2.multiply(e1, e0)
            assert b(mono(M2, a0, a1)) == FormVector.from_element(M2, want)
    # b(da1) = a1 - a1 = 0
    assert b(mono(M2, FORMAL_UNIT, 2)).is_zero()
    assert b(mono(M2, 3)).is_zero()  # b = 0 on degree 0


def test_bprime_on_degree_one():
    # b'(a0 da1) = a0 a1 and b'(da1) = a1
    e, eps = 0, 1
    prod = D.multiply(D.basis_element(e), D.basis_element(eps))
    assert bprime(mono(D, e, eps)) == FormVector.from_element(D, prod)
    assert bprime(mono(D, FORMAL_UNIT, eps)) == mono(D, eps)


def test_kappa_examples():
    # kappa(da) = da; kappa(a0 da1) = d(a1 a0) - a1 da0; identity on degree 0
    assert kappa(mono(D, FORMAL_UNIT, 1)) == mono(D, FORMAL_UNIT, 1)
    a0, a1 = 0, 1
    prod = D.multiply(D.basis_element(a1), D.basis_element(a0))
    want = d(FormVector.from_element(D, prod)) - mono(D, a1, a0)
    assert kappa(mono(D, a0, a1)) == want
    assert kappa(mono(D, a0)) == mono(D, a0)


def test_connes_B_examples():
    # B(a) = da; B(a0 da1) = da0 da1 - da1 da0; B(da1) = 0
    assert connes_B(mono(D, 0)) == mono(D, FORMAL_UNIT, 0)
    a0, a1 = 0, 1
    want = mono(D, FORMAL_UNIT, a0, a1) - mono(D, FORMAL_UNIT, a1, a0)
    assert connes_B(mono(D, a0, a1)) == want
    assert connes_B(mono(D, FORMAL_UNIT, a1)).is_zero()


def test_form_mul_leibniz():
    # (da1).a2 = d(a1 a2) - a1 da2
    a1, a2 = 0, 1
    lhs = form_mul(mono(D, FORMAL_UNIT, a1), mono(D, a2))
    prod = FormVector.from_element(D, D.multiply(D.basis_element(a1), D.basis_element(a2)))
    assert lhs == d(prod) - mono(D, a1, a2)
    # a0.(da1 da2) = a0 da1 da2
    assert form_mul(mono(D, 0), mono(D, FORMAL_UNIT, 1, 1)) == mono(D, 0, 1, 1)


def test_fedosov_examples():
    # a (.) b = ab - da db on degree 0
    x, y = mono(M2, 1), mono(M2, 2)
    assert fedosov(x, y) == form_mul(x, y) - form_mul(d(x), d(y))
    # (da1 da2) (.) a3 = da1 da2 . a3 (the d^2 term dies)
    w = mono(M2, FORMAL_UNIT, 0, 1)
    assert fedosov(w, mono(M2, 2)) == form_mul(w, mono(M2, 2))
    # degree bookkeeping: 2 (.) 2 lands in degrees 4 and 6
    z = fedosov(mono(D, 0, 1, 1), mono(D, 0, 1, 1))
    assert set(z.degrees()) <= {4, 6}


def test_omega_dimensions():
    # Omega^0 = A; Omega^n = Unse(A) (x) A^(x)n for n >= 1
    for A in (D, M2):
        for n in range(4):
            monos = omega_basis(A, n)
            want = A.dim if n == 0 else (A.dim + 1) * A.dim**n
            assert len(monos) == omega_dim(A, n) == want


def test_guarded_basis_stays_in_window():
    L = laurent_window(3)
    for n in range(5):
        for lead, tail in guarded_omega_basis(L, n):
            weight = sum(
                abs(L.window[t]) for t in tail
            ) + (0 if lead is FORMAL_UNIT else abs(L.window[lead]))
            assert 2 * weight <= 2 * 3  # l1-ball of half the window width
    # guarded basis is a subset of the full basis
    full = set(omega_basis(L, 2))
    assert set(guarded_omega_basis(L, 2)) <= full


def test_truncate_and_component():
    x = mono(D, 0) + mono(D, 0, 1) + mono(D, FORMAL_UNIT, 1, 1)
    assert x.truncate(1) == mono(D, 0) + mono(D, 0, 1)
    assert x.component(2) == mono(D, FORMAL_UNIT, 1, 1)
    assert x.max_degree() == 2
    assert sorted(x.degrees()) == [0, 1, 2]


# -- property tests on random forms ------------------------------------------


def form_strategy(A, max_degree=3):
    monos = [m for n in range(max_degree + 1) for m in omega_basis(A, n)]
    coeff = st.integers(-3, 3).map(Scalar)
    pairs = st.lists(
        st.tuples(st.sampled_from(monos), coeff), min_size=1, max_size=4
    )
    return pairs.map(lambda ps: sum(
        (FormVector(A, {m: c}) for m, c in ps), FormVector(A)
    ))


@settings(max_examples=60, deadline=None)
@given(form_strategy(D))
def test_square_zero_operators(x):
    assert d(d(x)).is_zero()
    assert b(b(x)).is_zero()
    assert connes_B(connes_B(x)).is_zero()
    bb = connes_B(x) + b(x)
    assert (connes_B(bb) + b(bb)).is_zero()


@settings(max_examples=60, deadline=None)
@given(form_strategy(D))
def test_kappa_fundamental(x):
    assert b(d(x)) + d(b(x)) == x - kappa(x)
    assert kappa(b(x)) == b(kappa(x))
    assert kappa(d(x)) == d(kappa(x))


@settings(max_examples=40, deadline=None)
@given(form_strategy(M2, max_degree=2), form_strategy(M2, max_degree=2))
def test_d_graded_derivation(x, y):
    for n in x.degrees():
        xn = x.component(n)
        sgn = ONE if n % 2 == 0 else -ONE
        lhs = d(form_mul(xn, y))
        rhs = form_mul(d(xn), y) + form_mul(xn, d(y)).scale(sgn)
        assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(
    form_strategy(D, max_degree=2),
    form_strategy(D, max_degree=2),
    form_strategy(D, max_degree=2),
)
def test_products_associative(x, y, z):
    assert form_mul(form_mul(x, y), z) == form_mul(x, form_mul(y, z))
    assert fedosov(fedosov(x, y), z) == fedosov(x, fedosov(y, z))


def test_lmul_element_matches_form_mul():
    e = D.basis_element(1)
    x = mono(D, 0, 1) + mono(D, FORMAL_UNIT, 0)
    assert lmul_element(e, x) == form_mul(FormVector.from_element(D, e), x)


# -- the labeled identity suite on a small algebra ----------------------------


def test_identity_suite_upper2():
    report = identity_suite(upper_triangular(2), max_degree=4, seed=11, samples=30)
    assert report.ok, report.failing_labels


def test_identity_suite_rationals():
    report = identity_suite(rationals(), max_degree=6, seed=3)
    assert report.total >= 30
    assert report.failures == 0
