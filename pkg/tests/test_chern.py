"""Chern character cocycles: closedness, transgression, normalization."""

from fractions import Fraction

import pytest

from ncforms.algebra import AlgebraElement, laurent_window, matrix_algebra, rationals
from ncforms.chern import (
    FredholmData,
    c_even,
    ch_boundary_residual,
    ch_even,
    ch_odd,
    closedness_check,
    cyclic_shift_fredholm,
    even_model_fredholm,
    f_commutator_residual,
    h_cochain,
    pair,
    tau_even,
    tau_odd,
    transgression_check,
)
from ncforms.forms import FORMAL_UNIT, FormVector, kappa, omega_basis
from ncforms.linalg import Matrix
from ncforms.scalars import ONE, Scalar

Q = rationals()


def test_c_even_recursion():
    assert c_even(0) == ONE
    assert c_even(1) == Scalar(2)
    assert c_even(2) == Scalar(Fraction(8, 3))


def test_fredholm_validation():
    fd = even_model_fredholm(Q)
    eye = Matrix.identity(2)
    assert fd.F @ fd.F == eye
    assert fd.gamma @ fd.gamma == eye
    assert (fd.F @ fd.gamma + fd.gamma @ fd.F).is_zero()
    # broken data is rejected
    with pytest.raises(ValueError, match="F"):
        FredholmData(Q, Matrix.from_columns(2, [{0: Scalar(2)}, {1: ONE}]), fd.phi, gamma=fd.gamma)
    with pytest.raises(ValueError, match="gamma"):
        FredholmData(Q, fd.F, fd.phi, gamma=fd.F @ fd.gamma)
    with pytest.raises(ValueError, match="multiplicative"):
        FredholmData(Q, fd.F, [fd.F], gamma=None)


def test_psi_degree_zero_and_one():
    fd = even_model_fredholm(Q)
    e = Q.basis_element(0)
    assert fd.psi(FormVector.from_element(Q, e)) == fd.phi[0]
    assert fd.psi(FormVector(Q, {(FORMAL_UNIT, (0,)): ONE})) == fd.delta(fd.phi[0])


def test_f_commutator_identity():
    fd = even_model_fredholm(Q)
    for deg in range(4):
        for m in omega_basis(Q, deg):
            assert f_commutator_residual(fd, FormVector(Q, {m: ONE}), deg).is_zero()


def test_even_cochains_closed_and_consistent():
    fd = even_model_fredholm(Q)
    for n in range(3):
        for via in (False, True):
            rep = closedness_check(fd, tau_even(fd, n, via_definition=via))
            assert rep.d_zero and rep.b_zero and rep.kappa_fixed
        t_def, t_rw = tau_even(fd, n, via_definition=True), tau_even(fd, n)
        for m in omega_basis(Q, 2 * n):
            w = FormVector(Q, {m: ONE})
            assert t_def(w) == t_rw(w)


@pytest.mark.parametrize("n", [0, 1])
def test_even_transgression(n):
    assert transgression_check(even_model_fredholm(Q), n).ok


def test_h_cochain_kappa_invariance():
    fd = even_model_fredholm(Q)
    h = h_cochain(fd, 3)
    for m in omega_basis(Q, 3):
        w = FormVector(Q, {m: ONE})
        assert h(kappa(w)) == h(w)
    with pytest.raises(ValueError):
        h_cochain(fd, 0)


def test_even_normalization():
    # <tau_2n, ch(p)> = 1 at every level n <= 2 on the 2-dimensional model
    fd = even_model_fredholm(Q)
    eh = ch_even(Q, Q.basis_element(0), 4)
    for n in range(3):
        assert pair([tau_even(fd, n)], eh) == ONE
    assert ch_boundary_residual(eh, "even", 4).is_zero()
    assert ch_even(Q, AlgebraElement(), 3).is_zero()
    assert pair([tau_even(fd, 0)], ch_even(Q, AlgebraElement(), 3)) == Scalar(0)


@pytest.mark.parametrize("N", [3, 4])
def test_odd_cyclic_shift_model(N):
    L = laurent_window(6)
    fo = cyclic_shift_fredholm(L, N)
    rev = {v: i for i, v in L.window.items()}
    x = L.basis_element(rev[1]) - L.basis_element(rev[0])
    k = 3
    z = ch_odd(L, x, k)
    assert ch_boundary_residual(z, "odd", k).is_zero()
    for n in range(2):
        rep = closedness_check(fo, tau_odd(fo, n))
        assert rep.d_zero and rep.b_zero and rep.kappa_fixed
    for n in (1, 2):
        assert transgression_check(fo, n).ok
    # the finite cyclic shift has index zero: every pairing level vanishes
    for n in range(k):
        assert pair([tau_odd(fo, n)], z) == Scalar(0)


def test_ch_odd_solves_quasi_inverse():
    L = laurent_window(6)
    rev = {v: i for i, v in L.window.items()}
    x = L.basis_element(rev[1]) - L.basis_element(rev[0])
    explicit = L.basis_element(rev[-1]) - L.basis_element(rev[0])
    assert ch_odd(L, x, 2) == ch_odd(L, x, 2, inverse_minus_one=explicit)


def test_tau_vanishes_on_commutators():
    # tau([w, w']) = 0 restated as tau .o. b = 0 and tau .o. (1 - kappa) = 0
    fd = even_model_fredholm(Q)
    t = tau_even(fd, 1)
    for m in omega_basis(Q, 3):
        from ncforms.forms import b as hb

        assert t(hb(FormVector(Q, {m: ONE}))) == Scalar(0)
    for m in omega_basis(Q, 2):
        w = FormVector(Q, {m: ONE})
        assert t(w - kappa(w)) == Scalar(0)
