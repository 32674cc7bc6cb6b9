"""Truncated tensor algebras, homomorphic extension and K-theory lifts."""

import pytest

from ncforms.algebra import (
    AlgebraElement,
    dual_numbers,
    laurent_window,
    matrix_algebra,
    rationals,
    validate_algebra,
)
from ncforms.forms import FORMAL_UNIT, FormVector
from ncforms.scalars import ONE, Scalar
from ncforms.tensor_algebra import (
    AlgebraMap,
    CurvatureError,
    LinearMapWithCurvature,
    TruncationSizeError,
    extend_homomorphism,
    idempotent_residual,
    invertible_residuals,
    lift_idempotent,
    lift_invertible,
    sigma,
    tau,
    truncated_tensor_algebra,
)

Q = rationals()


def test_truncation_basis_and_product():
    T2 = truncated_tensor_algebra(Q, 2)
    assert T2.dim == 3  # e, e.de.de, de.de
    assert validate_algebra(T2.algebra).ok
    e = T2.pos[(0, ())]
    dede = T2.pos[(FORMAL_UNIT, (0, 0))]
    edede = T2.pos[(0, (0, 0))]
    assert T2.algebra.mul_basis(e, dede) == {edede: ONE}


@pytest.mark.parametrize("A", [rationals(), dual_numbers(), matrix_algebra(2)], ids=lambda a: a.name)
def test_truncation_k1_is_base(A):
    T1 = truncated_tensor_algebra(A, 1)
    assert T1.algebra.structure == A.structure
    assert T1.algebra.unit == A.unit


@pytest.mark.parametrize(
    "A, k",
    [(rationals(), 3), (rationals(), 4), (dual_numbers(), 2), (matrix_algebra(2), 2)],
    ids=lambda v: getattr(v, "name", v),
)
def test_sigma_tau_and_extension(A, k):
    T = truncated_tensor_algebra(A, k)
    assert validate_algebra(T.algebra).ok
    # tau .o. sigma = id and tau is an algebra map
    for i in range(A.dim):
        assert tau(T, sigma(T, A.basis_element(i))) == A.basis_element(i)
    tau_map = AlgebraMap(
        T.algebra, A, [tau(T, T.algebra.basis_element(j)) for j in range(T.dim)]
    )
    assert tau_map.is_multiplicative()
    # the curvature of sigma is da1 da2
    smap = AlgebraMap(A, T.algebra, [sigma(T, A.basis_element(i)) for i in range(A.dim)])
    lsig = LinearMapWithCurvature(smap)
    for i in range(A.dim):
        for j in range(A.dim):
            want = T.encode(FormVector(A, {(FORMAL_UNIT, (i, j)): ONE}))
            assert lsig.omega(i, j) == want
    # the universal extension of sigma is the identity of the truncation
    ext = extend_homomorphism(lsig, T)
    assert all(ext.columns[j] == T.algebra.basis_element(j) for j in range(T.dim))
    assert ext.is_multiplicative()
    # the extension of the identity homomorphism is tau
    lid = LinearMapWithCurvature(
        AlgebraMap(A, A, [A.basis_element(i) for i in range(A.dim)])
    )
    assert extend_homomorphism(lid, T).columns == tau_map.columns


def test_non_nilpotent_curvature_is_rejected_with_witness():
    M2 = matrix_algebra(2)
    bad = LinearMapWithCurvature(
        AlgebraMap(Q, M2, [M2.element({"e11": 1, "e22": 2})])
    )
    with pytest.raises(CurvatureError) as exc:
        extend_homomorphism(bad, truncated_tensor_algebra(Q, 2))
    assert exc.value.witness is not None


def test_size_cap_refusal():
    with pytest.raises(TruncationSizeError):
        truncated_tensor_algebra(matrix_algebra(2), 4, size_cap=100)


# -- idempotent lifting --------------------------------------------------------


def test_lift_idempotent_k2_closed_form():
    eh = lift_idempotent(Q, Q.basis_element(0), 2)
    want = FormVector(
        Q, {(0, ()): ONE, (0, (0, 0)): Scalar(2), (FORMAL_UNIT, (0, 0)): -ONE}
    )
    assert eh == want
    assert idempotent_residual(eh, 2).is_zero()


@pytest.mark.parametrize("k, coeff", [(2, 2), (3, 6), (4, 20)])
def test_lift_idempotent_series_coefficients(k, coeff):
    # the degree-(2k-2) part of the lift carries the central binomial C(2j, j)
    eh = lift_idempotent(Q, Q.basis_element(0), k)
    top = eh.coeffs[(0, (0,) * (2 * k - 2))]
    assert top == Scalar(coeff)
    assert idempotent_residual(eh, k).is_zero()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_lift_idempotent_matrix_units(k):
    M2 = matrix_algebra(2)
    eh = lift_idempotent(M2, M2.basis_element("e11"), k)
    assert idempotent_residual(eh, k).is_zero()
    assert eh.component(0) == FormVector.from_element(M2, M2.basis_element("e11"))


def test_lift_idempotent_rejects_non_idempotent():
    D = dual_numbers()
    with pytest.raises(ValueError):
        lift_idempotent(D, D.basis_element("eps") + D.unit_element().scale(2), 2)


def test_lift_zero_idempotent():
    assert lift_idempotent(Q, AlgebraElement(), 3).is_zero()


# -- invertible lifting ---------------------------------------------------------


@pytest.mark.parametrize("k", [2, 3])
def test_lift_invertible_laurent(k):
    L = laurent_window(8)
    rev = {v: i for i, v in L.window.items()}
    one = L.basis_element(rev[0])
    a = L.basis_element(rev[1]) - one
    binv = L.basis_element(rev[-1]) - one
    ah, bh = lift_invertible(L, a, binv, k)
    r1, r2 = invertible_residuals(ah, bh, k)
    assert r1.is_zero() and r2.is_zero()
    assert ah.component(0) == FormVector.from_element(L, a)


def test_lift_invertible_rejects_non_inverse_pair():
    L = laurent_window(4)
    rev = {v: i for i, v in L.window.items()}
    u = L.basis_element(rev[1])
    with pytest.raises(ValueError):
        lift_invertible(L, u, u, 2)
