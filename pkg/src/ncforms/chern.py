"""Finitely-summable Chern character cocycles on matrix Fredholm data.

A Fredholm datum is a finite-dimensional representation phi: A -> End(V)
together with a symmetry F (F^2 = 1) and, in the even case, a grading gamma.
The derivation delta(T) = (i/2)[F, T] induces a homomorphism psi on forms,
and the closed graded traces tau_n built from matrix traces of psi pair with
lifted idempotent / invertible classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, BasedAlgebra, WindowOverflowError
from .forms import (
    FORMAL_UNIT,
    FormVector,
    b,
    d,
    form_mul,
    guarded_omega_basis,
    kappa,
    omega_basis,
)
from .linalg import Matrix, express_in_span
from .scalars import ONE, Scalar
from .tensor_algebra import lift_idempotent
from .x_complex import partial_boundary

# The free normalization constant of the odd character; 1 keeps all
# coefficients exact.  Its K-homology counterpart is forced to the inverse.
C1 = ONE
C1_TILDE = C1.inverse()

_I = Scalar(0, 1)
_I_HALF = Scalar(0, Fraction(1, 2))


def mat_trace(m: Matrix) -> Scalar:
    out = Scalar(0)
    for j, col in enumerate(m.cols):
        c = col.get(j)
        if c:
            out = out + c
    return out


def c_even(n: int) -> Scalar:
    """c_0 = 1 and c_{2n+2} = (2n+2)/(2n+1) c_{2n}."""
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= Fraction(2 * j, 2 * j - 1)
    return Scalar(out)


class FredholmData:
    """Finite matrices (V, F, gamma, phi) encoding a Fredholm module.

    phi is given by its basis columns (one square matrix per basis element
    of the source algebra).  parity is "even" when a grading is present.
    """

    def __init__(self, algebra: BasedAlgebra, F: Matrix, phi, gamma=None):
        self.algebra = algebra
        self.dimension = F.nrows
        self.F = F
        self.gamma = gamma
        self.phi = list(phi)
        self.parity = "even" if gamma is not None else "odd"
        self._validate()
        self._delta_basis = [self.delta(m) for m in self.phi]

    def _validate(self):
        n, A = self.dimension, self.algebra
        eye = Matrix.identity(n)
        if self.F.ncols != n or self.F @ self.F != eye:
            raise ValueError("F must be a square matrix with F^2 = 1")
        if len(self.phi) != A.dim:
            raise ValueError("phi needs one matrix per basis element")
        if self.gamma is not None:
            g = self.gamma
            if g @ g != eye:
                raise ValueError("gamma^2 must be 1")
            if not (self.F @ g + g @ self.F).is_zero():
                raise ValueError("F must anticommute with gamma")
            for m in self.phi:
                if not (g @ m - m @ g).is_zero():
                    raise ValueError("phi must commute with gamma")
        for i in range(A.dim):
            for j in range(A.dim):
                try:
                    prod = A.mul_basis(i, j)
                except WindowOverflowError:
                    continue
                lhs = Matrix(n, n)
                for k, c in prod.items():
                    lhs = lhs + self.phi[k].scale(c)
                if lhs != self.phi[i] @ self.phi[j]:
                    raise ValueError(f"phi is not multiplicative at pair ({i}, {j})")

    def phi_of(self, a: AlgebraElement) -> Matrix:
        out = Matrix(self.dimension, self.dimension)
        for i, c in a.coeffs.items():
            out = out + self.phi[i].scale(c)
        return out

    def delta(self, T: Matrix) -> Matrix:
        """delta(T) = (i/2)[F, T]."""
        return (self.F @ T - T @ self.F).scale(_I_HALF)

    def psi(self, omega: FormVector) -> Matrix:
        """psi(<x0| dx1 ... dxn) = phi(x0) delta phi(x1) ... delta phi(xn)."""
        n = self.dimension
        out = Matrix(n, n)
        for (lead, tail), c in omega.coeffs.items():
            acc = Matrix.identity(n) if lead is FORMAL_UNIT else self.phi[lead]
            for t in tail:
                acc = acc @ self._delta_basis[t]
            out = out + acc.scale(c)
        return out


def f_commutator_residual(fd: FredholmData, omega: FormVector, degree: int) -> Matrix:
    """F psi(w) - (-1)^n psi(w) F - (2/i) psi(dw) on a degree-n form."""
    pw = fd.psi(omega)
    sgn = ONE if degree % 2 == 0 else -ONE
    return fd.F @ pw - (pw @ fd.F).scale(sgn) - fd.psi(d(omega)).scale(Scalar(0, -2))


@dataclass
class Cochain:
    """A level-homogeneous linear functional on forms over fd's algebra."""

    parity: str
    level: int
    _eval: callable

    def __call__(self, omega: FormVector) -> Scalar:
        return self._eval(omega.component(self.level))


def tau_even(fd: FredholmData, n: int, via_definition: bool = False) -> Cochain:
    """tau_2n = c_2n tr(gamma psi(w)); level-0 uses c_0 tr(iF gamma psi(dw))."""
    if fd.parity != "even":
        raise ValueError("tau_even needs even Fredholm data")
    c = c_even(n)
    if n == 0 or via_definition:
        fn = lambda w: c * mat_trace(fd.F @ fd.gamma @ fd.psi(d(w))) * _I
    else:
        fn = lambda w: c * mat_trace(fd.gamma @ fd.psi(w))
    return Cochain("even", 2 * n, fn)


def tau_odd(fd: FredholmData, n: int, via_definition: bool = False) -> Cochain:
    """tau_{2n+1} = i c~_1 tr(psi(w)) = c~_1 tr(F psi(dw))."""
    if via_definition:
        fn = lambda w: C1_TILDE * mat_trace(fd.F @ fd.psi(d(w)))
    else:
        fn = lambda w: _I * C1_TILDE * mat_trace(fd.psi(w))
    return Cochain("odd", 2 * n + 1, fn)


def h_cochain(fd: FredholmData, level: int) -> Cochain:
    """The transgression cochains between consecutive tau levels."""
    if level % 2 == 1:
        if fd.parity != "even":
            raise ValueError("odd-level h needs even Fredholm data")
        n = (level - 1) // 2
        c = c_even(n) * Scalar(Fraction(1, 2 * n + 1))
        fn = lambda w: c * mat_trace(fd.F @ fd.gamma @ fd.psi(w)) * _I
        return Cochain("odd", level, fn)
    if level == 0:
        raise ValueError("h is undefined at level 0")
    c = -C1_TILDE * Scalar(Fraction(1, 2))
    fn = lambda w: c * mat_trace(fd.F @ fd.psi(w))
    return Cochain("even", level, fn)


_check_monomials = guarded_omega_basis


@dataclass
class ClosednessReport:
    d_zero: bool
    b_zero: bool
    kappa_fixed: bool

    @property
    def ok(self):
        return self.d_zero and self.b_zero and self.kappa_fixed


def closedness_check(fd: FredholmData, tau: Cochain) -> ClosednessReport:
    """tau o d = 0, tau o b = 0 and tau o kappa = tau on monomials."""
    A = fd.algebra
    lv = tau.level
    d_ok = b_ok = k_ok = True
    if lv >= 1:
        for m in _check_monomials(A, lv - 1):
            if tau(d(FormVector(A, {m: ONE}))):
                d_ok = False
    for m in _check_monomials(A, lv + 1):
        if tau(b(FormVector(A, {m: ONE}))):
            b_ok = False
    for m in _check_monomials(A, lv):
        w = FormVector(A, {m: ONE})
        if tau(kappa(w)) != tau(w):
            k_ok = False
    return ClosednessReport(d_ok, b_ok, k_ok)


@dataclass
class TransgressionReport:
    kappa_fixed: bool
    transgression: bool

    @property
    def ok(self):
        return self.kappa_fixed and self.transgression


def transgression_check(fd: FredholmData, n: int) -> TransgressionReport:
    """h o kappa = h and h o boundary = tau_m - tau_{m+2} between levels.

    Even data: h_{2n+1} against tau_{2n} and tau_{2n+2}, tested on even
    monomials.  Odd data: h_{2n} (n >= 1) against tau_{2n-1} and tau_{2n+1},
    tested on odd monomials.
    """
    A = fd.algebra
    if fd.parity == "even":
        h = h_cochain(fd, 2 * n + 1)
        lo, hi = tau_even(fd, n), tau_even(fd, n + 1)
        degrees = (2 * n, 2 * n + 2)
    else:
        assert n >= 1, "odd-data transgression starts at n = 1"
        h = h_cochain(fd, 2 * n)
        lo, hi = tau_odd(fd, n - 1), tau_odd(fd, n)
        degrees = (2 * n - 1, 2 * n + 1)
    k_ok = trans_ok = True
    for m in _check_monomials(A, h.level):
        w = FormVector(A, {m: ONE})
        if h(kappa(w)) != h(w):
            k_ok = False
    for deg in degrees:
        for m in _check_monomials(A, deg):
            w = FormVector(A, {m: ONE})
            if h(partial_boundary(w)) != lo(w) - hi(w):
                trans_ok = False
    return TransgressionReport(k_ok, trans_ok)


# ---------------------------------------------------------------------------
# character cycles and the pairing
# ---------------------------------------------------------------------------


def ch_even(A: BasedAlgebra, e: AlgebraElement, k: int) -> FormVector:
    """The even character cycle: the canonical idempotent lift of e."""
    return lift_idempotent(A, e, k)


def _solve_inverse_minus_one(A: BasedAlgebra, x: AlgebraElement) -> AlgebraElement:
    """y with (1+x)(1+y) = 1, i.e. y + xy = -x, by exact linear solve."""
    cols, keys = [], []
    for j in range(A.dim):
        col = {j: ONE}
        try:
            for i, c in x.coeffs.items():
                for r, ck in A.mul_basis(i, j).items():
                    s = col.get(r, Scalar(0)) + c * ck
                    if s:
                        col[r] = s
                    else:
                        col.pop(r, None)
        except WindowOverflowError:
            continue  # y cannot use slots whose product leaves the window
        cols.append(col)
        keys.append(j)
    sol = express_in_span(cols, (-x).coeffs)
    if sol is None:
        raise ValueError("ch_odd: element 1+x is not invertible")
    return AlgebraElement({keys[idx]: c for idx, c in sol.items()})


def ch_odd(A: BasedAlgebra, x: AlgebraElement, k: int, inverse_minus_one=None):
    """The odd character cycle c_1 sum_j (dx + y dx)(dy dx)^j, y = (1+x)^-1 - 1.

    The quasi-inverse y is solved for exactly unless supplied (window
    algebras whose products overflow during the solve need it explicitly).
    """
    y = inverse_minus_one
    if y is None:
        y = _solve_inverse_minus_one(A, x)
    r1 = x + y + A.multiply(x, y)
    r2 = x + y + A.multiply(y, x)
    if not (r1.is_zero() and r2.is_zero()):
        raise ValueError("ch_odd: supplied element is not a quasi-inverse of x")
    cutoff = 2 * k - 1
    xf = FormVector.from_element(A, x)
    yf = FormVector.from_element(A, y)
    head = d(xf) + form_mul(yf, d(xf))
    dydx = form_mul(d(yf), d(xf))
    out = head.scale(C1)
    power = None
    for _j in range(1, k):
        power = dydx if power is None else form_mul(power, dydx).truncate(cutoff)
        out = out + form_mul(head, power).scale(C1)
    return out.truncate(cutoff)


def ch_boundary_residual(z: FormVector, parity: str, k: int) -> FormVector:
    """The transported boundary of a character cycle, inside the degree guard.

    Cancellations in the lifted series are exact up to the truncation edge:
    degrees <= 2k-3 for even cycles, <= 2k-2 for odd ones.
    """
    guard = 2 * k - 3 if parity == "even" else 2 * k - 2
    return partial_boundary(z).truncate(guard)


def pair(cochains, z: FormVector) -> Scalar:
    """Sum of the cochain evaluations on matching-degree components of z."""
    out = Scalar(0)
    for c in cochains:
        out = out + c(z)
    return out


# ---------------------------------------------------------------------------
# the two desk models
# ---------------------------------------------------------------------------


def even_model_fredholm(A: BasedAlgebra, e: AlgebraElement = None) -> FredholmData:
    """V = Q(i)^2, gamma = diag(1,-1), F = antidiag(1,1), phi(e) = diag(1,0).

    A must be the one-dimensional unital algebra; e defaults to its unit.
    """
    assert A.dim == 1
    F = Matrix.from_columns(2, [{1: ONE}, {0: ONE}])
    gamma = Matrix.from_columns(2, [{0: ONE}, {1: -ONE}])
    p = Matrix.from_columns(2, [{0: ONE}, {}])
    return FredholmData(A, F, [p], gamma=gamma)


def cyclic_shift_fredholm(A: BasedAlgebra, N: int) -> FredholmData:
    """Odd data on V = Q(i)^{2N}: F = block signs, u acts by cyclic shift.

    A must be a degree-window algebra of Laurent polynomials; the basis
    element of degree j acts as the j-th power of the cyclic permutation.
    """
    assert A.window is not None
    n = 2 * N
    F = Matrix.from_columns(
        n, [{j: ONE if j < N else -ONE} for j in range(n)]
    )
    phi = []
    for idx in range(A.dim):
        power = A.window[idx] % n
        phi.append(Matrix.from_columns(n, [{(j + power) % n: ONE} for j in range(n)]))
    return FredholmData(A, F, phi)
