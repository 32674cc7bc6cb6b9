"""The X-complex, transported boundaries, rescalings and spectral operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .algebra import AlgebraElement, BasedAlgebra, WindowOverflowError, unitize
from .forms import (
    FORMAL_UNIT,
    FormVector,
    b,
    connes_B,
    d,
    fedosov,
    form_mul,
    kappa,
    omega_basis,
)
from .linalg import Echelon, Matrix, QuotientSpace
from .scalars import ONE, Scalar


# ---------------------------------------------------------------------------
# boundaries on forms
# ---------------------------------------------------------------------------


def partial_boundary(x: FormVector, cutoff=None) -> FormVector:
    """The X-complex boundary transported to forms.

    On odd degrees: b - (1+kappa) d.  On degree 2n:
    sum_{j=0}^{2n} kappa^j d - sum_{j=0}^{n-1} kappa^{2j} b.
    """
    out = FormVector(x.algebra)
    for n in x.degrees():
        xc = x.component(n)
        if n % 2 == 1:
            dx = d(xc)
            out = out + b(xc) - dx - kappa(dx)
        else:
            res = connes_B(xc)
            term = b(xc)
            for j in range(n // 2):
                if j > 0:
                    term = kappa(kappa(term))
                res = res - term
            out = out + res
    return out.truncate(cutoff)


def delta_boundary(x: FormVector, cutoff=None) -> FormVector:
    """delta = B - n b on degree 2n; -B/(n+1) + b on degree 2n+1."""
    out = FormVector(x.algebra)
    for deg in x.degrees():
        xc = x.component(deg)
        n = deg // 2
        if deg % 2 == 0:
            out = out + connes_B(xc) - b(xc).scale(n)
        else:
            out = out + b(xc) - connes_B(xc).scale(Scalar(Fraction(1, n + 1)))
    return out.truncate(cutoff)


def _c_coeff(deg: int) -> Scalar:
    n = deg // 2
    val = Fraction(factorial(n))
    return Scalar(val if n % 2 == 0 else -val)


def rescale_cN(x: FormVector) -> FormVector:
    """Multiply the degree-j component by c_j with c_2n = c_2n+1 = (-1)^n n!."""
    out = FormVector(x.algebra)
    for deg in x.degrees():
        out = out + x.component(deg).scale(_c_coeff(deg))
    return out


def rescale_cN_inverse(x: FormVector) -> FormVector:
    out = FormVector(x.algebra)
    for deg in x.degrees():
        out = out + x.component(deg).scale(_c_coeff(deg).inverse())
    return out


# ---------------------------------------------------------------------------
# spectral operators P, H (polynomials in kappa^2, degreewise)
# ---------------------------------------------------------------------------


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, c in enumerate(q):
            out[i + j] += a * c
    return out


def _poly_sub(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, c in enumerate(q):
        out[i] -= c
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


def _poly_div_linear(p):
    """Exact division of p by (z - 1); remainder must vanish."""
    p = list(p)
    out = [Fraction(0)] * (len(p) - 1)
    for k in range(len(p) - 1, 0, -1):
        out[k - 1] = p[k]
        p[k - 1] += p[k]
        p[k] = Fraction(0)
    assert not p[0], "polynomial not divisible by z - 1"
    return out


def spectral_f(n: int):
    """Coefficients of f_n(z) = N_n(z) N_{n+1}(z) (1 - (n - 1/2)(z - 1))."""
    assert n >= 1
    Nn = [Fraction(1, n)] * n
    Nn1 = [Fraction(1, n + 1)] * (n + 1)
    lin = [Fraction(1) + (Fraction(2 * n - 1, 2)), -Fraction(2 * n - 1, 2)]
    return _poly_mul(_poly_mul(Nn, Nn1), lin)


def spectral_g(n: int):
    """g_n = (1 - f_n) * (f_n - 1)/(z - 1); satisfies g_n(z)(1-z) = 1 - f_n mod ann."""
    f = spectral_f(n)
    gt = _poly_div_linear(_poly_sub(f, [Fraction(1)]))
    return _poly_mul(_poly_sub([Fraction(1)], f), gt)


def _apply_poly_kappa2(xc: FormVector, coeffs) -> FormVector:
    out = xc.scale(Scalar(coeffs[0]))
    power = xc
    for c in coeffs[1:]:
        power = kappa(kappa(power))
        if c:
            out = out + power.scale(Scalar(c))
    return out


def spectral_P(x: FormVector) -> FormVector:
    """Spectral projection P = f_n(kappa^2) on the degree-n component."""
    out = FormVector(x.algebra)
    for n in x.degrees():
        xc = x.component(n)
        out = out + (xc if n == 0 else _apply_poly_kappa2(xc, spectral_f(n)))
    return out


def spectral_H(x: FormVector) -> FormVector:
    """Partial inverse H = g_n(kappa^2); H (1 - kappa^2) = 1 - P."""
    out = FormVector(x.algebra)
    for n in x.degrees():
        if n == 0:
            continue
        out = out + _apply_poly_kappa2(x.component(n), spectral_g(n))
    return out


# ---------------------------------------------------------------------------
# the X-complex of an algebra
# ---------------------------------------------------------------------------


@dataclass
class Z2Complex:
    """A Z/2-graded complex with exact boundary matrices, d0 d1 = d1 d0 = 0."""

    even_dim: int
    odd_dim: int
    d0: Matrix  # even -> odd
    d1: Matrix  # odd -> even

    def __post_init__(self):
        assert self.d0.ncols == self.even_dim and self.d0.nrows == self.odd_dim
        assert self.d1.ncols == self.odd_dim and self.d1.nrows == self.even_dim
        assert (self.d0 @ self.d1).is_zero(), "d0 d1 != 0"
        assert (self.d1 @ self.d0).is_zero(), "d1 d0 != 0"

    def homology(self):
        return linalg.Homology(self.d0, self.d1), linalg.Homology(self.d1, self.d0)

    def homology_dims(self):
        even, odd = self.homology()
        return (even.dim, odd.dim)


def form_to_coords(x: FormVector, pos: dict) -> dict:
    out = {}
    for m, c in x.coeffs.items():
        out[pos[m]] = c
    return out


class XComplex:
    """X(A): even part A, odd part Omega^1 A / b(Omega^2 A)."""

    def __init__(self, A: BasedAlgebra):
        self.A = A
        self.omega1 = omega_basis(A, 1)
        self.pos1 = {m: k for k, m in enumerate(self.omega1)}
        bcols = []
        for m2 in omega_basis(A, 2):
            img = b(FormVector(A, {m2: ONE}))
            col = form_to_coords(img, self.pos1)
            if col:
                bcols.append(col)
        self.quot = QuotientSpace(len(self.omega1), bcols)
        d0_cols = []
        for i in range(A.dim):
            da = FormVector(A, {(FORMAL_UNIT, (i,)): ONE})
            d0_cols.append(self.quot.project(form_to_coords(da, self.pos1)))
        d1_cols = []
        for k in range(self.quot.dim):
            rep = self.decode_odd({k: ONE})
            d1_cols.append({i: c for (i, _tail), c in b(rep).coeffs.items()})
        self.complex = Z2Complex(
            A.dim,
            self.quot.dim,
            Matrix.from_columns(self.quot.dim, d0_cols),
            Matrix.from_columns(A.dim, d1_cols),
        )

    def encode_even(self, a: AlgebraElement) -> dict:
        return dict(a.coeffs)

    def encode_odd(self, x: FormVector) -> dict:
        return self.quot.project(form_to_coords(x.component(1), self.pos1))

    def decode_odd(self, coords: dict) -> FormVector:
        amb = self.quot.lift(coords)
        return FormVector(self.A, {self.omega1[k]: c for k, c in amb.items()})

    def homology_dims(self):
        return self.complex.homology_dims()


def x_complex(A: BasedAlgebra) -> XComplex:
    return XComplex(A)


# ---------------------------------------------------------------------------
# split_D: the bimodule decomposition of the boundary
# ---------------------------------------------------------------------------


def split_D(x: FormVector):
    """Decompose D(x) for even x into triples (coeff, left, middle, right).

    Reassembling each triple as (right (.) left) . d(middle) and summing
    reproduces the even-to-odd boundary of x.
    """
    A = x.algebra
    unit_T = FormVector(A, {(FORMAL_UNIT, ()): ONE})
    triples = []
    for (lead, tail), coeff in x.items():
        n2 = len(tail)
        assert n2 % 2 == 0, "split_D needs even-degree input"
        n = n2 // 2
        if lead is not FORMAL_UNIT:
            triples.append(
                (coeff, unit_T, lead, FormVector(A, {(FORMAL_UNIT, tail): ONE}))
            )
        for j in range(1, n + 1):
            prefix = FormVector(A, {(lead, tail[: 2 * j - 2]): ONE})
            suffix = FormVector(A, {(FORMAL_UNIT, tail[2 * j :]): ONE})
            a1, a2 = tail[2 * j - 2], tail[2 * j - 1]
            for k, ck in A.mul_basis(a1, a2).items():
                triples.append((coeff * ck, prefix, k, suffix))
            left3 = fedosov(prefix, FormVector(A, {(a1, ()): ONE}))
            triples.append((-coeff, left3, a2, suffix))
            right4 = fedosov(FormVector(A, {(a2, ()): ONE}), suffix)
            triples.append((-coeff, prefix, a1, right4))
    return triples


def reassemble_D(A: BasedAlgebra, triples) -> FormVector:
    out = FormVector(A)
    for coeff, left, mid, right in triples:
        dm = FormVector(A, {(FORMAL_UNIT, (mid,)): ONE})
        out = out + form_mul(fedosov(right, left), dm).scale(coeff)
    return out


# ---------------------------------------------------------------------------
# unitization splitting
# ---------------------------------------------------------------------------


@dataclass
class UnitizationReport:
    ok: bool
    subspace_equal: bool
    homology_A: tuple
    homology_unse: tuple


def unitization_split_check(A: BasedAlgebra) -> UnitizationReport:
    """Verify b(Omega^2 Unse A) = b(Omega^2 A) + V and the homology split.

    V is spanned by x d1 and dx - 1 dx for x running through Unse A, and
    H(X(Unse A)) gains exactly one even dimension over H(X(A)).
    """
    Au = unitize(A)
    u = Au.unit
    omega1 = omega_basis(Au, 1)
    pos1 = {m: k for k, m in enumerate(omega1)}

    def bvec(mono):
        return form_to_coords(b(FormVector(Au, {mono: ONE})), pos1)

    full = Echelon()
    for m2 in omega_basis(Au, 2):
        full.insert(bvec(m2))

    small = Echelon()
    # b(Omega^2 A), embedded: monomials avoiding the adjoined unit slot
    leads = [FORMAL_UNIT] + list(range(A.dim))
    for lead in leads:
        for t1 in range(A.dim):
            for t2 in range(A.dim):
                small.insert(bvec((lead, (t1, t2))))
    # V: x d1 and dx - 1 dx for x in Unse A
    v_vectors = []
    for xi in range(Au.dim):
        v_vectors.append({pos1[(xi, (u,))]: ONE})
        vec = {pos1[(FORMAL_UNIT, (xi,))]: ONE}
        vec = linalg.vec_add(vec, {pos1[(u, (xi,))]: ONE}, Scalar(-1))
        v_vectors.append(vec)
    for v in v_vectors:
        small.insert(v)

    same_rank = full.rank == small.rank
    contained = all(not small.residual(row) for row, _h in full.rows.values())
    subspace_equal = same_rank and contained

    hA = x_complex(A).homology_dims()
    hU = x_complex(Au).homology_dims()
    ok = subspace_equal and hU == (hA[0] + 1, hA[1])
    return UnitizationReport(ok, subspace_equal, hA, hU)


# ---------------------------------------------------------------------------
# Laurent normal form
# ---------------------------------------------------------------------------


def laurent_normal_form(x: FormVector) -> AlgebraElement:
    """The map f dg mod [,] -> f g' on a Laurent window algebra.

    Degree-0 components pass through unchanged (f -> f), so that the
    composite with the boundary computes f -> f'.
    """
    A = x.algebra
    assert A.window is not None, "laurent_normal_form needs a window algebra"
    rev = {}
    for idx, k in A.window.items():
        rev[k] = idx
    out = AlgebraElement()
    for (lead, tail), c in x.coeffs.items():
        if len(tail) == 0:
            out = out + AlgebraElement({A.unit if lead is FORMAL_UNIT else lead: c})
            continue
        assert len(tail) == 1, "laurent_normal_form is defined on degrees <= 1"
        a_deg = 0 if lead is FORMAL_UNIT else A.window[lead]
        b_deg = A.window[tail[0]]
        if b_deg == 0:
            continue
        target = a_deg + b_deg - 1
        if target not in rev:
            raise WindowOverflowError(f"derivative degree {target} leaves the window")
        out = out + AlgebraElement({rev[target]: c * Scalar(b_deg)})
    return out
