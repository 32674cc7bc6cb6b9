"""Truncated tensor algebras T A/(J A)^k and the universal lifting toolkit.

The truncation of order k is the finite-dimensional algebra
A (+) Omega^2 A (+) ... (+) Omega^{2k-2} A with the cut-off Fedosov product;
the tower over k realizes the periodic tensor pro-algebra.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .algebra import AlgebraElement, BasedAlgebra
from .forms import FORMAL_UNIT, FormVector, d, fedosov, form_mul, omega_basis
from .scalars import ONE, Scalar


class TruncationSizeError(Exception):
    """The requested truncation exceeds the configured size cap."""


class CurvatureError(Exception):
    """A linear map's curvature is not nilpotent at the requested order."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"nonvanishing curvature product at basis tuple {witness}")


def _mono_label(A: BasedAlgebra, mono) -> str:
    lead, tail = mono
    parts = [] if lead is FORMAL_UNIT else [A.labels[lead]]
    parts.extend(f"d{A.labels[t]}" for t in tail)
    return ".".join(parts)


class TruncatedTensorAlgebra:
    """T A/(J A)^k as a concrete BasedAlgebra on even form monomials."""

    def __init__(self, base: BasedAlgebra, k: int, size_cap: int = 2048):
        assert k >= 1, "truncation order must be >= 1"
        assert base.window is None, "truncations of window algebras are not supported"
        self.base = base
        self.k = k
        self.cutoff = 2 * k - 2
        monomials = []
        for j in range(k):
            monomials.extend(omega_basis(base, 2 * j))
        if len(monomials) > size_cap:
            raise TruncationSizeError(
                f"truncation of {base.name} at order {k} has dimension "
                f"{len(monomials)} > cap {size_cap}"
            )
        self.monomials = monomials
        self.pos = {m: i for i, m in enumerate(monomials)}
        structure = {}
        for i1, m1 in enumerate(monomials):
            x1 = FormVector(base, {m1: ONE})
            for i2, m2 in enumerate(monomials):
                x2 = FormVector(base, {m2: ONE})
                prod = fedosov(x1, x2, cutoff=self.cutoff)
                if prod.coeffs:
                    structure[(i1, i2)] = {
                        self.pos[m]: c for m, c in prod.coeffs.items()
                    }
        unit = None
        if k == 1 and base.unit is not None:
            unit = self.pos[(base.unit, ())]
        self.algebra = BasedAlgebra(
            [_mono_label(base, m) for m in monomials],
            structure,
            unit=unit,
            name=f"T({base.name})/J^{k}",
        )
        self.algebra.truncation_order = k

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def encode(self, x: FormVector) -> AlgebraElement:
        """A form of even degrees < 2k as an element of the truncation."""
        out = {}
        for m, c in x.truncate(self.cutoff).coeffs.items():
            out[self.pos[m]] = c
        return AlgebraElement(out)

    def decode(self, x: AlgebraElement) -> FormVector:
        return FormVector(self.base, {self.monomials[i]: c for i, c in x.coeffs.items()})

    def __repr__(self):
        return f"TruncatedTensorAlgebra({self.base.name}, k={self.k})"


def truncated_tensor_algebra(A: BasedAlgebra, k: int, size_cap: int = 2048):
    return TruncatedTensorAlgebra(A, k, size_cap)


def sigma(T: TruncatedTensorAlgebra, a: AlgebraElement) -> AlgebraElement:
    """The degree-0 linear section A -> T A/(J A)^k (not multiplicative)."""
    return AlgebraElement({T.pos[(i, ())]: c for i, c in a.coeffs.items()})


def tau(T: TruncatedTensorAlgebra, x: AlgebraElement) -> AlgebraElement:
    """The multiplicative projection onto the degree-0 component."""
    out = {}
    for idx, c in x.coeffs.items():
        lead, tail = T.monomials[idx]
        if not tail:
            out[lead] = c
    return AlgebraElement(out)


class AlgebraMap:
    """A linear map between based algebras, stored by basis columns."""

    def __init__(self, source: BasedAlgebra, target: BasedAlgebra, columns):
        assert len(columns) == source.dim
        self.source = source
        self.target = target
        self.columns = [
            c if isinstance(c, AlgebraElement) else AlgebraElement(c) for c in columns
        ]

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement()
        for i, c in x.coeffs.items():
            out = out + self.columns[i].scale(c)
        return out

    def multiplicativity_witness(self):
        """None if f(xy) = f(x) f(y) on all basis pairs, else a witness pair."""
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = AlgebraElement()
                for k, c in self.source.mul_basis(i, j).items():
                    lhs = lhs + self.columns[k].scale(c)
                if lhs != self.target.multiply(self.columns[i], self.columns[j]):
                    return (i, j)
        return None

    def is_multiplicative(self) -> bool:
        return self.multiplicativity_witness() is None


class LinearMapWithCurvature:
    """A linear map l: A -> B with its curvature table cached.

    omega_l(a1, a2) = l(a1 a2) - l(a1) l(a2), stored on basis pairs.
    """

    def __init__(self, lmap: AlgebraMap):
        self.map = lmap
        A, B = lmap.source, lmap.target
        self.curvature = {}
        for i in range(A.dim):
            for j in range(A.dim):
                lab = AlgebraElement()
                for k, c in A.mul_basis(i, j).items():
                    lab = lab + lmap.columns[k].scale(c)
                w = lab - B.multiply(lmap.columns[i], lmap.columns[j])
                if not w.is_zero():
                    self.curvature[(i, j)] = w

    def omega(self, i: int, j: int) -> AlgebraElement:
        return self.curvature.get((i, j), AlgebraElement())


def _check_curvature_nilpotent(l: LinearMapWithCurvature, k: int):
    """Raise CurvatureError with a witness unless all k-fold products vanish."""
    B = l.map.target
    if getattr(B, "truncation_order", None) is not None and B.truncation_order <= k:
        return  # the target truncation absorbs the products itself
    frontier = {pair: w for pair, w in l.curvature.items()}
    for _step in range(k - 1):
        nxt = {}
        for tup, acc in frontier.items():
            for pair, w in l.curvature.items():
                prod = B.multiply(acc, w)
                if not prod.is_zero():
                    nxt[tup + pair] = prod
        frontier = nxt
        if not frontier:
            return
    if frontier:
        raise CurvatureError(min(frontier))


def extend_homomorphism(
    l: LinearMapWithCurvature, T: TruncatedTensorAlgebra
) -> AlgebraMap:
    """Extend l: A -> B to the homomorphism T A/(J A)^k -> B.

    A monomial <a0| da1 ... da_{2n} is sent to
    l(a0) omega_l(a1, a2) ... omega_l(a_{2n-1}, a_{2n}).
    """
    assert l.map.source is T.base
    B = l.map.target
    _check_curvature_nilpotent(l, T.k)
    columns = []
    for lead, tail in T.monomials:
        acc = None
        for t in range(0, len(tail), 2):
            w = l.omega(tail[t], tail[t + 1])
            acc = w if acc is None else B.multiply(acc, w)
        if lead is FORMAL_UNIT:
            # formal-unit leads occur only in degree >= 2, so acc is set
            assert acc is not None
            col = acc
        else:
            col = l.map.columns[lead]
            if acc is not None:
                col = B.multiply(col, acc)
        columns.append(col)
    return AlgebraMap(T.algebra, B, columns)


def lift_idempotent(A: BasedAlgebra, e: AlgebraElement, k: int) -> FormVector:
    """Lift an idempotent e of A to an idempotent of T A/(J A)^k.

    e_hat = e + sum_{j>=1} C(2j, j) [e (de)^{2j} - (de)^{2j}/2], as a form of
    even degrees < 2k multiplied by the cut-off Fedosov product.
    """
    if A.multiply(e, e) != e:
        raise ValueError("lift_idempotent: input is not idempotent")
    cutoff = 2 * k - 2
    ef = FormVector.from_element(A, e)
    de = d(ef)
    de2 = form_mul(de, de)
    out = ef
    power = None
    for j in range(1, k):
        power = de2 if power is None else form_mul(power, de2).truncate(cutoff)
        coeff = Scalar(comb(2 * j, j))
        term = form_mul(ef, power) - power.scale(Scalar(Fraction(1, 2)))
        out = out + term.scale(coeff)
    return out


def idempotent_residual(e_hat: FormVector, k: int) -> FormVector:
    """e_hat (.) e_hat - e_hat in the truncation (zero for a true lift)."""
    return fedosov(e_hat, e_hat, cutoff=2 * k - 2) - e_hat


def lift_invertible(A: BasedAlgebra, a: AlgebraElement, b: AlgebraElement, k: int):
    """Lift a quasi-inverse pair: 1+a invertible with inverse 1+b.

    Requires a + b + ab = a + b + ba = 0 in A; returns (a_hat, b_hat) with
    b_hat = b + sum_{j>=1} (da db)^j + b (da db)^j, satisfying
    (1 + a_hat)(1 + b_hat) = (1 + b_hat)(1 + a_hat) = 1 in the unitized
    truncation.
    """
    r1 = a + b + A.multiply(a, b)
    r2 = a + b + A.multiply(b, a)
    if not (r1.is_zero() and r2.is_zero()):
        raise ValueError(f"lift_invertible: relation residuals {r1!r}, {r2!r}")
    cutoff = 2 * k - 2
    af = FormVector.from_element(A, a)
    bf = FormVector.from_element(A, b)
    dadb = form_mul(d(af), d(bf))
    out = bf
    power = None
    for j in range(1, k):
        power = dadb if power is None else form_mul(power, dadb).truncate(cutoff)
        out = out + power + form_mul(bf, power)
    return af, out


def invertible_residuals(a_hat: FormVector, b_hat: FormVector, k: int):
    """Residuals of the unitized products (1+a)(1+b) - 1 and (1+b)(1+a) - 1."""
    cutoff = 2 * k - 2
    return (
        a_hat + b_hat + fedosov(a_hat, b_hat, cutoff=cutoff),
        a_hat + b_hat + fedosov(b_hat, a_hat, cutoff=cutoff),
    )
