"""Noncommutative differential forms over a based algebra.

A monomial <a0| da1 ... dan> is stored as a pair ``(lead, tail)`` where
``lead`` is a basis index or FORMAL_UNIT (the adjoined unit slot of the
degree-n component Unse(A) (x) A^(x)n) and ``tail`` is a tuple of basis
indices.  Every form is kept in this standard shape; products with trailing
algebra elements are renormalized immediately through the Leibniz rule
(da)b = d(ab) - a db.
"""

from __future__ import annotations

from itertools import product

from .algebra import BasedAlgebra
from .scalars import ONE, Scalar

FORMAL_UNIT = None


def mono_degree(m) -> int:
    return len(m[1])


def mono_key(m):
    """Deterministic total order: by degree, formal-unit lead first."""
    lead, tail = m
    return (len(tail), -1 if lead is None else lead, tail)


def _madd(out: dict, m, c):
    s = out.get(m)
    s = c if s is None else s + c
    if s:
        out[m] = s
    else:
        out.pop(m, None)


# ---------------------------------------------------------------------------
# monomial-level operators (memoized per algebra)
# ---------------------------------------------------------------------------


def _rmul_mono(A: BasedAlgebra, mono, j: int) -> dict:
    """mono * e_j, renormalized via (da)b = d(ab) - a db."""
    key = ("rmul", mono, j)
    hit = A._memo.get(key)
    if hit is not None:
        return hit
    lead, tail = mono
    out: dict = {}
    if not tail:
        if lead is FORMAL_UNIT:
            out[(j, ())] = ONE
        else:
            for k, c in A.mul_basis(lead, j).items():
                _madd(out, (k, ()), c)
    else:
        head = (lead, tail[:-1])
        last = tail[-1]
        for k, c in A.mul_basis(last, j).items():
            _madd(out, (lead, tail[:-1] + (k,)), c)
        for m2, c2 in _rmul_mono(A, head, last).items():
            _madd(out, (m2[0], m2[1] + (j,)), -c2)
    A._memo[key] = out
    return out


def _mul_mono(A: BasedAlgebra, m1, m2) -> dict:
    lead2, tail2 = m2
    if lead2 is FORMAL_UNIT:
        if mono_degree(m1) == 0 and m1[0] is FORMAL_UNIT:
            return {(FORMAL_UNIT, tail2): ONE} if tail2 else {m1: ONE}
        return {(m1[0], m1[1] + tail2): ONE}
    out: dict = {}
    for m, c in _rmul_mono(A, m1, lead2).items():
        _madd(out, (m[0], m[1] + tail2), c)
    return out


def _d_mono(m) -> dict:
    lead, tail = m
    if lead is FORMAL_UNIT:
        return {}
    return {(FORMAL_UNIT, (lead,) + tail): ONE}


def _b_mono(A: BasedAlgebra, m) -> dict:
    key = ("b", m)
    hit = A._memo.get(key)
    if hit is not None:
        return hit
    lead, tail = m
    n = len(tail)
    out: dict = {}
    if n:
        # j = 0 term: merge the leading slot with a1
        if lead is FORMAL_UNIT:
            _madd(out, (tail[0], tail[1:]), ONE)
        else:
            for k, c in A.mul_basis(lead, tail[0]).items():
                _madd(out, (k, tail[1:]), c)
        # interior merges a_j a_{j+1}, sign (-1)^j
        for j in range(1, n):
            sgn = ONE if j % 2 == 0 else -ONE
            for k, c in A.mul_basis(tail[j - 1], tail[j]).items():
                _madd(out, (lead, tail[: j - 1] + (k,) + tail[j + 1 :]), c * sgn)
        # cyclic term (-1)^n (a_n . a_0)
        sgn = ONE if n % 2 == 0 else -ONE
        if lead is FORMAL_UNIT:
            _madd(out, (tail[-1], tail[:-1]), sgn)
        else:
            for k, c in A.mul_basis(tail[-1], lead).items():
                _madd(out, (k, tail[:-1]), c * sgn)
    A._memo[key] = out
    return out


def _bprime_mono(A: BasedAlgebra, m) -> dict:
    lead, tail = m
    n = len(tail)
    out: dict = {}
    if n:
        if lead is FORMAL_UNIT:
            _madd(out, (tail[0], tail[1:]), ONE)
        else:
            for k, c in A.mul_basis(lead, tail[0]).items():
                _madd(out, (k, tail[1:]), c)
        for j in range(1, n):
            sgn = ONE if j % 2 == 0 else -ONE
            for k, c in A.mul_basis(tail[j - 1], tail[j]).items():
                _madd(out, (lead, tail[: j - 1] + (k,) + tail[j + 1 :]), c * sgn)
    return out


def _kappa_mono(A: BasedAlgebra, m) -> dict:
    key = ("kappa", m)
    hit = A._memo.get(key)
    if hit is not None:
        return hit
    lead, tail = m
    n = len(tail)
    if n == 0:
        out = {m: ONE}
    else:
        sgn = ONE if (n - 1) % 2 == 0 else -ONE
        out = {}
        for m2, c in _mul_mono(A, (FORMAL_UNIT, (tail[-1],)), (lead, tail[:-1])).items():
            _madd(out, m2, c * sgn)
    A._memo[key] = out
    return out


# ---------------------------------------------------------------------------
# FormVector
# ---------------------------------------------------------------------------


class FormVector:
    """A sparse exact linear combination of form monomials of mixed degree."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: BasedAlgebra, coeffs=None):
        self.algebra = algebra
        self.coeffs = {}
        if coeffs:
            for m, c in coeffs.items():
                c = Scalar.coerce(c)
                if c:
                    self.coeffs[m] = c

    # -- constructors -----------------------------------------------------

    @classmethod
    def monomial(cls, A: BasedAlgebra, lead, tail=(), coeff=1) -> "FormVector":
        if isinstance(lead, str):
            lead = A.index(lead)
        tail = tuple(A.index(t) if isinstance(t, str) else t for t in tail)
        return cls(A, {(lead, tail): Scalar.coerce(coeff)})

    @classmethod
    def from_element(cls, A: BasedAlgebra, x) -> "FormVector":
        return cls(A, {(k, ()): c for k, c in x.coeffs.items()})

    @classmethod
    def zero(cls, A: BasedAlgebra) -> "FormVector":
        return cls(A)

    # -- vector space structure -------------------------------------------

    def _assert_same(self, other):
        assert self.algebra is other.algebra, "mixed-algebra form arithmetic"

    def __add__(self, other):
        self._assert_same(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            _madd(out, m, c)
        return FormVector(self.algebra, out)

    def __neg__(self):
        return FormVector(self.algebra, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "FormVector":
        s = Scalar.coerce(s)
        if not s:
            return FormVector(self.algebra)
        return FormVector(self.algebra, {m: c * s for m, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, FormVector)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.coeffs.items())))

    # -- grading ------------------------------------------------------------

    def degrees(self):
        return sorted({mono_degree(m) for m in self.coeffs})

    def component(self, n: int) -> "FormVector":
        return FormVector(
            self.algebra, {m: c for m, c in self.coeffs.items() if mono_degree(m) == n}
        )

    def max_degree(self) -> int:
        return max((mono_degree(m) for m in self.coeffs), default=0)

    def truncate(self, max_degree) -> "FormVector":
        if max_degree is None:
            return self
        return FormVector(
            self.algebra,
            {m: c for m, c in self.coeffs.items() if mono_degree(m) <= max_degree},
        )

    def items(self):
        return sorted(self.coeffs.items(), key=lambda mc: mono_key(mc[0]))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        labels = self.algebra.labels
        for (lead, tail), c in self.items():
            factors = [] if lead is FORMAL_UNIT else [labels[lead]]
            factors.extend(f"d({labels[t]})" for t in tail)
            word = ".".join(factors) if factors else "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def _lift(A, out: dict) -> FormVector:
    return FormVector(A, out)


def _linear_ext(x: FormVector, mono_op) -> FormVector:
    out: dict = {}
    for m, c in x.coeffs.items():
        for m2, c2 in mono_op(m).items():
            _madd(out, m2, c * c2)
    return FormVector(x.algebra, out)


def d(x: FormVector) -> FormVector:
    """The universal differential; kills formal-unit-led monomials."""
    return _linear_ext(x, _d_mono)


def b(x: FormVector) -> FormVector:
    """Hochschild boundary; zero on degree 0."""
    A = x.algebra
    return _linear_ext(x, lambda m: _b_mono(A, m))


def bprime(x: FormVector) -> FormVector:
    """Bar boundary (the Hochschild boundary without its cyclic term)."""
    A = x.algebra
    return _linear_ext(x, lambda m: _bprime_mono(A, m))


def kappa(x: FormVector) -> FormVector:
    """Karoubi operator; identity on degree 0."""
    A = x.algebra
    return _linear_ext(x, lambda m: _kappa_mono(A, m))


def kappa_power(x: FormVector, k: int) -> FormVector:
    for _ in range(k):
        x = kappa(x)
    return x


def connes_B(x: FormVector) -> FormVector:
    """B = sum_{j=0}^{n} kappa^j d on the degree-n component."""
    out = FormVector(x.algebra)
    for n in x.degrees():
        term = d(x.component(n))
        acc = term
        for _ in range(n):
            term = kappa(term)
            acc = acc + term
        out = out + acc
    return out


def form_mul(x: FormVector, y: FormVector) -> FormVector:
    """The ordinary (associative) product of forms in standard shape."""
    assert x.algebra is y.algebra
    A = x.algebra
    out: dict = {}
    for m1, c1 in x.coeffs.items():
        for m2, c2 in y.coeffs.items():
            c = c1 * c2
            for m, cm in _mul_mono(A, m1, m2).items():
                _madd(out, m, c * cm)
    return FormVector(A, out)


def fedosov(x: FormVector, y: FormVector, cutoff=None) -> FormVector:
    """Fedosov product x (.) y = x.y - (-1)^{deg x} dx.dy."""
    assert x.algebra is y.algebra
    even = FormVector(x.algebra)
    odd = FormVector(x.algebra)
    for n in x.degrees():
        if n % 2 == 0:
            even = even + x.component(n)
        else:
            odd = odd + x.component(n)
    dy = d(y)
    out = form_mul(x, y) - form_mul(d(even), dy) + form_mul(d(odd), dy)
    return out.truncate(cutoff)


def lmul_element(a, x: FormVector) -> FormVector:
    """Left multiplication by an AlgebraElement (module structure)."""
    A = x.algebra
    out: dict = {}
    for i, ci in a.coeffs.items():
        for (lead, tail), c in x.coeffs.items():
            if lead is FORMAL_UNIT:
                _madd(out, (i, tail), ci * c)
            else:
                for k, ck in A.mul_basis(i, lead).items():
                    _madd(out, (k, tail), ci * c * ck)
    return FormVector(A, out)


def omega_basis(A: BasedAlgebra, n: int):
    """Deterministic monomial basis of Omega^n(A)."""
    if n == 0:
        return [(i, ()) for i in range(A.dim)]
    leads = [FORMAL_UNIT] + list(range(A.dim))
    return [(lead, tail) for lead in leads for tail in product(range(A.dim), repeat=n)]


def omega_dim(A: BasedAlgebra, n: int) -> int:
    return A.dim if n == 0 else (A.dim + 1) * A.dim**n


def mono_weight(A: BasedAlgebra, m) -> int:
    """The l1-norm of a monomial's window exponents (0 off window algebras)."""
    if A.window is None:
        return 0
    lead, tail = m
    total = 0 if lead is FORMAL_UNIT else abs(A.window[lead])
    return total + sum(abs(A.window[t]) for t in tail)


def guarded_omega_basis(A: BasedAlgebra, n: int):
    """omega_basis restricted so every partial product stays in the window.

    On a degree window of half-width N this keeps the exponent l1-ball: any
    merge performed by b, b', kappa or the form product then stays inside.
    """
    if A.window is None:
        return omega_basis(A, n)
    bound = max(abs(p) for p in A.window.values())
    weights = {i: abs(p) for i, p in A.window.items()}

    def tails(slots, budget):
        if slots == 0:
            yield ()
            return
        for t in range(A.dim):
            w = weights[t]
            if w <= budget:
                for rest in tails(slots - 1, budget - w):
                    yield (t,) + rest

    out = []
    if n == 0:
        return [(i, ()) for i in range(A.dim) if weights[i] <= bound]
    for lead in [FORMAL_UNIT] + list(range(A.dim)):
        lw = 0 if lead is FORMAL_UNIT else weights[lead]
        if lw > bound:
            continue
        out.extend((lead, tail) for tail in tails(n, bound - lw))
    return out
