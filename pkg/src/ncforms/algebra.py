"""Based algebras: finite bases, structure constants, builders, extensions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .scalars import ONE, Scalar


class WindowOverflowError(Exception):
    """A product left the declared Laurent degree window (hard error)."""


class AlgebraElement:
    """A sparse exact linear combination of basis elements."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for k, c in coeffs.items():
                c = Scalar.coerce(c)
                if c:
                    self.coeffs[k] = c

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, None)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return AlgebraElement(out)

    def __neg__(self):
        return AlgebraElement({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "AlgebraElement":
        s = Scalar.coerce(s)
        if not s:
            return AlgebraElement()
        return AlgebraElement({k: c * s for k, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"AlgebraElement({self.coeffs!r})"


class BasedAlgebra:
    """A finite-dimensional associative algebra given by structure constants.

    ``structure`` maps a basis pair (i, j) to the sparse expansion of
    e_i * e_j; absent pairs multiply to zero, except on window algebras
    where an absent pair means the product left the window (a hard error).
    """

    def __init__(self, labels, structure, unit=None, window=None, name=""):
        self.labels = tuple(labels)
        self.structure = {
            ij: {k: Scalar.coerce(c) for k, c in ex.items() if Scalar.coerce(c)}
            for ij, ex in structure.items()
        }
        self.unit = unit
        self.window = dict(window) if window is not None else None
        self.name = name or "algebra"
        self._index = {lab: k for k, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("duplicate basis labels")
        # operator memo tables, filled lazily by the forms module
        self._memo = {}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self._index[label]

    def mul_basis(self, i: int, j: int) -> dict:
        """Sparse expansion of e_i * e_j."""
        ex = self.structure.get((i, j))
        if ex is None:
            if self.window is not None:
                raise WindowOverflowError(
                    f"{self.name}: product {self.labels[i]}*{self.labels[j]} "
                    f"leaves the declared window"
                )
            return {}
        return ex

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        out = {}
        for i, ci in x.coeffs.items():
            for j, cj in y.coeffs.items():
                cij = ci * cj
                for k, ck in self.mul_basis(i, j).items():
                    s = out.get(k)
                    s = cij * ck if s is None else s + cij * ck
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return AlgebraElement(out)

    def basis_element(self, i) -> AlgebraElement:
        if isinstance(i, str):
            i = self.index(i)
        return AlgebraElement({i: ONE})

    def element(self, mapping) -> AlgebraElement:
        coeffs = {}
        for k, c in mapping.items():
            if isinstance(k, str):
                k = self.index(k)
            coeffs[k] = c
        return AlgebraElement(coeffs)

    def unit_element(self) -> AlgebraElement:
        if self.unit is None:
            raise ValueError(f"{self.name} has no designated basis unit")
        return self.basis_element(self.unit)

    def __repr__(self):
        return f"BasedAlgebra({self.name}, dim={self.dim})"


def multiply(A: BasedAlgebra, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return A.multiply(x, y)


@dataclass
class ValidationReport:
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_algebra(A: BasedAlgebra, max_triples: int = 2_000_000) -> ValidationReport:
    """Check table well-formedness, associativity and the unit axiom.

    Associativity is exhaustive over basis triples; triples whose products
    leave a declared window are outside the algebra's domain and skipped.
    """
    failures = []
    n = A.dim
    for (i, j), ex in A.structure.items():
        if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in ex):
            failures.append(("malformed", (i, j), "index out of range"))
    if failures:
        return ValidationReport(False, failures)
    if n**3 > max_triples:
        raise ValueError(f"validation refused: {n}^3 triples exceeds cap {max_triples}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                try:
                    left = A.multiply(
                        A.multiply(A.basis_element(i), A.basis_element(j)),
                        A.basis_element(k),
                    )
                    right = A.multiply(
                        A.basis_element(i),
                        A.multiply(A.basis_element(j), A.basis_element(k)),
                    )
                except WindowOverflowError:
                    continue
                if left != right:
                    failures.append(("associativity", (i, j, k), (left, right)))
                    return ValidationReport(False, failures)
    if A.unit is not None:
        u = A.basis_element(A.unit)
        for i in range(n):
            x = A.basis_element(i)
            if A.multiply(u, x) != x or A.multiply(x, u) != x:
                failures.append(("unit", (A.unit, i), "unit axiom fails"))
                return ValidationReport(False, failures)
    return ValidationReport(True, [])


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def matrix_algebra(n: int) -> BasedAlgebra:
    """Full matrix algebra M_n with basis of matrix units E_ij."""
    assert n >= 1
    labels = [f"e{i+1}{j+1}" for i in range(n) for j in range(n)]
    idx = lambda i, j: i * n + j
    structure = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                structure[(idx(i, j), idx(j, k))] = {idx(i, k): ONE}
    return BasedAlgebra(labels, structure, name=f"m{n}")


def dual_numbers() -> BasedAlgebra:
    """Q[eps]/eps^2 with basis {1, eps}."""
    structure = {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}}
    return BasedAlgebra(["1", "eps"], structure, unit=0, name="dual")


def truncated_poly(m: int) -> BasedAlgebra:
    """Q[t]/t^m with basis 1, t, ..., t^{m-1}."""
    assert m >= 1
    labels = ["1"] + [f"t^{k}" if k > 1 else "t" for k in range(1, m)]
    structure = {}
    for i in range(m):
        for j in range(m):
            if i + j < m:
                structure[(i, j)] = {i + j: ONE}
    return BasedAlgebra(labels, structure, unit=0, name=f"poly{m}")


def laurent_window(N: int) -> BasedAlgebra:
    """Degree window of Q[u, 1/u]: basis u^k for -N <= k <= N.

    Products leaving the window raise WindowOverflowError; there is no
    silent truncation.
    """
    assert N >= 1
    ks = list(range(-N, N + 1))
    labels = [f"u^{k}" for k in ks]
    pos = {k: i for i, k in enumerate(ks)}
    structure = {}
    for a in ks:
        for bdeg in ks:
            if abs(a + bdeg) <= N:
                structure[(pos[a], pos[bdeg])] = {pos[a + bdeg]: ONE}
    window = {pos[k]: k for k in ks}
    return BasedAlgebra(labels, structure, unit=pos[0], window=window, name=f"laurent{N}")


def upper_triangular(n: int) -> BasedAlgebra:
    """Upper-triangular n x n matrices with basis E_ij, i <= j."""
    assert n >= 1
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    labels = [f"e{i+1}{j+1}" for i, j in pairs]
    pos = {p: k for k, p in enumerate(pairs)}
    structure = {}
    for (i, j) in pairs:
        for (jj, k) in pairs:
            if j == jj:
                structure[(pos[(i, j)], pos[(jj, k)])] = {pos[(i, k)]: ONE}
    return BasedAlgebra(labels, structure, name=f"upper{n}")


def null_algebra(d: int) -> BasedAlgebra:
    """d-dimensional algebra with the zero multiplication."""
    assert d >= 1
    return BasedAlgebra([f"n{k+1}" for k in range(d)], {}, name=f"null{d}")


def rationals() -> BasedAlgebra:
    """The ground field Q as a one-dimensional algebra."""
    return BasedAlgebra(["e"], {(0, 0): {0: ONE}}, unit=0, name="q")


def direct_sum(A: BasedAlgebra, B: BasedAlgebra) -> BasedAlgebra:
    """Componentwise product algebra A + B; cross terms vanish."""
    labels = list(A.labels)
    for lab in B.labels:
        while lab in labels:
            lab = lab + "'"
        labels.append(lab)
    off = A.dim
    structure = {}
    for (i, j), ex in A.structure.items():
        structure[(i, j)] = dict(ex)
    for (i, j), ex in B.structure.items():
        structure[(i + off, j + off)] = {k + off: c for k, c in ex.items()}
    unit = None
    if A.window is not None or B.window is not None:
        raise ValueError("direct_sum of window algebras is not supported")
    return BasedAlgebra(labels, structure, unit=unit, name=f"{A.name}+{B.name}")


def unitize(A: BasedAlgebra) -> BasedAlgebra:
    """Adjoin a fresh two-sided unit as a new basis slot (always distinct)."""
    if A.window is not None:
        raise ValueError("unitize of window algebras is not supported")
    u = A.dim
    lab = "1"
    while lab in A.labels:
        lab = lab + "'"
    labels = list(A.labels) + [lab]
    structure = {ij: dict(ex) for ij, ex in A.structure.items()}
    structure[(u, u)] = {u: ONE}
    for i in range(A.dim):
        structure[(u, i)] = {i: ONE}
        structure[(i, u)] = {i: ONE}
    return BasedAlgebra(labels, structure, unit=u, name=f"unital_{A.name}")


# ---------------------------------------------------------------------------
# split extensions
# ---------------------------------------------------------------------------


@dataclass
class SplitExtension:
    """K >--> E -->> Q with multiplicative i, p and a linear section s."""

    K: BasedAlgebra
    E: BasedAlgebra
    Q: BasedAlgebra
    i: "Matrix"
    p: "Matrix"
    s: "Matrix"


def _is_multiplicative(f, A: BasedAlgebra, B: BasedAlgebra) -> Optional[tuple]:
    """None if f(xy) = f(x)f(y) on all basis pairs, else a witness pair."""
    fx = [AlgebraElement({k: c for k, c in f.column(j).items()}) for j in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            try:
                prod = A.mul_basis(i, j)
            except WindowOverflowError:
                continue
            lhs = AlgebraElement()
            for k, c in prod.items():
                lhs = lhs + fx[k].scale(c)
            rhs = B.multiply(fx[i], fx[j])
            if lhs != rhs:
                return (i, j)
    return None


def make_split_extension(K, E, Q, i, p, s) -> SplitExtension:
    """Validate every split-extension invariant; raise naming the first failure."""
    from . import linalg

    problems = []
    if _is_multiplicative(i, K, E) is not None:
        problems.append("i not multiplicative")
    if _is_multiplicative(p, E, Q) is not None:
        problems.append("p not multiplicative")
    if not (p @ i).is_zero():
        problems.append("p∘i != 0")
    if linalg.rank(i) != K.dim:
        problems.append("i not injective")
    ker_p = linalg.nullspace(p)
    if linalg.rank(i) != len(ker_p) or linalg.rank(
        linalg.Matrix.from_columns(E.dim, [i.column(j) for j in range(K.dim)] + ker_p)
    ) != len(ker_p):
        problems.append("image(i) != kernel(p)")
    if (p @ s) != linalg.Matrix.identity(Q.dim):
        problems.append("p∘s != id")
    if problems:
        raise ValueError("invalid split extension: " + "; ".join(problems))
    return SplitExtension(K, E, Q, i, p, s)
