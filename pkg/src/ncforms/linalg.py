"""Exact sparse linear algebra over Q(i).

Vectors are sparse dicts coordinate -> Scalar (no stored zeros).  Elimination
uses first-nonzero pivoting with a deterministic insertion order, so echelon
complements, ranks and homology representatives are reproducible.
"""

from __future__ import annotations

from .scalars import ONE, Scalar


def vec_add(u: dict, v: dict, c=None) -> dict:
    """u + c*v (c defaults to 1)."""
    out = dict(u)
    for k, x in v.items():
        if c is not None:
            x = x * c
        s = out.get(k)
        s = x if s is None else s + x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(v: dict, c) -> dict:
    c = Scalar.coerce(c)
    if not c:
        return {}
    return {k: x * c for k, x in v.items()}


class Matrix:
    """A sparse exact matrix stored by columns."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = [dict() for _ in range(ncols)]
        if cols is not None:
            for j, col in enumerate(cols):
                self.cols[j] = {r: Scalar.coerce(c) for r, c in col.items() if Scalar.coerce(c)}

    @classmethod
    def from_columns(cls, nrows: int, columns) -> "Matrix":
        return cls(nrows, len(columns), columns)

    @classmethod
    def from_rows(cls, rows, ncols: int) -> "Matrix":
        m = cls(len(rows), ncols)
        for r, row in enumerate(rows):
            for c, x in row.items():
                x = Scalar.coerce(x)
                if x:
                    m.cols[c][r] = x
        return m

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [{j: ONE} for j in range(n)])

    def column(self, j: int) -> dict:
        return dict(self.cols[j])

    def entry(self, r: int, c: int) -> Scalar:
        return self.cols[c].get(r, Scalar(0))

    def apply(self, vec: dict) -> dict:
        out = {}
        for j, c in vec.items():
            for r, x in self.cols[j].items():
                s = out.get(r)
                s = x * c if s is None else s + x * c
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        assert self.ncols == other.nrows
        return Matrix(self.nrows, other.ncols, [self.apply(col) for col in other.cols])

    def __add__(self, other: "Matrix") -> "Matrix":
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(
            self.nrows, self.ncols, [vec_add(a, b) for a, b in zip(self.cols, other.cols)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(Scalar(-1))

    def scale(self, c) -> "Matrix":
        return Matrix(self.nrows, self.ncols, [vec_scale(col, c) for col in self.cols])

    def is_zero(self) -> bool:
        return all(not col for col in self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.cols == other.cols
        )

    def dense(self):
        return [
            [self.entry(r, c) for c in range(self.ncols)] for r in range(self.nrows)
        ]

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


class Echelon:
    """A reduced echelon basis built incrementally (first-nonzero pivoting).

    With ``history=True`` each inserted vector is augmented, so membership
    queries can also report the expressing coefficients.
    """

    def __init__(self, history: bool = False):
        self.rows = {}  # pivot coordinate -> (vector, history vector)
        self.history = history
        self.count = 0  # number of insertion attempts (for history coords)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def _reduce(self, v: dict, h: dict):
        """Eliminate every pivot coordinate of v against the current basis."""
        v = dict(v)
        h = dict(h)
        while True:
            hits = sorted(k for k in v if k in self.rows)
            if not hits:
                return v, h
            for q in hits:
                c = v.get(q)
                if not c:
                    continue
                row, rh = self.rows[q]
                v = vec_add(v, row, -c)
                if self.history:
                    h = vec_add(h, rh, -c)

    def residual(self, v: dict) -> dict:
        """v reduced modulo the current span."""
        r, _ = self._reduce(v, {})
        return r

    def coefficients(self, v: dict):
        """Coefficients expressing v over inserted vectors, or None.

        Requires history=True; coefficients are keyed by insertion index.
        """
        assert self.history
        r, h = self._reduce(v, {})
        if r:
            return None
        return {k: -c for k, c in h.items()}

    def insert(self, v: dict) -> bool:
        """Add v to the span; returns True if the rank grew."""
        idx = self.count
        self.count += 1
        h = {idx: ONE} if self.history else {}
        v, h = self._reduce(v, h)
        if not v:
            return False
        p = min(v)
        inv = v[p].inverse()
        v = vec_scale(v, inv)
        h = vec_scale(h, inv)
        # keep the basis fully reduced
        for q, (row, rh) in list(self.rows.items()):
            c = row.get(p)
            if c:
                self.rows[q] = (vec_add(row, v, -c), vec_add(rh, h, -c))
        self.rows[p] = (v, h)
        return True


def rank(m: Matrix) -> int:
    ech = Echelon()
    for col in m.cols:
        ech.insert(col)
    return ech.rank


def nullspace(m: Matrix) -> list:
    """Deterministic sparse kernel basis (columns as dicts)."""
    ech = Echelon(history=True)
    out = []
    for j, col in enumerate(m.cols):
        if not ech.insert(col):
            coeffs = ech.coefficients(col)
            vec = {k: -c for k, c in coeffs.items()}
            vec[j] = ONE
            out.append({k: c for k, c in vec.items() if c})
    return out


def express_in_span(vectors, target: dict):
    """Coefficients c with target = sum c_k vectors[k], or None."""
    ech = Echelon(history=True)
    for v in vectors:
        ech.insert(v)
    coeffs = ech.coefficients(target)
    if coeffs is None:
        return None
    # coefficients are keyed by insertion index == position in `vectors`
    return coeffs


class QuotientSpace:
    """Ambient coordinates modulo a spanned subspace, via echelon complement.

    The complement basis consists of the ambient coordinates that are not
    pivots of the subspace's reduced echelon basis (deterministic).
    """

    def __init__(self, ambient_dim: int, subspace_vectors):
        self.ambient_dim = ambient_dim
        self.ech = Echelon()
        for v in subspace_vectors:
            self.ech.insert(v)
        pivots = set(self.ech.rows)
        self.complement = [k for k in range(ambient_dim) if k not in pivots]
        self._pos = {k: i for i, k in enumerate(self.complement)}

    @property
    def dim(self) -> int:
        return len(self.complement)

    @property
    def subspace_rank(self) -> int:
        return self.ech.rank

    def contains(self, v: dict) -> bool:
        return not self.ech.residual(v)

    def project(self, v: dict) -> dict:
        """Coordinates of the class of v in the complement basis."""
        r = self.ech.residual(v)
        return {self._pos[k]: c for k, c in r.items()}

    def lift(self, coords: dict) -> dict:
        """Canonical ambient representative of quotient coordinates."""
        return {self.complement[k]: c for k, c in coords.items() if c}


class Homology:
    """ker(d_out) / im(d_in) with deterministic representatives."""

    def __init__(self, d_out: Matrix, d_in: Matrix):
        assert d_out.ncols == d_in.nrows
        self.ambient_dim = d_out.ncols
        boundaries = [col for col in d_in.cols if col]
        self.quot = QuotientSpace(self.ambient_dim, boundaries)
        cycles = nullspace(d_out)
        self.cycle_rank = len(cycles)
        self.image_rank = self.quot.subspace_rank
        ech = Echelon()
        self.reps = []  # ambient cycle representatives
        self._proj_reps = []  # their quotient coordinates
        for z in cycles:
            pz = self.quot.project(z)
            if ech.insert(pz):
                self.reps.append(z)
                self._proj_reps.append(pz)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def classify(self, vec: dict):
        """Homology coordinates of a cycle; None if vec is not a cycle class."""
        coeffs = express_in_span(self._proj_reps, self.quot.project(vec))
        if coeffs is None:
            return None
        return {k: c for k, c in coeffs.items() if c}


def induced_map(source: Homology, target: Homology, chain_map) -> Matrix:
    """Matrix of the map induced on homology by a chain map (dict -> dict)."""
    cols = []
    for z in source.reps:
        w = chain_map(z)
        cls = target.classify(w)
        assert cls is not None, "chain map image is not a cycle class"
        cols.append(cls)
    return Matrix.from_columns(target.dim, cols)


def exact_at(incoming: Matrix, outgoing: Matrix) -> bool:
    """image(incoming) == kernel(outgoing), both maps out of/into one space."""
    assert incoming.nrows == outgoing.ncols
    if not (outgoing @ incoming).is_zero():
        return False
    ker_dim = incoming.nrows - rank(outgoing)
    return rank(incoming) == ker_dim
