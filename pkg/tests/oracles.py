"""Independent brute-force oracles used to freeze golden values.

Nothing here touches the package's form or homology machinery: ranks come
from textbook dense Gaussian elimination, and the Hochschild boundary is
built directly from structure constants on plain index tuples.
"""

from itertools import product

from ncforms.scalars import ONE, Scalar


def dense_rank(rows):
    """Gaussian elimination on dense lists of Scalars; returns the rank."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def classical_hochschild_boundary(A, n):
    """The boundary C_n = A^(x)(n+1) -> C_{n-1} as a dense matrix (rows)."""
    src = list(product(range(A.dim), repeat=n + 1))
    dst = list(product(range(A.dim), repeat=n))
    pos = {t: i for i, t in enumerate(dst)}
    rows = [[Scalar(0)] * len(src) for _ in dst]
    for col, t in enumerate(src):
        for j in range(n):
            sgn = ONE if j % 2 == 0 else -ONE
            for k, c in A.mul_basis(t[j], t[j + 1]).items():
                out = t[:j] + (k,) + t[j + 2 :]
                rows[pos[out]][col] = rows[pos[out]][col] + sgn * c
        sgn = ONE if n % 2 == 0 else -ONE
        for k, c in A.mul_basis(t[n], t[0]).items():
            out = (k,) + t[1:n]
            rows[pos[out]][col] = rows[pos[out]][col] + sgn * c
    return rows, len(src), len(dst)


def classical_hochschild_dims(A, max_degree):
    """HH_n dims from the classical complex A^(x)(n+1).

    Comparable with the package's reports exactly when A is unital (the
    unnormalized and normalized complexes are then quasi-isomorphic).
    """
    dims = []
    ranks = {}

    def boundary_rank(n):
        if n == 0:
            return 0
        if n not in ranks:
            rows, _, _ = classical_hochschild_boundary(A, n)
            ranks[n] = dense_rank(rows) if rows else 0
        return ranks[n]

    for n in range(max_degree + 1):
        chain_dim = A.dim ** (n + 1)
        kernel = chain_dim - boundary_rank(n)
        dims.append(kernel - boundary_rank(n + 1))
    return dims
