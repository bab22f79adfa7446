"""Exact linear algebra over Expr entries, bracket projection and complements."""

from __future__ import annotations

from ..algebroid import AlgebroidError, SkewAlgebroid
from ..algebroid.core import _clean, _sum, det
from ..expr import ONE, ZERO, Expr, coerce, simplify, to_ratfunc


def _is_zero(e: Expr) -> bool:
    return to_ratfunc(e).is_zero()


def as_matrix(rows, allowed=None) -> list[list[Expr]]:
    out = [[simplify(coerce(v, allowed)) for v in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise AlgebroidError("ragged matrix")
    return out


def mat_det(rows) -> Expr:
    return simplify(det([list(r) for r in rows]))


def mat_mul(a, b) -> list[list[Expr]]:
    inner = len(b)
    return [
        [simplify(_sum(a[i][k] * b[k][j] for k in range(inner) if a[i][k] != ZERO and b[k][j] != ZERO))
         for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def mat_vec(a, v) -> list[Expr]:
    return [simplify(_sum(a[i][k] * v[k] for k in range(len(v)) if a[i][k] != ZERO)) for i in range(len(a))]


def transpose(a) -> list[list[Expr]]:
    return [list(col) for col in zip(*a)]


def _rref(rows):
    """Reduced row echelon form; pivot columns.  Pivots are exact nonzero tests."""
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, nrows) if not _is_zero(a[i][col])), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][col]
        a[r] = [simplify(v / piv) for v in a[r]]
        for i in range(nrows):
            if i != r and not _is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [simplify(v - f * w) for v, w in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return a, pivots


def mat_inverse(rows) -> list[list[Expr]]:
    """Gauss-Jordan inverse; ZeroDivisionError if singular over the rational-function field."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise AlgebroidError("inverse needs a square matrix")
    aug = [list(rows[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    red, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def nullspace(rows) -> list[list[Expr]]:
    """Basis of {v : A v = 0}."""
    ncols = len(rows[0])
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = simplify(-red[r][f])
        basis.append(v)
    return basis


def rank(rows) -> int:
    return len(_rref(rows)[1]) if rows else 0


def change_basis(E: SkewAlgebroid, B) -> SkewAlgebroid:
    """Same skew algebra in the frame d_j = sum_i B[i][j] e_i (point base only)."""
    return project_along(E, B, E.n)


def project_along(E: SkewAlgebroid, B, n0: int) -> SkewAlgebroid:
    """Bracket on D = span of the first n0 columns of B, projected along the remaining columns.

    [d_i, d_j]_D is the D-part of [d_i, d_j] in the decomposition E = D + C.
    """
    if E.m != 0:
        raise AlgebroidError("project_along supports point bases (m = 0) only")
    n = E.n
    B = as_matrix(B, set(E.params))
    if len(B) != n or any(len(r) != n for r in B):
        raise AlgebroidError(f"basis matrix must be {n}x{n}")
    if not 1 <= n0 <= n:
        raise AlgebroidError(f"n0={n0} outside 1..{n}")
    if _is_zero(mat_det(B)):
        raise AlgebroidError("singular basis matrix")
    Binv = mat_inverse(B)
    cols = transpose(B)
    c = {}
    for i in range(1, n0 + 1):
        for j in range(i + 1, n0 + 1):
            # [d_i, d_j] in the old frame; constant coefficients on a point base
            br = [
                _sum(
                    cols[i - 1][p - 1] * cols[j - 1][q - 1] * E.struct(p, q, r)
                    for p in range(1, n + 1)
                    for q in range(1, n + 1)
                    if cols[i - 1][p - 1] != ZERO and cols[j - 1][q - 1] != ZERO
                )
                for r in range(1, n + 1)
            ]
            new = mat_vec(Binv, br)
            for k in range(1, n0 + 1):
                c[(i, j, k)] = new[k - 1]
    frame = tuple(f"d{i}" for i in range(1, n0 + 1))
    if n0 == n and set(frame) & set(E.params):
        frame = E.frame
    return SkewAlgebroid((), frame, E.params, _clean(c), {}, E.dual_coords[:n0], E.fiber_coords[:n0])


def orthogonal_complement(g, D_basis) -> list[list[Expr]]:
    """Vectors spanning the g-orthogonal complement of the columns of D_basis."""
    from ..modular import BundleMetric

    rows = g.matrix if isinstance(g, BundleMetric) else g
    G = as_matrix(rows)
    n = len(G)
    D = as_matrix(D_basis)
    if len(D) != n:
        raise AlgebroidError(f"D basis must have {n} rows")
    if _is_zero(mat_det(G)):
        raise AlgebroidError("degenerate metric")
    n0 = len(D[0])
    if rank(D) < n0:
        raise AlgebroidError("D basis is rank deficient")
    # rows of the system: d^T G w = 0
    system = mat_mul(transpose(D), G)
    return nullspace(system)
