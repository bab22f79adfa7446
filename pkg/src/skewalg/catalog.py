"""Standard example algebroids."""

from __future__ import annotations

from .algebroid import SkewAlgebroid, make_algebroid
from .reduction.sleigh import chaplygin_sleigh, se2


def so3() -> SkewAlgebroid:
    return make_algebroid(0, 3, c={(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1})


def aff1() -> SkewAlgebroid:
    """[e1, e2] = e2."""
    return make_algebroid(0, 2, c={(1, 2, 2): 1})


def abelian(n: int, m: int = 0) -> SkewAlgebroid:
    return make_algebroid(m, n)


def tangent(m: int) -> SkewAlgebroid:
    """TM over R^m with the coordinate frame."""
    return make_algebroid(m, m, rho={(i, i): 1 for i in range(1, m + 1)})


def tangent_poly() -> SkewAlgebroid:
    """TR^2 in the frame e1 = d1, e2 = d2 + x1 d1, so [e1, e2] = e1."""
    return make_algebroid(2, 2, c={(1, 2, 1): 1}, rho={(1, 1): 1, (2, 1): "x1", (2, 2): 1})


def nonlie() -> SkewAlgebroid:
    """Skew algebra with [e1, e2] = e3, [e1, e3] = e1; Jacobiator on (e1, e2, e3) is -e3."""
    return make_algebroid(0, 3, c={(1, 2, 3): 1, (1, 3, 1): 1})


def crafted_anchor() -> SkewAlgebroid:
    """Zero bracket with anchor d_x, x d_x: Jacobi holds on frames but the anchor is not a morphism."""
    return make_algebroid(1, 2, rho={(1, 1): 1, (2, 1): "x"}, coords=("x",))


def line_rank2() -> SkewAlgebroid:
    """Rank 2 over R with non-constant anchor and bracket."""
    return make_algebroid(1, 2, c={(1, 2, 1): "x"}, rho={(1, 1): "x", (2, 1): "x^2"}, coords=("x",))


def sleigh(m=None, J=None, a=None, b=None, complement: str = "paper") -> SkewAlgebroid:
    return chaplygin_sleigh(m, J, a, b, complement)[0]


EXAMPLES = {
    "so3": so3,
    "se2": se2,
    "aff1": aff1,
    "abelian3": lambda: abelian(3),
    "tangent2": lambda: tangent(2),
    "tangent_poly": tangent_poly,
    "nonlie": nonlie,
    "crafted_anchor": crafted_anchor,
    "line_rank2": line_rank2,
    "sleigh": sleigh,
}


def semidirect(A) -> SkewAlgebroid:
    """R x_A R^k: [f0, f_i] = sum_j A[j][i] f_j, indices f0..fk as e1..e(k+1)."""
    k = len(A)
    c = {}
    for i in range(k):
        for j in range(k):
            if A[j][i]:
                c[(1, i + 2, j + 2)] = A[j][i]
    return make_algebroid(0, k + 1, c=c)


def random_lie_case(rng, n=None):
    """Random constant Lie algebra in a random frame whose first vector spans a random line.

    The basis change is P L D U (permutation, unit triangular factors, rational diagonal), which
    keeps structure constants moderate.  E0 = span{e1} (n0 = 1, m0 = 0) is a subalgebra.
    """
    from fractions import Fraction

    from .reduction.linear import as_matrix, change_basis, mat_mul

    n = n or rng.randint(2, 4)
    A = [[rng.randint(-2, 2) for _ in range(n - 1)] for _ in range(n - 1)]
    E = semidirect(A)
    perm = list(range(n))
    rng.shuffle(perm)
    P = [[int(perm[i] == j) for j in range(n)] for i in range(n)]
    L = [[1 if i == j else (rng.randint(-1, 1) if i > j else 0) for j in range(n)] for i in range(n)]
    D = [[rng.choice([Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(2)]) if i == j else 0 for j in range(n)] for i in range(n)]
    U = [[1 if i == j else (rng.randint(-1, 1) if i < j else 0) for j in range(n)] for i in range(n)]
    B = mat_mul(mat_mul(as_matrix(P), as_matrix(L)), mat_mul(as_matrix(D), as_matrix(U)))
    return change_basis(E, B)
