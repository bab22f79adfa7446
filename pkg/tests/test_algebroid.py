import random
from itertools import combinations

import pytest

from skewalg.algebroid import (
    AlgebroidError,
    almost_lie_defect,
    anchor_apply,
    anchor_vf,
    bracket,
    complete_lift,
    de_rham,
    hamiltonian_vf,
    interior_product,
    is_almost_lie,
    is_lie,
    jacobiator,
    lie_derivative,
    linear_bivector,
    make_algebroid,
    pair,
    poisson_bracket,
    vertical_lift_oneform,
    wedge,
)
from skewalg.catalog import (
    abelian,
    aff1,
    crafted_anchor,
    line_rank2,
    nonlie,
    so3,
    tangent,
    tangent_poly,
)
from skewalg.expr import (
    ZERO,
    Sym,
    compile_expr,
    eval_expr,
    exprs_equal,
    parse_expr,
    simplify,
    subst_expr,
)
from skewalg.reduction import se2


def test_make_se2():
    E = se2()
    assert E.m == 0 and E.n == 3
    assert E.struct(3, 1, 2) == parse_expr("1") and E.struct(1, 3, 2) == parse_expr("-1")


def test_make_tangent():
    E = tangent(2)
    assert E.anchor(1, 1) == parse_expr("1") and E.anchor(1, 2) == ZERO


@pytest.mark.parametrize(
    "kwargs,match",
    [
        (dict(c={(1, 1, 1): 1}), "antisymmetry"),
        (dict(c={(1, 2, 4): 1}), "out of range"),
        (dict(c={(1, 2, 1): 1, (2, 1, 1): 1}), "duplicate"),
        (dict(c={(1, 2, 1): "xi1"}), "fiber symbol"),
        (dict(c={(1, 2, 1): "q"}), "unknown symbol"),
        (dict(rho={(1, 2): 1}), "out of range"),
    ],
)
def test_make_errors(kwargs, match):
    with pytest.raises(AlgebroidError, match=match):
        make_algebroid(1, 3, **kwargs)


def test_bad_names():
    with pytest.raises(AlgebroidError):
        make_algebroid(1, 1, coords=("sin",))
    with pytest.raises(AlgebroidError):
        make_algebroid(1, 1, coords=("x",), params=("x",))


def test_anchor_vf():
    T = tangent(1)
    assert anchor_vf(T, T.e(1)).components == (parse_expr("1"),)
    S = so3()
    assert anchor_vf(S, S.e(1)).components == ()
    E = make_algebroid(1, 1, rho={(1, 1): "x1"})
    assert anchor_vf(E, E.e(1)).components == (Sym("x1"),)


def test_bracket_examples():
    E = se2()
    assert bracket(E, E.e(3), E.e(1)).equals(E.e(2))
    X = E.section([1, 2, 3])
    assert bracket(E, X, X).is_zero()
    T = make_algebroid(1, 1, rho={(1, 1): 1}, coords=("x",))
    assert bracket(T, T.section(["x"]), T.e(1)).equals(-T.e(1))


def test_jacobiator_examples():
    E = so3()
    assert jacobiator(E, E.e(1), E.e(2), E.e(3)).is_zero()
    N = nonlie()
    assert jacobiator(N, N.e(1), N.e(2), N.e(3)).equals(-N.e(3))
    A = abelian(3)
    assert jacobiator(A, A.e(1), A.e(2), A.e(3)).is_zero()


def test_is_lie_examples():
    assert is_lie(se2()) and is_lie(so3()) and is_lie(aff1()) and is_lie(tangent_poly())
    assert not is_lie(nonlie())
    rng = random.Random(4)
    for _ in range(5):
        c = {(1, 2, k): rng.randint(-5, 5) for k in (1, 2)}
        assert is_lie(make_algebroid(0, 2, c=c))


def test_crafted_anchor_defect():
    E = crafted_anchor()
    d = almost_lie_defect(E, E.e(1), E.e(2))
    assert d.equals(type(d)(("x",), (parse_expr("-1"),)))
    assert jacobiator(E, *E.frame_sections()[:2], E.e(1)).is_zero()
    assert not is_almost_lie(E)
    assert not is_lie(E)


def test_almost_lie_trivial_cases():
    E = so3()
    assert almost_lie_defect(E, E.e(1), E.e(2)).components == ()
    T = tangent_poly()
    assert almost_lie_defect(T, T.e(1), T.e(2)).is_zero()


def test_de_rham_examples():
    E = so3()
    assert de_rham(E, E.function(1)).is_zero()
    assert de_rham(E, E.dual(3)).equals(-wedge(E.dual(1), E.dual(2)))
    L = make_algebroid(1, 1, rho={(1, 1): "x"}, coords=("x",))
    assert de_rham(L, L.function("x^2")).equals(L.form(1, {1: "2*x^2"}))


def test_de_rham_top_degree_is_zero():
    E = so3()
    top = E.form(3, {(1, 2, 3): 1})
    assert de_rham(E, top).is_zero()


def test_lie_derivative_examples():
    E = aff1()
    assert lie_derivative(E, E.e(1), E.e(2)).equals(bracket(E, E.e(1), E.e(2)))
    S = se2()
    w = lie_derivative(S, S.e(3), S.dual(2))
    assert simplify(pair(w, [S.e(1)])) == parse_expr("-1")
    L = make_algebroid(1, 1, rho={(1, 1): "x"}, coords=("x",))
    assert lie_derivative(L, L.e(1), L.function("x")).value == Sym("x")


def test_interior_product_examples():
    E = so3()
    w = wedge(E.dual(1), E.dual(2))
    assert interior_product(E.e(1), w).equals(E.dual(2))
    assert interior_product(E.e(2), w).equals(-E.dual(1))
    assert interior_product(E.e(3), w).is_zero()
    with pytest.raises(AlgebroidError):
        interior_product(E.e(1), E.function(1))


def test_wedge_pairing_convention():
    E = so3()
    a, b = E.form(1, [1, 2, 0]), E.form(1, [0, 1, 3])
    X, Y = E.section([1, 0, 1]), E.section([2, 1, 0])
    lhs = pair(wedge(a, b), [X, Y])
    rhs = pair(a, [X]) * pair(b, [Y]) - pair(a, [Y]) * pair(b, [X])
    assert simplify(lhs - rhs) == ZERO


def test_hamiltonian_examples():
    E = so3()
    assert hamiltonian_vf(E, parse_expr("5")).is_zero()
    H = parse_expr("(xi1^2 + xi2^2 + xi3^2)/2", set(E.dual_coords))
    XH = hamiltonian_vf(E, H)
    env = {"xi1": 1, "xi2": 0, "xi3": 0}
    assert all(eval_expr(c, env) == 0 for c in XH.components)


def test_hamiltonian_stray_symbol():
    with pytest.raises(AlgebroidError):
        hamiltonian_vf(so3(), parse_expr("q"))


def test_vertical_lift():
    E = so3()
    v = vertical_lift_oneform(E, E.dual(1))
    assert v["xi1"] == parse_expr("1") and v["xi2"] == ZERO
    assert vertical_lift_oneform(E, E.form(1, {})).is_zero()


def test_basic_function_hamiltonian():
    E = make_algebroid(1, 1, rho={(1, 1): "x"}, coords=("x",))
    f = parse_expr("x", {"x"})
    lhs = vertical_lift_oneform(E, de_rham(E, E.function(f)))
    assert (lhs + hamiltonian_vf(E, f)).is_zero()
    assert lhs["xi1"] == Sym("x")


def test_complete_lift_examples():
    A = abelian(2)
    assert complete_lift(A, A.section([1, 2])).is_zero()
    E = so3()
    cl = complete_lift(E, E.e(3))
    assert cl["y1"] == Sym("y2") and cl["y2"] == simplify(-Sym("y1")) and cl["y3"] == ZERO
    T = make_algebroid(1, 1, rho={(1, 1): 1}, coords=("x",))
    cl = complete_lift(T, T.e(1))
    assert cl["x"] == parse_expr("1") and cl["y1"] == ZERO


def test_complete_lift_homogeneous():
    E = line_rank2()
    X = E.section(["x", "1 + x^2"])
    cl = complete_lift(E, X)
    lam = Sym("lam")
    scaled = {y: lam * Sym(y) for y in E.fiber_coords}
    for name, comp in zip(cl.coords, cl.components):
        if name in E.fiber_coords:
            assert exprs_equal(subst_expr(comp, scaled), lam * comp)
        else:
            assert subst_expr(comp, scaled) == comp


def test_linear_bivector():
    E = so3()
    pi = linear_bivector(E)
    assert pi[("xi1", "xi2")] == Sym("xi3")
    assert all(v == ZERO for v in linear_bivector(abelian(2)).values())


def test_poisson_bracket_matches_bivector():
    E = line_rank2()
    assert poisson_bracket(E, Sym("xi1"), Sym("xi2")) == linear_bivector(E)[("xi1", "xi2")]
    assert poisson_bracket(E, Sym("xi1"), Sym("x")) == E.anchor(1, 1)


SUITE = [so3, se2, aff1, tangent_poly, nonlie, crafted_anchor, line_rank2, lambda: tangent(2)]


@pytest.mark.parametrize("factory", SUITE)
def test_antisymmetry_and_leibniz(factory):
    E = factory()
    frame = E.frame_sections()
    f = E.expr(" + ".join(["1"] + [f"{x}^2" for x in E.coords]) + (f" + 3*{E.coords[0]}" if E.coords else ""))
    for X in frame:
        for Y in frame:
            assert (bracket(E, X, Y) + bracket(E, Y, X)).is_zero()
            lhs = bracket(E, X, f * Y)
            rhs = anchor_apply(E, X, f) * Y + f * bracket(E, X, Y)
            assert lhs.equals(rhs)


@pytest.mark.parametrize("factory", SUITE)
def test_duality(factory):
    E = factory()
    frame = E.frame_sections()
    for k in range(1, E.n + 1):
        a = E.dual(k)
        da = de_rham(E, a)
        for X, Y in combinations(frame, 2):
            lhs = pair(da, [X, Y])
            rhs = anchor_apply(E, X, pair(a, [Y])) - anchor_apply(E, Y, pair(a, [X])) - pair(a, [bracket(E, X, Y)])
            assert exprs_equal(lhs, rhs)


@pytest.mark.parametrize("factory", SUITE)
def test_hamiltonian_derivation(factory):
    E = factory()
    names = list(E.coords) + list(E.dual_coords)
    H1 = E.expr(" + ".join(f"{x}*{x}" for x in names[:2]) + " + 1", extra=E.dual_coords)
    H2 = E.expr(f"{E.dual_coords[0]} * ({names[-1]} + 2)", extra=E.dual_coords)
    lhs = hamiltonian_vf(E, H1 * H2)
    rhs = hamiltonian_vf(E, H2).scale(H1) + hamiltonian_vf(E, H1).scale(H2)
    rng = random.Random(2)
    fl, fr = lhs.compile(names), rhs.compile(names)
    for _ in range(20):
        vals = [rng.uniform(-2, 2) for _ in names]
        for a, b in zip(fl(*vals), fr(*vals)):
            assert abs(a - b) <= 1e-9


def test_graded_arithmetic_and_printing():
    E = so3()
    a = E.form(1, {1: 2, 2: "-1"})
    assert str(a) == "2*e^1 - e^2"
    assert str(E.form(2, {(2, 1): 1})) == "-e^1^e^2"
    assert (a - a).is_zero()
    assert str(E.section([0, 1, 0])) == "e2"
    assert str(E.form(1, {})) == "0"
    with pytest.raises(AlgebroidError):
        _ = a + E.section([1, 0, 0])


def test_host_mismatch():
    with pytest.raises(AlgebroidError, match="different algebroid"):
        bracket(so3(), so3().e(1), so3().e(2))


def test_substitute_params():
    E = make_algebroid(0, 2, c={(1, 2, 1): "k"}, params=("k",))
    F = E.substitute({"k": 3})
    assert F.params == () and F.struct(1, 2, 1) == parse_expr("3")
    assert compile_expr(E.struct(1, 2, 1), ("k",))(2.0) == 2.0
