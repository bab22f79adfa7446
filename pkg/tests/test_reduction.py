from fractions import Fraction

import pytest

from skewalg.algebroid import AlgebroidError, is_lie, make_algebroid
from skewalg.catalog import abelian, aff1, line_rank2, so3, tangent, tangent_poly
from skewalg.expr import ZERO, eval_expr, exprs_equal, parse_expr, simplify
from skewalg.modular import (
    identity_metric,
    make_metric,
    modular_form,
    relative_modular_class,
)
from skewalg.reduction import (
    carrier_bundle,
    chaplygin_sleigh,
    compose,
    cotangent_algebroid,
    direct_product,
    graph_relation,
    identity_morphism,
    identity_relation,
    inclusion,
    is_poisson,
    make_bivector,
    make_morphism,
    mat_inverse,
    mat_mul,
    morphism_check,
    morphism_modular_class,
    nullspace,
    orthogonal_complement,
    permute_frame,
    poisson_modular_vector_field,
    project_along,
    pullback_form,
    relation_modular_class,
    restrict,
    schouten_jacobiator,
    se2,
    sleigh_basis,
    sleigh_metric,
    subalgebroid_check,
    swap_relation,
)
from skewalg.reduction.linear import as_matrix

SYMS = {"m", "J", "a", "b"}


def E(text):
    return simplify(parse_expr(text, SYMS | {"x1", "x2", "y"}))


# subalgebroids


def test_subalgebroid_examples():
    assert subalgebroid_check(se2(), 2, 0)
    rep = subalgebroid_check(permute_frame(se2(), [3, 1, 2]), 2, 0)
    assert not rep and rep.max_violation == 1.0
    assert "c^3_12" in rep.violations[0]
    assert subalgebroid_check(tangent(2), 1, 1)


def test_subalgebroid_anchor_violation():
    T = tangent_poly()
    rep = subalgebroid_check(T, 2, 1)
    assert not rep and any("rho^2" in v for v in rep.violations)


def test_subalgebroid_ranges():
    with pytest.raises(AlgebroidError):
        subalgebroid_check(so3(), 0, 0)
    with pytest.raises(AlgebroidError):
        subalgebroid_check(so3(), 1, 1)


def test_sampled_fallback_for_transcendental_zero():
    H = make_algebroid(1, 2, c={(1, 2, 2): "sin(x1)^2 + cos(x1)^2 - 1"}, rho={(1, 1): 1})
    rep = subalgebroid_check(H, 1, 1)
    assert rep.ok


def test_restrict_examples():
    R = restrict(se2(), 2, 0)
    assert R.n == 2 and not R.c
    R = restrict(tangent(2), 1, 1)
    assert R.m == 1 and R.anchor(1, 1) == parse_expr("1")
    R = restrict(aff1(), 1, 0)
    assert R.n == 1 and not R.c
    with pytest.raises(AlgebroidError):
        restrict(so3(), 2, 0)


def test_permute_frame_round_trip():
    S = se2()
    P = permute_frame(permute_frame(S, [3, 1, 2]), [2, 3, 1])
    assert P.same_structure(S)


# linear algebra


def test_inverse_and_nullspace():
    A = as_matrix([["a", 1], [1, "b"]], {"a", "b"})
    inv = mat_inverse(A)
    prod = mat_mul(A, inv)
    assert all(prod[i][j] == (parse_expr("1") if i == j else ZERO) for i in range(2) for j in range(2))
    with pytest.raises(ZeroDivisionError):
        mat_inverse(as_matrix([[1, 2], [2, 4]]))
    ns = nullspace(as_matrix([[1, 2, 3]]))
    assert len(ns) == 2


def test_project_along_sleigh_printed_basis():
    B = sleigh_basis()
    D = project_along(se2(("m", "J", "a", "b")), B, 2)
    assert exprs_equal(D.struct(1, 2, 1), E("m*a/(J + m*a^2)"))
    assert exprs_equal(D.struct(1, 2, 2), E("m*a*b/(J + m*a^2)"))


def test_project_along_subalgebra_is_restriction():
    S = se2()
    B = as_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    D = project_along(S, B, 2)
    R = restrict(S, 2, 0)
    assert D.c == R.c
    A = aff1()
    D = project_along(A, as_matrix([[1, 0], [0, 1]]), 1)
    assert not D.c


def test_project_along_so3_is_abelian():
    D = project_along(so3(), as_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 2)
    assert not D.c


def test_project_along_errors():
    with pytest.raises(AlgebroidError, match="singular"):
        project_along(so3(), as_matrix([[1, 1, 0], [1, 1, 0], [0, 0, 1]]), 2)
    with pytest.raises(AlgebroidError, match="point bases"):
        project_along(tangent(1), as_matrix([[1]]), 1)


def test_orthogonal_complement_examples():
    I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    w = orthogonal_complement(I3, [[1], [0], [0]])
    assert len(w) == 2
    for v in w:
        assert v[0] == ZERO
    w = orthogonal_complement([[2, 0], [0, 3]], [[1], [0]])
    assert len(w) == 1 and w[0][0] == ZERO


def test_orthogonal_complement_sleigh_metric():
    mu = sleigh_metric()
    D = [[0, 1], [0, 0], [1, 0]]
    (w,) = orthogonal_complement(mu, D)
    target = [E("-m*a*b"), E("-(J + m*a^2)"), E("-m*a")]
    ratio = simplify(w[1] / target[1])
    for wi, ti in zip(w, target):
        assert exprs_equal(wi, ratio * ti)
    # g(w, d) = 0 for the columns of D
    for col in ([0, 0, 1], [1, 0, 0]):
        s = sum((w[i] * mu[i][j] * col[j] for i in range(3) for j in range(3)), ZERO)
        assert simplify(s) == ZERO


def test_orthogonal_complement_errors():
    with pytest.raises(AlgebroidError, match="degenerate"):
        orthogonal_complement([[1, 1], [1, 1]], [[1], [0]])
    with pytest.raises(AlgebroidError, match="rank"):
        orthogonal_complement([[1, 0], [0, 1]], [[1, 2], [2, 4]])


def test_sleigh_paper_complement_is_not_metric_orthogonal():
    mu = sleigh_metric()
    B = sleigh_basis(complement="paper")
    e3 = [B[i][2] for i in range(3)]
    e1 = [0, 0, 1]
    g = simplify(sum((e3[i] * mu[i][j] * e1[j] for i in range(3) for j in range(3)), ZERO))
    assert g != ZERO


# sleigh


def test_sleigh_numeric():
    D, mod = chaplygin_sleigh(1, 2, Fraction(1, 2), Fraction(1, 3))
    assert D.struct(1, 2, 1) == E("2/9") and D.struct(1, 2, 2) == E("2/27")
    assert mod.representative.equals(D.form(1, {1: "2/27", 2: "-2/9"}))


def test_sleigh_a_zero_is_modular():
    D, mod = chaplygin_sleigh(a=0)
    assert not D.c and mod.is_zero()


def test_sleigh_metric_complement_flips_sign():
    Dp, modp = chaplygin_sleigh()
    Dm, modm = chaplygin_sleigh(complement="metric")
    for k in (1, 2):
        assert exprs_equal(Dm.struct(1, 2, k), -Dp.struct(1, 2, k))
    assert modm.representative.equals(-modp.representative)


def test_sleigh_errors():
    with pytest.raises(AlgebroidError, match="degenerate"):
        chaplygin_sleigh(m=1, J=-1, a=1)
    with pytest.raises(AlgebroidError, match="complement"):
        chaplygin_sleigh(complement="other")


def test_sleigh_metric_nondegenerate():
    D = make_algebroid(0, 3)
    make_metric(D, sleigh_metric(1, 2, Fraction(1, 2), Fraction(1, 3)))


# products


def test_product_examples():
    P, _, _ = direct_product(abelian(2), abelian(3))
    assert P.n == 5 and not P.c
    D = chaplygin_sleigh()[0]
    S = so3()
    P, p1, p2 = direct_product(D, S)
    assert (P.m, P.n) == (0, 5)
    expected = pullback_form(p1, modular_form(D).representative) + pullback_form(p2, modular_form(S).representative)
    assert modular_form(P).representative.equals(expected)


def test_product_renames_clashes():
    T = tangent_poly()
    P, p1, p2 = direct_product(T, T)
    assert P.coords == ("x1", "x2", "x1_2", "x2_2")
    assert P.frame == ("e1", "e2", "e1_2", "e2_2")
    assert P.anchor(4, 3) == parse_expr("x1_2", {"x1_2"})
    assert morphism_check(p1) and morphism_check(p2)
    assert is_lie(P)


def test_product_formula_with_base():
    E1, E2 = line_rank2(), tangent_poly()
    P, p1, p2 = direct_product(E1, E2)
    expected = pullback_form(p1, modular_form(E1).representative) + pullback_form(p2, modular_form(E2).representative)
    assert modular_form(P).representative.equals(expected)


# morphisms


def test_morphism_check_examples():
    assert morphism_check(identity_morphism(so3()))
    assert morphism_check(inclusion(se2(), 2, 0))
    A, R = aff1(), abelian(1)
    good = make_morphism(A, R, [[1, 0]], [])
    bad = make_morphism(A, R, [[1, 1]], [])
    assert morphism_check(good)
    assert not morphism_check(bad)


def test_morphism_shape_errors():
    with pytest.raises(AlgebroidError):
        make_morphism(aff1(), abelian(1), [[1, 0, 0]], [])
    with pytest.raises(AlgebroidError):
        make_morphism(aff1(), tangent(1), [[1, 0]], [])
    with pytest.raises(AlgebroidError):
        make_morphism(tangent(1), abelian(1), [[1]])


def test_pullback_examples():
    S = so3()
    a = S.form(1, [1, "2", 3])
    assert pullback_form(identity_morphism(S), a).equals(a)
    A, R = aff1(), abelian(1)
    mor = make_morphism(A, R, [[1, 0]], [])
    assert pullback_form(mor, R.dual(1)).equals(A.dual(1))
    B = abelian(2)
    scale = make_morphism(B, B, [["3", 0], [0, "3"]])
    assert pullback_form(scale, B.dual(1)).equals(3 * B.dual(1))


def test_morphism_modular_class_examples():
    assert morphism_modular_class(identity_morphism(so3())).is_zero()
    inc = inclusion(aff1(), 1, 0)
    assert morphism_modular_class(inc).equals(relative_modular_class(aff1(), 1, 0))
    A, R = aff1(), abelian(1)
    assert morphism_modular_class(make_morphism(A, R, [[1, 0]], [])).equals(A.dual(1))
    with pytest.raises(AlgebroidError, match="not a morphism"):
        morphism_modular_class(make_morphism(A, R, [[1, 1]], []))


def test_compose():
    A, R = aff1(), abelian(1)
    f = make_morphism(A, R, [[1, 0]], [])
    g = compose(f, identity_morphism(A))
    assert g.F == f.F


# relations


MORPHISMS = [
    lambda: identity_morphism(so3()),
    lambda: inclusion(aff1(), 1, 0),
    lambda: make_morphism(aff1(), abelian(1), [[1, 0]], []),
    lambda: inclusion(se2(), 2, 0),
    lambda: direct_product(line_rank2(), tangent_poly())[2],
]


@pytest.mark.parametrize("factory", MORPHISMS)
def test_graph_relation_matches_morphism(factory):
    mor = factory()
    rc = relation_modular_class(graph_relation(mor))
    mc = morphism_modular_class(mor).representative
    assert set(rc.coeffs) == set(mc.coeffs)
    assert all(exprs_equal(rc.coeffs[k], mc.coeffs[k]) for k in rc.coeffs)


def test_identity_and_swap_relation():
    assert relation_modular_class(identity_relation(aff1())).is_zero()
    rel = graph_relation(make_morphism(aff1(), abelian(1), [[1, 0]], []))
    a = relation_modular_class(rel)
    b = relation_modular_class(swap_relation(rel))
    assert b.equals(-a)


def test_relation_legs_share_carrier():
    from skewalg.reduction import LinearRelation

    R = carrier_bundle(2)
    leg = make_morphism(R, abelian(1), [[1, 0]], [])
    other = make_morphism(carrier_bundle(2), abelian(1), [[1, 0]], [])
    with pytest.raises(AlgebroidError):
        LinearRelation(R, leg, other)


# Poisson


def test_cotangent_examples():
    Z = make_bivector(("x1", "x2"), {})
    T = cotangent_algebroid(Z)
    assert not T.c and not T.rho
    S = cotangent_algebroid(make_bivector(("x1", "x2"), {(1, 2): 1}))
    assert not S.c and modular_form(S).is_zero()
    L = make_bivector(("x1", "x2"), {(1, 2): "x1"})
    C = cotangent_algebroid(L)
    assert modular_form(C).equals(C.form(1, {2: -2}))
    Zv = poisson_modular_vector_field(L)
    assert Zv.components == (ZERO, parse_expr("-1"))


@pytest.mark.parametrize(
    "entries",
    [
        {(1, 2): "x3", (2, 3): "x1", (3, 1): "x2"},
        {(1, 2): "x1*x2", (1, 3): "x1*x3"},
        {(1, 2): "x3^2", (1, 3): "x1 + 1", (2, 3): 0},
        {(1, 2): "x1*x2", (2, 3): "x3"},
    ],
)
def test_cotangent_lie_iff_poisson(entries):
    L = make_bivector(("x1", "x2", "x3"), entries)
    assert is_lie(cotangent_algebroid(L)) == is_poisson(L)


def test_schouten_detects_non_poisson():
    L = make_bivector(("x1", "x2", "x3"), {(1, 2): "x3^2", (1, 3): "x1 + 1"})
    assert schouten_jacobiator(L)
    assert not is_lie(cotangent_algebroid(L))


def test_bivector_errors():
    with pytest.raises(AlgebroidError):
        make_bivector(("x1",), {(1, 1): 1})
    with pytest.raises(AlgebroidError):
        make_bivector(("x1", "x2"), {(1, 2): 1, (2, 1): 1})
    with pytest.raises(AlgebroidError):
        make_bivector(("x1", "x2"), {(1, 3): 1})


def test_identity_metric_shape():
    g = identity_metric(so3())
    assert g[1, 1] == parse_expr("1") and g[1, 2] == ZERO
    assert eval_expr(g.inner([1, 2, 3], [1, 1, 1]), {}) == 6
