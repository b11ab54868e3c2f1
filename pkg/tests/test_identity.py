from fractions import Fraction

import pytest

from boxspline import (
    Configuration,
    Cyclo,
    continuous_conv_poly,
    dm_basis,
    dm_corollary_check,
    semidiscrete_eval,
    theorem1_check,
    theorem1_rhs,
    theorem2_check_1d,
    toric_vertices,
    twisted_corollary_check,
    twisted_semidiscrete_eval,
    x_of_g,
)
from boxspline.arrangement import random_regular_points
from boxspline.errors import NonRegularPoint, NotAToricVertex, NotInDMSpace, UnsupportedDimension
from boxspline.identity import CharacterG, parse_character, sub_configuration
from boxspline.poly import format_poly, parse_poly
from conftest import config

h = Fraction(1, 2)


def g_of(text):
    return parse_character(text)


def test_semidiscrete_examples():
    ww = config("ww")
    assert semidiscrete_eval(ww, parse_poly("t", 1), [h]) == -h
    assert semidiscrete_eval(ww, parse_poly("t^2", 1), [h]) == h
    with pytest.raises(NonRegularPoint):
        semidiscrete_eval(ww, parse_poly("t", 1), [1])


def test_continuous_examples():
    ww = config("ww")
    assert continuous_conv_poly(ww, parse_poly("t^2", 1)) == parse_poly("t^2 - 2*t + 7/6", 1)
    assert continuous_conv_poly(ww, parse_poly("t", 1)) == parse_poly("t - 1", 1)
    assert continuous_conv_poly(config("A2"), parse_poly("1", 2)) == parse_poly("1", 2)


def test_constant_gives_zero_rhs(any_config):
    c = any_config
    pts = random_regular_points(c, 3, seed=2)
    rep = theorem1_check(c, parse_poly("1", c.n), pts)
    assert rep.passed
    for r in rep.results:
        assert (r.lhs_discrete, r.lhs_continuous, r.difference, r.rhs_total) == (1, 1, 0, 0)


def test_hand_example():
    total, terms = theorem1_rhs(config("ww"), parse_poly("t^2", 1), [h])
    assert total == Fraction(1, 12)
    assert [(t.I, t.J, t.sign, t.value) for t in terms] == [
        ((), (0, 1), 1, Fraction(1, 12)),
        ((0,), (1,), -1, 0),
        ((1,), (0,), -1, 0),
        ((0, 1), (), 1, 0),
    ]


def test_a2_square():
    c = config("A2")
    assert theorem1_check(c, parse_poly("v1^2", 2), random_regular_points(c, 20, seed=0)).passed


@pytest.mark.parametrize("name,poly", [("ww", "t^3"), ("A2", "v1*v2"), ("www", "t^2"), ("e1e2", "v1*v2^2")])
def test_series_and_quadrature_agree_termwise(name, poly):
    c = config(name)
    f = parse_poly(poly, c.n)
    for v in random_regular_points(c, 2, seed=4):
        a_tot, a = theorem1_rhs(c, f, v, method="series")
        b_tot, b = theorem1_rhs(c, f, v, method="quadrature")
        assert a_tot == b_tot
        assert [t.value for t in a] == [t.value for t in b]


def test_term_bookkeeping(any_config):
    c = any_config
    f = parse_poly("v1^2" if c.n > 1 else "t^2", c.n)
    rep = theorem1_check(c, f, random_regular_points(c, 3, seed=5))
    for r in rep.results:
        assert sum((t.value for t in r.terms), Fraction(0)) == r.rhs_total


@pytest.mark.parametrize("name", ["A2", "B2", "ww", "cube+diag"])
def test_dm_elements_vanish_term_by_term(name):
    c = config(name)
    v = random_regular_points(c, 1, seed=6)[0]
    for p in dm_basis(c).basis:
        _, terms = theorem1_rhs(c, p, v)
        assert all(t.value == 0 for t in terms)


def test_lattice_covariance():
    c = config("B2")
    f = parse_poly("v1^2*v2 - v2 + 3", 2)
    lam = (2, -1)
    shifted = f.shift([-x for x in lam])  # u -> f(u + lam)
    for v in random_regular_points(c, 5, seed=7):
        moved = [x + y for x, y in zip(v, lam)]
        assert semidiscrete_eval(c, f, moved) == semidiscrete_eval(c, shifted, v)


def test_dm_corollary(any_config):
    rep = dm_corollary_check(any_config, random_regular_points(any_config, 4, seed=3))
    assert rep.passed
    assert len(rep.results) == 4 * len(rep.meta["basis"])


def test_toric_vertices_examples():
    assert [str(g) for g in toric_vertices(config("A2"))] == ["0,0"]
    assert [str(g) for g in toric_vertices(config("2w"))] == ["0", "1/2"]
    assert "1/2,1/2" in [str(g) for g in toric_vertices(config("B2"))]


def test_toric_vertices_span(any_config):
    c = any_config
    for g in toric_vertices(c):
        assert c.rank_of(x_of_g(c, g)) == c.n


def test_x_of_g():
    A2 = config("A2")
    assert x_of_g(A2, CharacterG((0, 0))) == (0, 1, 2)
    assert x_of_g(A2, g_of("1/2,1/2")) == (2,)
    assert x_of_g(config("2w"), g_of("1/2")) == (0,)


def test_character_reduction():
    assert CharacterG((Fraction(3, 2), Fraction(-1, 3))).G == (h, Fraction(2, 3))
    assert CharacterG((1, 2)).is_zero()
    assert g_of("1/2")([3]) == Cyclo.rational(-1, 2)
    with pytest.raises(ValueError):
        g_of("1/2,x")


def test_twisted_examples():
    c = config("2w")
    g = g_of("1/2")
    one = parse_poly("1", 1)
    assert twisted_semidiscrete_eval(c, g, one, [h]).is_zero()
    assert twisted_semidiscrete_eval(c, g, one, [Fraction(3, 4)]).is_zero()
    assert twisted_corollary_check(c, g, one, random_regular_points(c, 10, seed=1)).passed


def test_twisted_errors():
    c = config("2w")
    with pytest.raises(NotAToricVertex):
        twisted_corollary_check(c, g_of("0"), parse_poly("1", 1), [[h]])
    with pytest.raises(NotAToricVertex):
        twisted_corollary_check(c, g_of("1/3"), parse_poly("1", 1), [[h]])
    with pytest.raises(NotInDMSpace):
        twisted_corollary_check(c, g_of("1/2"), parse_poly("t", 1), [[h]])
    with pytest.raises(UnsupportedDimension):
        theorem2_check_1d(config("A2"), g_of("1/2,0"), parse_poly("1", 2), [[h, Fraction(1, 3)]])
    with pytest.raises(NotAToricVertex):
        theorem2_check_1d(config("w"), g_of("0"), parse_poly("1", 1), [[h]])


def test_twisted_b2_vertices():
    c = config("B2")
    pts = random_regular_points(c, 4, seed=9)
    for g in toric_vertices(c):
        if g.is_zero():
            continue
        sub = sub_configuration(c, x_of_g(c, g))
        for p in dm_basis(sub).basis:
            assert twisted_corollary_check(c, g, p, pts).passed, (str(g), format_poly(p))


def test_twisted_nonvertex_sum_is_not_forced_to_vanish():
    # sanity: the cancellation is specific to the twist, the plain sum is 1
    c = config("2w")
    assert semidiscrete_eval(c, parse_poly("1", 1), [h]) == 1


def test_theorem2_examples():
    w, ww2 = config("w"), config("2w")
    rep = theorem2_check_1d(ww2, g_of("1/2"), parse_poly("1", 1), [[h]])
    assert rep.passed and rep.results[0].rhs_total.is_zero()
    rep = theorem2_check_1d(w, g_of("1/2"), parse_poly("1", 1), [[Fraction(1, 4)]])
    r = rep.results[0]
    assert rep.passed and r.rhs_total == Cyclo.rational(1, 2)
    assert [t.value for t in r.terms] == [Cyclo.rational(1, 2), Cyclo.rational(0, 2)]
    rep = theorem2_check_1d(w, g_of("1/2"), parse_poly("t", 1), [[Fraction(1, 4)], [Fraction(5, 4)]])
    assert rep.passed
    at_quarter, at_five_quarters = rep.results
    # h(0) = 0 so the total vanishes, but the two terms do not
    assert [t.value for t in at_quarter.terms] == [Cyclo.rational(Fraction(-1, 4), 2), Cyclo.rational(Fraction(1, 4), 2)]
    assert at_five_quarters.lhs_discrete == Cyclo.rational(-1, 2)


def test_theorem2_third_root():
    c = config("ww")
    rep = theorem2_check_1d(c, g_of("1/3"), parse_poly("t^2 - t", 1), random_regular_points(c, 4, seed=2))
    assert rep.passed
