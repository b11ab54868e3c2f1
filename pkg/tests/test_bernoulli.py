import random
from fractions import Fraction
from math import factorial, floor

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from boxspline import Configuration, w_eval, w_quotient, w_series, w_twisted_1d
from boxspline.arrangement import random_regular_points, subspace_spanned, tope_key
from boxspline.bernoulli import bernoulli_poly
from boxspline.cyclo import Cyclo
from boxspline.errors import FormHitsInteger, IntegerTwist
from boxspline.poly import Poly1D, integrate_1d, lagrange_1d, parse_poly
from conftest import config
from oracles import fourier_w, tope_polynomial, twisted_series

h = Fraction(1, 2)


def test_bernoulli_polys_match_sympy():
    t = sympy.Symbol("t")
    for k in range(8):
        ref = sympy.Poly(sympy.bernoulli(k, t), t).all_coeffs()[::-1]
        assert bernoulli_poly(k) == Poly1D([Fraction(str(c)) for c in ref])
    assert bernoulli_poly(1) == Poly1D([-h, 1])
    assert bernoulli_poly(2) == Poly1D([Fraction(1, 6), -1, 1])


@pytest.mark.parametrize("k", range(1, 6))
def test_w_line_closed_form(k):
    c = Configuration.from_lists([[1]] * k)
    e = w_series(c)
    for t in [Fraction(3, 10), Fraction(-7, 3), Fraction(29, 11)]:
        assert e([t]) == -bernoulli_poly(k)(t - floor(t)) / factorial(k)


def test_w_examples():
    assert w_series(config("w"))([Fraction(3, 10)]) == Fraction(1, 5)
    assert w_series(config("w"))([Fraction(13, 10)]) == Fraction(1, 5)
    assert w_series(config("ww"))([h]) == Fraction(1, 24)
    assert w_eval(w_series(config("A2")), [Fraction(1, 4), Fraction(1, 3)]) == Fraction(35, 5184)
    with pytest.raises(FormHitsInteger):
        w_series(config("w"))([1])


def test_a2_example_regression():
    c = config("A2")
    e = w_series(c)
    lower = tope_polynomial(e, [Fraction(1, 4), Fraction(2, 3)], c)
    upper = tope_polynomial(e, [Fraction(2, 3), Fraction(1, 4)], c)
    P = lambda s: parse_poly(s, 2)
    assert lower == P("-1/6*(1 + v1 - 2*v2)*(v1 - 1 + v2)*(2*v1 - v2)")
    assert upper == P("-1/6*(v1 - 2*v2)*(v1 - 1 + v2)*(2*v1 - 1 - v2)")


def test_quotient_examples():
    c = config("A2")
    assert w_quotient(c, subspace_spanned(c, [0, 1])).format() == "1"
    assert w_quotient(c, subspace_spanned(c, [])).format() == w_series(c).format()
    q = w_quotient(c, subspace_spanned(c, [0]))
    for v in random_regular_points(c, 10, seed=2):
        assert q(v) == -bernoulli_poly(2)(v[1] - floor(v[1])) / 2


@pytest.mark.parametrize("name", ["A2", "B2", "cube+diag", "www"])
def test_periodicity(name):
    c = config(name)
    e = w_series(c)
    rng = random.Random(4)
    for v in random_regular_points(c, 8, seed=3):
        lam = [rng.randint(-3, 3) for _ in range(c.n)]
        assert e(v) == e([x + y for x, y in zip(v, lam)])


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_quotients_are_invariant_along_s(name):
    c = config(name)
    for s in c.subspaces:
        if 0 < s.dim < c.n:
            e = w_quotient(c, s)
            a = c.X[s.basis[0]]
            for v in random_regular_points(c, 5, seed=9):
                t = Fraction(1, 13)
                w = [x + t * y for x, y in zip(v, a)]
                assert e(v) == e(w)


@pytest.mark.parametrize("k", range(1, 6))
def test_mean_zero_and_derivative_chain(k):
    cell = lambda k: Poly1D([c * Fraction(-1, factorial(k)) for c in bernoulli_poly(k).coeffs])
    e = w_series(Configuration.from_lists([[1]] * k))
    nodes = [Fraction(i + 1, k + 3) for i in range(k + 1)]
    p = lagrange_1d(nodes, [e([t]) for t in nodes])
    assert p == cell(k)
    assert integrate_1d(p, 0, 1) == 0
    if k > 1:
        assert p.derivative() == cell(k - 1)


@pytest.mark.parametrize(
    "X,v",
    [([[1]], [0.3]), ([[1], [1]], [0.7]), ([[2]], [0.45]), ([[1], [2]], [0.15]), ([[1, 0], [0, 1], [1, 1]], [0.25, 0.6])],
)
def test_fourier_oracle(X, v):
    c = Configuration.from_lists(X)
    M = 200 if c.n == 1 else 40
    exact = float(w_series(c)([Fraction(str(x)) for x in v]))
    assert abs(fourier_w(X, v, M) - exact) < (1e-3 if c.n == 1 else 3e-3)


def test_twisted_examples():
    assert w_twisted_1d(1, h)(Fraction(1, 4)) == h
    assert w_twisted_1d(1, h)(Fraction(5, 4)) == -h
    assert w_twisted_1d(2, h)(Fraction(1, 4)) == Fraction(-1, 8)
    with pytest.raises(IntegerTwist):
        w_twisted_1d(2, 3)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(1, 4),
    st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 6)]),
    st.fractions(min_value=-3, max_value=3, max_denominator=17).filter(lambda t: t.denominator > 1),
)
def test_twisted_covariance(k, z, t):
    W = w_twisted_1d(k, z)
    assert W(t + 1) == Cyclo.root_of_unity(z) * W(t)


@pytest.mark.parametrize("k,z,t,cs", [(1, 0.5, 0.25, [1]), (2, 0.5, 0.25, [1, 1]), (2, 1 / 3, 0.3, [1, 1]), (3, 1 / 6, 1.7, [1, 2, 1]), (2, 0.5, -0.6, [2, 1])])
def test_twisted_series_oracle(k, z, t, cs):
    W = w_twisted_1d(k, Fraction(z).limit_denominator(100), cs)
    got = complex(W(Fraction(str(t))))
    want = twisted_series(k, z, t, cs, 4000)
    assert abs(got - want) < 2e-3
