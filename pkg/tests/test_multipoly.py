import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunklsphere import EXACT, FLOAT, MultiPoly, monomials_of_degree
from dunklsphere.multipoly import DegreeCapError, ModeError, NonDivisibleError


def frac(a, b=1):
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# construction and basics
# ---------------------------------------------------------------------------

def test_zero_and_constant():
    z = MultiPoly.zero(3, EXACT)
    assert z.is_zero and z.degree() == -1
    c = MultiPoly.constant(3, frac(5, 2), EXACT)
    assert c.degree() == 0
    assert c.coefficient((0, 0, 0)) == frac(5, 2)


def test_variable_and_monomial():
    x1 = MultiPoly.variable(2, 0, EXACT)
    assert x1.coefficient((1, 0)) == 1
    m = MultiPoly.monomial(2, (2, 3), frac(1, 3), EXACT)
    assert m.degree() == 5


def test_exact_mode_rejects_floats():
    with pytest.raises(ModeError):
        MultiPoly.constant(2, 0.5, EXACT)


def test_float_mode_demotes_fractions():
    p = MultiPoly.constant(2, frac(1, 2), FLOAT)
    assert p.coefficient((0, 0)) == 0.5
    assert isinstance(p.coefficient((0, 0)), float)


def test_mixed_mode_arithmetic_errors():
    a = MultiPoly.variable(2, 0, EXACT)
    b = MultiPoly.variable(2, 0, FLOAT)
    with pytest.raises(ModeError):
        a + b
    with pytest.raises(ModeError):
        a * b


def test_immutability():
    p = MultiPoly.variable(2, 0, EXACT)
    with pytest.raises(AttributeError):
        p.dim = 5


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

def test_ring_identities():
    x = MultiPoly.variable(2, 0, EXACT)
    y = MultiPoly.variable(2, 1, EXACT)
    p = (x + y) * (x - y)
    q = x * x - y * y
    assert p == q
    assert (p - q).is_zero


def test_scale_and_neg():
    x = MultiPoly.variable(2, 0, EXACT)
    assert x.scale(frac(-3)) == -(x + x + x)


def test_power_binomial():
    x = MultiPoly.variable(2, 0, EXACT)
    y = MultiPoly.variable(2, 1, EXACT)
    p = (x + y).power(4)
    assert p.coefficient((2, 2)) == 6
    assert p.coefficient((1, 3)) == 4
    assert p.degree() == 4


def test_power_zero_is_one():
    x = MultiPoly.variable(2, 0, EXACT)
    assert x.power(0) == MultiPoly.constant(2, 1, EXACT)


def test_degree_cap():
    x = MultiPoly.variable(1, 0, EXACT)
    with pytest.raises(DegreeCapError):
        x.power(100)


def test_mul_with_max_degree_guard():
    x = MultiPoly.variable(1, 0, EXACT)
    with pytest.raises(DegreeCapError):
        (x * x).mul(x, max_degree=2)


def test_conjugate_complex():
    p = MultiPoly.constant(1, 1 + 2j, FLOAT)
    assert p.conjugate().coefficient((0,)) == 1 - 2j


# ---------------------------------------------------------------------------
# calculus and substitution
# ---------------------------------------------------------------------------

def test_partial_derivative():
    x = MultiPoly.variable(2, 0, EXACT)
    y = MultiPoly.variable(2, 1, EXACT)
    p = x.power(3) * y + y.power(2)
    dp = p.partial_derivative(0)
    assert dp == x.power(2) * y.scale(3)
    dq = p.partial_derivative(1)
    assert dq == x.power(3) + y.scale(2)


def test_substitute_linear_rotation():
    # p(x, y) = x^2 + y^2 is invariant under rotations
    x = MultiPoly.variable(2, 0, FLOAT)
    y = MultiPoly.variable(2, 1, FLOAT)
    p = x * x + y * y
    c, s = math.cos(0.7), math.sin(0.7)
    q = p.substitute_linear(((c, -s), (s, c)))
    pts = np.random.default_rng(0).standard_normal((20, 2))
    assert np.allclose(q.eval_many(pts), p.eval_many(pts), atol=1e-12)


def test_substitute_linear_exact_reflection():
    x = MultiPoly.variable(2, 0, EXACT)
    y = MultiPoly.variable(2, 1, EXACT)
    p = x.power(2) * y
    # negate the first coordinate
    q = p.substitute_linear(((frac(-1), frac(0)), (frac(0), frac(1))))
    assert q == p


# ---------------------------------------------------------------------------
# division by linear forms
# ---------------------------------------------------------------------------

def test_divide_simple_oracle():
    x = MultiPoly.variable(2, 0, EXACT)
    p = x.power(3).scale(2)
    q = p.divide_by_linear_form((frac(1), frac(0)))
    assert q == x.power(2).scale(2)


def test_divide_non_divisible_raises():
    y = MultiPoly.variable(2, 1, EXACT)
    with pytest.raises(NonDivisibleError):
        y.divide_by_linear_form((frac(1), frac(0)))


def test_divide_times_form_recovers():
    x = MultiPoly.variable(3, 0, EXACT)
    y = MultiPoly.variable(3, 1, EXACT)
    z = MultiPoly.variable(3, 2, EXACT)
    form = x - y + z.scale(frac(2))
    p = form * (x * y + z.power(2) - MultiPoly.constant(3, frac(1, 7), EXACT))
    q = p.divide_by_linear_form((frac(1), frac(-1), frac(2)))
    assert q * form == p


@st.composite
def exact_polys(draw, dim=2, max_terms=5, max_deg=4):
    n_terms = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n_terms):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in range(dim))
        num = draw(st.integers(-9, 9))
        den = draw(st.integers(1, 9))
        terms[exps] = terms.get(exps, Fraction(0)) + Fraction(num, den)
    p = MultiPoly.zero(dim, EXACT)
    for exps, c in terms.items():
        if c:
            p = p + MultiPoly.monomial(dim, exps, c, EXACT)
    return p


@given(exact_polys())
@settings(max_examples=60, deadline=None)
def test_reflection_difference_divisible(p):
    # f - f o s_v is always divisible by <v, x>; here v = e1 - e2
    s = ((frac(0), frac(1)), (frac(1), frac(0)))  # swap coordinates
    diff = p - p.substitute_linear(s)
    q = diff.divide_by_linear_form((frac(1), frac(-1)))
    form = (MultiPoly.variable(2, 0, EXACT) - MultiPoly.variable(2, 1, EXACT))
    assert q * form == diff


# ---------------------------------------------------------------------------
# exact vs float agreement
# ---------------------------------------------------------------------------

@given(exact_polys(dim=3, max_terms=6, max_deg=5))
@settings(max_examples=40, deadline=None)
def test_exact_float_evaluation_agrees(p):
    pts = np.random.default_rng(7).uniform(-1, 1, size=(10, 3))
    pf = p.to_float()
    vals_f = pf.eval_many(pts)
    for k in range(pts.shape[0]):
        exact_args = tuple(Fraction(pts[k, j]) for j in range(3))
        ev = float(p.eval(exact_args))
        assert abs(ev - vals_f[k]) <= 1e-12 * max(1.0, abs(ev))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

@given(exact_polys(dim=3, max_terms=6, max_deg=5))
@settings(max_examples=60, deadline=None)
def test_text_round_trip(p):
    assert MultiPoly.from_text(p.to_text(), 3, EXACT) == p


def test_text_format_stability():
    x = MultiPoly.variable(2, 0, EXACT)
    y = MultiPoly.variable(2, 1, EXACT)
    p = x.power(2) * y.scale(frac(3, 2)) - MultiPoly.constant(2, frac(1), EXACT)
    assert MultiPoly.from_text(p.to_text(), 2, EXACT) == p
    assert "x1" in p.to_text()


def test_float_round_trip():
    p = (MultiPoly.variable(2, 0, FLOAT) * 0.125 +
         MultiPoly.constant(2, -3.0, FLOAT))
    assert MultiPoly.from_text(p.to_text(), 2, FLOAT) == p


# ---------------------------------------------------------------------------
# graded monomial order
# ---------------------------------------------------------------------------

def test_monomials_of_degree_count_and_order():
    for d, n in [(2, 5), (3, 4), (4, 3)]:
        monos = monomials_of_degree(d, n)
        assert len(monos) == math.comb(n + d - 1, d - 1)
        assert monos[0] == (n,) + (0,) * (d - 1)
        assert monos == sorted(monos, reverse=True)


def test_homogeneous_components():
    x = MultiPoly.variable(2, 0, EXACT)
    y = MultiPoly.variable(2, 1, EXACT)
    p = x * y + x + MultiPoly.constant(2, frac(4), EXACT)
    comps = p.homogeneous_components()
    assert [deg for deg, _ in comps] == [0, 1, 2]
    total = MultiPoly.zero(2, EXACT)
    for _, c in comps:
        total = total + c
    assert total == p
