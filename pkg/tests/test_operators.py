import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from dunklsphere import (
    EXACT,
    FLOAT,
    DunklContext,
    Function1D,
    MultiPoly,
    UnsupportedGroupError,
    dunkl_apply,
    dunkl_laplacian,
    harmonic_basis,
    harmonic_space_dimension,
    intertwine,
    kernel_translate_batch,
    kernel_translate_eval,
    monomials_of_degree,
    translate_as_polynomial,
)


def xvar(d, i, mode=EXACT):
    return MultiPoly.variable(d, i, mode)


# ---------------------------------------------------------------------------
# Dunkl operators, exact mode
# ---------------------------------------------------------------------------

def test_dunkl_on_coordinate():
    ctx = DunklContext.create("zd2", 2, (1, 2))
    d1 = dunkl_apply(ctx, 0, xvar(2, 0))
    assert d1 == MultiPoly.constant(2, Fraction(3), EXACT)  # 1 + 2 kappa_1
    d2 = dunkl_apply(ctx, 1, xvar(2, 1))
    assert d2 == MultiPoly.constant(2, Fraction(5), EXACT)  # 1 + 2 kappa_2


def test_dunkl_on_cube():
    ctx = DunklContext.create("zd2", 2, (1, 1))
    p = xvar(2, 0).power(3)
    out = dunkl_apply(ctx, 0, p)
    assert out == xvar(2, 0).power(2).scale(Fraction(5))  # (3 + 2 kappa) x^2


def test_dunkl_cross_variable_is_plain_derivative():
    ctx = DunklContext.create("zd2", 2, (1, 2))
    out = dunkl_apply(ctx, 0, xvar(2, 1).power(4))
    assert out.is_zero


def test_kappa_zero_reduces_to_derivative():
    ctx = DunklContext.create("zd2", 3, 0)
    p = (xvar(3, 0) + xvar(3, 1)).power(3)
    assert dunkl_apply(ctx, 0, p) == p.partial_derivative(0)


@pytest.mark.parametrize("family,kappa", [("zd2", (1, 2)), ("b", (1, 2))])
def test_dunkl_operators_commute(family, kappa):
    ctx = DunklContext.create(family, 2, kappa)
    x, y = xvar(2, 0), xvar(2, 1)
    for p in [x.power(3) * y, (x + y).power(4),
              x.power(2) * y.power(2) + x * y.scale(Fraction(5, 3))]:
        d12 = dunkl_apply(ctx, 0, dunkl_apply(ctx, 1, p))
        d21 = dunkl_apply(ctx, 1, dunkl_apply(ctx, 0, p))
        assert d12 == d21


def test_laplacian_of_norm_squared():
    # Delta_kappa |x|^2 = 2 d + 4 gamma_kappa
    ctx = DunklContext.create("zd2", 2, (1, 2))
    p = xvar(2, 0).power(2) + xvar(2, 1).power(2)
    out = dunkl_laplacian(ctx, p)
    assert out == MultiPoly.constant(2, Fraction(16), EXACT)


def test_laplacian_norm_squared_b3():
    ctx = DunklContext.create("b", 3, (1, 1))
    p = sum((xvar(3, i).power(2) for i in range(1, 3)), xvar(3, 0).power(2))
    gamma = ctx.gamma_kappa
    out = dunkl_laplacian(ctx, p)
    assert out == MultiPoly.constant(3, Fraction(6) + 4 * gamma, EXACT)


def test_float_mode_matches_exact():
    ctx = DunklContext.create("zd2", 2, (1, 2))
    ctxf = DunklContext.create("zd2", 2, (1.0, 2.0))
    p = (xvar(2, 0) + xvar(2, 1).scale(Fraction(2))).power(3)
    exact = dunkl_apply(ctx, 0, p).to_float()
    approx = dunkl_apply(ctxf, 0, p.to_float())
    pts = np.random.default_rng(0).uniform(-1, 1, (15, 2))
    assert np.allclose(exact.eval_many(pts), approx.eval_many(pts),
                       rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------------------
# sympy oracle for the full difference-quotient definition
# ---------------------------------------------------------------------------

def _sympy_dunkl(ctx, i, poly):
    d = ctx.dim
    xs = sympy.symbols(f"x0:{d}")
    expr = sympy.Integer(0)
    for exps, c in poly.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for j, e in enumerate(exps):
            term *= xs[j] ** e
        expr += term
    out = sympy.diff(expr, xs[i])
    for root in ctx.root_system.positive:
        kv = ctx.kappa.value(root)
        if kv == 0:
            continue
        v = [sympy.Rational(r.numerator, r.denominator) for r in root]
        norm2 = sum(vi ** 2 for vi in v)
        form = sum(vi * xi for vi, xi in zip(v, xs))
        sub = {xs[j]: xs[j] - 2 * form * v[j] / norm2 for j in range(d)}
        reflected = expr.subs(sub, simultaneous=True)
        out += sympy.Rational(kv.numerator, kv.denominator) \
            * sympy.cancel((expr - reflected) / form) * v[i]
    return sympy.expand(out)


@pytest.mark.parametrize("family,kappa", [("zd2", (1, 2)), ("b", (2, 1))])
def test_sympy_oracle(family, kappa):
    ctx = DunklContext.create(family, 2, kappa)
    x, y = xvar(2, 0), xvar(2, 1)
    polys = [x.power(4), x.power(2) * y.power(3),
             (x - y).power(3) + x * y.scale(Fraction(7, 2))]
    xs = sympy.symbols("x0:2")
    for p in polys:
        for i in range(2):
            mine = dunkl_apply(ctx, i, p)
            ref = _sympy_dunkl(ctx, i, p)
            got = sympy.Integer(0)
            for exps, c in mine.terms.items():
                t = sympy.Rational(c.numerator, c.denominator)
                for j, e in enumerate(exps):
                    t *= xs[j] ** e
                got += t
            assert sympy.simplify(got - ref) == 0


# ---------------------------------------------------------------------------
# harmonic spaces
# ---------------------------------------------------------------------------

def test_harmonic_space_dimension_formula():
    assert harmonic_space_dimension(2, 0) == 1
    assert harmonic_space_dimension(2, 3) == 2
    assert harmonic_space_dimension(3, 4) == 9     # 2n + 1
    assert harmonic_space_dimension(5, 2) == 14


@pytest.mark.parametrize("d,kappa", [(2, (1, 1)), (2, (2, 3)), (3, (1, 2, 1))])
def test_harmonic_basis_counts_and_annihilation(d, kappa):
    ctx = DunklContext.create("zd2", d, kappa)
    for n in range(6):
        basis = harmonic_basis(ctx, n)
        assert len(basis.elements) == harmonic_space_dimension(d, n)
        for el in basis.elements:
            assert dunkl_laplacian(ctx, el).is_zero


def test_harmonic_basis_float_mode():
    ctx = DunklContext.create("zd2", 2, (0.5, 1.5))
    basis = harmonic_basis(ctx, 4)
    assert len(basis.elements) == 2
    for el in basis.elements:
        residual = dunkl_laplacian(ctx, el)
        pts = np.random.default_rng(4).uniform(-1, 1, (10, 2))
        assert np.max(np.abs(residual.eval_many(pts))) <= 1e-9


def test_harmonic_basis_degree_one_and_zero():
    ctx = DunklContext.create("zd2", 3, (1, 1, 1))
    assert len(harmonic_basis(ctx, 0).elements) == 1
    assert len(harmonic_basis(ctx, 1).elements) == 3


# ---------------------------------------------------------------------------
# intertwining operator
# ---------------------------------------------------------------------------

def test_intertwine_fixes_constants():
    ctx = DunklContext.create("zd2", 2, (1, 1))
    one = MultiPoly.constant(2, Fraction(1), EXACT)
    assert intertwine(ctx, one) == one


def test_intertwine_identity_at_kappa_zero():
    ctx = DunklContext.create("zd2", 2, (0, 1))
    p = (xvar(2, 0) + xvar(2, 1)).power(3)
    ctx0 = DunklContext.create("zd2", 3, 0)
    q = (xvar(3, 0) * xvar(3, 1)).power(2)
    assert intertwine(ctx0, q) == q
    # axis with kappa = 0 is untouched, the other is scaled
    vx = intertwine(ctx, xvar(2, 0).power(2))
    assert vx == xvar(2, 0).power(2)


def test_intertwine_monomial_scaling():
    # V x1^2 = x1^2 (1/2)_1 / (kappa + 1/2)_1 = x1^2 / 3 at kappa = 1
    ctx = DunklContext.create("zd2", 2, (1, 0))
    out = intertwine(ctx, xvar(2, 0).power(2))
    assert out == xvar(2, 0).power(2).scale(Fraction(1, 3))


def test_intertwine_commutes_with_derivative_spot():
    ctx = DunklContext.create("zd2", 2, (2, 3))
    for exps in [(4, 2), (3, 3), (5, 0)]:
        p = MultiPoly.monomial(2, exps, Fraction(1), EXACT)
        lhs = dunkl_apply(ctx, 0, intertwine(ctx, p))
        rhs = intertwine(ctx, p.partial_derivative(0))
        assert lhs == rhs


def test_intertwine_unsupported_group():
    ctx = DunklContext.create("b", 2, (1, 1))
    with pytest.raises(UnsupportedGroupError):
        intertwine(ctx, xvar(2, 0).power(2))


# ---------------------------------------------------------------------------
# kernel translates
# ---------------------------------------------------------------------------

def test_kernel_constant_generator():
    ctx = DunklContext.create("zd2", 2, (1, 2))
    g = Function1D.polynomial([1])
    x = np.array([1.0, 0.0])
    ys = np.random.default_rng(5).standard_normal((20, 2))
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    vals = kernel_translate_batch(ctx, g, x, ys)
    assert np.allclose(vals, 1.0, atol=1e-14)


def test_kernel_kappa_zero_is_zonal():
    ctx = DunklContext.create("zd2", 3, 0)
    g = Function1D.exponential()
    rng = np.random.default_rng(6)
    x = rng.standard_normal(3)
    x /= np.linalg.norm(x)
    ys = rng.standard_normal((10, 3))
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    vals = kernel_translate_batch(ctx, g, x, ys)
    assert np.allclose(vals, np.exp(ys @ x), rtol=1e-14)


def test_kernel_matches_polynomial_translate():
    ctx = DunklContext.create("zd2", 2, (1, 1))
    g = Function1D.polynomial([Fraction(1), Fraction(0), Fraction(2),
                               Fraction(-1)])
    rng = np.random.default_rng(7)
    x = rng.standard_normal(2)
    x /= np.linalg.norm(x)
    ys = rng.standard_normal((30, 2))
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    quad_vals = kernel_translate_batch(ctx, g, x, ys)
    poly_vals = translate_as_polynomial(ctx, g, x).eval_many(ys)
    assert np.max(np.abs(quad_vals - poly_vals)) <= 1e-10


def test_kernel_gegenbauer_generator_routes_agree():
    ctx = DunklContext.create("zd2", 2, (1, 2))
    g = Function1D.gegenbauer_poly(3, ctx.lambda_kappa)
    x = np.array([0.6, 0.8])
    ys = np.random.default_rng(8).standard_normal((12, 2))
    ys /= np.linalg.norm(ys, axis=1, keepdims=True)
    a = kernel_translate_batch(ctx, g, x, ys)
    b = translate_as_polynomial(ctx, g, x).eval_many(ys)
    assert np.max(np.abs(a - b)) <= 1e-10


def test_kernel_symmetric_in_arguments():
    ctx = DunklContext.create("zd2", 2, ("1/2", "3/2"))
    g = Function1D.exponential()
    rng = np.random.default_rng(9)
    for _ in range(4):
        x, y = rng.standard_normal((2, 2))
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        kxy = kernel_translate_eval(ctx, g, x, y)
        kyx = kernel_translate_eval(ctx, g, y, x)
        assert abs(kxy - kyx) <= 1e-12 * max(1.0, abs(kxy))


def test_kernel_requires_unit_vectors():
    ctx = DunklContext.create("zd2", 2, (1, 1))
    g = Function1D.exponential()
    with pytest.raises(ValueError):
        kernel_translate_eval(ctx, g, np.array([2.0, 0.0]),
                              np.array([1.0, 0.0]))


def test_kernel_unsupported_group():
    ctx = DunklContext.create("b", 2, (1, 1))
    g = Function1D.exponential()
    with pytest.raises(UnsupportedGroupError):
        kernel_translate_eval(ctx, g, np.array([1.0, 0.0]),
                              np.array([0.0, 1.0]))


def test_context_describe_and_properties():
    ctx = DunklContext.create("zd2", 2, (1, 2))
    assert ctx.is_zd2 and not ctx.kappa_is_zero and ctx.exact
    assert ctx.gamma_kappa == 3
    assert list(ctx.kappa_by_axis()) == [Fraction(1), Fraction(2)]
    info = ctx.describe()
    assert info["family"] == "zd2"
