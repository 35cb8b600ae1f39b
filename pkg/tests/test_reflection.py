import math
from fractions import Fraction

import numpy as np
import pytest

from dunklsphere import (
    EXACT,
    InvalidMultiplicityError,
    MultiPoly,
    UnsupportedGroupError,
    builtin_root_system,
    constants,
    generate_group,
    reflection_matrix,
    root_orbits,
    validate_multiplicity,
    validate_root_system,
    weight_as_polynomial,
    weight_eval,
    weight_values,
)


def _mult(rs, kappa):
    return validate_multiplicity(rs, generate_group(rs), kappa)


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n))
                       for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# reflections
# ---------------------------------------------------------------------------

def test_reflection_is_involution():
    v = (Fraction(1), Fraction(-2), Fraction(3))
    s = reflection_matrix(v)
    eye = tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))
    assert _matmul(s, s) == eye


def test_reflection_negates_root_fixes_orthogonal():
    v = (Fraction(2), Fraction(1))
    s = reflection_matrix(v)
    sv = tuple(sum(s[i][j] * v[j] for j in range(2)) for i in range(2))
    assert sv == (-v[0], -v[1])
    w = (Fraction(-1), Fraction(2))  # orthogonal to v
    sw = tuple(sum(s[i][j] * w[j] for j in range(2)) for i in range(2))
    assert sw == w


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family,dim,order,expected", [
    ("zd2", 2, None, 4),
    ("zd2", 3, None, 8),
    ("b", 2, None, 8),
    ("b", 3, None, 48),
    ("a", 3, None, 6),       # symmetric group on 3 letters
    ("a", 4, None, 24),
    ("d", 3, None, 24),
    ("i2", 2, 3, 6),
    ("i2", 2, 5, 10),
])
def test_group_orders(family, dim, order, expected):
    rs = builtin_root_system(family, dim, order=order)
    group = generate_group(rs)
    assert len(group.elements) == expected


def test_builtin_systems_validate():
    for family, dim, order in [("zd2", 3, None), ("a", 3, None),
                               ("b", 3, None), ("d", 4, None), ("i2", 2, 4)]:
        rs = builtin_root_system(family, dim, order=order)
        validate_root_system(rs)


def test_positive_roots_closed_under_group():
    rs = builtin_root_system("b", 2)
    assert len(rs.positive) == 4
    assert len(rs.roots) == 8


def test_unknown_family_raises():
    with pytest.raises(UnsupportedGroupError):
        builtin_root_system("h", 3)


def test_i2_requires_order():
    with pytest.raises(ValueError):
        builtin_root_system("i2", 2, order=None)


def test_missing_negatives_rejected_at_construction():
    rs = builtin_root_system("zd2", 2)
    with pytest.raises(ValueError):
        type(rs)(dim=2, roots=rs.positive, positive=rs.positive,
                 family=None, exact=True)


# ---------------------------------------------------------------------------
# orbits and multiplicities
# ---------------------------------------------------------------------------

def test_zd2_orbits_are_axes():
    rs = builtin_root_system("zd2", 3)
    orbits = root_orbits(rs, generate_group(rs))
    assert len(orbits) == 3


def test_b2_has_two_orbits():
    rs = builtin_root_system("b", 2)
    assert len(root_orbits(rs, generate_group(rs))) == 2


def test_a3_single_orbit():
    rs = builtin_root_system("a", 3)
    assert len(root_orbits(rs, generate_group(rs))) == 1


def test_multiplicity_forms():
    rs = builtin_root_system("zd2", 2)
    k_scalar = _mult(rs, 1)
    k_seq = _mult(rs, [1, 1])
    assert k_scalar.orbit_values == k_seq.orbit_values
    k_frac = _mult(rs, ["1/2", "3/2"])
    assert k_frac.orbit_values == (Fraction(1, 2), Fraction(3, 2))


def test_multiplicity_negative_rejected():
    rs = builtin_root_system("zd2", 2)
    with pytest.raises(InvalidMultiplicityError):
        _mult(rs, -1)


def test_multiplicity_wrong_length_rejected():
    rs = builtin_root_system("zd2", 2)
    with pytest.raises(InvalidMultiplicityError):
        _mult(rs, [1, 2, 3])


def test_multiplicity_value_lookup():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, [1, 2])
    assert kappa.value(rs.positive[0]) == 1
    assert kappa.value(rs.positive[1]) == 2


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def test_constants_zd2():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, [1, 2])
    c = constants(rs, kappa)
    assert c.gamma == 3
    assert c.lam == 3       # gamma + (d - 2)/2 with d = 2
    assert isinstance(c.lam, Fraction)


def test_constants_kappa_zero_d3():
    rs = builtin_root_system("zd2", 3)
    kappa = _mult(rs, 0)
    c = constants(rs, kappa)
    assert c.lam == Fraction(1, 2)


def test_lambda_positive_required():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, 0)
    with pytest.raises(ValueError):
        constants(rs, kappa)


def test_b2_gamma_counts_orbit_sizes():
    rs = builtin_root_system("b", 2)
    kappa = _mult(rs, [1, 2])
    c = constants(rs, kappa)
    # two axis roots with kappa 1, two diagonal roots with kappa 2
    assert c.gamma == 2 * 1 + 2 * 2


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def test_weight_homogeneity():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, [1, 2])
    gamma = float(constants(rs, kappa).gamma)
    rng = np.random.default_rng(1)
    x = rng.standard_normal(2)
    for t in (0.5, 2.0, 3.7):
        w1 = weight_values(rs, kappa, (t * x)[None, :])[0]
        w0 = weight_values(rs, kappa, x[None, :])[0]
        assert abs(w1 - t ** (2 * gamma) * w0) <= 1e-10 * abs(w1)


def test_weight_group_invariance():
    rs = builtin_root_system("b", 2)
    kappa = _mult(rs, ["1/2", "3/2"])
    group = generate_group(rs)
    rng = np.random.default_rng(2)
    x = rng.standard_normal(2)
    base = weight_values(rs, kappa, x[None, :])[0]
    for el in group.elements:
        gx = np.array([[float(el[i][j]) for j in range(2)] for i in range(2)]) @ x
        val = weight_values(rs, kappa, gx[None, :])[0]
        assert abs(val - base) <= 1e-10 * max(1.0, abs(base))


def test_weight_polynomial_matches_pointwise():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, [1, 2])
    w = weight_as_polynomial(rs, kappa)
    assert w.mode == EXACT
    pts = np.random.default_rng(3).uniform(-1, 1, (25, 2))
    direct = weight_values(rs, kappa, pts)
    assert np.allclose(w.to_float().eval_many(pts), direct, rtol=1e-12)


def test_weight_polynomial_needs_integer_kappa():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, ["1/2", "1"])
    with pytest.raises(ValueError):
        weight_as_polynomial(rs, kappa)


def test_weight_eval_exact_for_rational_input():
    rs = builtin_root_system("zd2", 2)
    kappa = _mult(rs, [1, 2])
    val = weight_eval(rs, kappa, (Fraction(1, 2), Fraction(1, 3)))
    assert val == Fraction(1, 2) ** 2 * Fraction(1, 3) ** 4


def test_group_elements_are_orthogonal():
    rs = builtin_root_system("i2", 2, order=5)
    group = generate_group(rs)
    for el in group.elements:
        m = np.array(el, dtype=float)
        assert np.allclose(m @ m.T, np.eye(2), atol=1e-10)
