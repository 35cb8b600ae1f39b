"""Weighted sphere measures: exact monomial integrals, tensor quadrature, MC.

The normalized measure is d sigma = a_kappa * w_kappa * d omega with
w_kappa(x) = prod |<v, x>|^(2 kappa(v)) over positive roots and a_kappa chosen
so that sigma(S^{d-1}) = 1.  Three backends:

* ``exact``          -- closed-form monomial integrals.  Covers Zd2 contexts
                        with any rational kappa (normalized even-monomial
                        integrals reduce to Pochhammer ratios, exact
                        Fractions) and any rational root system whose
                        multiplicities are integers (weight is then itself a
                        polynomial).
* ``tensor``         -- product Gauss rules over spherical angles.  For Zd2
                        the per-coordinate weight factors exactly into
                        |u|^b (1-u^2)^c angle weights, handled by dedicated
                        symmetric Jacobi rules (machine precision for any
                        kappa >= 0).  Other groups fold w_kappa into the
                        integrand pointwise, which is spectrally accurate for
                        polynomial weights but degrades for fractional kappa.
* ``monte_carlo``    -- uniform sphere sampling (Gaussian normalization) with
                        importance weight a_kappa * w_kappa * area; a seed is
                        mandatory and runs are bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .gegenbauer import pochhammer, symmetric_jacobi_rule
from .multipoly import EXACT, FLOAT, MultiPoly
from .operators import DunklContext, HarmonicBasis
from .reflection import weight_as_polynomial, weight_values

BACKENDS = ("exact", "tensor", "monte_carlo")


def _gamma_half(j: int):
    """Gamma(j/2) as (Fraction, sqrt_pi_power) with power in {0, 1}."""
    if j < 1:
        raise ValueError("argument must be a positive half-integer times 2")
    if j % 2 == 0:
        return Fraction(math.factorial(j // 2 - 1)), 0
    k = (j - 1) // 2
    return Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), 1


def even_monomial_coeff(alpha, d: int) -> Fraction:
    """Rational r with int_{S^{d-1}} x^alpha d omega = r * pi^(d // 2).

    alpha must have all entries even (odd exponents integrate to zero and
    return Fraction(0) here).  The pi power is the same for every even
    monomial on a fixed sphere, so normalized integrals are pure rationals.
    """
    if len(alpha) != d:
        raise ValueError("exponent tuple length must equal the dimension")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = Fraction(2)
    sqrt_pi = 0
    for a in alpha:
        f, p = _gamma_half(a + 1)
        num *= f
        sqrt_pi += p
    den, dp = _gamma_half(sum(alpha) + d)
    if (sqrt_pi - dp) != 2 * (d // 2):  # pragma: no cover - arithmetic identity
        raise AssertionError("pi bookkeeping broke")
    return num / den


def monomial_sphere_integral(alpha, d: int, absolute: bool = False) -> float:
    """int_{S^{d-1}} prod x_i^{a_i} d omega (signed), or with |x_i| factors.

    The absolute variant accepts any real exponents >= 0:
        2 prod Gamma((a_i + 1)/2) / Gamma((d + sum a_i)/2).
    The signed variant is zero when any exponent is odd.
    """
    if len(alpha) != d:
        raise ValueError("exponent tuple length must equal the dimension")
    if absolute:
        if any(a < 0 for a in alpha):
            raise ValueError("absolute variant needs nonnegative exponents")
        num = 2.0
        for a in alpha:
            num *= math.gamma((float(a) + 1.0) / 2.0)
        return num / math.gamma((d + float(sum(alpha))) / 2.0)
    if any(int(a) != a for a in alpha):
        raise ValueError("signed variant needs integer exponents")
    if any(int(a) % 2 for a in alpha):
        return 0.0
    return float(even_monomial_coeff(tuple(int(a) for a in alpha), d)) \
        * math.pi ** (d // 2)


def sphere_surface_area(d: int) -> float:
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


# ---------------------------------------------------------------------------
# a_kappa
# ---------------------------------------------------------------------------

def _a_kappa_closed_zd2(ctx: DunklContext) -> float:
    """Zd2 closed form: 1 / int w = Gamma(gamma + d/2) / (2 prod Gamma(k_i + 1/2))."""
    kappas = [float(k) for k in ctx.kappa_by_axis()]
    den = 2.0
    for k in kappas:
        den *= math.gamma(k + 0.5)
    return math.gamma(float(ctx.gamma_kappa) + ctx.dim / 2.0) / den


def _weight_mass_rational(ctx: DunklContext) -> Fraction:
    """int w d omega as (Fraction) * pi^(d//2), for integer multiplicities."""
    w = weight_as_polynomial(ctx.root_system, ctx.kappa)
    total = Fraction(0)
    for exps, c in w.terms.items():
        total += c * even_monomial_coeff(exps, ctx.dim)
    return total


def a_kappa_paths(ctx: DunklContext, order: int = 80) -> dict:
    """Every independently available evaluation of a_kappa, for cross-checks."""
    out = {}
    if ctx.is_zd2:
        out["closed_form"] = _a_kappa_closed_zd2(ctx)
    if ctx.root_system.exact and all(v.denominator == 1 for v in ctx.kappa.orbit_values):
        mass = _weight_mass_rational(ctx)
        out["monomial"] = 1.0 / (float(mass) * math.pi ** (ctx.dim // 2))
    pts, wts = _tensor_grid(ctx, order)
    out["quadrature"] = 1.0 / float(wts.sum())
    return out


def a_kappa(ctx: DunklContext, order: int = 80) -> float:
    """Normalization constant with a_kappa * int w_kappa d omega = 1."""
    if ctx.is_zd2:
        return _a_kappa_closed_zd2(ctx)
    if ctx.root_system.exact and all(v.denominator == 1 for v in ctx.kappa.orbit_values):
        return 1.0 / (float(_weight_mass_rational(ctx)) * math.pi ** (ctx.dim // 2))
    pts, wts = _tensor_grid(ctx, order)
    return 1.0 / float(wts.sum())


# ---------------------------------------------------------------------------
# Exact normalized integrals
# ---------------------------------------------------------------------------

def _sigma_monomial_zd2(alpha, kappas, gamma, d) -> Fraction:
    """Normalized integral of x^alpha against d sigma_kappa on a Zd2 context:

        prod_i (kappa_i + 1/2)_{alpha_i / 2} / (gamma + d/2)_{|alpha| / 2}

    (zero for any odd exponent).  Exact for rational kappa.
    """
    if any(a % 2 for a in alpha):
        return Fraction(0)
    half = Fraction(1, 2)
    num = Fraction(1)
    for k, a in zip(kappas, alpha):
        num *= pochhammer(k + half, a // 2)
    den = pochhammer(gamma + Fraction(d, 2), sum(alpha) // 2)
    return num / den


def _term_scale(c, frac: Fraction):
    # Fraction coefficients stay exact; float/complex coefficients demote frac
    if isinstance(c, Fraction):
        return c * frac
    return c * float(frac)


def exact_sigma_integral(ctx: DunklContext, poly: MultiPoly):
    """int poly d sigma_kappa via closed forms.

    Returns a Fraction for exact-mode input (float/complex for float mode).
    Raises ValueError when no exact route exists for the context.
    """
    if poly.dim != ctx.dim:
        raise ValueError("dimension mismatch")
    zero = Fraction(0) if poly.mode == EXACT else 0.0
    if ctx.is_zd2 or ctx.kappa_is_zero:
        kappas = ctx.kappa_by_axis() if ctx.is_zd2 else [Fraction(0)] * ctx.dim
        gamma = ctx.gamma_kappa
        total = zero
        for exps, c in poly.terms.items():
            frac = _sigma_monomial_zd2(exps, kappas, gamma, ctx.dim)
            if frac:
                total = total + _term_scale(c, frac)
        return total
    if ctx.root_system.exact and all(v.denominator == 1 for v in ctx.kappa.orbit_values):
        w = weight_as_polynomial(ctx.root_system, ctx.kappa)
        if poly.mode == FLOAT:
            w = w.to_float()
        fw = poly * w
        num = zero
        for exps, c in fw.terms.items():
            frac = even_monomial_coeff(exps, ctx.dim)
            if frac:
                num = num + _term_scale(c, frac)
        mass = _weight_mass_rational(ctx)
        if poly.mode == EXACT:
            return num / mass
        return num / float(mass)
    raise ValueError(
        "no exact route: context is neither Zd2/kappa=0 nor integer-multiplicity "
        "with rational roots; use the tensor or monte_carlo backend")


# ---------------------------------------------------------------------------
# Tensor quadrature grids
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _gauss_legendre(m: int):
    nodes, weights = np.polynomial.legendre.leggauss(m)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _tensor_grid_zd2(kappas, d: int, order: int):
    """Factorized grid for Zd2: per-angle symmetric Jacobi rules.

    Returns (points, weights) with sum(weights) ~= int w_kappa d omega.  The
    node set is invariant under every coordinate sign flip, so odd monomials
    cancel to round-off.
    """
    m01 = max(2, order // 2)
    kf = [float(k) for k in kappas]
    if d == 2:
        u, w = symmetric_jacobi_rule(m01, 2.0 * kf[0], kf[1] - 0.5)
        s = np.sqrt(np.maximum(0.0, 1.0 - u * u))
        pts = np.concatenate([np.stack([u, s], axis=1),
                              np.stack([u, -s], axis=1)])
        return pts, np.concatenate([w, w])
    # peel off the first coordinate; the recursion bottoms out on the circle
    pts, wts = _tensor_grid_zd2(kf[1:], d - 1, order)
    u, w = symmetric_jacobi_rule(m01, 2.0 * kf[0],
                                 (d - 3) / 2.0 + float(sum(kf[1:])))
    r = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    n_u, n_p = u.size, pts.shape[0]
    big = np.empty((n_u * n_p, d))
    big[:, 0] = np.repeat(u, n_p)
    big[:, 1:] = np.repeat(r, n_p)[:, None] * np.tile(pts, (n_u, 1))
    return big, np.repeat(w, n_p) * np.tile(wts, n_u)


def _tensor_grid_general(ctx: DunklContext, order: int):
    """Spherical-angle Gauss-Legendre grid with w_kappa folded pointwise."""
    d = ctx.dim
    # angle parametrization: theta_1..theta_{d-2} in [0, pi], phi in [0, 2 pi)
    grids = []
    for j in range(d - 2):
        t, w = _gauss_legendre(order)
        theta = (t + 1.0) * (math.pi / 2.0)
        wj = w * (math.pi / 2.0) * np.sin(theta) ** (d - 2 - j)
        grids.append((theta, wj))
    t, w = _gauss_legendre(order)
    grids.append(((t + 1.0) * math.pi, w * math.pi))
    mesh = np.meshgrid(*[g[0] for g in grids], indexing="ij")
    wmesh = np.meshgrid(*[g[1] for g in grids], indexing="ij")
    angles = np.stack([m.ravel() for m in mesh], axis=1)
    weights = np.prod(np.stack([m.ravel() for m in wmesh]), axis=0)
    pts = np.empty((angles.shape[0], d))
    sin_prod = np.ones(angles.shape[0])
    for j in range(d - 2):
        pts[:, j] = sin_prod * np.cos(angles[:, j])
        sin_prod = sin_prod * np.sin(angles[:, j])
    pts[:, d - 2] = sin_prod * np.cos(angles[:, -1])
    pts[:, d - 1] = sin_prod * np.sin(angles[:, -1])
    weights = weights * weight_values(ctx.root_system, ctx.kappa, pts)
    return pts, weights


def _tensor_grid(ctx: DunklContext, order: int):
    """(points, weights) with sum(weights) ~ int w_kappa d omega (unnormalized)."""
    if ctx.dim < 2:
        raise ValueError("sphere quadrature needs d >= 2")
    if ctx.is_zd2:
        return _tensor_grid_zd2(ctx.kappa_by_axis(), ctx.dim, order)
    if ctx.kappa_is_zero:
        return _tensor_grid_zd2([Fraction(0)] * ctx.dim, ctx.dim, order)
    return _tensor_grid_general(ctx, order)


# ---------------------------------------------------------------------------
# SphereFunction and SphereMeasure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereFunction:
    """Function on the sphere, vectorized over (N, d) point arrays."""

    fn: object
    tag: str = "user"
    poly: MultiPoly | None = None
    description: str = ""

    @classmethod
    def from_poly(cls, p: MultiPoly, description: str = "") -> "SphereFunction":
        return cls(p.eval_many, "polynomial", p, description or p.to_text())

    @classmethod
    def from_kernel(cls, ctx: DunklContext, g, x, quad_order: int = 48) -> "SphereFunction":
        from .operators import kernel_translate_batch

        xf = np.asarray(x, dtype=float)

        def fn(points):
            return kernel_translate_batch(ctx, g, xf, points, quad_order)

        return cls(fn, "kernel", None, f"K({np.array2string(xf, precision=6)}, .)")

    def __call__(self, points):
        return self.fn(points)


def _point_fn(f):
    """Normalize f (MultiPoly | SphereFunction | callable) to a point callable."""
    if isinstance(f, MultiPoly):
        return f.eval_many
    if isinstance(f, SphereFunction):
        return f.fn
    if callable(f):
        return f
    raise TypeError(f"cannot integrate object of type {type(f).__name__}")


def _poly_of(f) -> MultiPoly | None:
    if isinstance(f, MultiPoly):
        return f
    if isinstance(f, SphereFunction):
        return f.poly
    return None


class SphereMeasure:
    """The normalized measure d sigma_kappa with a chosen backend."""

    def __init__(self, ctx: DunklContext, backend: str = "exact",
                 orders: int = 80, mc_samples: int = 10 ** 6,
                 seed: int | None = None):
        if backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
        if backend == "monte_carlo" and seed is None:
            raise ValueError("monte_carlo backend requires an explicit seed")
        self.ctx = ctx
        self.backend = backend
        self.orders = int(orders)
        self.mc_samples = int(mc_samples)
        self.seed = seed
        self._grid = None
        self._a_kappa = None

    # -- shared pieces -----------------------------------------------------

    @property
    def normalization(self) -> float:
        if self._a_kappa is None:
            self._a_kappa = a_kappa(self.ctx, self.orders)
        return self._a_kappa

    def quad_points(self):
        """Tensor-grid (points, sigma-normalized weights); built lazily."""
        if self._grid is None:
            pts, wts = _tensor_grid(self.ctx, self.orders)
            self._grid = (pts, wts * self.normalization)
        return self._grid

    # -- integration -------------------------------------------------------

    def integrate(self, f):
        """int f d sigma_kappa.  Exact backend requires polynomial input and
        returns a Fraction for exact-mode polynomials."""
        if self.backend == "exact":
            poly = _poly_of(f)
            if poly is None:
                raise TypeError("exact backend integrates polynomials only")
            return exact_sigma_integral(self.ctx, poly)
        if self.backend == "tensor":
            pts, wts = self.quad_points()
            vals = np.asarray(_point_fn(f)(pts))
            res = wts @ vals
            return complex(res) if np.iscomplexobj(vals) else float(res)
        est, _ = self.integrate_mc(f)
        return est

    def integrate_mc(self, f):
        """(estimate, standard error) by importance-weighted uniform sampling."""
        if self.seed is None:
            raise ValueError("Monte Carlo integration requires a seed")
        rng = np.random.default_rng(self.seed)
        fn = _point_fn(f)
        area = sphere_surface_area(self.ctx.dim)
        scale = self.normalization * area
        total = 0.0
        total_sq = 0.0
        n_done = 0
        chunk = 200_000
        while n_done < self.mc_samples:
            take = min(chunk, self.mc_samples - n_done)
            z = rng.standard_normal((take, self.ctx.dim))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            vals = np.asarray(fn(z)) * weight_values(self.ctx.root_system,
                                                     self.ctx.kappa, z)
            total += float(np.sum(vals))
            total_sq += float(np.sum(np.abs(vals) ** 2))
            n_done += take
        mean = total / n_done
        var = max(0.0, total_sq / n_done - mean ** 2)
        stderr = scale * math.sqrt(var / n_done)
        return scale * mean, stderr

    def sigma_mass(self):
        """sigma(S^{d-1}); equals 1 up to backend error."""
        one = MultiPoly.constant(self.ctx.dim, 1,
                                 EXACT if self.ctx.exact else FLOAT)
        if self.backend == "exact":
            return self.integrate(one)
        if self.backend == "tensor":
            _, wts = self.quad_points()
            return float(wts.sum())
        return self.integrate(SphereFunction(lambda p: np.ones(p.shape[0])))

    # -- inner products and norms -------------------------------------------

    def inner_product(self, f, h):
        """<f, h> = int f * conj(h) d sigma_kappa."""
        pf, ph = _poly_of(f), _poly_of(h)
        if pf is not None and ph is not None:
            if pf.mode != ph.mode:
                pf, ph = pf.to_float(), ph.to_float()
            return self.integrate(pf * ph.conjugate())
        if self.backend == "exact":
            raise TypeError("exact backend integrates polynomials only")
        ff, fh = _point_fn(f), _point_fn(h)
        return self.integrate(SphereFunction(
            lambda pts: np.asarray(ff(pts)) * np.conjugate(np.asarray(fh(pts)))))

    def lp_norm(self, f, p) -> float:
        """|| f ||_{kappa, p} on the sphere.  Exact backend handles even
        integer p for polynomials; anything else falls back to the tensor
        grid of the same order."""
        if p < 1:
            raise ValueError("p must be >= 1")
        poly = _poly_of(f)
        if self.backend == "exact" and poly is not None \
                and float(p) == int(p) and int(p) % 2 == 0:
            k = int(p) // 2
            prod = poly * poly.conjugate()
            acc = prod
            for _ in range(k - 1):
                acc = acc * prod
            val = self.integrate(acc)
            return float(val) ** (1.0 / float(p))
        pts, wts = self.quad_points()
        vals = np.abs(np.asarray(_point_fn(f)(pts))) ** float(p)
        return float(wts @ vals) ** (1.0 / float(p))

    def gram(self, elements) -> tuple:
        """Pairwise inner-product matrix as a tuple of row tuples."""
        if isinstance(elements, HarmonicBasis):
            elements = elements.elements
        n = len(elements)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                if j < i:
                    row.append(rows[j][i])
                else:
                    row.append(self.inner_product(elements[i], elements[j]))
            rows.append(row)
        return tuple(tuple(r) for r in rows)


def with_gram(basis: HarmonicBasis, measure: SphereMeasure) -> HarmonicBasis:
    return HarmonicBasis(basis.degree, basis.elements, measure.gram(basis))


# ---------------------------------------------------------------------------
# Node sets for collocation demos
# ---------------------------------------------------------------------------

def node_set(d: int, count: int, scheme: str = "spiral",
             seed: int | None = None) -> np.ndarray:
    """Deterministic point families on S^{d-1}.

    spiral: equally spaced on the circle (d = 2, first node (1, 0)) or the
    golden-angle spiral (d = 3).  uniform_random: seeded Gaussian
    normalization, any d.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if scheme in ("random", "uniform_random"):
        if seed is None:
            raise ValueError("random node sets require a seed")
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((count, d))
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    if scheme in ("spiral", "generalized_spiral"):
        if d == 2:
            ang = 2.0 * math.pi * np.arange(count) / count
            return np.stack([np.cos(ang), np.sin(ang)], axis=1)
        if d == 3:
            k = np.arange(count)
            z = 1.0 - (2.0 * k + 1.0) / count
            r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
            phi = k * math.pi * (3.0 - math.sqrt(5.0))
            return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
        raise ValueError("spiral nodes are defined for d in {2, 3}; "
                         "use uniform_random for higher dimensions")
    raise ValueError(f"unknown node scheme {scheme!r}")
