"""Fundamentality of kernel-translate families in weighted L_p on the sphere.

For a fixed context (reflection group, multiplicity kappa) and a generating
profile g on [-1, 1], the family {K(x, .) : x in S^{d-1}} of kernel
translates is fundamental in L_p(sigma_kappa) exactly when every Gegenbauer
coefficient Lambda_n(g) at index lambda_kappa is nonzero.  The criterion does
not involve p, so one coefficient profile settles all 1 <= p < infinity at
once.  This module turns profiles into explicit verdicts, verifies the
underlying reproducing identity numerically, and runs small least-squares
density demonstrations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gegenbauer import (
    DEFAULT_EPS,
    INDETERMINATE,
    NONZERO,
    ZERO,
    CoefficientProfile,
    Function1D,
    coefficient_profile,
    lambda_coefficient,
    lp_norm_segment,
    _structural_flag,
)
from .multipoly import EXACT, MultiPoly
from .operators import (
    DunklContext,
    harmonic_basis,
    kernel_translate_batch,
    translate_as_polynomial,
)
from .sphere import SphereMeasure, node_set

FUNDAMENTAL = "FUNDAMENTAL_UP_TO_N"
NOT_FUNDAMENTAL = "NOT_FUNDAMENTAL"
INDETERMINATE_VERDICT = "INDETERMINATE"


def _context_config(ctx: DunklContext) -> dict:
    rs = ctx.root_system
    cfg = {
        "family": rs.family or "custom",
        "dimension": ctx.dim,
        "kappa": [str(v) for v in ctx.kappa.orbit_values],
    }
    if rs.family == "i2":
        cfg["order"] = len(rs.positive)
    return cfg


def _default_x_points(d: int, count: int, seed: int = 3) -> np.ndarray:
    if d in (2, 3):
        return node_set(d, count, "spiral")
    return node_set(d, count, "uniform_random", seed=seed)


def _verdict_from_flags(flags) -> tuple:
    """(verdict, zero_witnesses, indeterminate_degrees) from per-degree flags."""
    zeros = tuple(n for n, f in enumerate(flags) if f == ZERO)
    indet = tuple(n for n, f in enumerate(flags) if f == INDETERMINATE)
    if zeros:
        return NOT_FUNDAMENTAL, zeros, indet
    if indet:
        return INDETERMINATE_VERDICT, zeros, indet
    return FUNDAMENTAL, zeros, indet


# ---------------------------------------------------------------------------
# Fundamentality of a single generator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalityReport:
    verdict: str
    n_max: int
    p: float
    lambda_value: float
    eps: float
    zero_witnesses: tuple
    indeterminate_degrees: tuple
    profile: CoefficientProfile
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "kind": "fundamentality",
            "verdict": self.verdict,
            "n_max": self.n_max,
            "p": self.p,
            "lambda": self.lambda_value,
            "eps": self.eps,
            "zero_witnesses": list(self.zero_witnesses),
            "indeterminate_degrees": list(self.indeterminate_degrees),
            "profile": self.profile.to_json_dict(),
            "config": self.config,
        }

    def to_csv_text(self) -> str:
        return self.profile.to_csv_text()


def is_fundamental(ctx: DunklContext, g: Function1D, p: float = 2.0,
                   n_max: int = 20, eps: float = DEFAULT_EPS,
                   rule_size: int | None = None,
                   precision: int | None = None) -> FundamentalityReport:
    """Decide fundamentality of {K(x, .)} in L_p(sigma_kappa) up to degree n_max.

    The decision reduces to the vanishing pattern of Lambda_n(g), n <= n_max,
    so the p argument is recorded but cannot change the verdict.  A confident
    zero wins over everything (the translates all sit in the orthogonal
    complement of that harmonic space); otherwise any degree whose coefficient
    cannot be resolved at tolerance eps yields INDETERMINATE.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    profile = coefficient_profile(g, ctx.lambda_kappa, n_max, eps=eps,
                                  m=rule_size, precision=precision)
    flags = [e.flag for e in profile.entries]
    verdict, zeros, indet = _verdict_from_flags(flags)
    config = _context_config(ctx)
    config.update({
        "g": g.describe(),
        "p": float(p),
        "n_max": n_max,
        "eps": eps,
        "rule_size": profile.rule_size,
        "precision": profile.precision,
    })
    return FundamentalityReport(
        verdict=verdict,
        n_max=n_max,
        p=float(p),
        lambda_value=float(ctx.lambda_kappa),
        eps=eps,
        zero_witnesses=zeros,
        indeterminate_degrees=indet,
        profile=profile,
        config=config,
    )


# ---------------------------------------------------------------------------
# Union of several generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnionReport:
    verdict: str
    n_max: int
    p: float
    lambda_value: float
    eps: float
    zero_witnesses: tuple
    indeterminate_degrees: tuple
    aggregate_abs: tuple
    aggregate_error: tuple
    member_reports: tuple
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "kind": "union_fundamentality",
            "verdict": self.verdict,
            "n_max": self.n_max,
            "p": self.p,
            "lambda": self.lambda_value,
            "eps": self.eps,
            "zero_witnesses": list(self.zero_witnesses),
            "indeterminate_degrees": list(self.indeterminate_degrees),
            "aggregate_abs": list(self.aggregate_abs),
            "aggregate_error": list(self.aggregate_error),
            "members": [r.to_json_dict() for r in self.member_reports],
            "config": self.config,
        }

    def to_csv_text(self) -> str:
        lines = ["n,aggregate_abs,aggregate_error,flag"]
        flags = _union_flags(self.member_reports)
        for n in range(self.n_max + 1):
            lines.append(f"{n},{self.aggregate_abs[n]!r},"
                         f"{self.aggregate_error[n]!r},{flags[n]}")
        return "\n".join(lines) + "\n"


def _union_flags(member_reports) -> list:
    """Per-degree flag of sum_i |Lambda_n(g_i)|, aggregated from member flags.

    The sum of nonnegative terms is nonzero iff some term is nonzero, so the
    union flag can be decided from the member flags (which were classified at
    full working precision) without re-adding downcast magnitudes.
    """
    n_max = member_reports[0].n_max
    flags = []
    for n in range(n_max + 1):
        member = [r.profile.entry(n).flag for r in member_reports]
        if any(f == NONZERO for f in member):
            flags.append(NONZERO)
        elif all(f == ZERO for f in member):
            flags.append(ZERO)
        else:
            flags.append(INDETERMINATE)
    return flags


def union_fundamental(ctx: DunklContext, gs, p: float = 2.0, n_max: int = 20,
                      eps: float = DEFAULT_EPS, rule_size: int | None = None,
                      precision: int | None = None) -> UnionReport:
    """Fundamentality of the union of translate families of several generators.

    The union spans the degree-n harmonics iff sum_i |Lambda_n(g_i)| > 0, so
    members can patch each other's zero degrees (classically: cosh covers the
    even degrees, sinh the odd ones).
    """
    if not gs:
        raise ValueError("need at least one generator")
    members = tuple(
        is_fundamental(ctx, g, p=p, n_max=n_max, eps=eps,
                       rule_size=rule_size, precision=precision)
        for g in gs
    )
    flags = _union_flags(members)
    verdict, zeros, indet = _verdict_from_flags(flags)
    agg_abs = []
    agg_err = []
    for n in range(n_max + 1):
        agg_abs.append(float(sum(abs(r.profile.entry(n).value) for r in members)))
        agg_err.append(float(sum(r.profile.entry(n).error_bound for r in members)))
    config = _context_config(ctx)
    config.update({
        "g": [g.describe() for g in gs],
        "p": float(p),
        "n_max": n_max,
        "eps": eps,
        "rule_size": members[0].profile.rule_size,
        "precision": members[0].profile.precision,
    })
    return UnionReport(
        verdict=verdict,
        n_max=n_max,
        p=float(p),
        lambda_value=float(ctx.lambda_kappa),
        eps=eps,
        zero_witnesses=zeros,
        indeterminate_degrees=indet,
        aggregate_abs=tuple(agg_abs),
        aggregate_error=tuple(agg_err),
        member_reports=members,
        config=config,
    )


# ---------------------------------------------------------------------------
# Funk-Hecke residuals (reproducing identity check)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunkHeckeReport:
    n: int
    lambda_value: float
    coefficient: complex
    coefficient_error: float
    residual: float
    residual_by_route: dict
    x_count: int
    basis_size: int
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "kind": "funk_hecke",
            "n": self.n,
            "lambda": self.lambda_value,
            "coefficient": {"re": self.coefficient.real,
                            "im": self.coefficient.imag},
            "coefficient_error": self.coefficient_error,
            "residual": self.residual,
            "residual_by_route": dict(sorted(self.residual_by_route.items())),
            "x_count": self.x_count,
            "basis_size": self.basis_size,
            "config": self.config,
        }

    def to_csv_text(self) -> str:
        lines = ["n,route,residual"]
        for route in sorted(self.residual_by_route):
            lines.append(f"{self.n},{route},{self.residual_by_route[route]!r}")
        return "\n".join(lines) + "\n"


def funk_hecke_residual(ctx: DunklContext, g: Function1D, n: int,
                        orders: int = 80, x_count: int = 6,
                        quad_order: int = 48,
                        basis_limit: int | None = None,
                        seed: int = 3) -> FunkHeckeReport:
    """Residual of int K(x, y) Y_n(y) d sigma(y) = Lambda_n(g) Y_n(x).

    Runs over every degree-n harmonic basis element and a small set of x
    points.  The left side is computed by sphere quadrature against the
    kernel; for polynomial-type g a second, independent route expands
    K(x, .) as an explicit polynomial first.  Residuals are normalized per
    basis element by max(1, sup |Y| on the grid).
    """
    measure = SphereMeasure(ctx, "tensor", orders=orders)
    pts, wts = measure.quad_points()
    basis = harmonic_basis(ctx, n, mode="exact" if ctx.exact else "float")
    elements = [e.to_float() if e.mode == EXACT else e for e in basis.elements]
    if basis_limit is not None:
        elements = elements[:basis_limit]
    xs = _default_x_points(ctx.dim, x_count, seed)
    lam_val, lam_err = lambda_coefficient(g, n, ctx.lambda_kappa)

    y_vals = np.stack([e.eval_many(pts) for e in elements])       # (B, Q)
    y_at_x = np.stack([e.eval_many(xs) for e in elements])        # (B, X)
    scales = np.maximum(1.0, np.abs(y_vals).max(axis=1))          # (B,)

    routes = {}
    # quadrature route: kernel values on the grid, one batch per x
    worst = 0.0
    for j, x in enumerate(xs):
        k_vals = kernel_translate_batch(ctx, g, x, pts, quad_order)
        lhs = y_vals @ (wts * k_vals)                             # (B,)
        err = np.abs(lhs - lam_val * y_at_x[:, j]) / scales
        worst = max(worst, float(err.max()))
    routes["quadrature"] = worst

    # polynomial route, available when K(x, .) has an exact expansion
    try:
        worst_p = 0.0
        for j, x in enumerate(xs):
            tx = translate_as_polynomial(ctx, g, x)
            k_vals = tx.eval_many(pts)
            lhs = y_vals @ (wts * k_vals)
            err = np.abs(lhs - lam_val * y_at_x[:, j]) / scales
            worst_p = max(worst_p, float(err.max()))
        routes["translate"] = worst_p
    except (ValueError, TypeError):
        pass

    config = _context_config(ctx)
    config.update({
        "g": g.describe(),
        "n": n,
        "orders": orders,
        "x_count": int(xs.shape[0]),
        "quad_order": quad_order,
        "seed": seed,
    })
    return FunkHeckeReport(
        n=n,
        lambda_value=float(ctx.lambda_kappa),
        coefficient=complex(lam_val),
        coefficient_error=float(lam_err),
        residual=max(routes.values()),
        residual_by_route=routes,
        x_count=int(xs.shape[0]),
        basis_size=len(elements),
        config=config,
    )


# ---------------------------------------------------------------------------
# Least-squares density demonstration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityReport:
    m_degree: int
    lambda_value: float
    coefficient: float
    node_counts: tuple
    residuals: tuple
    ridges: tuple
    scheme: str
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "kind": "density_demo",
            "m_degree": self.m_degree,
            "lambda": self.lambda_value,
            "coefficient": self.coefficient,
            "node_counts": list(self.node_counts),
            "residuals": list(self.residuals),
            "ridges": list(self.ridges),
            "scheme": self.scheme,
            "config": self.config,
        }

    def to_csv_text(self) -> str:
        lines = ["nodes,ridge,residual"]
        for c, r, res in zip(self.node_counts, self.ridges, self.residuals):
            lines.append(f"{c},{r!r},{res!r}")
        return "\n".join(lines) + "\n"


def density_demo(ctx: DunklContext, g: Function1D, m_degree: int,
                 node_counts, orders: int = 80, ridge: float | None = None,
                 scheme: str = "spiral", kernel_order: int = 48,
                 seed: int | None = None) -> DensityReport:
    """Best L2(sigma) approximation of a degree-m harmonic by kernel translates.

    Solves min_a || Y_m - sum_j a_j K(x_j, .) ||_{L2(sigma)} over node sets of
    increasing size.  With b_j = Lambda_m(g) Y_m(x_j) and Gram matrix
    G_ij = <K(x_i, .), K(x_j, .)> the squared residual is
    1 - 2 a.b + a.G.a for the L2-normalized target.  When Lambda_m(g) = 0
    (detected structurally from degree or parity) the translates are
    orthogonal to the whole degree-m space and the residual is exactly 1.
    """
    measure = SphereMeasure(ctx, "tensor", orders=orders)
    pts, wts = measure.quad_points()

    basis = harmonic_basis(ctx, m_degree, mode="exact" if ctx.exact else "float")
    y = basis.elements[0]
    y = y.to_float() if y.mode == EXACT else y
    norm = measure.lp_norm(y, 2)
    y = y.scale(1.0 / norm)

    structural = _structural_flag(g, m_degree)
    if structural == ZERO:
        lam_val = 0.0
    else:
        value, _ = lambda_coefficient(g, m_degree, ctx.lambda_kappa)
        lam_val = float(np.real(value))

    counts = tuple(int(c) for c in node_counts)
    residuals = []
    ridges = []
    for count in counts:
        nodes = node_set(ctx.dim, count, scheme, seed=seed)
        rows = np.stack([
            kernel_translate_batch(ctx, g, x, pts, kernel_order)
            for x in nodes
        ])                                                        # (J, Q)
        gram = (rows * wts) @ rows.T
        b = lam_val * y.eval_many(nodes)
        rid = ridge
        if rid is None:
            rid = 1e-10 * float(np.trace(gram)) / gram.shape[0]
        a = np.linalg.solve(gram + rid * np.eye(gram.shape[0]), b)
        sq = 1.0 - 2.0 * float(a @ b) + float(a @ gram @ a)
        residuals.append(math.sqrt(max(0.0, sq)))
        ridges.append(float(rid))

    config = _context_config(ctx)
    config.update({
        "g": g.describe(),
        "m_degree": m_degree,
        "node_counts": list(counts),
        "orders": orders,
        "kernel_order": kernel_order,
        "scheme": scheme,
        "ridge": ridge,
        "seed": seed,
    })
    return DensityReport(
        m_degree=m_degree,
        lambda_value=float(ctx.lambda_kappa),
        coefficient=lam_val,
        node_counts=counts,
        residuals=tuple(residuals),
        ridges=tuple(ridges),
        scheme=scheme,
        config=config,
    )


# ---------------------------------------------------------------------------
# Structural sanity checks on the kernel
# ---------------------------------------------------------------------------

def kernel_symmetry_check(ctx: DunklContext, g: Function1D, pairs: int = 8,
                          quad_order: int = 48, seed: int = 0) -> float:
    """max |K(x, y) - K(y, x)| over random point pairs (should vanish)."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2 * pairs, ctx.dim))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    worst = 0.0
    for i in range(pairs):
        x, y = z[2 * i], z[2 * i + 1]
        kxy = kernel_translate_batch(ctx, g, x, y[None, :], quad_order)[0]
        kyx = kernel_translate_batch(ctx, g, y, x[None, :], quad_order)[0]
        worst = max(worst, abs(float(kxy) - float(kyx)))
    return worst


@dataclass(frozen=True)
class OperatorNormReport:
    p: float
    max_ratio: float
    ratios: tuple
    segment_norm: float
    config: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "kind": "operator_norm",
            "p": self.p,
            "max_ratio": self.max_ratio,
            "ratios": list(self.ratios),
            "segment_norm": self.segment_norm,
            "config": self.config,
        }


def operator_norm_check(ctx: DunklContext, g: Function1D, p: float = 2.0,
                        x_count: int = 50, orders: int = 80,
                        kernel_order: int = 48,
                        seed: int = 7) -> OperatorNormReport:
    """max_x ||K(x, .)||_{kappa, p} / ||g||_{lambda, p}.

    The translate operator is an average of values of g (the defining
    integral is against probability measures), so the ratio never exceeds 1;
    at kappa = 0 the kernel is g(<x, y>) itself and the ratio is 1 exactly.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    measure = SphereMeasure(ctx, "tensor", orders=orders)
    pts, wts = measure.quad_points()
    seg = lp_norm_segment(g, p, ctx.lambda_kappa)
    xs = node_set(ctx.dim, x_count, "uniform_random", seed=seed)
    ratios = []
    for x in xs:
        vals = kernel_translate_batch(ctx, g, x, pts, kernel_order)
        norm = float(wts @ np.abs(vals) ** float(p)) ** (1.0 / float(p))
        ratios.append(norm / seg)
    config = _context_config(ctx)
    config.update({
        "g": g.describe(),
        "p": float(p),
        "x_count": x_count,
        "orders": orders,
        "kernel_order": kernel_order,
        "seed": seed,
    })
    return OperatorNormReport(
        p=float(p),
        max_ratio=float(max(ratios)),
        ratios=tuple(float(r) for r in ratios),
        segment_norm=float(seg),
        config=config,
    )
