"""Dunkl operators, weighted harmonic bases, intertwining, kernel translates.

The rational Dunkl operator attached to a reflection group G with multiplicity
kappa acts on polynomials by

    D_i f = d f / d x_i + sum over positive roots v of
            kappa(v) * (f(x) - f(s_v x)) / <v, x> * v_i .

The difference quotient is an exact polynomial division (f - f o s_v vanishes
on the hyperplane <v, x> = 0), so in exact mode everything stays in Q.  The
operators commute and reduce to plain partials at kappa = 0; both facts are
exercised by the test suite rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .gegenbauer import Function1D, jacobi_rule
from .multipoly import EXACT, FLOAT, MultiPoly, monomials_of_degree
from .reflection import (DunklConstants, MultiplicityFunction, ReflectionGroup,
                         RootSystem, UnsupportedGroupError, builtin_root_system,
                         constants, generate_group, validate_multiplicity)


@dataclass(frozen=True)
class DunklContext:
    """A reflection group with a validated multiplicity and its constants."""

    root_system: RootSystem
    group: ReflectionGroup
    kappa: MultiplicityFunction
    const: DunklConstants

    @classmethod
    def create(cls, family: str, dimension: int | None = None, kappa=0,
               order: int | None = None) -> "DunklContext":
        rs = builtin_root_system(family, dimension, order)
        group = generate_group(rs)
        mult = validate_multiplicity(rs, group, kappa)
        return cls(rs, group, mult, constants(rs, mult))

    @classmethod
    def from_root_system(cls, rs: RootSystem, kappa) -> "DunklContext":
        group = generate_group(rs)
        mult = validate_multiplicity(rs, group, kappa)
        return cls(rs, group, mult, constants(rs, mult))

    @property
    def dim(self) -> int:
        return self.root_system.dim

    @property
    def gamma_kappa(self) -> Fraction:
        return self.const.gamma

    @property
    def lambda_kappa(self) -> Fraction:
        return self.const.lam

    @property
    def is_zd2(self) -> bool:
        return self.root_system.family == "zd2"

    @property
    def kappa_is_zero(self) -> bool:
        return self.kappa.is_zero

    @property
    def exact(self) -> bool:
        return self.root_system.exact

    def kappa_by_axis(self) -> list[Fraction]:
        """Per-coordinate multiplicities for Zd2 (orbit of each +-e_i)."""
        if not self.is_zd2:
            raise UnsupportedGroupError("kappa_by_axis applies to zd2 only")
        d = self.dim
        out = []
        for i in range(d):
            e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(d))
            out.append(self.kappa.value(e))
        return out

    def describe(self) -> dict:
        rs = self.root_system
        return {
            "family": rs.family,
            "dimension": rs.dim,
            "order": len(rs.positive) // rs.dim if rs.family == "i2" else None,
            "kappa": [str(v) for v in self.kappa.orbit_values],
            "gamma": str(self.const.gamma),
            "lambda": str(self.const.lam),
            "group_order": self.group.order,
        }

    def _positive_data(self, mode: str):
        """(root, kappa(root), reflection matrix) triples in the poly's mode."""
        from .reflection import reflection_matrix

        out = []
        for v in self.root_system.positive:
            kv = self.kappa.value(v)
            if mode == EXACT:
                out.append((v, kv, reflection_matrix(v)))
            else:
                vf = tuple(float(c) for c in v)
                out.append((vf, float(kv), reflection_matrix(vf)))
        return out


def dunkl_apply(ctx: DunklContext, i: int, f: MultiPoly) -> MultiPoly:
    """Apply the i-th Dunkl operator (0-based coordinate) to f."""
    if f.dim != ctx.dim:
        raise ValueError(f"polynomial has dim {f.dim}, context has {ctx.dim}")
    if f.mode == EXACT and not ctx.exact:
        raise ValueError("exact polynomials need a rational root system; "
                         "convert with to_float() first")
    result = f.partial_derivative(i)
    if ctx.kappa_is_zero or f.is_zero():
        return result
    for v, kv, s_v in ctx._positive_data(f.mode):
        if kv == 0 or v[i] == 0:
            continue
        diff = f - f.substitute_linear(s_v)
        if diff.is_zero():
            continue
        quot = diff.divide_by_linear_form(v)
        result = result + quot.scale(kv * v[i])
    return result


def dunkl_laplacian(ctx: DunklContext, f: MultiPoly) -> MultiPoly:
    """Sum of squared Dunkl operators; degree drops by exactly two."""
    out = MultiPoly.zero(f.dim, f.mode)
    for i in range(ctx.dim):
        out = out + dunkl_apply(ctx, i, dunkl_apply(ctx, i, f))
    return out


def harmonic_space_dimension(d: int, n: int) -> int:
    """dim of degree-n harmonics in d variables (independent of kappa)."""
    if n < 0:
        return 0
    first = comb(n + d - 1, d - 1)
    second = comb(n + d - 3, d - 1) if n >= 2 else 0
    return first - second


@dataclass(frozen=True)
class HarmonicBasis:
    """Nullspace basis of the Dunkl Laplacian on homogeneous degree n.

    Elements are ordered deterministically (graded-lex monomials, first free
    column first); they are not orthogonalized.  ``gram`` stays None until a
    sphere measure fills it in.
    """

    degree: int
    elements: tuple
    gram: tuple | None = None

    def __len__(self):
        return len(self.elements)

    def to_text(self) -> str:
        lines = [f"degree: {self.degree}"]
        for k, p in enumerate(self.elements):
            lines.append(f"element {k}: {p.to_text()}")
        if self.gram is not None:
            lines.append("gram:")
            for row in self.gram:
                lines.append("  " + ", ".join(str(x) for x in row))
        return "\n".join(lines) + "\n"


def _nullspace_exact(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    m = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                fk = m[k][c]
                m[k] = [a - fk * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for pi, pc in enumerate(pivots):
            vec[pc] = -m[pi][fc]
        basis.append(vec)
    return basis


def _nullspace_float(a: np.ndarray, tol: float = 1e-10) -> list[np.ndarray]:
    if a.shape[0] == 0:
        return [row for row in np.eye(a.shape[1])]
    _, s, vh = np.linalg.svd(a)
    rank = int((s > tol * s[0]).sum()) if s.size else 0
    return [vh[k] for k in range(rank, a.shape[1])]


def harmonic_basis(ctx: DunklContext, n: int, mode: str | None = None) -> HarmonicBasis:
    """Basis of homogeneous degree-n polynomials killed by the Dunkl Laplacian.

    Exact mode (default where the context allows it) runs rational Gaussian
    elimination; float mode finds the numerical nullspace with a rank
    tolerance of 1e-10.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    if mode is None:
        mode = EXACT if ctx.exact else FLOAT
    d = ctx.dim
    source = monomials_of_degree(d, n)
    if n < 2:
        elems = tuple(MultiPoly.monomial(d, e, 1, mode) for e in source)
        return HarmonicBasis(n, elems)
    target = monomials_of_degree(d, n - 2)
    tindex = {e: k for k, e in enumerate(target)}
    columns = []
    for exps in source:
        lap = dunkl_laplacian(ctx, MultiPoly.monomial(d, exps, 1, mode))
        col = [lap.terms.get(te, 0) for te in target]
        columns.append(col)
    if mode == EXACT:
        rows = [[Fraction(columns[c][r]) for c in range(len(source))]
                for r in range(len(target))]
        vecs = _nullspace_exact(rows, len(source))
        elems = tuple(
            MultiPoly(d, {source[c]: vec[c] for c in range(len(source))}, EXACT)
            for vec in vecs)
    else:
        a = np.array([[float(columns[c][r]) for c in range(len(source))]
                      for r in range(len(target))], dtype=float)
        vecs = _nullspace_float(a)
        elems = tuple(
            MultiPoly(d, {source[c]: float(vec[c]) for c in range(len(source))
                          if abs(vec[c]) > 0}, FLOAT)
            for vec in vecs)
    expected = harmonic_space_dimension(d, n)
    if len(elems) != expected:
        raise ArithmeticError(
            f"nullspace dimension {len(elems)} != expected {expected} "
            f"for degree {n}; context {ctx.describe()}")
    return HarmonicBasis(n, elems)


# ---------------------------------------------------------------------------
# Intertwining operator (kappa = 0 and Zd2)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _b_factor(kappa: Fraction, m: int) -> Fraction:
    """Monomial scaling of the one-dimensional intertwining operator:

    b(2k)   = (1/2)_k     / (kappa + 1/2)_k
    b(2k+1) = (1/2)_{k+1} / (kappa + 1/2)_{k+1}
    """
    from .gegenbauer import pochhammer

    half = Fraction(1, 2)
    k = m // 2 + (m % 2)
    return pochhammer(half, k) / pochhammer(kappa + half, k)


def intertwine(ctx: DunklContext, f: MultiPoly) -> MultiPoly:
    """V_kappa f.  Identity at kappa = 0; the Zd2 operator scales each
    monomial x^alpha by prod_i b_{kappa_i}(alpha_i).  Other groups are out of
    scope and raise UnsupportedGroupError.
    """
    if ctx.kappa_is_zero:
        return f
    if not ctx.is_zd2:
        raise UnsupportedGroupError(
            "the intertwining operator is implemented for Zd2 (and kappa = 0) only")
    kappas = ctx.kappa_by_axis()
    terms = {}
    for exps, c in f.terms.items():
        factor = Fraction(1)
        for ki, e in zip(kappas, exps):
            if e:
                factor *= _b_factor(ki, e)
        terms[exps] = c * factor if f.mode == EXACT else c * float(factor)
    return MultiPoly(f.dim, terms, f.mode)


# ---------------------------------------------------------------------------
# Kernel translates V_kappa[g(<x, .>)](y)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _nu_rule(kappa: float, m: int):
    """Quadrature for the probability measure d nu_kappa on [-1, 1]:

        d nu_kappa(t) = c'_kappa (1 + t) (1 - t^2)^(kappa - 1) dt   (kappa > 0)
        nu_0 = point mass at t = 1.

    Gauss-Jacobi with (alpha, beta) = (kappa - 1, kappa), weights normalized
    to unit total mass.
    """
    if kappa == 0.0:
        return np.array([1.0]), np.array([1.0])
    nodes, weights = jacobi_rule(m, kappa - 1.0, kappa)
    w = weights / weights.sum()
    w.flags.writeable = False
    return nodes, w


def _unit_check(x, tol=1e-8):
    nrm = float(np.linalg.norm(np.asarray(x, dtype=float)))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"point must lie on the unit sphere (|x| = {nrm:.6f})")


def kernel_translate_batch(ctx: DunklContext, g: Function1D, x,
                           ys: np.ndarray, quad_order: int = 48) -> np.ndarray:
    """K(x, y_j) = V_kappa[g(<x, .>)](y_j) for all rows y_j of ys at once.

    kappa = 0 collapses to g(<x, y>); for Zd2 the translate is a tensor
    integral of g(sum_i x_i y_i t_i) against nu_{kappa_1} x ... x nu_{kappa_d},
    with kappa_i = 0 axes pinned at t_i = 1.
    """
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    xf = np.asarray(x, dtype=float)
    if ctx.kappa_is_zero:
        return np.asarray(g(ys @ xf))
    if not ctx.is_zd2:
        raise UnsupportedGroupError(
            "kernel translates are implemented for Zd2 (and kappa = 0) only")
    kappas = [float(k) for k in ctx.kappa_by_axis()]
    active = [i for i, k in enumerate(kappas) if k > 0]
    pinned = np.array([1.0 if k == 0 else 0.0 for k in kappas])
    base = ys @ (xf * pinned)                                   # t_i = 1 axes
    if not active:
        return np.asarray(g(base))
    rules = [_nu_rule(kappas[i], quad_order) for i in active]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    tmat = np.stack([gr.ravel() for gr in grids], axis=1)       # (G, n_active)
    wgrid = rules[0][1]
    for _, w in rules[1:]:
        wgrid = np.outer(wgrid, w).ravel()
    coeff = ys[:, active] * xf[active]                          # (N, n_active)
    out = np.empty(ys.shape[0], dtype=float)
    chunk = max(1, int(4_000_000 // max(tmat.shape[0], 1)))
    for lo in range(0, ys.shape[0], chunk):
        hi = min(lo + chunk, ys.shape[0])
        args = base[lo:hi, None] + coeff[lo:hi] @ tmat.T        # (chunk, G)
        vals = np.asarray(g(args))
        out[lo:hi] = vals @ wgrid
    return out


def kernel_translate_eval(ctx: DunklContext, g: Function1D, x, y,
                          quad_order: int = 48) -> float:
    """Scalar kernel translate K(x, y); both points must be unit vectors."""
    _unit_check(x)
    _unit_check(y)
    return float(kernel_translate_batch(ctx, g, x, np.asarray(y, dtype=float)[None, :],
                                        quad_order)[0])


def translate_as_polynomial(ctx: DunklContext, g: Function1D, x) -> MultiPoly:
    """For polynomial g: K(x, .) = V_kappa[g(<x, .>)] as a float polynomial in y.

    This is the exact route (up to round-off in the coefficients): expand
    g(<x, y>) in y, then apply the monomial scaling of the intertwining
    operator.  Cross-checks the quadrature route in the tests.
    """
    deg = g.poly_degree
    if deg is None:
        raise ValueError("translate_as_polynomial needs polynomial g")
    d = ctx.dim
    form = MultiPoly.linear_form([float(c) for c in np.asarray(x, dtype=float)], FLOAT)
    # Horner in <x, y>
    if g.kind == "gegenbauer":
        coeffs = [float(c) for c in gegenbauer_coefficients_cached(g.n, float(g.lam))]
    elif g.kind == "poly":
        coeffs = [float(c) for c in g.coeffs]
    elif g.kind == "sum":
        acc = MultiPoly.zero(d, FLOAT)
        for w, part in g.parts:
            acc = acc + translate_as_polynomial(ctx, part, x).scale(w)
        return acc
    else:
        raise ValueError(f"function kind {g.kind!r} is not polynomial")
    poly = MultiPoly.zero(d, FLOAT)
    for c in reversed(coeffs):
        poly = poly * form + MultiPoly.constant(d, c, FLOAT)
    return intertwine(ctx, poly)


@lru_cache(maxsize=512)
def gegenbauer_coefficients_cached(n: int, lam: float) -> tuple:
    from .gegenbauer import gegenbauer_coefficients

    return tuple(gegenbauer_coefficients(n, lam))
