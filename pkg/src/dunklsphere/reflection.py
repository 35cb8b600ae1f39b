"""Root systems, finite reflection groups, multiplicity functions, weights.

Vectors and matrices are plain tuples of scalars so that the rational families
(Zd2, A, B, D) stay in exact Fraction arithmetic end to end.  The dihedral
family I2(m) uses unit roots cos/sin(k*pi/m), which are irrational for every
m >= 3, so it always lives in float coordinates; group deduplication then falls
back to an entrywise 1e-10 quantization instead of exact comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .multipoly import EXACT, FLOAT, MultiPoly

#: Generic direction whose inner products pick the positive subsystem:
#: u = (1, eps, eps^2, ...).  Small enough that no builtin root is orthogonal.
POSITIVE_EPS = Fraction(1, 1000)

#: Entrywise quantization used to deduplicate float matrices/vectors.
DEDUP_TOL = 1e-10

GROUP_ORDER_CAP = 10 ** 6

FAMILIES = ("zd2", "a", "b", "d", "i2")


class GroupOrderCapError(RuntimeError):
    """Group generation exceeded the element cap (not a finite system?)."""


class UnsupportedGroupError(ValueError):
    """Operation not available for this reflection group."""


class InvalidMultiplicityError(ValueError):
    """Multiplicity values not G-invariant or negative."""


# -- small exact linear algebra on tuples -----------------------------------

def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _matvec(m, v):
    return tuple(_dot(row, v) for row in m)


def _matmul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def _identity(d, exact):
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def _vec_key(v):
    if all(isinstance(x, (int, Fraction)) for x in v):
        return tuple(Fraction(x) for x in v)
    return tuple(int(round(float(x) / DEDUP_TOL)) for x in v)


def _mat_key(m):
    return tuple(_vec_key(row) for row in m)


def reflection_matrix(v: Sequence) -> tuple:
    """Householder reflection s_v = I - 2 v v^T / <v, v>.

    Exact (Fraction entries) whenever v has rational entries.
    """
    nrm = _dot(v, v)
    if nrm == 0:
        raise ValueError("cannot reflect through the zero vector")
    d = len(v)
    exact = all(isinstance(x, (int, Fraction)) for x in v)
    if exact:
        v = tuple(Fraction(x) for x in v)
        nrm = _dot(v, v)
    return tuple(
        tuple((1 if i == j else 0) - 2 * v[i] * v[j] / nrm for j in range(d))
        for i in range(d))


@dataclass(frozen=True)
class RootSystem:
    dim: int
    roots: tuple
    positive: tuple
    family: str | None = None
    exact: bool = True

    def __post_init__(self):
        if len(self.roots) != 2 * len(self.positive):
            raise ValueError("positive subsystem must contain one root per +- pair")


def _positive_filter(roots, dim):
    """Split roots by sign of the inner product with the generic direction."""
    u = [POSITIVE_EPS ** i for i in range(dim)]
    pos = []
    for v in roots:
        s = _dot(u, v) if all(isinstance(x, (int, Fraction)) for x in v) \
            else sum(float(a) * float(b) for a, b in zip(u, v))
        if s == 0:
            raise ValueError(f"root {v} is orthogonal to the generic direction")
        if s > 0:
            pos.append(v)
    return tuple(pos)


def builtin_root_system(family: str, dimension: int | None = None,
                        order: int | None = None) -> RootSystem:
    """Construct one of the built-in families.

    family:    zd2 | a | b | d | i2 (case-insensitive)
    dimension: ambient dimension d (zd2: d >= 1; a: d >= 2 for A_{d-1};
               b: d >= 2; d: d >= 3).  i2 ignores it (always 2).
    order:     m >= 3 for i2(m) only.
    """
    fam = family.lower()
    if fam not in FAMILIES:
        raise UnsupportedGroupError(f"unknown family {family!r}; choose from {FAMILIES}")

    def e(i, d):
        return tuple(Fraction(1) if j == i else Fraction(0) for j in range(d))

    def neg(v):
        return tuple(-x for x in v)

    if fam == "i2":
        if order is None or order < 3:
            raise UnsupportedGroupError("i2 requires order m >= 3")
        roots = tuple(
            (math.cos(k * math.pi / order), math.sin(k * math.pi / order))
            for k in range(2 * order))
        return RootSystem(2, roots, _positive_filter(roots, 2), "i2", exact=False)

    d = dimension
    if d is None:
        raise UnsupportedGroupError(f"family {fam!r} requires a dimension")

    if fam == "zd2":
        if d < 1:
            raise UnsupportedGroupError("zd2 requires d >= 1")
        pos = tuple(e(i, d) for i in range(d))
    elif fam == "a":
        if d < 2:
            raise UnsupportedGroupError("a requires ambient dimension d >= 2")
        pos = tuple(tuple(a - b for a, b in zip(e(i, d), e(j, d)))
                    for i in range(d) for j in range(d) if i < j)
    elif fam == "b":
        if d < 2:
            raise UnsupportedGroupError("b requires d >= 2")
        axes = [e(i, d) for i in range(d)]
        combos = []
        for i in range(d):
            for j in range(i + 1, d):
                combos.append(tuple(a - b for a, b in zip(axes[i], axes[j])))
                combos.append(tuple(a + b for a, b in zip(axes[i], axes[j])))
        pos = tuple(axes) + tuple(combos)
    else:  # fam == "d"
        if d < 3:
            raise UnsupportedGroupError("d requires d >= 3")
        axes = [e(i, d) for i in range(d)]
        combos = []
        for i in range(d):
            for j in range(i + 1, d):
                combos.append(tuple(a - b for a, b in zip(axes[i], axes[j])))
                combos.append(tuple(a + b for a, b in zip(axes[i], axes[j])))
        pos = tuple(combos)
    roots = pos + tuple(neg(v) for v in pos)
    return RootSystem(d, roots, pos, fam, exact=True)


def validate_root_system(rs: RootSystem, tol: float = DEDUP_TOL) -> None:
    """Check the two root-system axioms; raise ValueError on failure.

    (1) the only multiples of a root v in R are +-v;
    (2) each reflection s_v permutes R.
    """
    keys = {_vec_key(v) for v in rs.roots}
    if len(keys) != len(rs.roots):
        raise ValueError("duplicate roots")
    for v in rs.roots:
        nv = _vec_key(tuple(-x for x in v))
        if nv not in keys:
            raise ValueError(f"root set not symmetric: -{v} missing")
    # pairwise collinearity
    n = len(rs.roots)
    for i in range(n):
        for j in range(i + 1, n):
            u, w = rs.roots[i], rs.roots[j]
            # u, w collinear iff all 2x2 minors vanish
            coll = all(
                abs(float(u[p]) * float(w[q]) - float(u[q]) * float(w[p])) <= tol
                for p in range(rs.dim) for q in range(p + 1, rs.dim)) \
                if rs.dim > 1 else True
            if coll:
                same = all(abs(float(a) - float(b)) <= tol for a, b in zip(u, w))
                opp = all(abs(float(a) + float(b)) <= tol for a, b in zip(u, w))
                if not (same or opp):
                    raise ValueError(f"roots {u} and {w} are collinear but not opposite")
    for v in rs.positive:
        s = reflection_matrix(v)
        for w in rs.roots:
            if _vec_key(_matvec(s, w)) not in keys:
                raise ValueError(f"reflection through {v} does not preserve the root set")


@dataclass(frozen=True)
class ReflectionGroup:
    elements: tuple          # all group elements as row-tuple matrices
    generators: tuple        # the reflections s_v, v in the positive subsystem
    exact: bool

    @property
    def order(self):
        return len(self.elements)


def generate_group(rs: RootSystem, cap: int = GROUP_ORDER_CAP) -> ReflectionGroup:
    """Closure of the root reflections under multiplication (BFS).

    Deduplication is exact for rational matrices and quantized at 1e-10
    entrywise otherwise.  Raises GroupOrderCapError past ``cap`` elements.
    """
    gens = tuple(reflection_matrix(v) for v in rs.positive)
    ident = _identity(rs.dim, rs.exact)
    seen = {_mat_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = _matmul(a, g)
                k = _mat_key(p)
                if k not in seen:
                    if len(seen) >= cap:
                        raise GroupOrderCapError(
                            f"group generation exceeded cap {cap}")
                    seen[k] = p
                    nxt.append(p)
        frontier = nxt
    return ReflectionGroup(tuple(seen.values()), gens, rs.exact)


def root_orbits(rs: RootSystem, group: ReflectionGroup) -> list[list]:
    """Orbits of the full root set under the group action.

    Orbits are ordered by the first positive root (in the family's canonical
    enumeration order) that they contain, which fixes the meaning of
    per-orbit multiplicity sequences.
    """
    key_to_root = {_vec_key(v): v for v in rs.roots}
    assigned: dict = {}
    orbits: list[list] = []
    for v in rs.positive:
        k = _vec_key(v)
        if k in assigned:
            continue
        members = {}
        for g in group.elements:
            w = _matvec(g, v)
            wk = _vec_key(w)
            if wk not in key_to_root:
                raise ValueError(f"group element maps root {v} outside the root set")
            members[wk] = key_to_root[wk]
        for wk in members:
            assigned[wk] = len(orbits)
        orbits.append(list(members.values()))
    return orbits


def _as_kappa_scalar(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # floats come in from CLI defaults and numpy; shortest-repr keeps
        # human-entered decimals exact (0.5 -> 1/2)
        return Fraction(str(x))
    raise InvalidMultiplicityError(f"cannot interpret multiplicity value {x!r}")


@dataclass(frozen=True)
class MultiplicityFunction:
    """G-invariant nonnegative multiplicity, stored per root orbit."""

    orbit_representatives: tuple   # first positive root of each orbit
    orbit_values: tuple            # Fractions, one per orbit
    _lookup: dict                  # vec key -> value, covers all roots

    def value(self, root) -> Fraction:
        k = _vec_key(root)
        if k not in self._lookup:
            raise KeyError(f"{root} is not a root of this system")
        return self._lookup[k]

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.orbit_values)

    def __iter__(self):
        return iter(self.orbit_values)


def validate_multiplicity(rs: RootSystem, group: ReflectionGroup,
                          kappa) -> MultiplicityFunction:
    """Build a MultiplicityFunction from per-orbit values or a root->value map.

    kappa may be: a single scalar (applied to every orbit), a sequence with
    one value per orbit (orbit order from root_orbits), or a mapping from
    root tuples to values defined on all positive roots.  Values must be
    nonnegative and constant on orbits.
    """
    orbits = root_orbits(rs, group)
    if isinstance(kappa, Mapping):
        given = {_vec_key(root): _as_kappa_scalar(v) for root, v in kappa.items()}
        values = []
        for orb in orbits:
            seen_vals = {given[_vec_key(v)] for v in orb if _vec_key(v) in given}
            if not seen_vals:
                raise InvalidMultiplicityError(
                    f"no multiplicity given for orbit of {orb[0]}")
            if len(seen_vals) > 1:
                raise InvalidMultiplicityError(
                    f"multiplicity not constant on the orbit of {orb[0]}: {sorted(seen_vals)}")
            values.append(seen_vals.pop())
    else:
        if isinstance(kappa, (int, float, str, Fraction)):
            kappa = [kappa] * len(orbits)
        values = [_as_kappa_scalar(v) for v in kappa]
        if len(values) != len(orbits):
            raise InvalidMultiplicityError(
                f"expected {len(orbits)} multiplicity values "
                f"(one per root orbit), got {len(values)}")
    for v in values:
        if v < 0:
            raise InvalidMultiplicityError(f"multiplicity {v} is negative")
    lookup: dict = {}
    for orb, val in zip(orbits, values):
        for root in orb:
            lookup[_vec_key(root)] = val
    reps = tuple(orb[0] for orb in orbits)
    return MultiplicityFunction(reps, tuple(values), lookup)


@dataclass(frozen=True)
class DunklConstants:
    gamma: Fraction      # sum of kappa over the positive subsystem
    lam: Fraction        # gamma + (d - 2) / 2

    @property
    def lam_float(self) -> float:
        return float(self.lam)


def constants(rs: RootSystem, kappa: MultiplicityFunction) -> DunklConstants:
    """gamma_kappa and lambda_kappa; lambda_kappa must be positive."""
    gamma = sum((kappa.value(v) for v in rs.positive), Fraction(0))
    lam = gamma + Fraction(rs.dim - 2, 2)
    if lam <= 0:
        raise ValueError(
            f"lambda = gamma + (d-2)/2 = {lam} must be positive "
            f"(d = {rs.dim}, gamma = {gamma})")
    return DunklConstants(gamma, lam)


def weight_eval(rs: RootSystem, kappa: MultiplicityFunction, x: Sequence):
    """w(x) = prod over positive roots of |<v, x>|^(2 kappa(v)).

    Exact Fraction when every exponent is an even integer and all inputs are
    rational; float otherwise.
    """
    exact_ok = rs.exact and all(isinstance(t, (int, Fraction)) for t in x) \
        and all(v.denominator == 1 for v in kappa.orbit_values)
    if exact_ok:
        acc = Fraction(1)
        for v in rs.positive:
            k = kappa.value(v)
            if k:
                ip = _dot(v, tuple(Fraction(t) for t in x))
                acc *= abs(ip) ** (2 * int(k))
        return acc
    acc = 1.0
    for v in rs.positive:
        k = float(kappa.value(v))
        if k:
            ip = abs(sum(float(a) * float(b) for a, b in zip(v, x)))
            acc *= ip ** (2.0 * k)
    return acc


def weight_values(rs: RootSystem, kappa: MultiplicityFunction, points):
    """Vectorized w over an (N, d) float array."""
    import numpy as np

    pts = np.asarray(points, dtype=float)
    acc = np.ones(pts.shape[0])
    for v in rs.positive:
        k = float(kappa.value(v))
        if k:
            ip = np.abs(pts @ np.asarray([float(c) for c in v]))
            acc *= ip ** (2.0 * k)
    return acc


def weight_as_polynomial(rs: RootSystem, kappa: MultiplicityFunction,
                         mode: str | None = None) -> MultiPoly:
    """w as a polynomial: prod <v, x>^(2 kappa(v)).

    Requires every kappa(v) to be a nonnegative integer so that the absolute
    value is redundant.  Exact mode needs rational roots.
    """
    for v in kappa.orbit_values:
        if v.denominator != 1:
            raise ValueError(
                f"weight is polynomial only for integer multiplicities, got {v}")
    if mode is None:
        mode = EXACT if rs.exact else FLOAT
    if mode == EXACT and not rs.exact:
        raise ValueError("exact weight polynomial needs rational roots")
    w = MultiPoly.constant(rs.dim, 1, mode)
    for v in rs.positive:
        k = int(kappa.value(v))
        if k:
            form = MultiPoly.linear_form(
                [c if mode == EXACT else float(c) for c in v], mode)
            w = w * form.power(2 * k)
    return w
