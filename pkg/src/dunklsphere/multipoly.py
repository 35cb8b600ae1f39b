"""Sparse multivariate polynomials in exact-rational or float mode.

A polynomial in d variables is stored as a map from exponent tuples to
coefficients.  Two scalar modes exist and never mix inside one operation:

* ``"exact"``  -- coefficients are ``fractions.Fraction``; no rounding ever.
* ``"float"``  -- coefficients are Python floats (complex allowed).

The exact pipeline is the ground-truth oracle for the float pipeline, so a
silent promotion from float to Fraction (or a mixed-mode add) is an error.
Scalars may always be *demoted* into float mode (Fraction -> float) since that
direction loses nothing the float mode promises.

Variables are indexed 0..d-1 in the API; the text format names them x1..xd.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

EXACT = "exact"
FLOAT = "float"

#: Products whose total degree would exceed this raise DegreeCapError.  Guards
#: against runaway symbolic growth; pass max_degree to mul() to override.
DEGREE_CAP = 64


class DegreeCapError(ArithmeticError):
    """Raised when a product would exceed the degree cap."""


class NonDivisibleError(ArithmeticError):
    """Raised when divide_by_linear_form meets a nonzero remainder."""


class ModeError(TypeError):
    """Raised on mixed exact/float operands or bad scalar types."""


def _coerce_scalar(c, mode):
    """Coerce c into a coefficient for the given mode.

    Exact mode accepts int and Fraction.  Float mode accepts int, float,
    complex, and Fraction (demotion).  Anything else raises ModeError.
    """
    if mode == EXACT:
        if isinstance(c, Fraction):
            return c
        if isinstance(c, int) and not isinstance(c, bool):
            return Fraction(c)
        raise ModeError(f"exact mode requires int or Fraction, got {type(c).__name__}")
    if mode == FLOAT:
        if isinstance(c, complex):
            return c
        if isinstance(c, (int, float, Fraction)) and not isinstance(c, bool):
            return float(c)
        raise ModeError(f"float mode requires a real/complex number, got {type(c).__name__}")
    raise ModeError(f"unknown scalar mode {mode!r}")


def _check_mode(mode):
    if mode not in (EXACT, FLOAT):
        raise ModeError(f"unknown scalar mode {mode!r}")


class MultiPoly:
    """Immutable sparse polynomial.  Do not mutate ``terms`` after creation."""

    __slots__ = ("dim", "mode", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[tuple, object] | None = None,
                 mode: str = EXACT):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        _check_mode(mode)
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(exps)
                if len(exps) != dim:
                    raise ValueError(f"exponent tuple {exps} does not have length {dim}")
                if any((not isinstance(e, int)) or e < 0 for e in exps):
                    raise ValueError(f"exponents must be nonnegative ints, got {exps}")
                c = _coerce_scalar(c, mode)
                if c != 0:
                    acc = clean.get(exps)
                    c = c if acc is None else acc + c
                    if c == 0:
                        clean.pop(exps, None)
                    else:
                        clean[exps] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim, mode=EXACT):
        return cls(dim, {}, mode)

    @classmethod
    def constant(cls, dim, c, mode=EXACT):
        return cls(dim, {(0,) * dim: c}, mode)

    @classmethod
    def variable(cls, dim, i, mode=EXACT):
        """The polynomial x_{i+1} (0-based index i)."""
        if not 0 <= i < dim:
            raise IndexError(f"variable index {i} out of range for dim {dim}")
        exps = tuple(1 if j == i else 0 for j in range(dim))
        return cls(dim, {exps: 1}, mode)

    @classmethod
    def monomial(cls, dim, exponents, coeff=1, mode=EXACT):
        return cls(dim, {tuple(exponents): coeff}, mode)

    @classmethod
    def linear_form(cls, v: Sequence, mode=EXACT):
        """The polynomial <v, x> = v_1 x_1 + ... + v_d x_d."""
        d = len(v)
        terms = {}
        for i, vi in enumerate(v):
            if vi != 0:
                exps = tuple(1 if j == i else 0 for j in range(d))
                terms[exps] = vi
        return cls(d, terms, mode)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exponents):
        c = self.terms.get(tuple(exponents))
        if c is not None:
            return c
        return Fraction(0) if self.mode == EXACT else 0.0

    def _require_same(self, other):
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.mode != self.mode:
            raise ModeError(f"mixed scalar modes: {self.mode} vs {other.mode}")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        self._require_same(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, 0) + c
            if s == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return MultiPoly(self.dim, terms, self.mode)

    def __neg__(self):
        return MultiPoly(self.dim, {e: -c for e, c in self.terms.items()}, self.mode)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _coerce_scalar(c, self.mode)
        if c == 0:
            return MultiPoly.zero(self.dim, self.mode)
        return MultiPoly(self.dim, {e: cc * c for e, cc in self.terms.items()}, self.mode)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def mul(self, other, max_degree: int | None = None):
        """Polynomial product, guarded by the degree cap."""
        self._require_same(other)
        if self.is_zero() or other.is_zero():
            return MultiPoly.zero(self.dim, self.mode)
        cap = DEGREE_CAP if max_degree is None else max_degree
        if self.degree() + other.degree() > cap:
            raise DegreeCapError(
                f"product degree {self.degree() + other.degree()} exceeds cap {cap}")
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return MultiPoly(self.dim, terms, self.mode)

    def power(self, k: int, max_degree: int | None = None):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.dim, 1, self.mode)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, max_degree=max_degree)
            k >>= 1
            if k:
                base = base.mul(base, max_degree=max_degree)
        return result

    def conjugate(self):
        if self.mode == EXACT:
            return self
        return MultiPoly(self.dim,
                         {e: (c.conjugate() if isinstance(c, complex) else c)
                          for e, c in self.terms.items()}, self.mode)

    def to_float(self) -> "MultiPoly":
        """Demote to float mode (identity if already float)."""
        if self.mode == FLOAT:
            return self
        return MultiPoly(self.dim, {e: float(c) for e, c in self.terms.items()}, FLOAT)

    # -- evaluation --------------------------------------------------------

    def eval(self, point: Sequence):
        """Evaluate at a point given as a length-d sequence of scalars."""
        if len(point) != self.dim:
            raise ValueError(f"point has length {len(point)}, expected {self.dim}")
        pt = [_coerce_scalar(x, self.mode) for x in point]
        total = Fraction(0) if self.mode == EXACT else 0.0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(pt, exps):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def eval_many(self, points):
        """Vectorized evaluation on an (N, d) float array; returns length-N array."""
        import numpy as np

        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"expected points of shape (N, {self.dim})")
        out = np.zeros(pts.shape[0], dtype=complex if self._is_complex() else float)
        for exps, c in self.terms.items():
            coeff = c if isinstance(c, complex) else float(c)
            v = np.full(pts.shape[0], coeff, dtype=out.dtype)
            for i, e in enumerate(exps):
                if e:
                    v = v * pts[:, i] ** e
            out += v
        return out

    def _is_complex(self):
        return self.mode == FLOAT and any(isinstance(c, complex) for c in self.terms.values())

    # -- calculus ----------------------------------------------------------

    def partial_derivative(self, i: int) -> "MultiPoly":
        """d/dx_{i+1} (0-based index i)."""
        if not 0 <= i < self.dim:
            raise IndexError(f"variable index {i} out of range for dim {self.dim}")
        terms = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                ne = exps[:i] + (e - 1,) + exps[i + 1:]
                terms[ne] = terms.get(ne, 0) + c * e
        return MultiPoly(self.dim, terms, self.mode)

    def substitute_linear(self, matrix) -> "MultiPoly":
        """Return p(Mx): each variable x_i is replaced by sum_j M[i][j] x_j.

        Matrix entries are coerced into this polynomial's scalar mode, so a
        Fraction matrix may act on a float polynomial but not vice versa.
        """
        d = self.dim
        rows = [list(r) for r in matrix]
        if len(rows) != d or any(len(r) != d for r in rows):
            raise ValueError(f"matrix must be {d}x{d}")
        forms = [MultiPoly.linear_form([_coerce_scalar(x, self.mode) for x in row],
                                       self.mode) for row in rows]
        # cache powers of each substituted variable
        pow_cache: dict = {}

        def form_power(i, k):
            key = (i, k)
            got = pow_cache.get(key)
            if got is None:
                got = forms[i].power(k)
                pow_cache[key] = got
            return got

        out = MultiPoly.zero(d, self.mode)
        for exps, c in self.terms.items():
            term = MultiPoly.constant(d, c, self.mode)
            for i, e in enumerate(exps):
                if e:
                    term = term * form_power(i, e)
            out = out + term
        return out

    def divide_by_linear_form(self, v: Sequence, tol: float = 1e-9) -> "MultiPoly":
        """Exact quotient p / <v, x>, raising NonDivisibleError otherwise.

        Synthetic division with the first nonzero coordinate of v as pivot
        variable.  For a linear divisor the quotient is unique and the
        remainder is free of the pivot variable, so exact divisibility shows
        up as a literally empty remainder in exact mode; in float mode the
        remainder is compared against tol * max(1, max |coeff of p|).
        """
        if len(v) != self.dim:
            raise ValueError(f"form has length {len(v)}, expected {self.dim}")
        vv = [_coerce_scalar(x, self.mode) for x in v]
        pivot = next((i for i, x in enumerate(vv) if x != 0), None)
        if pivot is None:
            raise ZeroDivisionError("division by the zero form")
        if self.is_zero():
            return self
        vp = vv[pivot]
        rem = dict(self.terms)
        quot: dict = {}
        maxdeg = max(e[pivot] for e in rem)
        for k in range(maxdeg, 0, -1):
            slice_items = [(e, c) for e, c in rem.items() if e[pivot] == k]
            for e, c in slice_items:
                t = c / vp if self.mode == EXACT else c / vp
                qe = e[:pivot] + (k - 1,) + e[pivot + 1:]
                quot[qe] = quot.get(qe, 0) + t
                # subtract t * x^qe * <v, x>
                for j, vj in enumerate(vv):
                    if vj == 0:
                        continue
                    ne = qe[:j] + (qe[j] + 1,) + qe[j + 1:]
                    s = rem.get(ne, 0) - t * vj
                    if s == 0:
                        rem.pop(ne, None)
                    else:
                        rem[ne] = s
        if self.mode == EXACT:
            if any(c != 0 for c in rem.values()):
                raise NonDivisibleError("polynomial is not divisible by the form")
        else:
            scale = max(1.0, max(abs(c) for c in self.terms.values()))
            worst = max((abs(c) for c in rem.values()), default=0.0)
            if worst > tol * scale:
                raise NonDivisibleError(
                    f"remainder {worst:.3e} exceeds tolerance {tol:.3e} (scaled)")
        return MultiPoly(self.dim, quot, self.mode)

    def homogeneous_components(self):
        """List of (degree, component) pairs, ascending degree; [] for zero."""
        buckets: dict = {}
        for exps, c in self.terms.items():
            buckets.setdefault(sum(exps), {})[exps] = c
        return [(n, MultiPoly(self.dim, t, self.mode))
                for n, t in sorted(buckets.items())]

    # -- text serialization --------------------------------------------------

    def to_text(self) -> str:
        """Deterministic text form, e.g. ``3/2 * x1^2*x2 + -1 * x3``.

        Terms are ordered by ascending total degree, then descending
        lexicographic exponent order.  Round-trips bit-exactly in exact mode;
        float coefficients use repr (shortest round-trip form).
        """
        if not self.terms:
            return "0"
        def key(e):
            return (sum(e), tuple(-x for x in e))
        parts = []
        for exps in sorted(self.terms, key=key):
            c = self.terms[exps]
            if isinstance(c, complex):
                cs = f"({c!r})"
            else:
                cs = str(c) if isinstance(c, Fraction) else repr(c)
            mono = "*".join(
                f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                for i, e in enumerate(exps) if e > 0)
            parts.append(f"{cs} * {mono}" if mono else cs)
        return " + ".join(parts)

    _TERM_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")

    @classmethod
    def from_text(cls, text: str, dim: int, mode: str = EXACT) -> "MultiPoly":
        """Parse the format produced by to_text."""
        _check_mode(mode)
        text = text.strip()
        if text in ("", "0"):
            return cls.zero(dim, mode)
        terms: dict = {}
        for raw in text.split(" + "):
            raw = raw.strip()
            if not raw:
                continue
            if " * " in raw:
                cs, mono = raw.split(" * ", 1)
            else:
                cs, mono = raw, ""
            cs = cs.strip()
            if mode == EXACT:
                coeff = Fraction(cs)
            else:
                coeff = complex(cs) if ("j" in cs or "(" in cs) else float(cs)
            exps = [0] * dim
            if mono:
                for factor in mono.split("*"):
                    m = cls._TERM_RE.match(factor.strip())
                    if not m:
                        raise ValueError(f"bad monomial factor {factor!r}")
                    idx = int(m.group(1)) - 1
                    if not 0 <= idx < dim:
                        raise ValueError(f"variable x{idx + 1} out of range for dim {dim}")
                    exps[idx] += int(m.group(2) or 1)
            e = tuple(exps)
            terms[e] = terms.get(e, 0) + coeff
        return cls(dim, terms, mode)

    # -- dunders -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.dim == other.dim and self.mode == other.mode
                and self.terms == other.terms)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.dim, self.mode, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.dim}, {self.to_text()!r}, mode={self.mode!r})"


def monomials_of_degree(dim: int, n: int) -> list[tuple]:
    """All exponent tuples of total degree n, descending lexicographic order.

    This is the fixed column order used for degree-n coefficient vectors
    everywhere (harmonic bases, operator matrices), so x1^n comes first.
    """
    if n < 0:
        return []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), n, dim)
    return out
