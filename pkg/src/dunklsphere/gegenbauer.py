"""Gegenbauer polynomials, Gauss-Jacobi rules, and coefficient profiles.

Everything 1-D lives here: the three-term recurrence, the normalization
constant c_lambda of the weight (1-t^2)^(lambda-1/2) on [-1, 1], Golub-Welsch
construction of Gauss rules, the Function1D grammar used by the CLI, and the
expansion coefficients

    Lambda_n(g) = c_lambda / C_n(1) * int_{-1}^{1} g(t) C_n(t) (1-t^2)^(lambda-1/2) dt

together with their three-state zero/nonzero/indeterminate flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

ZERO = "zero"
NONZERO = "nonzero"
INDETERMINATE = "indeterminate"

#: Default relative threshold for declaring a coefficient zero.
DEFAULT_EPS = 1e-9


def pochhammer(a, k: int):
    """Rising factorial (a)_k; exact for Fraction a."""
    if k < 0:
        raise ValueError("negative Pochhammer index")
    out = Fraction(1) if isinstance(a, (int, Fraction)) else 1.0
    for j in range(k):
        out = out * (a + j)
    return out


def gegenbauer_eval(n: int, lam, t):
    """C_n^lambda(t) by the stable three-term recurrence.

    t may be a float, a Fraction (with Fraction lam, for exact values), or a
    numpy array.  Recurrence: C_0 = 1, C_1 = 2 lam t,
    n C_n = 2 (n + lam - 1) t C_{n-1} - (n + 2 lam - 2) C_{n-2}.
    """
    if n < 0:
        raise ValueError("negative degree")
    if isinstance(t, np.ndarray):
        lam = float(lam)
        c_prev = np.ones_like(t, dtype=float)
        if n == 0:
            return c_prev
        c_cur = 2.0 * lam * t
        for k in range(2, n + 1):
            c_prev, c_cur = c_cur, (2.0 * (k + lam - 1.0) * t * c_cur
                                    - (k + 2.0 * lam - 2.0) * c_prev) / k
        return c_cur
    exact = isinstance(t, (int, Fraction)) and isinstance(lam, (int, Fraction))
    one = Fraction(1) if exact else 1.0
    if exact:
        t = Fraction(t)
        lam = Fraction(lam)
    else:
        t = float(t)
        lam = float(lam)
    c_prev = one
    if n == 0:
        return c_prev
    c_cur = 2 * lam * t
    for k in range(2, n + 1):
        c_prev, c_cur = c_cur, (2 * (k + lam - 1) * t * c_cur
                                - (k + 2 * lam - 2) * c_prev) / k
    return c_cur


def gegenbauer_all(n_max: int, lam: float, t: np.ndarray) -> np.ndarray:
    """Matrix of C_n(t_j) for n = 0..n_max, shape (n_max+1, len(t))."""
    t = np.asarray(t, dtype=float)
    out = np.empty((n_max + 1, t.size))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * lam * t
    for k in range(2, n_max + 1):
        out[k] = (2.0 * (k + lam - 1.0) * t * out[k - 1]
                  - (k + 2.0 * lam - 2.0) * out[k - 2]) / k
    return out


def gegenbauer_at_one(n: int, lam):
    """C_n(1) = (2 lam)_n / n!; exact for Fraction lam."""
    num = pochhammer(2 * lam if isinstance(lam, (int, Fraction)) else 2.0 * lam, n)
    if isinstance(num, Fraction):
        return num / math.factorial(n)
    return num / float(math.factorial(n))


def gegenbauer_coefficients(n: int, lam) -> list:
    """Monomial coefficients [c_0, ..., c_n] of C_n; exact for Fraction lam."""
    exact = isinstance(lam, (int, Fraction))
    lam = Fraction(lam) if exact else float(lam)
    zero = Fraction(0) if exact else 0.0
    prev = [Fraction(1) if exact else 1.0]
    if n == 0:
        return prev
    cur = [zero, 2 * lam]
    for k in range(2, n + 1):
        nxt = [zero] * (k + 1)
        for j, c in enumerate(cur):
            if c:
                nxt[j + 1] += 2 * (k + lam - 1) * c / k
        for j, c in enumerate(prev):
            if c:
                nxt[j] -= (k + 2 * lam - 2) * c / k
        prev, cur = cur, nxt
    return cur


def c_lambda(lam) -> float:
    """Normalization making c_lambda * int (1-t^2)^(lam-1/2) dt = 1."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return math.gamma(lam + 1.0) / (math.sqrt(math.pi) * math.gamma(lam + 0.5))


def _beta(a: float, b: float) -> float:
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


@lru_cache(maxsize=256)
def jacobi_rule(m: int, alpha: float, beta: float):
    """Gauss-Jacobi nodes/weights for (1-t)^alpha (1+t)^beta on [-1, 1].

    Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
    matrix of the monic recurrence; weights are mu_0 times the squared first
    components of the normalized eigenvectors.
    """
    if m < 1:
        raise ValueError("rule needs at least one node")
    if alpha <= -1 or beta <= -1:
        raise ValueError("Jacobi exponents must exceed -1")
    ab = alpha + beta
    diag = np.empty(m)
    diag[0] = (beta - alpha) / (ab + 2.0)
    for i in range(1, m):
        den = (2.0 * i + ab) * (2.0 * i + ab + 2.0)
        diag[i] = (beta * beta - alpha * alpha) / den
    off = np.empty(max(m - 1, 0))
    for i in range(1, m):
        if i == 1:
            # (1 + ab) cancels against ((2 + ab)^2 - 1); the raw quotient is
            # 0/0 at ab = -1 (Chebyshev) but the limit is finite
            num = 4.0 * (1.0 + alpha) * (1.0 + beta)
            den = (2.0 + ab) ** 2 * (3.0 + ab)
        else:
            num = 4.0 * i * (i + alpha) * (i + beta) * (i + ab)
            den = (2.0 * i + ab) ** 2 * ((2.0 * i + ab) ** 2 - 1.0)
        off[i - 1] = math.sqrt(num / den)
    jac = np.diag(diag)
    if m > 1:
        jac += np.diag(off, 1) + np.diag(off, -1)
    nodes, vecs = np.linalg.eigh(jac)
    mu0 = 2.0 ** (ab + 1.0) * _beta(alpha + 1.0, beta + 1.0)
    weights = mu0 * vecs[0, :] ** 2
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the Gegenbauer weight (1-t^2)^(lambda-1/2)."""

    nodes: np.ndarray
    weights: np.ndarray
    lam: float
    exact_degree: int          # integrates polynomials of this degree exactly

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    def integrate(self, fn: Callable):
        vals = np.asarray(fn(self.nodes))
        res = self.weights @ vals
        return complex(res) if np.iscomplexobj(vals) else float(res)


def gauss_jacobi_rule(m: int, lam) -> QuadratureRule:
    """m-point Gauss rule for (1-t^2)^(lambda-1/2); exact to degree 2m-1."""
    lam = float(lam)
    nodes, weights = jacobi_rule(m, lam - 0.5, lam - 0.5)
    return QuadratureRule(nodes, weights, lam, 2 * m - 1)


def symmetric_jacobi_rule(m: int, abs_exp: float, sym_exp: float):
    """2m-point rule for the weight |u|^abs_exp (1-u^2)^sym_exp on [-1, 1].

    Built from an m-point Jacobi rule on [0, 1] via u^2 = s, so even
    polynomials are integrated exactly to u-degree 4m-1 and odd ones vanish
    by the +-u symmetry of the node set.  Handles fractional exponents, which
    a plain Gauss-Legendre rule with the weight folded in cannot.
    """
    a_exp = (abs_exp - 1.0) / 2.0
    nodes, weights = jacobi_rule(m, sym_exp, a_exp)
    s = (1.0 + nodes) / 2.0
    w01 = weights / 2.0 ** (a_exp + sym_exp + 1.0)
    u = np.sqrt(s)
    un = np.concatenate([-u[::-1], u])
    wn = np.concatenate([w01[::-1], w01]) / 2.0
    return un, wn


# ---------------------------------------------------------------------------
# Function1D: the zonal profiles g that get expanded in Gegenbauer series
# ---------------------------------------------------------------------------

_PRIMITIVE_KINDS = ("poly", "exp", "cosh", "sinh", "cos", "step", "gegenbauer", "user")


@dataclass(frozen=True)
class Function1D:
    """A function on [-1, 1], vectorized over numpy arrays.

    kind is one of poly | exp | cosh | sinh | cos | step | gegenbauer | user
    | sum.  ``sum`` nodes hold (weight, child) pairs of primitive kinds.
    ``parity`` is "even", "odd", or None; ``poly_degree`` is the exact degree
    for polynomial content and None otherwise.  Both feed the structural
    zero rules of coefficient profiles.
    """

    kind: str
    coeffs: tuple = ()                 # poly: c_0 + c_1 t + ...
    omega: float = 0.0                 # cos
    a: float = 0.0                     # step threshold
    n: int = 0                         # gegenbauer degree
    lam: float | None = None           # gegenbauer parameter
    fn: Callable | None = None         # user
    label: str = ""                    # user description
    parts: tuple = ()                  # sum: ((weight, Function1D), ...)

    # -- constructors --------------------------------------------------------

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> "Function1D":
        cf = tuple(coeffs)
        while len(cf) > 1 and cf[-1] == 0:
            cf = cf[:-1]
        return cls("poly", coeffs=cf)

    @classmethod
    def exponential(cls) -> "Function1D":
        return cls("exp")

    @classmethod
    def cosh_fn(cls) -> "Function1D":
        return cls("cosh")

    @classmethod
    def sinh_fn(cls) -> "Function1D":
        return cls("sinh")

    @classmethod
    def cosine(cls, omega: float) -> "Function1D":
        return cls("cos", omega=float(omega))

    @classmethod
    def step(cls, a: float) -> "Function1D":
        if not -1.0 < a < 1.0:
            raise ValueError("step threshold must lie in (-1, 1)")
        return cls("step", a=float(a))

    @classmethod
    def gegenbauer_poly(cls, n: int, lam) -> "Function1D":
        return cls("gegenbauer", n=int(n), lam=lam)

    @classmethod
    def from_callable(cls, fn: Callable, label: str = "user",
                      parity: str | None = None) -> "Function1D":
        f = cls("user", fn=fn, label=label)
        if parity is not None:
            object.__setattr__(f, "_forced_parity", parity)
        return f

    @classmethod
    def weighted_sum(cls, parts) -> "Function1D":
        norm = []
        for w, g in parts:
            if g.kind == "sum":
                raise ValueError("sum parts must be primitive functions")
            norm.append((float(w), g))
        return cls("sum", parts=tuple(norm))

    # -- structure -----------------------------------------------------------

    @property
    def poly_degree(self) -> int | None:
        if self.kind == "poly":
            return len(self.coeffs) - 1 if any(c != 0 for c in self.coeffs) else 0
        if self.kind == "gegenbauer":
            return self.n
        if self.kind == "sum":
            degs = [p.poly_degree for _, p in self.parts]
            if any(d is None for d in degs):
                return None
            return max(degs, default=0)
        return None

    @property
    def parity(self) -> str | None:
        forced = getattr(self, "_forced_parity", None)
        if forced is not None:
            return forced
        if self.kind == "poly":
            ev = all(c == 0 for i, c in enumerate(self.coeffs) if i % 2 == 1)
            od = all(c == 0 for i, c in enumerate(self.coeffs) if i % 2 == 0)
            if ev and od:
                return "even"  # zero polynomial
            return "even" if ev else ("odd" if od else None)
        if self.kind == "gegenbauer":
            return "even" if self.n % 2 == 0 else "odd"
        if self.kind in ("cos", "cosh"):
            return "even"
        if self.kind == "sinh":
            return "odd"
        if self.kind == "sum":
            ps = {p.parity for _, p in self.parts}
            return ps.pop() if len(ps) == 1 and None not in ps else None
        return None

    # -- evaluation ----------------------------------------------------------

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = self._eval_array(arr)
        if np.isscalar(t) or getattr(t, "ndim", 1) == 0:
            return float(out)
        return out

    def _eval_array(self, t: np.ndarray) -> np.ndarray:
        k = self.kind
        if k == "poly":
            out = np.zeros_like(t)
            for c in reversed(self.coeffs):
                out = out * t + float(c)
            return out
        if k == "exp":
            return np.exp(t)
        if k == "cosh":
            return np.cosh(t)
        if k == "sinh":
            return np.sinh(t)
        if k == "cos":
            return np.cos(self.omega * t)
        if k == "step":
            return (t >= self.a).astype(float)
        if k == "gegenbauer":
            return gegenbauer_eval(self.n, float(self.lam), t + 0.0)
        if k == "user":
            return np.asarray(self.fn(t))
        if k == "sum":
            out = np.zeros_like(t)
            for w, g in self.parts:
                out = out + w * g._eval_array(t)
            return out
        raise ValueError(f"unknown kind {k!r}")

    def eval_exact(self, t: Fraction):
        """Exact evaluation for polynomial content (Fraction in, Fraction out)."""
        if self.kind == "poly":
            out = Fraction(0)
            for c in reversed(self.coeffs):
                out = out * t + Fraction(c)
            return out
        if self.kind == "gegenbauer":
            if not isinstance(self.lam, (int, Fraction)):
                raise ValueError("exact Gegenbauer evaluation needs rational lambda")
            return gegenbauer_eval(self.n, Fraction(self.lam), Fraction(t))
        if self.kind == "sum":
            return sum((Fraction(str(w)) * g.eval_exact(t) for w, g in self.parts),
                       Fraction(0))
        raise ValueError(f"{self.kind} has no exact evaluation")

    def mp_eval(self, t):
        """Evaluation in mpmath arithmetic (argument is mpf/mpc)."""
        from mpmath import mp

        k = self.kind
        if k == "poly":
            out = mp.mpf(0)
            for c in reversed(self.coeffs):
                out = out * t + (mp.mpf(c.numerator) / c.denominator
                                 if isinstance(c, Fraction) else mp.mpf(c))
            return out
        if k == "exp":
            return mp.exp(t)
        if k == "cosh":
            return mp.cosh(t)
        if k == "sinh":
            return mp.sinh(t)
        if k == "cos":
            return mp.cos(self.omega * t)
        if k == "step":
            return mp.mpf(1) if t >= self.a else mp.mpf(0)
        if k == "gegenbauer":
            lam = self.lam
            lam_mp = (mp.mpf(lam.numerator) / lam.denominator
                      if isinstance(lam, Fraction) else mp.mpf(lam))
            c_prev = mp.mpf(1)
            if self.n == 0:
                return c_prev
            c_cur = 2 * lam_mp * t
            for j in range(2, self.n + 1):
                c_prev, c_cur = c_cur, (2 * (j + lam_mp - 1) * t * c_cur
                                        - (j + 2 * lam_mp - 2) * c_prev) / j
            return c_cur
        if k == "user":
            return self.fn(t)  # precision limited by the callable itself
        if k == "sum":
            return sum(mp.mpf(w) * g.mp_eval(t) for w, g in self.parts)
        raise ValueError(f"unknown kind {k!r}")

    # -- description ---------------------------------------------------------

    def describe(self) -> str:
        """Grammar string accepted by parse_function (user kinds excepted)."""
        k = self.kind
        if k == "poly":
            return "poly " + ",".join(
                str(c) if isinstance(c, Fraction) else repr(float(c))
                for c in self.coeffs)
        if k in ("exp", "cosh", "sinh"):
            return k
        if k == "cos":
            return f"cos {self.omega!r}"
        if k == "step":
            return f"step {self.a!r}"
        if k == "gegenbauer":
            return f"gegen {self.n}"
        if k == "user":
            return f"user:{self.label}"
        if k == "sum":
            return "sum " + " + ".join(f"{w!r}*{g.describe()}" for w, g in self.parts)
        raise ValueError(f"unknown kind {k!r}")


def parse_function(text: str, lam=None) -> Function1D:
    """Parse the CLI grammar:

    poly c0,c1,...   polynomial with rational ("3/2") or decimal coefficients
    gegen n          Gegenbauer C_n with the run's lambda (lam argument here)
    exp | cosh | sinh
    cos w
    step a
    sum w1*expr1 + w2*expr2 [+ ...]
    """
    text = text.strip()
    if text.startswith("sum "):
        parts = []
        for chunk in text[4:].split("+"):
            chunk = chunk.strip()
            if "*" not in chunk:
                raise ValueError(f"sum term {chunk!r} needs the form weight*expr")
            ws, expr = chunk.split("*", 1)
            parts.append((float(Fraction(ws.strip())), parse_function(expr, lam)))
        return Function1D.weighted_sum(parts)
    tokens = text.split(None, 1)
    head = tokens[0]
    arg = tokens[1].strip() if len(tokens) > 1 else None
    if head == "poly":
        if not arg:
            raise ValueError("poly needs coefficients")
        return Function1D.polynomial([Fraction(c.strip()) for c in arg.split(",")])
    if head == "gegen":
        if arg is None:
            raise ValueError("gegen needs a degree")
        if lam is None:
            raise ValueError("gegen requires the context lambda")
        return Function1D.gegenbauer_poly(int(arg), lam)
    if head == "exp" and arg is None:
        return Function1D.exponential()
    if head == "cosh" and arg is None:
        return Function1D.cosh_fn()
    if head == "sinh" and arg is None:
        return Function1D.sinh_fn()
    if head == "cos":
        if arg is None:
            raise ValueError("cos needs a frequency")
        return Function1D.cosine(float(Fraction(arg)))
    if head == "step":
        if arg is None:
            raise ValueError("step needs a threshold")
        return Function1D.step(float(Fraction(arg)))
    raise ValueError(f"cannot parse function expression {text!r}")


# ---------------------------------------------------------------------------
# Expansion coefficients and profiles
# ---------------------------------------------------------------------------

def default_rule_size(g: Function1D, n_max: int) -> int:
    """Heuristic rule size: generous exactness margin for polynomial g,
    a fixed 256 for nonsmooth/transcendental profiles."""
    deg = g.poly_degree
    if deg is not None:
        return max(64, 2 * (n_max + deg) + 16)
    return 256


def _lambda_values_on_rule(g: Function1D, n_max: int, lam: float,
                           rule: QuadratureRule) -> np.ndarray:
    gv = np.asarray(g(rule.nodes))
    cmat = gegenbauer_all(n_max, lam, rule.nodes)
    raw = cmat @ (rule.weights * gv)
    at_one = np.array([float(gegenbauer_at_one(n, lam)) for n in range(n_max + 1)])
    return c_lambda(lam) * raw / at_one


def lambda_coefficient(g: Function1D, n: int, lam, rule: QuadratureRule | None = None):
    """(value, error_bound) for Lambda_n(g).

    The error bound is the difference between the rule and its doubled
    refinement; the refined value is returned.
    """
    lam_f = float(lam)
    if rule is None:
        rule = gauss_jacobi_rule(default_rule_size(g, n), lam_f)
    rule2 = gauss_jacobi_rule(2 * rule.size, lam_f)
    v1 = _lambda_values_on_rule(g, n, lam_f, rule)[n]
    v2 = _lambda_values_on_rule(g, n, lam_f, rule2)[n]
    return complex(v2), float(abs(v1 - v2))


def lp_norm_segment(g: Function1D, p: float, lam,
                    rule: QuadratureRule | None = None) -> float:
    """|| g ||_{lambda, p} = (c_lambda int |g|^p (1-t^2)^(lambda-1/2) dt)^(1/p)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    lam_f = float(lam)
    if rule is None:
        rule = gauss_jacobi_rule(default_rule_size(g, 0), lam_f)
    gv = np.abs(np.asarray(g(rule.nodes))) ** p
    return float((c_lambda(lam_f) * (rule.weights @ gv)) ** (1.0 / p))


def _structural_flag(g: Function1D, n: int) -> bool:
    """True when Lambda_n(g) = 0 exactly by degree, parity or orthogonality."""
    deg = g.poly_degree
    if deg is not None and n > deg:
        return True
    par = g.parity
    if par == "even" and n % 2 == 1:
        return True
    if par == "odd" and n % 2 == 0:
        return True
    if g.kind == "gegenbauer" and n != g.n:
        return True
    return False


@dataclass(frozen=True)
class ProfileEntry:
    n: int
    value: complex
    error_bound: float
    flag: str                 # zero | nonzero | indeterminate
    structural: bool = False  # exact zero by degree/parity

    @property
    def is_zero(self) -> bool:
        return self.flag == ZERO


@dataclass(frozen=True)
class CoefficientProfile:
    """Lambda_n(g) for n = 0..N with per-entry certainty flags."""

    lam: float
    eps: float
    g_description: str
    entries: tuple
    norm_g1: float
    rule_size: int
    precision: int | None = None

    def entry(self, n: int) -> ProfileEntry:
        return self.entries[n]

    def values(self) -> list[complex]:
        return [e.value for e in self.entries]

    def zero_degrees(self) -> list[int]:
        return [e.n for e in self.entries if e.flag == ZERO]

    def nonzero_degrees(self) -> list[int]:
        return [e.n for e in self.entries if e.flag == NONZERO]

    def indeterminate_degrees(self) -> list[int]:
        return [e.n for e in self.entries if e.flag == INDETERMINATE]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": "1",
            "kind": "coefficient_profile",
            "g": self.g_description,
            "lambda": self.lam,
            "epsilon": self.eps,
            "norm_g1": self.norm_g1,
            "rule_size": self.rule_size,
            "precision": self.precision,
            "entries": [
                {"n": e.n, "re": e.value.real, "im": e.value.imag,
                 "error_bound": e.error_bound, "flag": e.flag,
                 "structural": e.structural}
                for e in self.entries],
        }

    def to_csv_text(self) -> str:
        lines = ["n,re,im,error_bound,flag"]
        for e in self.entries:
            lines.append(f"{e.n},{e.value.real!r},{e.value.imag!r},"
                         f"{e.error_bound!r},{e.flag}")
        return "\n".join(lines) + "\n"


SAFETY = 8.0          # a value must clear SAFETY * (error + floor) to count as resolved
AUTO_PRECISION = 50   # digits used when the double path cannot resolve an entry


def _classify(absval, err, floor, thresh) -> str:
    """Three-state test, resolved values first.

    A coefficient that clears SAFETY times its error estimate (plus the
    noise floor of the arithmetic in use) is nonzero no matter how small it
    is in absolute terms.  The eps threshold only rules on values the
    computation cannot separate from zero: those are confident zeros when
    value and error together stay below it, indeterminate otherwise.
    Works for floats and mpmath numbers alike.
    """
    if absval > SAFETY * (err + floor):
        return NONZERO
    if absval + err <= thresh:
        return ZERO
    return INDETERMINATE


def _supports_mp(g: Function1D) -> bool:
    """Whether mp_eval genuinely gains precision (user callables do not)."""
    if g.kind == "user":
        return False
    if g.kind == "sum":
        return all(_supports_mp(p) for _, p in g.parts)
    return True


def _mp_profile_data(g: Function1D, lam, degrees, eps: float, dps: int):
    """(norm_g1, {n: (value, error, flag)}) at dps decimal digits.

    Uses adaptive tanh-sinh quadrature per degree; the reported error is the
    quadrature estimate plus nothing else, so flags reflect dps-level
    certainty."""
    from mpmath import mp

    out = {}
    with mp.workdps(dps):
        lam_mp = (mp.mpf(lam.numerator) / lam.denominator
                  if isinstance(lam, Fraction) else mp.mpf(lam))
        half = mp.mpf(1) / 2
        c_lam = mp.gamma(lam_mp + 1) / (mp.sqrt(mp.pi) * mp.gamma(lam_mp + half))

        def wfun(t):
            return (1 - t * t) ** (lam_mp - half)

        norm_mp, _ = mp.quad(lambda t: abs(g.mp_eval(t)) * wfun(t), [-1, 1],
                             error=True)
        norm_mp = c_lam * norm_mp
        scale = norm_mp if norm_mp > 1 else mp.mpf(1)
        thresh = mp.mpf(eps) * scale
        floor = mp.mpf(10) ** (5 - dps) * scale
        for n in degrees:
            cn = Function1D.gegenbauer_poly(n, lam_mp)
            raw, qerr = mp.quad(lambda t: g.mp_eval(t) * cn.mp_eval(t) * wfun(t),
                                [-1, 1], error=True)
            at_one = pochhammer(2 * lam_mp, n) / math.factorial(n)
            val_mp = c_lam * raw / at_one
            err_mp = abs(c_lam * qerr) / at_one
            flag = _classify(abs(val_mp), err_mp, floor, thresh)
            out[n] = (complex(val_mp), float(err_mp), flag)
        return float(norm_mp), out


def coefficient_profile(g: Function1D, lam, n_max: int, eps: float = DEFAULT_EPS,
                        m: int | None = None,
                        precision: int | None = None) -> CoefficientProfile:
    """Profile of Lambda_n(g), n = 0..n_max.

    Degree/parity zeros are exact and flagged before any quadrature.  The
    remaining entries run on a doubled Gauss-Jacobi pair first; every entry
    the double path cannot certify as nonzero is then re-evaluated with
    mpmath at AUTO_PRECISION digits, because smooth generators have true
    coefficients far below double cancellation noise (exp at n = 20 sits
    near 1e-26) and a tolerance flag must not confuse those with zeros.
    Passing precision forces the mpmath path for every entry at that many
    digits; eps caps what may be called zero in either mode.  Escalation is
    skipped for user callables, whose own accuracy bounds the game.
    """
    lam_f = float(lam)
    if m is None:
        m = default_rule_size(g, n_max)
    structural = [_structural_flag(g, n) for n in range(n_max + 1)]

    def entry_for(n, data):
        val, err, flag = data
        return ProfileEntry(n, val, err, flag)

    if precision is not None:
        degrees = [n for n in range(n_max + 1) if not structural[n]]
        norm_g1, data = _mp_profile_data(g, lam, degrees, eps, precision)
        entries = [
            ProfileEntry(n, 0.0 + 0.0j, 0.0, ZERO, True) if structural[n]
            else entry_for(n, data[n])
            for n in range(n_max + 1)
        ]
        return CoefficientProfile(lam_f, eps, g.describe(), tuple(entries),
                                  norm_g1, m, precision)

    rule = gauss_jacobi_rule(m, lam_f)
    rule2 = gauss_jacobi_rule(2 * m, lam_f)
    v1 = _lambda_values_on_rule(g, n_max, lam_f, rule)
    v2 = _lambda_values_on_rule(g, n_max, lam_f, rule2)
    norm_g1 = lp_norm_segment(g, 1.0, lam_f, rule2)
    scale = max(1.0, norm_g1)
    thresh = eps * scale
    floor = 1e-15 * scale
    entries = {}
    unresolved = []
    for n in range(n_max + 1):
        if structural[n]:
            entries[n] = ProfileEntry(n, 0.0 + 0.0j, 0.0, ZERO, True)
            continue
        val = complex(v2[n])
        err = float(abs(v1[n] - v2[n]))
        flag = _classify(abs(val), err, floor, thresh)
        entries[n] = ProfileEntry(n, val, err, flag)
        if flag != NONZERO:
            unresolved.append(n)
    if unresolved and _supports_mp(g):
        _, data = _mp_profile_data(g, lam, unresolved, eps, AUTO_PRECISION)
        for n in unresolved:
            entries[n] = entry_for(n, data[n])
    return CoefficientProfile(lam_f, eps, g.describe(),
                              tuple(entries[n] for n in range(n_max + 1)),
                              norm_g1, m, None)
