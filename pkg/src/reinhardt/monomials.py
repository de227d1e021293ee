"""Square-integrable monomials on Reinhardt domains and their norms.

In log coordinates ``x = log|z|`` the squared norm of ``z^alpha`` is

    (2 pi)^n * integral over log D of exp(2 <alpha + 1, x>) dx,

an integral of an exponential over an open polyhedron.  Integrals over the
last two variables are evaluated in closed form piece by piece; further
outer variables use adaptive quadrature split at the breakpoints where the
slice changes combinatorial type.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .domain import DomainSpec, member_many
from .field_arith import QuadNum, qfloat
from .polyhedra import Cone, HalfSpace, Polyhedron, coordinate_sup, fm_levels, recession_cone

QUAD_EPSREL = 1e-10
KAPPA_ZERO = 1e-12
TWO_PI = 2.0 * math.pi


class DivergentIntegral(ArithmeticError):
    """The exponential integral is infinite."""


class AdmissibilityInconsistency(RuntimeError):
    """Quadrature diverged for a multi-index that passed the generator test."""


@dataclass(frozen=True)
class MonomialNorm:
    alpha: tuple[int, ...]
    norm_sq: float
    method: str
    error_estimate: float


# ---------------------------------------------------------------------------
# admissibility


def _generator_parts(C: Cone) -> list[tuple[list[Fraction], list[Fraction], int]]:
    return [([x.p for x in g], [x.q for x in g], max((x.d for x in g), default=1)) for g in C.generators]


def is_square_integrable(spec: DomainSpec, alpha: Sequence[int], cone: Cone | None = None) -> bool:
    """Exact test ``<alpha + 1, g> < 0`` on every generator of the recession cone.

    Strict negativity on the generators of a cone without lines gives
    strict negativity on every nonzero cone vector: such a vector is a
    nonnegative combination of generators with at least one positive weight.
    """
    C = cone if cone is not None else recession_cone(spec.logD)
    return _admissible(_generator_parts(C), alpha)


def _admissible(parts, alpha) -> bool:
    shifted = [a + 1 for a in alpha]
    for p, q, d in parts:
        P = sum(s * x for s, x in zip(shifted, p))
        Q = sum(s * x for s, x in zip(shifted, q))
        if not QuadNum(P, Q, d) < 0:
            return False
    return True


def enumerate_admissible(spec: DomainSpec, height: int, cone: Cone | None = None) -> list[tuple[int, ...]]:
    """All admissible ``alpha`` with ``max |alpha_j| <= height``, lexicographic."""
    if height < 0:
        raise ValueError("height must be nonnegative")
    C = cone if cone is not None else recession_cone(spec.logD)
    parts = _generator_parts(C)
    rng = range(-height, height + 1)
    return [a for a in itertools.product(rng, repeat=spec.n) if _admissible(parts, a)]


# ---------------------------------------------------------------------------
# closed-form pieces


def _exp_affine_integral(kappa: float, offset: float, a: float, b: float) -> float:
    """``integral_a^b exp(kappa s + offset) ds`` with infinite ends allowed."""
    if not a < b:
        return 0.0
    if abs(kappa) < KAPPA_ZERO:
        if math.isinf(a) or math.isinf(b):
            raise DivergentIntegral("undamped exponential on an infinite interval")
        return (b - a) * math.exp(offset)
    if kappa > 0:
        if math.isinf(b):
            raise DivergentIntegral("exponential grows toward +inf")
        if math.isinf(a):
            return math.exp(kappa * b + offset) / kappa
        return math.exp(kappa * b + offset) * -math.expm1(-kappa * (b - a)) / kappa
    if math.isinf(a):
        raise DivergentIntegral("exponential grows toward -inf")
    if math.isinf(b):
        return math.exp(kappa * a + offset) / -kappa
    return math.exp(kappa * a + offset) * -math.expm1(kappa * (b - a)) / -kappa


def _linear_exp_integral(A: float, B: float, kappa: float, offset: float, a: float, b: float) -> float:
    """``integral_a^b (A + B s) exp(kappa s + offset) ds``."""
    if not a < b:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        if abs(kappa) < KAPPA_ZERO or (kappa > 0 and math.isinf(b)) or (kappa < 0 and math.isinf(a)):
            raise DivergentIntegral("undamped linear-exponential integrand")
    if abs(kappa) < KAPPA_ZERO:
        return math.exp(offset) * (A * (b - a) + B * (b * b - a * a) / 2)

    def antider(s: float) -> float:
        if math.isinf(s):
            return 0.0
        return math.exp(kappa * s + offset) * ((A + B * s) / kappa - B / (kappa * kappa))

    return antider(b) - antider(a)


def _crossings(lines: list[tuple[float, float]], others: list[tuple[float, float]] | None = None) -> list[float]:
    """Abscissae where two affine functions ``p + q s`` meet."""
    pts = []
    pairs = itertools.combinations(lines, 2) if others is None else itertools.product(lines, others)
    for (p1, q1), (p2, q2) in pairs:
        if abs(q1 - q2) > 1e-15:
            pts.append((p2 - p1) / (q1 - q2))
    return pts


def _pieces(lo: float, hi: float, cuts: list[float]):
    inner = sorted({c for c in cuts if lo < c < hi})
    edges = [lo] + inner + [hi]
    for a, b in zip(edges[:-1], edges[1:]):
        if a < b:
            yield a, b


def _sample_point(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a):
        return b - 1.0
    if math.isinf(b):
        return a + 1.0
    return 0.5 * (a + b)


def _integral_1d(A: np.ndarray, b: np.ndarray, c: float, offset: float) -> float:
    lo, hi = -math.inf, math.inf
    for g, beta in zip(A[:, 0], b):
        if g > 0:
            hi = min(hi, beta / g)
        elif g < 0:
            lo = max(lo, beta / g)
    return _exp_affine_integral(c, offset, lo, hi)


def _integral_2d(A: np.ndarray, b: np.ndarray, cs: float, ct: float, offset: float) -> tuple[float, int]:
    """Closed-form integral of ``exp(cs s + ct t + offset)`` over ``{A (s,t) < b}``.

    Returns the value and the number of pieces used.
    """
    s_lo, s_hi = -math.inf, math.inf
    lowers: list[tuple[float, float]] = []
    uppers: list[tuple[float, float]] = []
    for (al, ga), beta in zip(A, b):
        if ga == 0:
            if al > 0:
                s_hi = min(s_hi, beta / al)
            elif al < 0:
                s_lo = max(s_lo, beta / al)
        else:
            line = (beta / ga, -al / ga)  # t bound p + q s
            (uppers if ga > 0 else lowers).append(line)
    cuts = _crossings(lowers) + _crossings(uppers) + _crossings(lowers, uppers)
    total = 0.0
    count = 0
    for a, bb in _pieces(s_lo, s_hi, cuts):
        s0 = _sample_point(a, bb)
        low = max(lowers, key=lambda l: l[0] + l[1] * s0) if lowers else None
        up = min(uppers, key=lambda u: u[0] + u[1] * s0) if uppers else None
        if low is not None and up is not None and not (low[0] + low[1] * s0 < up[0] + up[1] * s0):
            continue
        count += 1
        if ct == 0:
            if low is None or up is None:
                raise DivergentIntegral("unbounded fibre with undamped integrand")
            total += _linear_exp_integral(up[0] - low[0], up[1] - low[1], cs, offset, a, bb)
            continue
        # inner integral: [exp(ct t) / ct] from low to up
        if up is None:
            if ct > 0:
                raise DivergentIntegral("fibre unbounded above")
        else:
            total += _exp_affine_integral(cs + ct * up[1], offset + ct * up[0] - math.log(abs(ct)), a, bb) * (
                1 if ct > 0 else -1
            )
        if low is None:
            if ct < 0:
                raise DivergentIntegral("fibre unbounded below")
        else:
            total -= _exp_affine_integral(cs + ct * low[1], offset + ct * low[0] - math.log(abs(ct)), a, bb) * (
                1 if ct > 0 else -1
            )
    return total, count


# ---------------------------------------------------------------------------
# general dimension


class LogIntegrator:
    """Integrals of ``exp(<c, x>)`` over a fixed open polyhedron.

    The float constraint matrix and the exact Fourier-Motzkin projections
    (converted to floats) are prepared once and reused for every exponent.
    """

    def __init__(self, P: Polyhedron, epsrel: float = QUAD_EPSREL) -> None:
        self.n = P.dimension
        self.A = np.array([[qfloat(x) for x in h.a] for h in P.halfspaces], dtype=float)
        self.b = np.array([qfloat(h.b) for h in P.halfspaces], dtype=float)
        levels = fm_levels(P)
        if levels is None:
            raise ValueError("empty polyhedron")
        self.levels = [
            (
                np.array([[qfloat(x) for x in a] for a, _ in lev], dtype=float).reshape(len(lev), k),
                np.array([qfloat(bb) for _, bb in lev], dtype=float),
            )
            for k, lev in enumerate(levels)
        ]
        self.epsrel = epsrel

    @classmethod
    def truncated(cls, P: Polyhedron, R: float) -> LogIntegrator:
        """Integrator for ``P`` intersected with the box ``max |x_j| <= R``."""
        n = P.dimension
        box = []
        for j in range(n):
            e = tuple(QuadNum(1 if i == j else 0) for i in range(n))
            box.append(HalfSpace(e, QuadNum(Fraction(R))))
            box.append(HalfSpace(tuple(-x for x in e), QuadNum(Fraction(R))))
        return cls(Polyhedron(P.halfspaces + tuple(box), n))

    def integrate(self, c: Sequence[float]) -> tuple[float, float]:
        """Value and error estimate of ``integral exp(<c, x>) dx`` over the polyhedron."""
        c = np.asarray(c, dtype=float)
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                value, err = self._rec(c, np.zeros(0))
            except IntegrationWarning as exc:
                raise DivergentIntegral(str(exc)) from exc
        if not math.isfinite(value):
            raise DivergentIntegral("non-finite integral")
        return value, err

    def _rec(self, c: np.ndarray, prefix: np.ndarray) -> tuple[float, float]:
        k = len(prefix)
        rest = self.n - k
        A = self.A[:, k:]
        b = self.b - self.A[:, :k] @ prefix
        offset = float(c[:k] @ prefix)
        if rest == 1:
            v = _integral_1d(A, b, c[k], offset)
            return v, abs(v) * 1e-15
        if rest == 2:
            v, pieces = _integral_2d(A, b, c[k], c[k + 1], offset)
            return v, abs(v) * 1e-14 * max(pieces, 1)
        lo, hi = self._range(k, prefix)
        cuts = self._vertex_heights(A, b, k)
        total = err = 0.0
        for a, bb in _pieces(lo, hi, cuts):
            def f(t: float) -> float:
                return self._rec(c, np.append(prefix, t))[0]

            val, e = quad(f, a, bb, epsabs=0.0, epsrel=self.epsrel, limit=200)
            total += val
            err += e
        return total, err

    def _range(self, k: int, prefix: np.ndarray) -> tuple[float, float]:
        Ak, bk = self.levels[k + 1]
        lo, hi = -math.inf, math.inf
        rhs = bk - Ak[:, :k] @ prefix
        for g, r in zip(Ak[:, k], rhs):
            if g > 0:
                hi = min(hi, r / g)
            elif g < 0:
                lo = max(lo, r / g)
        return lo, hi

    @staticmethod
    def _vertex_heights(A: np.ndarray, b: np.ndarray, k: int) -> list[float]:
        """First coordinates of the vertices of the slice ``{A y <= b}``."""
        m = A.shape[1]
        heights = []
        scale = 1e-9 * (1.0 + np.abs(b))
        for rows in itertools.combinations(range(len(A)), m):
            sub = A[list(rows)]
            if abs(np.linalg.det(sub)) < 1e-12:
                continue
            y = np.linalg.solve(sub, b[list(rows)])
            if np.all(A @ y <= b + scale):
                heights.append(float(y[0]))
        return heights


def _exponent(alpha: Sequence[int]) -> np.ndarray:
    return 2.0 * (np.asarray(alpha, dtype=float) + 1.0)


def norm_sq_quadrature(spec: DomainSpec, alpha: Sequence[int], integrator: LogIntegrator | None = None,
                       cone: Cone | None = None) -> MonomialNorm:
    """``||z^alpha||^2`` by exact-piecewise integration in log coordinates."""
    alpha = tuple(int(a) for a in alpha)
    if not is_square_integrable(spec, alpha, cone):
        raise ValueError(f"z^{alpha} is not square integrable on this domain")
    integ = integrator if integrator is not None else LogIntegrator(spec.logD)
    try:
        value, err = integ.integrate(_exponent(alpha))
    except DivergentIntegral as exc:
        raise AdmissibilityInconsistency(f"integral for admissible {alpha} diverged: {exc}") from exc
    factor = TWO_PI**spec.n
    return MonomialNorm(alpha, factor * value, "quadrature", factor * err)


def truncated_norm_sq(spec: DomainSpec, alpha: Sequence[int], R: float) -> float:
    """``(2 pi)^n`` times the log-integral restricted to ``max |x_j| <= R``."""
    integ = LogIntegrator.truncated(spec.logD, R)
    return TWO_PI**spec.n * integ.integrate(_exponent(alpha))[0]


@dataclass(frozen=True)
class DivergenceCheck:
    alpha: tuple[int, ...]
    values: tuple[float, ...]
    ratios: tuple[float, ...]
    diverges: bool


def divergence_check(spec: DomainSpec, alpha: Sequence[int], radii: Sequence[float] = (10, 20, 40),
                     threshold: float = 1.5) -> DivergenceCheck:
    """Grow the truncation box; divergence means every successive ratio exceeds ``threshold``."""
    vals = tuple(truncated_norm_sq(spec, alpha, R) for R in radii)
    ratios = tuple(b / a if a > 0 else math.inf for a, b in zip(vals[:-1], vals[1:]))
    return DivergenceCheck(tuple(alpha), vals, ratios, all(r > threshold for r in ratios))


# ---------------------------------------------------------------------------
# Monte Carlo


def modulus_box(spec: DomainSpec) -> np.ndarray:
    """Upper bounds of the moduli, ``exp(sup x_j)``."""
    sups = []
    for j in range(spec.n):
        s = coordinate_sup(spec.logD, j)
        if s is None:
            raise ValueError(f"coordinate {j + 1} is unbounded")
        sups.append(math.exp(qfloat(s)))
    return np.array(sups)


def norm_sq_montecarlo(spec: DomainSpec, alpha: Sequence[int], samples: int = 10**6, seed: int = 42,
                       strata_per_axis: int | None = None) -> MonomialNorm:
    """Stratified Monte Carlo estimate of ``||z^alpha||^2`` in modulus coordinates.

    The modulus bounding box is cut into a regular grid of strata with equal
    sample counts; points outside the domain contribute zero.  The error
    estimate is the standard error of the stratified estimator.
    """
    alpha = np.asarray(alpha, dtype=float)
    n = spec.n
    box = modulus_box(spec)
    if strata_per_axis is None:
        strata_per_axis = max(1, int((samples / 16) ** (1.0 / n)))
    k = strata_per_axis
    n_strata = k**n
    per = max(2, samples // n_strata)
    rng = np.random.default_rng(seed)
    corners = np.array(list(itertools.product(range(k), repeat=n)), dtype=float)  # n_strata x n
    u = rng.random((n_strata, per, n))
    pts = (corners[:, None, :] + u) / k * box
    flat = pts.reshape(-1, n)
    inside = member_many(spec, flat)
    if not inside.any():
        raise ValueError("no sample landed in the domain; degenerate spec or box")
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(inside, np.prod(flat ** (2 * alpha + 1), axis=1), 0.0)
    vals = vals.reshape(n_strata, per) * TWO_PI**n
    vol = np.prod(box) / n_strata
    means = vals.mean(axis=1)
    variances = vals.var(axis=1, ddof=1)
    estimate = float(vol * means.sum())
    stderr = float(vol * math.sqrt((variances / per).sum()))
    return MonomialNorm(tuple(int(a) for a in alpha), estimate, "montecarlo", stderr)


def inner_product_montecarlo(spec: DomainSpec, alpha: Sequence[int], beta: Sequence[int],
                             samples: int = 10**6, seed: int = 42) -> tuple[complex, float]:
    """Monte Carlo ``<z^alpha, z^beta>`` over D with uniformly sampled phases.

    Used to check orthogonality of distinct monomials; returns the estimate
    and its standard error (of the real and imaginary parts combined).
    """
    n = spec.n
    box = modulus_box(spec)
    rng = np.random.default_rng(seed)
    r = rng.random((samples, n)) * box
    theta = rng.random((samples, n)) * TWO_PI
    inside = member_many(spec, r)
    z = r * np.exp(1j * theta)
    a = np.asarray(alpha)
    b = np.asarray(beta)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.prod(z**a, axis=1) * np.conj(np.prod(z**b, axis=1)) * np.prod(r, axis=1)
    f = np.where(inside, f, 0.0) * TWO_PI**n
    vol = np.prod(box)
    est = complex(vol * f.mean())
    err = float(vol * math.sqrt((f.real.var() + f.imag.var()) / samples))
    return est, err
