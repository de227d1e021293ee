"""Diophantine approximation in cones.

* :func:`dirichlet_approx` - simultaneous approximation ``|q v - p| < 1/N``.
* :func:`kronecker_sample` - integer vectors whose pairings with a basis of an
  irrational subspace hit a target (density of such pairings).
* :func:`find_beta` - integer ``beta`` positive on a given cone direction and
  almost nonpositive on the whole cone, certified through cone projection.

Every search walks integer boxes shell by shell (max-norm radius ascending,
lexicographic inside a shell), so results are deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .classify import max_rational_subspace, rational_point_outside
from .field_arith import QuadNum, dot, is_zero, qfloat, to_floats, vec
from .polyhedra import Cone, cone_member, cone_project

CERT_MARGIN = 1e-6


class PreconditionError(ValueError):
    pass


class SearchExhausted(RuntimeError):
    def __init__(self, message: str, largest_height: int) -> None:
        super().__init__(message)
        self.largest_height = largest_height


def _exact_or_float(x):
    if isinstance(x, (QuadNum, int, Fraction)):
        return QuadNum.coerce(x)
    return float(x)


def dirichlet_approx(v: Sequence, N: int) -> tuple[int, tuple[int, ...]]:
    """Smallest ``q`` in ``1..N^m`` with ``|q v_l - p_l| < 1/N`` for all ``l``.

    Exact when the entries of ``v`` are field elements or rationals.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    vals = [_exact_or_float(x) for x in v]
    m = len(vals)
    bound = Fraction(1, N)
    for q in range(1, N**m + 1):
        p = []
        ok = True
        for x in vals:
            if isinstance(x, QuadNum):
                qx = x * q
                pl = (qx + Fraction(1, 2)).floor()
                if not abs(qx - pl) < bound:
                    ok = False
                    break
            else:
                qx = q * x
                pl = math.floor(qx + 0.5)
                if not abs(qx - pl) < 1.0 / N:
                    ok = False
                    break
            p.append(pl)
        if ok:
            return q, tuple(p)
    raise AssertionError("pigeonhole bound violated")  # unreachable


def integer_shell(n: int, R: int) -> np.ndarray:
    """All integer vectors of max-norm exactly ``R``, lexicographically sorted."""
    if R == 0:
        return np.zeros((1, n), dtype=np.int64)
    grid = np.arange(-R, R + 1)
    pieces = []
    for k in range(n):
        inner = np.arange(-R + 1, R)
        axes = [inner] * k + [np.array([-R, R])] + [grid] * (n - k - 1)
        mesh = np.meshgrid(*axes, indexing="ij")
        pieces.append(np.stack([m.ravel() for m in mesh], axis=1))
    pts = np.concatenate(pieces)
    order = np.lexsort(pts.T[::-1])
    return pts[order]


def kronecker_sample(
    basis: Sequence[Sequence], target: Sequence[float], eps: float, budget: int = 10**6
) -> tuple[int, ...] | None:
    """Integer ``alpha`` with ``|<alpha, v^j> - target_j| < eps`` for every basis vector.

    Requires that the span of ``basis`` contains no nonzero rational vector,
    checked exactly.  ``budget`` caps the number of candidates examined; None
    is returned when it runs out.
    """
    V = [vec(b) for b in basis]
    if max_rational_subspace(V):
        raise PreconditionError("subspace contains nonzero rational vectors")
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = len(V[0])
    M = np.array([to_floats(b) for b in V]).T  # n x k
    target = np.asarray(target, dtype=float)
    seen = 0
    R = 0
    while seen < budget:
        shell = integer_shell(n, R)
        shell = shell[: budget - seen]
        seen += len(shell)
        err = np.abs(shell @ M - target).max(axis=1)
        hits = np.nonzero(err < eps)[0]
        if len(hits):
            return tuple(int(x) for x in shell[hits[0]])
        R += 1
    return None


def star_discrepancy(points: Sequence[float]) -> float:
    """Star discrepancy of a finite set in [0, 1)."""
    x = np.sort(np.asarray(points, dtype=float))
    N = len(x)
    i = np.arange(1, N + 1)
    return float(max((i / N - x).max(), (x - (i - 1) / N).max()))


@dataclass(frozen=True)
class BetaCertificate:
    beta: tuple[int, ...]
    v: tuple[float, ...]
    delta: float
    pairing: float
    sup_estimate: float
    inf_estimate: float | None = None

    def to_dict(self) -> dict:
        return {
            "beta": list(self.beta),
            "v": list(self.v),
            "delta": self.delta,
            "pairing": self.pairing,
            "sup_estimate": self.sup_estimate,
            "inf_estimate": self.inf_estimate,
        }


def check_beta(C: Cone, v: Sequence[QuadNum], beta: Sequence[int], delta: float, mode: str = "general",
               margin: float = CERT_MARGIN) -> BetaCertificate | None:
    """Certificate for ``beta`` from scratch, or None if it does not verify.

    The sign of ``<beta, v>`` is decided exactly; the supremum of
    ``<beta, w>`` over unit ``w`` in ``C`` is the norm of the projection of
    ``beta`` onto ``C`` and must stay ``margin`` below ``delta``.
    """
    v = vec(v)
    beta = tuple(int(x) for x in beta)
    pairing = dot(v, [QuadNum(b) for b in beta])
    if not pairing > 0:
        return None
    b = np.asarray(beta, dtype=float)
    sup = cone_project(C, b)[1]
    if not sup < delta - margin:
        return None
    inf_est = None
    if mode == "interior":
        inf_est = cone_project(C, -b)[1]
        if not inf_est < delta - margin:
            return None
    return BetaCertificate(beta, tuple(to_floats(v)), delta, qfloat(pairing), sup, inf_est)


def _dirichlet_candidates(C: Cone, max_N: int):
    """Integer approximations of multiples of vectors orthogonal to ``span C``.

    Such vectors pair almost to zero with the whole cone; this follows the
    ``beta = q w + eps`` pattern and is only a shortcut in front of the
    exhaustive search.
    """
    from .field_arith import nullspace

    span = C.span_basis()
    perp = nullspace(span, C.dimension) if span else []
    for w in perp:
        wf = to_floats(w)
        scale = max(abs(x) for x in wf)
        for N in range(2, max_N + 1):
            q, p = dirichlet_approx([x / scale for x in wf], N)
            for sign in (1, -1):
                yield tuple(sign * x for x in p)


def find_beta(C: Cone, v: Sequence, delta: float, mode: str = "general", max_height: int = 1000,
              accelerate: bool = False) -> BetaCertificate:
    """Integer ``beta`` with ``<beta, v> > 0`` and ``<beta, w> < delta`` on unit ``w`` in ``C``.

    ``mode="interior"`` also demands ``<beta, w> > -delta``.  The cone must
    contain no rational vector except 0; this is checked exactly first.
    """
    if mode not in ("general", "interior"):
        raise ValueError(f"unknown mode {mode!r}")
    v = vec(v)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if is_zero(v) or not cone_member(C, v):
        raise PreconditionError("v must be a nonzero vector of the cone")
    n = C.dimension
    if max_rational_subspace(C.span_basis()) and rational_point_outside(C, []).witness is not None:
        raise PreconditionError("cone contains a nonzero rational vector")

    if accelerate:
        for cand in _dirichlet_candidates(C, 64):
            cert = check_beta(C, v, cand, delta, mode)
            if cert is not None:
                return cert

    vf = np.asarray(to_floats(v))
    G = C.generator_matrix()
    G = G / np.linalg.norm(G, axis=0)
    for R in range(1, max_height + 1):
        shell = integer_shell(n, R)
        # necessary conditions in floats: positive on v, below delta on every
        # unit generator (and above -delta in interior mode)
        on_gens = shell @ G
        keep = (shell @ vf > -1e-9) & (on_gens < delta).all(axis=1)
        if mode == "interior":
            keep &= (on_gens > -delta).all(axis=1)
        for beta in shell[keep]:
            cert = check_beta(C, v, beta, delta, mode)
            if cert is not None:
                return cert
    raise SearchExhausted(f"no beta up to height {max_height}", max_height)


def verify_certificate(C: Cone, v: Sequence, cert: BetaCertificate, margin: float = CERT_MARGIN) -> bool:
    mode = "interior" if cert.inf_estimate is not None else "general"
    return check_beta(C, v, cert.beta, cert.delta, mode, margin) is not None
