"""Truncated Bergman kernel of a Reinhardt domain and quantities derived from it.

Monomials are orthogonal on Reinhardt domains, so the kernel on the diagonal
is ``K(z) = sum_alpha c_alpha |z^alpha|^2`` with ``c_alpha = 1 / ||z^alpha||^2``.
Truncating to ``max |alpha_j| <= height`` gives every quantity here.

Writing ``p_alpha = c_alpha |z^alpha|^2 / K`` for the induced probability
weights, the complex Hessian of ``log K`` is

    H_jk = Cov_p(alpha_j, alpha_k) / (z_j conj(z_k)),

which is what :func:`metric` evaluates.  It is the expansion of
``(K S_jk - S_j S_k) / (K^2 z_j conj(z_k))`` written without cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import DomainSpec, member, require_valid
from .field_arith import to_floats, vec
from .monomials import LogIntegrator, enumerate_admissible, is_square_integrable, norm_sq_quadrature
from .polyhedra import cone_member, recession_cone

DEFAULT_HEIGHT = 20
GAUSS_ORDER = 8


class PathExitsDomain(ValueError):
    """A path or curve node lies outside the domain."""


@dataclass(frozen=True)
class KernelModel:
    spec: DomainSpec
    alphas: np.ndarray  # m x n integer exponents
    coefficients: np.ndarray  # c_alpha = 1 / ||z^alpha||^2
    height: int

    @classmethod
    def build(cls, spec: DomainSpec, height: int = DEFAULT_HEIGHT) -> KernelModel:
        require_valid(spec)
        C = recession_cone(spec.logD)
        basis = enumerate_admissible(spec, height, C)
        integ = LogIntegrator(spec.logD)
        norms = [norm_sq_quadrature(spec, a, integ, C).norm_sq for a in basis]
        return cls(spec, np.array(basis, dtype=np.int64).reshape(len(basis), spec.n), 1.0 / np.array(norms), height)

    @property
    def basis(self) -> list[tuple[tuple[int, ...], float]]:
        return [(tuple(int(x) for x in a), float(c)) for a, c in zip(self.alphas, self.coefficients)]

    def log_terms(self, r: Sequence[float]) -> np.ndarray:
        """``log(c_alpha |z^alpha|^2)`` for every basis element (``-inf`` for vanishing terms)."""
        r = np.asarray(r, dtype=float)
        zero = r == 0.0
        if np.any(r < 0):
            raise ValueError("moduli must be nonnegative")
        if zero.any() and (self.alphas[:, zero] < 0).any():
            raise ValueError("zero coordinate meets a negative exponent")
        logr = np.log(np.where(zero, 1.0, r))
        out = np.log(self.coefficients) + 2.0 * (self.alphas @ logr)
        if zero.any():
            out = np.where((self.alphas[:, zero] > 0).any(axis=1), -np.inf, out)
        return out

    def weights(self, r: Sequence[float]) -> tuple[np.ndarray, float]:
        """Normalized weights ``p_alpha`` and ``log K``."""
        L = self.log_terms(r)
        M = float(L.max())
        e = np.exp(L - M)
        s = math.fsum(np.sort(e)[::-1])
        return e / s, M + math.log(s)


def moduli(z: Sequence) -> np.ndarray:
    return np.abs(np.asarray(z, dtype=complex))


def log_kernel(model: KernelModel, z: Sequence) -> float:
    return model.weights(moduli(z))[1]


def kernel(model: KernelModel, z: Sequence) -> float:
    """Truncated kernel ``K(z)``; terms are added largest first with exact rounding."""
    return math.exp(log_kernel(model, z))


def covariance(model: KernelModel, r: Sequence[float]) -> np.ndarray:
    """Covariance of ``alpha`` under the kernel weights at moduli ``r``."""
    p, _ = model.weights(r)
    A = model.alphas.astype(float)
    centered = A - p @ A
    return centered.T @ (centered * p[:, None])


def hessian(model: KernelModel, z: Sequence) -> np.ndarray:
    """Complex Hessian ``d^2 log K / dz_j d conj(z_k)``; needs every ``z_j != 0``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("metric is evaluated only off the coordinate hyperplanes")
    return covariance(model, np.abs(z)) / np.outer(z, np.conj(z))


def metric(model: KernelModel, z: Sequence, X: Sequence) -> float:
    """Bergman length ``beta(z; X)`` of the tangent vector ``X`` at ``z``."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("metric is evaluated only off the coordinate hyperplanes")
    w = np.asarray(X, dtype=complex) / z
    C = covariance(model, np.abs(z))
    q = float(w.real @ C @ w.real + w.imag @ C @ w.imag)
    return math.sqrt(max(q, 0.0))


def is_psd(M: np.ndarray, tol: float = 1e-9) -> bool:
    """Positive semidefiniteness by Cholesky with diagonal pivoting."""
    A = np.array(M, dtype=complex if np.iscomplexobj(M) else float)
    n = len(A)
    for k in range(n):
        diag = np.real(np.diag(A)[k:])
        i = k + int(np.argmax(diag))
        piv = diag[i - k]
        if piv < -tol:
            return False
        if piv <= tol:
            # remaining block must vanish for a PSD matrix with tiny diagonal
            return bool(np.all(np.abs(A[k:, k:]) <= math.sqrt(tol) * max(1.0, abs(piv)) + tol))
        A[[k, i]] = A[[i, k]]
        A[:, [k, i]] = A[:, [i, k]]
        col = A[k + 1 :, k] / math.sqrt(piv)
        A[k + 1 :, k + 1 :] -= np.outer(col, np.conj(col))
    return True


def log_kernel_ratio(model: KernelModel, r0: Sequence[float], dt: Sequence[float]) -> float:
    """``log K(r0 e^dt) - log K(r0)`` without cancellation for small ``dt``."""
    p, _ = model.weights(r0)
    s = 2.0 * (model.alphas @ np.asarray(dt, dtype=float))
    return math.log1p(math.fsum(p * np.expm1(s)))


def fd_log_hessian(model: KernelModel, r: Sequence[float], h: float = 1e-5) -> np.ndarray:
    """Central finite-difference Hessian of ``log K`` in log-moduli coordinates.

    The analytic counterpart is ``4 * covariance(model, r)``.
    """
    n = len(r)
    E = np.eye(n) * h
    H = np.empty((n, n))
    f = lambda d: log_kernel_ratio(model, r, d)  # noqa: E731
    for j in range(n):
        for k in range(j, n):
            if j == k:
                val = (f(E[j]) + f(-E[j])) / h**2  # f(0) = 0
            else:
                val = (f(E[j] + E[k]) - f(E[j] - E[k]) - f(E[k] - E[j]) + f(-E[j] - E[k])) / (4 * h**2)
            H[j, k] = H[k, j] = val
    return H


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveSample:
    t: np.ndarray
    moduli: np.ndarray
    phases: np.ndarray
    kernel: np.ndarray
    speed: np.ndarray
    cumulative_length: np.ndarray

    @property
    def length(self) -> float:
        return float(self.cumulative_length[-1])

    def rows(self) -> list[list[float]]:
        return [
            [float(t), *map(float, m), float(k), float(s), float(c)]
            for t, m, k, s, c in zip(self.t, self.moduli, self.kernel, self.speed, self.cumulative_length)
        ]


def _check_inside(spec: DomainSpec, r: np.ndarray) -> None:
    if not member(spec, r):
        raise PathExitsDomain(f"point with moduli {list(map(float, r))} is outside the domain")


def _gauss_panels(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    return nodes, weights


def _direction_speed(model: KernelModel, r: np.ndarray, v: np.ndarray) -> float:
    C = covariance(model, r)
    return math.sqrt(max(float(v @ C @ v), 0.0))


def monomial_curve_length(model: KernelModel, a: Sequence, v: Sequence[int], lambda_range: tuple[float, float],
                          panels_per_decade: int = 8, order: int = GAUSS_ORDER) -> CurveSample:
    """Bergman length of ``lambda -> (e^{a_j} lambda^{-v_j})`` for ``lambda`` in ``[eps, lambda_1]``.

    Along this holomorphic curve ``beta = sqrt(v^T Cov v) / lambda``.  The
    interval is cut into geometric panels, each integrated by Gauss-Legendre.
    The returned grid runs from ``lambda_1`` down to ``eps`` so that the
    cumulative length grows along it.
    """
    spec = model.spec
    v_exact = vec(v)
    if any(x > 0 for x in v_exact) or all(not x for x in v_exact):
        raise ValueError("v must be nonzero and nonpositive")
    if not cone_member(recession_cone(spec.logD), v_exact):
        raise ValueError("v is not in the recession cone")
    eps, lam1 = map(float, lambda_range)
    if not 0 < eps < lam1:
        raise ValueError("need 0 < eps < lambda_1")
    a = np.asarray(to_floats(vec(a)))
    vf = np.asarray(to_floats(v_exact))
    n_panels = max(1, math.ceil(panels_per_decade * math.log10(lam1 / eps)))
    edges = np.geomspace(lam1, eps, n_panels + 1)
    nodes, weights = _gauss_panels(edges, order)

    def point(lam: float) -> np.ndarray:
        return np.exp(a - vf * math.log(lam))

    def speed(lam: float) -> float:
        r = point(lam)
        _check_inside(spec, r)
        return _direction_speed(model, r, vf) / lam

    panel_len = np.array([sum(abs(w) * speed(x) for x, w in zip(ns, ws)) for ns, ws in zip(nodes, weights)])
    cum = np.concatenate([[0.0], np.cumsum(panel_len)])
    pts = np.array([point(l) for l in edges])
    for r in pts:
        _check_inside(spec, r)
    return CurveSample(
        t=edges,
        moduli=pts,
        phases=np.zeros_like(pts),
        kernel=np.array([kernel(model, r) for r in pts]),
        speed=np.array([_direction_speed(model, r, vf) / l for r, l in zip(pts, edges)]),
        cumulative_length=cum,
    )


def ray_path_length(model: KernelModel, a: Sequence, v: Sequence, T: float, panels: int = 64,
                    order: int = GAUSS_ORDER) -> CurveSample:
    """Bergman length of ``t -> exp(a + t v)`` for ``t`` in ``[0, T]``; speed is ``sqrt(v^T Cov v)``."""
    spec = model.spec
    a = np.asarray(to_floats(vec(a)))
    vf = np.asarray(to_floats(vec(v)))
    edges = np.linspace(0.0, float(T), panels + 1)
    nodes, weights = _gauss_panels(edges, order)

    def speed(t: float) -> float:
        r = np.exp(a + t * vf)
        _check_inside(spec, r)
        return _direction_speed(model, r, vf)

    panel_len = np.array([sum(w * speed(x) for x, w in zip(ns, ws)) for ns, ws in zip(nodes, weights)])
    pts = np.exp(a + edges[:, None] * vf)
    for r in pts:
        _check_inside(spec, r)
    return CurveSample(
        t=edges,
        moduli=pts,
        phases=np.zeros_like(pts),
        kernel=np.array([kernel(model, r) for r in pts]),
        speed=np.array([_direction_speed(model, r, vf) for r in pts]),
        cumulative_length=np.concatenate([[0.0], np.cumsum(panel_len)]),
    )


def ray_points(a: Sequence, v: Sequence, ts: Sequence[float]) -> np.ndarray:
    """Moduli ``exp(a + t v)`` for each ``t``."""
    a = np.asarray(to_floats(vec(a)))
    vf = np.asarray(to_floats(vec(v)))
    return np.exp(a + np.asarray(ts, dtype=float)[:, None] * vf)


def approach_path(z0: Sequence[float], interior: Sequence[float], distances: Sequence[float]) -> np.ndarray:
    """Points at the given distances from ``z0`` on the segment towards ``interior``."""
    z0 = np.asarray(z0, dtype=float)
    u = np.asarray(interior, dtype=float) - z0
    u /= np.linalg.norm(u)
    return z0 + np.asarray(distances, dtype=float)[:, None] * u


# ---------------------------------------------------------------------------
# boundary behaviour


@dataclass(frozen=True)
class KCResult:
    ratios: np.ndarray
    bounds: np.ndarray | None = None


def kc_ratio(model: KernelModel, alpha: Sequence[int], path: Sequence[Sequence], beta=None) -> KCResult:
    """``|z^alpha| / sqrt(K(z))`` along a path.

    With an integer ``beta`` (or a certificate carrying one) the bound
    ``||z^{alpha+beta}|| * |z^{-beta}|`` is reported as well; it requires
    ``alpha + beta`` to be admissible.
    """
    spec = model.spec
    alpha = np.asarray(alpha, dtype=np.int64)
    if not is_square_integrable(spec, alpha):
        raise ValueError("alpha is not admissible")
    ratios = []
    R = np.array([moduli(z) for z in path])
    for r in R:
        _check_inside(spec, r)
        logK = model.weights(r)[1]
        pos = r > 0
        if (alpha[~pos] > 0).any():
            log_mono = -math.inf
        else:
            log_mono = float(alpha[pos] @ np.log(r[pos]))
        ratios.append(math.exp(log_mono - 0.5 * logK))
    bounds = None
    if beta is not None:
        b = np.asarray(getattr(beta, "beta", beta), dtype=np.int64)
        shifted = tuple(int(x) for x in alpha + b)
        if not is_square_integrable(spec, shifted):
            raise ValueError("alpha + beta is not admissible")
        norm = math.sqrt(norm_sq_quadrature(spec, shifted).norm_sq)
        bounds = np.array([norm * math.exp(-float(b @ np.log(r))) for r in R])
    return KCResult(np.array(ratios), bounds)


@dataclass(frozen=True)
class BlowupResult:
    values: np.ndarray
    growth: float


def blowup_probe(model: KernelModel, path: Sequence[Sequence]) -> BlowupResult:
    """Kernel values along a path and the ratio last / first."""
    vals = []
    for z in path:
        r = moduli(z)
        _check_inside(model.spec, r)
        vals.append(kernel(model, r))
    vals = np.array(vals)
    return BlowupResult(vals, float(vals[-1] / vals[0]))


def polydisc_kernel(z: Sequence) -> float:
    """Closed-form kernel of the unit polydisc."""
    r2 = moduli(z) ** 2
    return float(np.prod(1.0 / (math.pi * (1.0 - r2) ** 2)))
