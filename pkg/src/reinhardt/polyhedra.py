"""Exact polyhedral computations over Q(sqrt(d)).

Open polyhedra ``{x : <a_i, x> < b_i}`` describe logarithmic images; their
recession cones are closed, ``{v : <a_i, v> <= 0}``.  Feasibility uses
Fourier-Motzkin elimination, cone conversions use the double description
method.  Everything is exact except :func:`cone_project`, which is numeric
and used only to certify inequalities with a safety margin.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from .field_arith import (
    FieldVector,
    QuadNum,
    dot,
    is_zero,
    normalize_direction,
    nullspace,
    parallel_same_direction,
    rank,
    row_basis,
    to_floats,
    unit,
    vec,
    vscale,
    vsub,
)

NNLS_TOL = 1e-12
NNLS_MAXITER = 10_000


class EmptyPolyhedron(ValueError):
    """An operation needed a nonempty polyhedron."""


class NumericFailure(RuntimeError):
    """A numeric routine did not converge."""


@dataclass(frozen=True)
class HalfSpace:
    """The open half-space ``{x : <a, x> < b}``."""

    a: FieldVector
    b: QuadNum

    def __post_init__(self) -> None:
        if is_zero(self.a):
            raise ValueError("half-space normal must be nonzero")


@dataclass(frozen=True)
class Polyhedron:
    halfspaces: tuple[HalfSpace, ...]
    dimension: int

    def __post_init__(self) -> None:
        for h in self.halfspaces:
            if len(h.a) != self.dimension:
                raise ValueError(
                    f"half-space of length {len(h.a)} in dimension {self.dimension}"
                )

    @classmethod
    def from_rows(cls, rows: Sequence[tuple[Sequence, object]], dimension: int | None = None) -> Polyhedron:
        hs = tuple(HalfSpace(vec(a), QuadNum.coerce(b)) for a, b in rows)
        n = dimension if dimension is not None else len(hs[0].a)
        return cls(hs, n)

    def contains(self, x: Sequence[QuadNum]) -> bool:
        return all(dot(h.a, x) < h.b for h in self.halfspaces)


# ---------------------------------------------------------------------------
# Fourier-Motzkin

Constraint = tuple  # (a: FieldVector, b: QuadNum), meaning <a, x> < b


def _normalize_constraint(a: FieldVector, b: QuadNum) -> Constraint:
    lead = next(x for x in a if x)
    s = abs(lead).inverse()
    return vscale(s, a), b * s


def _dedupe(constraints: list[Constraint]) -> list[Constraint] | None:
    """Drop trivial rows, keep the tightest of parallel rows; None if infeasible."""
    best: dict[FieldVector, QuadNum] = {}
    order: list[FieldVector] = []
    for a, b in constraints:
        if is_zero(a):
            if b <= 0:
                return None
            continue
        a, b = _normalize_constraint(a, b)
        if a in best:
            if b < best[a]:
                best[a] = b
        else:
            best[a] = b
            order.append(a)
    return [(a, best[a]) for a in order]


def _eliminate_last(constraints: list[Constraint]) -> list[Constraint] | None:
    upper, lower, rest = [], [], []
    for a, b in constraints:
        c = a[-1]
        if c > 0:
            upper.append((a, b))
        elif c < 0:
            lower.append((a, b))
        else:
            rest.append((a[:-1], b))
    out = list(rest)
    for au, bu in upper:
        cu = au[-1]
        for al, bl in lower:
            cl = -al[-1]
            # cl*(au.x) + cu*(al.x) < cl*bu + cu*bl, last coordinate cancels
            a = tuple(cl * x + cu * y for x, y in zip(au[:-1], al[:-1]))
            out.append((a, cl * bu + cu * bl))
    return _dedupe(out)


def fm_levels(P: Polyhedron) -> list[list[Constraint]] | None:
    """Projected systems; ``levels[k]`` constrains ``x_1..x_k``.  None if empty."""
    current = _dedupe([(h.a, h.b) for h in P.halfspaces])
    if current is None:
        return None
    levels: list[list[Constraint]] = [current]
    for _ in range(P.dimension):
        current = _eliminate_last(current)
        if current is None:
            return None
        levels.append(current)
    levels.reverse()
    return levels


def _interval(constraints: list[Constraint], prefix: Sequence[QuadNum]):
    """Bounds on the next variable given the already fixed ones."""
    lo = hi = None
    for a, b in constraints:
        c = a[-1]
        if not c:
            continue
        r = (b - dot(a[:-1], prefix)) / c
        if c > 0:
            if hi is None or r < hi:
                hi = r
        elif lo is None or r > lo:
            lo = r
    return lo, hi


def feasible(P: Polyhedron) -> FieldVector | None:
    """A point strictly inside ``P`` or None when ``P`` is empty.

    Back-substitution takes midpoints of the one-dimensional intervals, or
    an endpoint moved by one unit when the interval is half-infinite.
    """
    levels = fm_levels(P)
    if levels is None:
        return None
    x: list[QuadNum] = []
    for k in range(1, P.dimension + 1):
        lo, hi = _interval(levels[k], x)
        if lo is not None and hi is not None:
            if not lo < hi:
                return None
            t = (lo + hi) / 2
        elif hi is not None:
            t = hi - 1
        elif lo is not None:
            t = lo + 1
        else:
            t = QuadNum(0)
        x.append(t)
    return tuple(x)


def coordinate_sup(P: Polyhedron, j: int) -> QuadNum | None:
    """Exact ``sup x_j`` over nonempty ``P``; None when unbounded above."""
    n = P.dimension
    perm = [j] + [i for i in range(n) if i != j]
    Q = Polyhedron(
        tuple(HalfSpace(tuple(h.a[i] for i in perm), h.b) for h in P.halfspaces), n
    )
    levels = fm_levels(Q)
    if levels is None:
        raise EmptyPolyhedron("polyhedron is empty")
    return _interval(levels[1], ())[1]


# ---------------------------------------------------------------------------
# double description


def double_description(normals: Sequence[FieldVector], n: int) -> tuple[list[FieldVector], list[FieldVector]]:
    """Lineality basis and extreme rays of ``{v : <a, v> <= 0 for all a}``.

    Incremental Motzkin scheme; adjacency of rays is decided by the
    combinatorial test on their sets of tight constraints.
    """
    lineality = [tuple(QuadNum(1 if i == j else 0) for i in range(n)) for j in range(n)]
    rays: list[FieldVector] = []
    tight: list[set[int]] = []
    for idx, a in enumerate(normals):
        lin_vals = [dot(a, l) for l in lineality]
        k = next((i for i, s in enumerate(lin_vals) if s), None)
        if k is not None:
            l0, s0 = lineality[k], lin_vals[k]
            new_lin = []
            for i, l in enumerate(lineality):
                if i != k:
                    new_lin.append(vsub(l, vscale(lin_vals[i] / s0, l0)))
            new_rays = []
            for r in rays:
                new_rays.append(vsub(r, vscale(dot(a, r) / s0, l0)))
            tight = [t | {idx} for t in tight]
            fresh = vscale(-1 if s0 > 0 else 1, l0)
            new_rays.append(fresh)
            tight.append(set(range(idx)))
            lineality, rays = new_lin, new_rays
            continue
        vals = [dot(a, r) for r in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        zero = [i for i, s in enumerate(vals) if not s]
        new_rays = [rays[i] for i in zero + neg]
        new_tight = [tight[i] | {idx} for i in zero] + [tight[i] for i in neg]
        for p in pos:
            for q in neg:
                common = tight[p] & tight[q]
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != q and common <= tight[r]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                w = vsub(vscale(vals[p], rays[q]), vscale(vals[q], rays[p]))
                if is_zero(w):
                    continue
                new_rays.append(w)
                new_tight.append(common | {idx})
        rays, tight = new_rays, new_tight
    rays = [normalize_direction(r) for r in rays]
    lineality = [normalize_direction(l) for l in row_basis(lineality)] if lineality else []
    uniq: list[FieldVector] = []
    for r in rays:
        if not any(parallel_same_direction(r, u) for u in uniq):
            uniq.append(r)
    return lineality, uniq


@dataclass(frozen=True)
class Cone:
    """Closed convex cone with both representations.

    ``generators`` span the cone by nonnegative combinations (a line appears
    as a pair of opposite generators); ``dual_halfspaces`` are the normals
    ``a`` of the conditions ``<a, v> <= 0``.  The zero cone has no
    generators.
    """

    dimension: int
    generators: tuple[FieldVector, ...]
    dual_halfspaces: tuple[FieldVector, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.generators and not self.dual_halfspaces and self.dimension:
            # the zero cone: v_j <= 0 and -v_j <= 0 for every coordinate
            units = [unit(self.dimension, j) for j in range(self.dimension)]
            object.__setattr__(self, "dual_halfspaces", tuple(units + [vscale(-1, u) for u in units]))

    @classmethod
    def from_halfspaces(cls, normals: Sequence[Sequence], n: int) -> Cone:
        normals = [vec(a) for a in normals]
        lin, rays = double_description(normals, n)
        gens = list(rays)
        for l in lin:
            gens.append(l)
            gens.append(vscale(-1, l))
        return cls(n, tuple(gens), tuple(normals))

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence], n: int) -> Cone:
        gens = [vec(g) for g in gens if not is_zero(vec(g))]
        # the polar cone's generators are the facet normals of cone(gens)
        lin, rays = double_description(gens, n)
        normals = list(rays)
        for l in lin:
            normals.append(l)
            normals.append(vscale(-1, l))
        # back to canonical generators: extreme rays plus a lineality basis
        return cls.from_halfspaces(normals, n)

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, v: Sequence[QuadNum]) -> bool:
        return cone_member(self, v)

    def contains_cone(self, other: Cone) -> bool:
        return all(cone_member(self, g) for g in other.generators)

    def same_as(self, other: Cone) -> bool:
        return self.contains_cone(other) and other.contains_cone(self)

    def span_basis(self) -> list[FieldVector]:
        return row_basis(self.generators) if self.generators else []

    def dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    def is_pointed(self) -> bool:
        # a line in the cone means some nonzero v with v and -v inside
        return rank(self.dual_halfspaces) == self.dimension if self.dual_halfspaces else self.is_zero()

    def generator_matrix(self) -> np.ndarray:
        """Generators as float columns (shape n x m)."""
        if not self.generators:
            return np.zeros((self.dimension, 0))
        return np.array([to_floats(g) for g in self.generators]).T


def recession_cone(P: Polyhedron) -> Cone:
    """``{v : <a_i, v> <= 0}``; independent of any base point in ``P``."""
    if fm_levels(P) is None:
        raise EmptyPolyhedron("recession cone of an empty polyhedron")
    return Cone.from_halfspaces([h.a for h in P.halfspaces], P.dimension)


def intersect_subspace(C: Cone, basis: Sequence[Sequence]) -> Cone:
    """``C`` intersected with ``span(basis)``, in ambient coordinates."""
    basis = [vec(b) for b in basis]
    if basis and rank(basis) < len(basis):
        raise ValueError("subspace basis is linearly dependent")
    complement = nullspace(basis, C.dimension)
    normals = list(C.dual_halfspaces)
    for c in complement:
        normals.append(c)
        normals.append(vscale(-1, c))
    return Cone.from_halfspaces(normals, C.dimension)


def cone_member(C: Cone, v: Sequence[QuadNum]) -> bool:
    return all(dot(a, v) <= 0 for a in C.dual_halfspaces)


def cone_project(C: Cone, y: Sequence[float]) -> tuple[np.ndarray, float]:
    """Euclidean projection of ``y`` onto ``C`` and its norm.

    Nonnegative least squares over the generators; the projection is
    ``G @ lam`` for the NNLS minimiser ``lam``.
    """
    y = np.asarray(y, dtype=float)
    G = C.generator_matrix()
    if G.shape[1] == 0:
        return np.zeros_like(y), 0.0
    try:
        lam, _ = nnls(G, y, maxiter=NNLS_MAXITER)
    except RuntimeError as exc:
        raise NumericFailure(f"NNLS did not converge: {exc}") from exc
    lam[lam < NNLS_TOL] = 0.0
    proj = G @ lam
    return proj, float(np.linalg.norm(proj))


def sup_on_unit_sphere(C: Cone, beta: Sequence[float]) -> float:
    """Upper estimate of ``sup <beta, w>`` over unit vectors ``w`` in ``C``.

    Equals the norm of the projection when that is nonzero; otherwise the
    supremum is nonpositive and zero is returned.
    """
    return cone_project(C, beta)[1]
