"""Bounded pseudoconvex Reinhardt domains given by their logarithmic image.

A domain is the pair (log D, A): an open polyhedron of log-moduli plus the
set of axes ``A`` (0-based here, 1-based in files) whose coordinate
hyperplane meets the domain.  All queries depend only on moduli.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .field_arith import (
    FieldMismatch,
    FieldVector,
    QuadNum,
    dot,
    field_of,
    format_quadnum,
    parse_quadnum,
    unit,
    vec,
)
from .polyhedra import (
    Cone,
    HalfSpace,
    Polyhedron,
    cone_member,
    coordinate_sup,
    feasible,
    recession_cone,
)

BOUNDARY_TOL = 1e-12


class InvalidDomain(ValueError):
    """A domain spec failed validation."""


@dataclass(frozen=True)
class DomainSpec:
    logD: Polyhedron
    axes: frozenset[int]
    field_d: int = 1
    name: str = ""

    @property
    def n(self) -> int:
        return self.logD.dimension

    @classmethod
    def build(cls, rows, axes, n: int | None = None, name: str = "") -> DomainSpec:
        """Convenience constructor; ``axes`` are 0-based indices."""
        P = Polyhedron.from_rows(rows, n)
        d = field_of([h.a for h in P.halfspaces] + [(h.b,) for h in P.halfspaces])
        return cls(P, frozenset(axes), d, name)

    def float_rows(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.array([[float(x) for x in h.a] for h in self.logD.halfspaces])
        b = np.array([float(h.b) for h in self.logD.halfspaces])
        return A, b

    def permuted(self, perm: Sequence[int]) -> DomainSpec:
        """Relabel coordinates: new coordinate ``k`` is old ``perm[k]``."""
        hs = tuple(
            HalfSpace(tuple(h.a[perm[k]] for k in range(self.n)), h.b)
            for h in self.logD.halfspaces
        )
        inv = {old: new for new, old in enumerate(perm)}
        return DomainSpec(
            Polyhedron(hs, self.n), frozenset(inv[j] for j in self.axes), self.field_d, self.name
        )

    def to_dict(self) -> dict:
        return {
            "dimension": self.n,
            "field_d": self.field_d,
            "halfspaces": [
                {"a": [format_quadnum(x) for x in h.a], "b": format_quadnum(h.b)}
                for h in self.logD.halfspaces
            ],
            "axes": sorted(j + 1 for j in self.axes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, obj: dict) -> DomainSpec:
        n = int(obj["dimension"])
        d = int(obj.get("field_d", 1))
        hs = []
        for h in obj["halfspaces"]:
            a = tuple(parse_quadnum(s) for s in h["a"])
            b = parse_quadnum(h["b"])
            for x in a + (b,):
                if x.d not in (1, d):
                    raise FieldMismatch(f"entry {x} does not lie in Q(sqrt({d}))")
            hs.append(HalfSpace(a, b))
        axes = [int(j) for j in obj.get("axes", [])]
        if any(j < 1 or j > n for j in axes):
            raise ValueError(f"axis index out of range 1..{n}: {axes}")
        return cls(Polyhedron(tuple(hs), n), frozenset(j - 1 for j in axes), d, obj.get("name", ""))

    @classmethod
    def loads(cls, text: str) -> DomainSpec:
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> DomainSpec:
        with open(path) as fh:
            return cls.loads(fh.read())


@dataclass
class ValidationReport:
    valid: bool
    failures: list[dict] = field(default_factory=list)
    base_point: FieldVector | None = None
    coordinate_sups: list[str | None] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "failures": self.failures,
            "base_point": None if self.base_point is None else [format_quadnum(x) for x in self.base_point],
            "coordinate_sups": self.coordinate_sups,
        }


def validate(spec: DomainSpec) -> ValidationReport:
    """Check every structural condition of a domain spec exactly.

    Indices in the failure records are 1-based.
    """
    failures: list[dict] = []
    n = spec.n
    try:
        field_of([h.a for h in spec.logD.halfspaces] + [(h.b,) for h in spec.logD.halfspaces])
    except FieldMismatch as exc:
        return ValidationReport(False, [{"check": "field", "message": str(exc)}])
    for j in spec.axes:
        if not 0 <= j < n:
            failures.append({"check": "axis_range", "coordinate": j + 1})
    if failures:
        return ValidationReport(False, failures)

    point = feasible(spec.logD)
    if point is None:
        return ValidationReport(False, [{"check": "nonempty", "message": "log-image is empty"}])

    C = recession_cone(spec.logD)
    sups: list[str | None] = []
    for j in range(n):
        bounded = all(g[j] <= 0 for g in C.generators)
        if not bounded:
            failures.append({"check": "bounded_above", "coordinate": j + 1})
            sups.append(None)
        else:
            s = coordinate_sup(spec.logD, j)
            sups.append(None if s is None else format_quadnum(s))
    for j in sorted(spec.axes):
        for i, h in enumerate(spec.logD.halfspaces):
            if h.a[j] < 0:
                failures.append(
                    {"check": "downward_closed", "halfspace": i + 1, "coordinate": j + 1}
                )
        if not cone_member(C, tuple(-x for x in unit(n, j))):
            failures.append({"check": "axis_direction", "coordinate": j + 1})
    return ValidationReport(not failures, failures, point, sups)


def require_valid(spec: DomainSpec) -> ValidationReport:
    report = validate(spec)
    if not report.valid:
        raise InvalidDomain(f"invalid domain spec: {report.failures}")
    return report


def base_point(spec: DomainSpec) -> FieldVector:
    x = feasible(spec.logD)
    if x is None:
        raise InvalidDomain("log-image is empty")
    return x


def _projected_rows(spec: DomainSpec, zero: set[int]):
    """Half-spaces that survive when the coordinates in ``zero`` go to -inf."""
    return [h for h in spec.logD.halfspaces if all(not h.a[j] for j in zero)]


def member(spec: DomainSpec, r: Sequence[float]) -> bool:
    """Membership of a point given by its moduli ``(|z_1|, ..., |z_n|)``.

    Zero moduli are handled through the projection ``D cap V_I``.  The test
    runs in floating point; within ``BOUNDARY_TOL`` of a face it is redone
    exactly when every involved modulus equals one (log exactly zero), and
    otherwise the float verdict stands.
    """
    r = [float(x) for x in r]
    if any(x < 0 for x in r):
        raise ValueError("moduli must be nonnegative")
    zero = {j for j, x in enumerate(r) if x == 0.0}
    if not zero <= spec.axes:
        return False
    logs = [math.log(x) if x > 0 else 0.0 for x in r]
    for h in _projected_rows(spec, zero):
        s = sum(float(a) * logs[j] for j, a in enumerate(h.a) if j not in zero and a)
        slack = float(h.b) - s
        if abs(slack) <= BOUNDARY_TOL:
            if all(r[j] == 1.0 for j, a in enumerate(h.a) if j not in zero and a):
                if not h.b > 0:
                    return False
                continue
        if not slack > 0:
            return False
    return True


def member_many(spec: DomainSpec, r: np.ndarray) -> np.ndarray:
    """Vectorised float membership for an array of moduli (shape m x n)."""
    r = np.atleast_2d(np.asarray(r, dtype=float))
    A, b = spec.float_rows()
    zero = r == 0.0
    with np.errstate(divide="ignore"):
        logs = np.where(zero, 0.0, np.log(np.where(zero, 1.0, r)))
    ok = np.ones(len(r), dtype=bool)
    off_axes = [j for j in range(spec.n) if j not in spec.axes]
    if off_axes:
        ok &= ~zero[:, off_axes].any(axis=1)
    for a_row, b_i in zip(A, b):
        # a row is vacuous when it involves a coordinate sent to -inf
        vacuous = (zero & (a_row != 0)).any(axis=1)
        ok &= vacuous | (logs @ a_row < b_i)
    return ok


def member_log(spec: DomainSpec, x: Sequence[QuadNum | None]) -> bool:
    """Exact membership for a log-point; ``None`` marks a zero coordinate."""
    zero = {j for j, t in enumerate(x) if t is None}
    if not zero <= spec.axes:
        return False
    for h in _projected_rows(spec, zero):
        s = dot([a for j, a in enumerate(h.a) if j not in zero], [t for t in x if t is not None])
        if not s < h.b:
            return False
    return True


@dataclass(frozen=True)
class RayLimit:
    limit: tuple[float, ...]
    inside: bool


def ray_limit(spec: DomainSpec, a: Sequence, v: Sequence, cone: Cone | None = None) -> RayLimit:
    """Endpoint of the closure of ``exp(a + R_+ v)`` and whether it lies in D."""
    a = vec(a)
    v = vec(v)
    C = cone if cone is not None else recession_cone(spec.logD)
    if not cone_member(C, v):
        raise ValueError("direction is not in the recession cone")
    if not spec.logD.contains(a):
        raise ValueError("base point is not strictly inside the log-image")
    limit_log = [None if vj < 0 else aj for aj, vj in zip(a, v)]
    limit = tuple(0.0 if t is None else math.exp(float(t)) for t in limit_log)
    return RayLimit(limit, member_log(spec, limit_log))
