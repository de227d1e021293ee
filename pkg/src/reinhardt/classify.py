"""Cones of a Reinhardt domain and the completeness classification.

With ``C`` the recession cone of log D and ``L = {v : v_j = 0 for j not in
A}``, the directions whose exponential ray closes up inside D are exactly
``C cap L``; the remaining directions obstruct hyperconvexity, and only the
rational ones obstruct Bergman completeness.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .domain import DomainSpec, require_valid
from .field_arith import (
    FieldVector,
    QuadNum,
    field_of,
    format_quadnum,
    is_rational_vector,
    nullspace,
    primitive_integer,
    rank,
    row_basis,
    solve_in_span,
    unit,
    vec,
)
from .polyhedra import Cone, cone_member, intersect_subspace, recession_cone

WITNESS_MAX_EXPONENT = 20


@dataclass(frozen=True)
class ConeSplit:
    C: Cone
    L_basis: tuple[FieldVector, ...]
    C_tilde: Cone
    c_prime_nonempty: bool


def axis_subspace_basis(n: int, axes) -> list[FieldVector]:
    return [unit(n, j) for j in sorted(axes)]


def in_subspace_L(v: Sequence[QuadNum], L_basis: Sequence[FieldVector]) -> bool:
    """Membership in a coordinate subspace spanned by unit vectors."""
    support = {next(i for i, x in enumerate(b) if x) for b in L_basis}
    return all(not x for i, x in enumerate(v) if i not in support)


def cone_split(spec: DomainSpec) -> ConeSplit:
    require_valid(spec)
    C = recession_cone(spec.logD)
    L = axis_subspace_basis(spec.n, spec.axes)
    C_tilde = intersect_subspace(C, L)
    outside = [j for j in range(spec.n) if j not in spec.axes]
    c_prime = any(g[j] < 0 for g in C.generators for j in outside)
    return ConeSplit(C, tuple(L), C_tilde, c_prime)


def max_rational_subspace(V_basis: Sequence[Sequence]) -> list[FieldVector]:
    """Rational basis of ``span(V_basis) cap Q^n`` (spanning the largest rational subspace).

    A rational vector of the span has coefficients in the same field, so
    writing them as ``x_i + y_i sqrt(d)`` and forcing the radical part of
    every coordinate to vanish leaves a homogeneous rational system.
    """
    V = [vec(b) for b in V_basis]
    if not V:
        return []
    if rank(V) < len(V):
        raise ValueError("basis is linearly dependent")
    n = len(V[0])
    d = field_of(V)
    if d == 1:
        return [primitive_integer(b) for b in row_basis(V)]
    k = len(V)
    # unknowns (x_1..x_k, y_1..y_k); radical part of coordinate l:
    #   sum_i x_i q_il + y_i p_il = 0
    system = []
    for l in range(n):
        system.append(tuple(QuadNum(V[i][l].q) for i in range(k)) + tuple(QuadNum(V[i][l].p) for i in range(k)))
    sols = nullspace(system, 2 * k)
    images = []
    for s in sols:
        x, y = s[:k], s[k:]
        u = tuple(
            sum((x[i].p * V[i][l].p + d * y[i].p * V[i][l].q for i in range(k)), Fraction(0))
            for l in range(n)
        )
        images.append(vec(u))
    images = [b for b in row_basis(images)] if images else []
    return [primitive_integer(b) for b in images]


@dataclass
class RationalityResult:
    witness: FieldVector | None
    trace: list[str] = field(default_factory=list)


def _fmt_vecs(vs) -> str:
    return "[" + ", ".join("(" + ",".join(format_quadnum(x) for x in v) + ")" for v in vs) + "]"


def _round_into_cone(C: Cone, L_basis, U: list[FieldVector], interior: FieldVector) -> FieldVector:
    coeffs = solve_in_span(U, interior)
    assert coeffs is not None, "interior point must lie in the rational span"
    for e in range(WITNESS_MAX_EXPONENT + 1):
        den = 2**e
        t = [Fraction((c * den).floor(), den) if not c.is_rational() else c.p for c in coeffs]
        w = tuple(
            QuadNum(sum((ti * u[l].p for ti, u in zip(t, U)), Fraction(0))) for l in range(C.dimension)
        )
        if cone_member(C, w) and not in_subspace_L(w, L_basis):
            return primitive_integer(w)
    raise AssertionError("rounding schedule exhausted although the span is rational")


def rational_point_outside(C: Cone, L_basis: Sequence[FieldVector]) -> RationalityResult:
    """Decide whether some rational ``v`` in ``C`` lies outside ``L``.

    Recursion: stop if ``C`` lies in ``L``; if ``span C`` is rational, round
    a relative-interior point; otherwise replace ``C`` by its intersection
    with the largest rational subspace of its span, which strictly lowers
    the dimension.
    """
    for g in C.generators:
        if any(x > 0 for x in g):
            raise ValueError("cone must lie in the nonpositive orthant")
    trace: list[str] = []
    L_basis = [vec(b) for b in L_basis]
    while True:
        dim = C.dim()
        if all(in_subspace_L(g, L_basis) for g in C.generators):
            trace.append(f"dim={dim}: cone inside L -> none")
            return RationalityResult(None, trace)
        for g in C.generators:
            if is_rational_vector(g) and not in_subspace_L(g, L_basis):
                w = primitive_integer(g)
                trace.append(f"dim={dim}: rational generator outside L {_fmt_vecs([w])}")
                return RationalityResult(w, trace)
        span = C.span_basis()
        U = max_rational_subspace(span)
        if len(U) == len(span):
            interior = tuple(sum((g[l] for g in C.generators), QuadNum()) for l in range(C.dimension))
            w = _round_into_cone(C, L_basis, U, interior)
            trace.append(f"dim={dim}: span rational, U={_fmt_vecs(U)}; rounded interior point {_fmt_vecs([w])}")
            return RationalityResult(w, trace)
        trace.append(
            f"dim={dim}: U={_fmt_vecs(U) if U else '{0}'} (dim {len(U)}) -> recurse on C cap U"
        )
        C = intersect_subspace(C, U)


@dataclass
class ClassificationReport:
    kobayashi_complete: bool
    hyperconvex: bool
    caratheodory_complete: bool
    bergman_complete: bool
    witness: FieldVector | None
    trace: list[str]

    def to_dict(self) -> dict:
        return {
            "kobayashi_complete": self.kobayashi_complete,
            "caratheodory_complete": self.caratheodory_complete,
            "hyperconvex": self.hyperconvex,
            "bergman_complete": self.bergman_complete,
            "witness": None if self.witness is None else [format_quadnum(x) for x in self.witness],
            "trace": list(self.trace),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def classify(spec: DomainSpec) -> ClassificationReport:
    split = cone_split(spec)
    hyperconvex = not split.c_prime_nonempty
    trace = [
        f"cone generators {_fmt_vecs(split.C.generators)}",
        f"axes {sorted(j + 1 for j in spec.axes)}; c' {'nonempty' if split.c_prime_nonempty else 'empty'}",
    ]
    if hyperconvex:
        result = RationalityResult(None, ["c' empty -> no rational points outside L"])
    else:
        result = rational_point_outside(split.C, split.L_basis)
    return ClassificationReport(
        kobayashi_complete=True,
        hyperconvex=hyperconvex,
        caratheodory_complete=hyperconvex,
        bergman_complete=result.witness is None,
        witness=result.witness,
        trace=trace + result.trace,
    )
