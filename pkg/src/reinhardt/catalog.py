"""Standard domains used in examples, tests and the CLI demos."""
from __future__ import annotations

from .domain import DomainSpec
from .field_arith import QuadNum

SQRT2 = QuadNum(0, 1, 2)


def polydisc(n: int = 2) -> DomainSpec:
    """Unit polydisc: log-image is the negative orthant, every axis met."""
    rows = [(tuple(1 if i == j else 0 for i in range(n)), 0) for j in range(n)]
    return DomainSpec.build(rows, range(n), n, name=f"polydisc{n}")


def punctured_polydisc() -> DomainSpec:
    """E x E_*: same log-image as the bidisc but z_2 = 0 is excluded."""
    return DomainSpec.build([((1, 0), 0), ((0, 1), 0)], {0}, 2, name="punctured_polydisc")


def hartogs_triangle() -> DomainSpec:
    """{|z_1| < |z_2| < 1}."""
    return DomainSpec.build([((1, -1), 0), ((0, 1), 0)], {0}, 2, name="hartogs")


def hartogs_bad_axes() -> DomainSpec:
    return DomainSpec.build([((1, -1), 0), ((0, 1), 0)], {0, 1}, 2, name="hartogs_badaxes")


def irrational_ray() -> DomainSpec:
    """Strip of width ~1 around the ray spanned by (-sqrt2, -1), no axes met."""
    rows = [
        ((1, -SQRT2), 1),
        ((-1, SQRT2), 1),
        ((1, 0), 0),
        ((0, 1), 0),
    ]
    return DomainSpec.build(rows, set(), 2, name="irrational_ray")


def rational_wedge3() -> DomainSpec:
    """A three-dimensional example with a two-dimensional cone outside the axes.

    log-image ``{x_1 < 0, x_2 - x_3 < 0, x_3 < 0, x_3 - x_2 < 1}``: the
    recession cone is generated by (-1,0,0) and (0,-1,-1); only the first
    axis is met.
    """
    rows = [((1, 0, 0), 0), ((0, 1, -1), 0), ((0, 0, 1), 0), ((0, -1, 1), 1)]
    return DomainSpec.build(rows, {0}, 3, name="wedge3")


def irrational_wedge3() -> DomainSpec:
    """Three-dimensional: ball-like in x_1 (axis met), irrational ray in (x_2, x_3)."""
    rows = [
        ((1, 0, 0), 0),
        ((0, 1, -SQRT2), 1),
        ((0, -1, SQRT2), 1),
        ((0, 1, 0), 0),
        ((0, 0, 1), 0),
    ]
    return DomainSpec.build(rows, {0}, 3, name="irrational_wedge3")


TEST_DOMAINS = {
    "polydisc": polydisc,
    "punctured_polydisc": punctured_polydisc,
    "hartogs": hartogs_triangle,
    "irrational_ray": irrational_ray,
    "wedge3": rational_wedge3,
    "irrational_wedge3": irrational_wedge3,
}
