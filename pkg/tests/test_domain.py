import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reinhardt.catalog import TEST_DOMAINS, hartogs_bad_axes, hartogs_triangle, polydisc, punctured_polydisc
from reinhardt.domain import DomainSpec, InvalidDomain, member, member_log, member_many, ray_limit, require_valid, validate
from reinhardt.field_arith import FieldMismatch, QuadNum, vec
from reinhardt.polyhedra import recession_cone


@pytest.mark.parametrize("name", sorted(TEST_DOMAINS))
def test_catalog_domains_valid(name):
    report = validate(TEST_DOMAINS[name]())
    assert report.valid, report.failures
    spec = TEST_DOMAINS[name]()
    assert spec.logD.contains(report.base_point)


def test_bad_axes_report():
    report = validate(hartogs_bad_axes())
    assert not report.valid
    assert {"check": "downward_closed", "halfspace": 1, "coordinate": 2} in report.failures
    with pytest.raises(InvalidDomain):
        require_valid(hartogs_bad_axes())


def test_unbounded_and_empty_rejected():
    up = DomainSpec.build([((-1, 0), 0), ((0, 1), 0)], set(), 2)
    assert {"check": "bounded_above", "coordinate": 1} in validate(up).failures
    empty = DomainSpec.build([((1,), 0), ((-1,), -1)], set(), 1)
    assert validate(empty).failures[0]["check"] == "nonempty"


def test_axis_direction_required():
    # strip around the diagonal never reaches the axis z_1 = 0 although normals are fine there
    spec = DomainSpec.build([((0, 1), 0), ((1, -1), 0), ((-1, 1), 1)], {0}, 2)
    failures = validate(spec).failures
    assert {"check": "axis_direction", "coordinate": 1} in failures


def test_round_trip_serialization():
    for make in TEST_DOMAINS.values():
        spec = make()
        again = DomainSpec.loads(spec.dumps())
        assert again.dumps() == spec.dumps()
        assert again.logD == spec.logD and again.axes == spec.axes


def test_parse_rejects_foreign_radical():
    text = hartogs_triangle().dumps().replace('"1"', '"0+1*sqrt(3)"', 1)
    with pytest.raises(FieldMismatch):
        DomainSpec.loads(text)


def test_member_examples():
    H = hartogs_triangle()
    assert member(H, (0.2, 0.5))
    assert member(H, (0.0, 0.5))
    assert not member(H, (0.0, 0.0))
    assert not member(H, (0.5, 0.5))
    assert not member(H, (0.2, 1.0))  # exactly on |z_2| = 1
    assert not member(punctured_polydisc(), (0.5, 0.0))


def test_member_many_matches_member():
    rng = np.random.default_rng(3)
    for make in TEST_DOMAINS.values():
        spec = make()
        if spec.n != 2:
            continue
        pts = rng.random((300, 2))
        pts[:20, 0] = 0.0
        assert list(member_many(spec, pts)) == [member(spec, p) for p in pts]


def test_ray_limit_examples():
    H = hartogs_triangle()
    r = ray_limit(H, (-2, -1), (-1, -1))
    assert r.limit == (0.0, 0.0) and not r.inside
    r = ray_limit(H, (-2, -1), (-1, 0))
    assert r.limit == (0.0, pytest.approx(math.exp(-1))) and r.inside
    r = ray_limit(H, (-2, -1), (0, 0))
    assert r.inside and r.limit == pytest.approx((math.exp(-2), math.exp(-1)))


def test_ray_limit_base_point_independence():
    H = hartogs_triangle()
    for v in [(-1, 0), (-1, -1), (-3, -1)]:
        assert ray_limit(H, (-2, -1), v).inside == ray_limit(H, (-5, -QuadNum(1, 0)), v).inside


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 0.99), st.floats(0.01, 0.99), st.floats(0.0, 1.0))
def test_member_monotone_in_axis_coordinates(r1, r2, shrink):
    H = hartogs_triangle()
    if member(H, (r1, r2)):
        assert member(H, (r1 * shrink, r2))


@settings(max_examples=50, deadline=None)
@given(st.integers(-4, -1), st.integers(-4, -1), st.integers(-4, -1), st.integers(-4, -1))
def test_ray_limit_depends_on_negative_support(a, b, c, d):
    # in Hartogs, (a, b) and (c, d) both lie in the cone iff a <= b; same negative support both sides
    H = hartogs_triangle()
    C = recession_cone(H.logD)
    v, w = vec([min(a, b), max(a, b)]), vec([min(c, d), max(c, d)])
    assert ray_limit(H, (-2, -1), v, C).inside == ray_limit(H, (-2, -1), w, C).inside


def test_member_log_exact():
    H = hartogs_triangle()
    assert member_log(H, (None, QuadNum(-1)))
    assert not member_log(H, (QuadNum(0), QuadNum(0)))
    assert member_log(polydisc(2), (None, None))
