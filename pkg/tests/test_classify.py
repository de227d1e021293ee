import itertools

import numpy as np
import pytest

from rational_oracle import brute_force_outside, membership_mask, random_rational_cone, scale_to_integers
from reinhardt.catalog import (
    SQRT2,
    TEST_DOMAINS,
    hartogs_triangle,
    irrational_ray,
    polydisc,
    punctured_polydisc,
)
from reinhardt.classify import (
    axis_subspace_basis,
    classify,
    cone_split,
    in_subspace_L,
    max_rational_subspace,
    rational_point_outside,
)
from reinhardt.domain import base_point, ray_limit
from reinhardt.field_arith import QuadNum, is_rational_vector, vec
from reinhardt.polyhedra import Cone, cone_member


def test_cone_split_examples():
    s = cone_split(polydisc(2))
    assert s.C_tilde.same_as(s.C) and not s.c_prime_nonempty
    s = cone_split(hartogs_triangle())
    assert s.c_prime_nonempty
    assert s.C_tilde.same_as(Cone.from_generators([(-1, 0)], 2))
    s = cone_split(punctured_polydisc())
    assert s.c_prime_nonempty
    assert s.C_tilde.same_as(Cone.from_generators([(-1, 0)], 2))


def test_max_rational_subspace_examples():
    assert max_rational_subspace([(-SQRT2, -1)]) == []
    assert len(max_rational_subspace([(1, 0), (0, 1)])) == 2
    assert max_rational_subspace([(1, SQRT2, 0), (0, 0, 1)]) == [vec([0, 0, 1])]
    with pytest.raises(ValueError):
        max_rational_subspace([(1, 0), (2, 0)])


def test_rational_point_outside_examples():
    H = cone_split(hartogs_triangle())
    w = rational_point_outside(H.C, H.L_basis).witness
    assert w is not None and w[1] < 0 and cone_member(H.C, w)
    R = cone_split(irrational_ray())
    res = rational_point_outside(R.C, R.L_basis)
    assert res.witness is None
    assert any("U={0}" in line for line in res.trace)
    assert rational_point_outside(Cone(2, ()), []).witness is None


def test_rounding_branch():
    # two irrational generators spanning a rational plane: no rational generator, rational span
    C = Cone.from_generators([(-1, -SQRT2), (-SQRT2, -1)], 2)
    res = rational_point_outside(C, [])
    w = res.witness
    assert w is not None and is_rational_vector(w) and cone_member(C, w)
    assert any("rounded interior point" in line for line in res.trace)


def test_classify_examples():
    r = classify(polydisc(2))
    assert r.hyperconvex and r.bergman_complete and r.caratheodory_complete and r.witness is None
    r = classify(hartogs_triangle())
    assert not r.hyperconvex and not r.bergman_complete
    assert r.witness == vec([-1, -1])
    r = classify(irrational_ray())
    assert not r.hyperconvex and r.bergman_complete and r.witness is None
    d = r.to_dict()
    assert set(d) == {"kobayashi_complete", "caratheodory_complete", "hyperconvex", "bergman_complete", "witness", "trace"}


@pytest.mark.parametrize("name", sorted(TEST_DOMAINS))
def test_witness_validity_and_implication(name):
    spec = TEST_DOMAINS[name]()
    r = classify(spec)
    assert r.kobayashi_complete
    if r.hyperconvex:
        assert r.bergman_complete
    if r.witness is not None:
        C = cone_split(spec).C
        assert cone_member(C, r.witness) and is_rational_vector(r.witness)
        assert any(r.witness[j] < 0 for j in range(spec.n) if j not in spec.axes)


@pytest.mark.parametrize("name", sorted(TEST_DOMAINS))
def test_face_formula_matches_ray_limits(name):
    spec = TEST_DOMAINS[name]()
    split = cone_split(spec)
    a = base_point(spec)
    rng = np.random.default_rng(11)
    gens = split.C.generators
    for _ in range(100):
        weights = [int(x) for x in rng.integers(0, 4, len(gens))]
        if rng.random() < 0.3:
            weights[int(rng.integers(len(gens)))] = 0
        v = tuple(sum((w * g[i] for w, g in zip(weights, gens)), QuadNum()) for i in range(spec.n))
        assert cone_member(split.C_tilde, v) == ray_limit(spec, a, v, split.C).inside


@pytest.mark.parametrize("name", sorted(TEST_DOMAINS))
def test_permutation_equivariance(name):
    spec = TEST_DOMAINS[name]()
    base = classify(spec)
    for perm in itertools.permutations(range(spec.n)):
        r = classify(spec.permuted(perm))
        assert (r.hyperconvex, r.bergman_complete) == (base.hyperconvex, base.bergman_complete)
        if base.witness is not None:
            # the permuted domain may return a different witness, which must still be valid
            old = tuple(r.witness[perm.index(j)] for j in range(spec.n))
            assert cone_member(cone_split(spec).C, old)


def test_oracle_self_check():
    ints = [scale_to_integers(g) for g in [(-1, 0), (-1, -1)]]
    V = np.array([[-1, -1], [-1, -2], [-3, -1], [0, 0], [0, -1]])
    assert list(membership_mask(ints, V)) == [True, False, True, True, False]


def test_random_cones_against_brute_force():
    rng = np.random.default_rng(2024)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        gens, axes = random_rational_cone(rng, n)
        C = Cone.from_generators(gens, n)
        res = rational_point_outside(C, axis_subspace_basis(n, axes))
        assert (res.witness is not None) == brute_force_outside(gens, axes, n, H=16)
        if res.witness is not None:
            assert cone_member(C, res.witness) and not in_subspace_L(res.witness, axis_subspace_basis(n, axes))
