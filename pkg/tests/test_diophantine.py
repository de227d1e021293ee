import math
from fractions import Fraction

import numpy as np
import pytest

from reinhardt.catalog import SQRT2
from reinhardt.diophantine import (
    PreconditionError,
    SearchExhausted,
    check_beta,
    dirichlet_approx,
    find_beta,
    integer_shell,
    kronecker_sample,
    star_discrepancy,
    verify_certificate,
)
from reinhardt.field_arith import QuadNum, dot, vec
from reinhardt.polyhedra import Cone

RAY = Cone.from_generators([(-SQRT2, -1)], 2)
V = vec([-SQRT2, -1])


def test_dirichlet_examples():
    assert dirichlet_approx([SQRT2], 5) == (2, (3,))
    assert dirichlet_approx([Fraction(1, 3)], 3) == (3, (1,))
    assert dirichlet_approx([0], 7) == (1, (0,))


@pytest.mark.parametrize("N", [2, 3, 5, 8, 13, 40])
def test_dirichlet_inequality_exact(N):
    v = [SQRT2, QuadNum(1, 1, 2) / 3]
    q, p = dirichlet_approx(v, N)
    assert 1 <= q <= N ** len(v)
    for x, pl in zip(v, p):
        assert abs(x * q - pl) < Fraction(1, N)


def test_dirichlet_minimality():
    q, _ = dirichlet_approx([SQRT2], 10)
    for smaller in range(1, q):
        x = SQRT2 * smaller
        assert not abs(x - (x + Fraction(1, 2)).floor()) < Fraction(1, 10)


def test_integer_shell_order_and_size():
    s = integer_shell(2, 2)
    assert len(s) == 5**2 - 3**2
    assert np.all(np.abs(s).max(axis=1) == 2)
    assert [tuple(r) for r in s] == sorted(tuple(r) for r in s)


def test_kronecker_examples():
    a = kronecker_sample([(1, SQRT2)], [0.5], 0.01)
    assert abs(a[0] + math.sqrt(2) * a[1] - 0.5) < 0.01
    target = 3 + 2 * math.sqrt(2)
    assert kronecker_sample([(1, SQRT2)], [target], 1e-9) == (3, 2)
    with pytest.raises(PreconditionError):
        kronecker_sample([(1, 0)], [0.5], 0.1)


def test_kronecker_budget():
    assert kronecker_sample([(1, SQRT2)], [0.5], 1e-12, budget=100) is None


def test_equidistribution():
    pts = (np.arange(1, 10**4 + 1) * math.sqrt(2)) % 1.0
    assert star_discrepancy(pts) < 0.02


def test_check_beta_spec_pairs():
    c = check_beta(RAY, V, (-5, 7), 0.1)
    assert c is not None
    assert c.pairing == pytest.approx(5 * math.sqrt(2) - 7)
    assert c.sup_estimate == pytest.approx((5 * math.sqrt(2) - 7) / math.sqrt(3), rel=1e-9)
    assert check_beta(RAY, V, (-1, 1), 1.0) is not None
    assert check_beta(RAY, V, (5, -7), 0.1) is None  # negative pairing


@pytest.mark.parametrize("delta", [1.0, 0.1, 0.01])
def test_find_beta_certificates_reverify(delta):
    cert = find_beta(RAY, V, delta)
    assert dot(V, [QuadNum(b) for b in cert.beta]) > 0
    assert cert.sup_estimate < delta - 1e-6
    assert verify_certificate(RAY, V, cert)


def test_find_beta_interior_mode():
    cert = find_beta(RAY, V, 0.1, mode="interior")
    assert cert.inf_estimate is not None and cert.inf_estimate < 0.1 - 1e-6


def test_find_beta_preconditions():
    with pytest.raises(PreconditionError):
        find_beta(Cone(2, ()), V, 0.1)
    rational = Cone.from_generators([(-1, -1)], 2)
    with pytest.raises(PreconditionError):
        find_beta(rational, vec([-1, -1]), 0.1)


def test_find_beta_exhaustion():
    with pytest.raises(SearchExhausted) as info:
        find_beta(RAY, V, 1e-5, max_height=20)
    assert info.value.largest_height == 20


def test_accelerated_search_verifies():
    cert = find_beta(RAY, V, 0.01, accelerate=True)
    assert verify_certificate(RAY, V, cert)
