"""Brute-force oracle for rational cone points, independent of the package's cone code.

A rational vector lies in a cone iff a positive integer multiple does, so
searching integer vectors of height at most H covers every rational vector
with denominator and height at most H.  Membership uses Caratheodory: v is
in cone(G) iff it is a nonnegative combination of some linearly independent
subset of G, solved exactly with integer adjugates.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def integer_det(M) -> int:
    M = [list(r) for r in M]
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * integer_det([r[:j] + r[j + 1 :] for r in M[1:]]) for j in range(len(M)))


def integer_adjugate(M) -> list[list[int]]:
    s = len(M)
    if s == 1:
        return [[1]]
    adj = [[0] * s for _ in range(s)]
    for i in range(s):
        for j in range(s):
            minor = [r[:j] + r[j + 1 :] for k, r in enumerate(M) if k != i]
            adj[j][i] = (-1) ** (i + j) * integer_det(minor)
    return adj


def scale_to_integers(g) -> tuple[int, ...]:
    den = math.lcm(*(Fraction(x).denominator for x in g))
    ints = [int(Fraction(x) * den) for x in g]
    k = math.gcd(*ints)
    return tuple(x // k for x in ints)


def membership_mask(gens: list[tuple[int, ...]], V: np.ndarray) -> np.ndarray:
    """Exact cone membership of every row of the integer array ``V``."""
    n = V.shape[1]
    inside = np.all(V == 0, axis=1)
    for s in range(1, n + 1):
        for S in itertools.combinations(gens, s):
            G = [list(col) for col in zip(*S)]  # n x s
            for R in itertools.combinations(range(n), s):
                sub = [G[r] for r in R]
                det = integer_det(sub)
                if det:
                    break
            else:
                continue  # dependent subset
            adj = np.array(integer_adjugate(sub), dtype=np.int64)
            lam_det = V[:, list(R)] @ adj.T  # lambda * det
            ok = np.all(lam_det * np.sign(det) >= 0, axis=1)
            ok &= np.all(lam_det @ np.array(G, dtype=np.int64).T == det * V, axis=1)
            inside |= ok
    return inside


def nonpositive_box(n: int, H: int) -> np.ndarray:
    axes = [np.arange(-H, 1)] * n
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1).astype(np.int64)


def brute_force_outside(gens, axes, n: int, H: int = 64) -> bool:
    """Is there a nonzero rational v in cone(gens), height/denominator <= H, with v_j != 0 for some j not in axes?"""
    ints = [scale_to_integers(g) for g in gens if any(g)]
    V = nonpositive_box(n, H)
    outside = [j for j in range(n) if j not in axes]
    if not outside:
        return False
    cand = V[np.any(V[:, outside] != 0, axis=1)]
    return bool(membership_mask(ints, cand).any())


def random_rational_cone(rng: np.random.Generator, n: int):
    k = int(rng.integers(1, n + 2))
    gens = []
    while len(gens) < k:
        g = tuple(Fraction(int(rng.integers(-4, 1)), int(rng.integers(1, 5))) for _ in range(n))
        if any(g):
            gens.append(g)
    axes = {j for j in range(n) if rng.random() < 0.5}
    return gens, axes
