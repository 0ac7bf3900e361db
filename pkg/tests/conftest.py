"""Shared oracles and generators.

The oracle functions here are deliberately independent of the package
internals: plain nested loops and subset enumeration over raw Fraction
matrices. Tests compare package output against them exactly.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb, lcm

from ghsegments import Correspondence, FiniteMetricSpace, random_metric_space

Matrix = list[list[Fraction]]


def rows(space: FiniteMetricSpace) -> Matrix:
    return [list(r) for r in space.dist]


def oracle_distortion(dX: Matrix, dY: Matrix, pairs) -> Fraction:
    """Quadruple loop over related pairs."""
    worst = Fraction(0)
    for (x, y), (xp, yp) in itertools.product(pairs, repeat=2):
        gap = abs(dX[x][xp] - dY[y][yp])
        if gap > worst:
            worst = gap
    return worst


def oracle_gh(dX: Matrix, dY: Matrix) -> Fraction:
    """Enumerate every subset of the cell product, filter correspondences.

    Scales to integers first so the inner loop stays cheap; only usable
    for nx*ny up to about 16.
    """
    nx, ny = len(dX), len(dY)
    scale = lcm(*(v.denominator for row in dX + dY for v in row), 1)
    iX = [[int(v * scale) for v in row] for row in dX]
    iY = [[int(v * scale) for v in row] for row in dY]
    cells = [(x, y) for x in range(nx) for y in range(ny)]
    full_x, full_y = set(range(nx)), set(range(ny))
    best: int | None = None
    for mask in range(1, 1 << len(cells)):
        sub = [cells[i] for i in range(len(cells)) if mask >> i & 1]
        if {x for x, _ in sub} != full_x or {y for _, y in sub} != full_y:
            continue
        dis = max(abs(iX[x][xp] - iY[y][yp]) for x, y in sub for xp, yp in sub)
        if best is None or dis < best:
            best = dis
    assert best is not None
    return Fraction(best, 2 * scale)


def oracle_hausdorff(d: Matrix, A, B) -> Fraction:
    """max of the two one-sided nested-loop deviations."""
    da = max(min(d[a][b] for b in B) for a in A)
    db = max(min(d[b][a] for a in A) for b in B)
    return max(da, db)


def oracle_cover(d: Matrix, eps: Fraction) -> int:
    """Smallest number of open eps-balls covering everything.

    Tries every center combination of ascending size; fine for n <= 8.
    """
    n = len(d)
    balls = [frozenset(j for j in range(n) if d[i][j] < eps) for i in range(n)]
    everything = frozenset(range(n))
    for k in range(1, n + 1):
        for centers in itertools.combinations(range(n), k):
            if frozenset().union(*(balls[c] for c in centers)) == everything:
                return k
    raise AssertionError("unreachable: singleton balls always cover")


def oracle_correspondence_count(m: int, n: int) -> int:
    """Inclusion-exclusion over which rows and columns are missed."""
    return sum(
        (-1) ** (i + j) * comb(m, i) * comb(n, j) * 2 ** ((m - i) * (n - j))
        for i in range(m + 1)
        for j in range(n + 1)
    )


def random_correspondence(rng: random.Random, nx: int, ny: int) -> Correspondence:
    """A random onto relation: a covering skeleton plus noise cells."""
    pairs = {(x, rng.randrange(ny)) for x in range(nx)}
    covered = {y for _, y in pairs}
    pairs.update((rng.randrange(nx), y) for y in range(ny) if y not in covered)
    for x in range(nx):
        for y in range(ny):
            if rng.random() < 0.3:
                pairs.add((x, y))
    return Correspondence(frozenset(pairs), nx, ny)


def random_space(rng: random.Random, n: int) -> FiniteMetricSpace:
    return random_metric_space(n, seed=rng.randrange(10**9))
