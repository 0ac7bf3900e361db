"""Finite metric spaces with exact rational distances.

A space is a label list plus an n x n matrix of fractions.Fraction.
Construction always re-checks the metric axioms, so every
FiniteMetricSpace in circulation is a genuine metric: zero diagonal,
symmetric, positive off the diagonal, triangle inequality. Pseudometrics
are rejected on purpose; several constructions in this package rely on
distinct points staying at positive distance.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .exceptions import DomainError, MalformedInputError, MetricValidationError

__all__ = [
    "FiniteMetricSpace",
    "PointSubset",
    "ValidationReport",
    "Violation",
    "validate_metric",
    "as_fraction",
    "diameter",
    "closed_ball",
    "covering_number",
    "simplex",
    "isolation_radius",
    "random_metric_space",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, rationals and 'p/q' strings to Fraction; floats are refused."""
    if isinstance(value, bool):
        raise MalformedInputError(f"not a rational distance: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"cannot parse rational from {value!r}") from exc
    raise MalformedInputError(f"not a rational distance: {value!r}")


@dataclass(frozen=True)
class Violation:
    """One concrete axiom failure with its witness indices."""

    axiom: str  # "zero_diagonal" | "symmetry" | "positivity" | "triangle"
    witness: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    def describe(self, labels: Sequence[str] | None = None) -> str:
        pts = (
            ", ".join(labels[i] for i in self.witness)
            if labels is not None
            else ", ".join(str(i) for i in self.witness)
        )
        return f"{self.axiom} violated at ({pts}): {self.lhs} vs {self.rhs}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = ()


def _coerce_square_matrix(matrix) -> list[list[Fraction]]:
    rows = list(matrix)
    n = len(rows)
    if n == 0:
        raise MalformedInputError("empty matrix")
    out: list[list[Fraction]] = []
    for row in rows:
        entries = [as_fraction(v) for v in row]
        if len(entries) != n:
            raise MalformedInputError(
                f"matrix is not square: {n} rows but a row of length {len(entries)}"
            )
        for v in entries:
            if v < 0:
                raise MalformedInputError(f"negative entry {v}")
        out.append(entries)
    return out


def validate_metric(matrix) -> ValidationReport:
    """Check the metric axioms, reporting every violation with a witness.

    Malformed input (non-square, negative or non-rational entries) raises
    MalformedInputError instead of producing a report; a report is only
    about the axioms of a well-formed candidate.
    """
    d = _coerce_square_matrix(matrix)
    n = len(d)
    bad: list[Violation] = []
    for i in range(n):
        if d[i][i] != 0:
            bad.append(Violation("zero_diagonal", (i,), d[i][i], Fraction(0)))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                bad.append(Violation("symmetry", (i, j), d[i][j], d[j][i]))
            elif d[i][j] == 0:
                bad.append(Violation("positivity", (i, j), Fraction(0), Fraction(0)))
    # Triangle over each unordered pair {i, k} through every middle point j.
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j == i or j == k:
                    continue
                if d[i][k] > d[i][j] + d[j][k]:
                    bad.append(
                        Violation("triangle", (i, j, k), d[i][k], d[i][j] + d[j][k])
                    )
    return ValidationReport(ok=not bad, violations=tuple(bad))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space: unique labels plus an exact distance matrix.

    The constructor normalizes entries to Fraction and validates the
    axioms; an invalid matrix never yields a space object.
    """

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        d = _coerce_square_matrix(self.dist)
        n = len(d)
        labels = tuple(str(l) for l in self.labels)
        if len(labels) != n:
            raise MalformedInputError(
                f"{len(labels)} labels for a {n}-point matrix"
            )
        if len(set(labels)) != n:
            raise MalformedInputError("labels must be unique")
        report = validate_metric(d)
        if not report.ok:
            raise MetricValidationError(report)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", tuple(tuple(row) for row in d))

    @classmethod
    def from_matrix(cls, matrix, labels: Sequence[str] | None = None) -> "FiniteMetricSpace":
        rows = [list(r) for r in matrix]
        if labels is None:
            labels = [f"p{i}" for i in range(len(rows))]
        return cls(tuple(labels), tuple(tuple(r) for r in rows))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise MalformedInputError(f"no point labelled {label!r}") from None

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n}, labels={list(self.labels)!r})"


@dataclass(frozen=True)
class PointSubset:
    """A non-empty subset of a space's points, by index."""

    space: FiniteMetricSpace
    indices: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        idx = frozenset(int(i) for i in self.indices)
        if not idx:
            raise DomainError("subset must be non-empty")
        if not all(0 <= i < self.space.n for i in idx):
            raise DomainError(f"indices out of range for a {self.space.n}-point space")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def from_labels(cls, space: FiniteMetricSpace, labels: Iterable[str]) -> "PointSubset":
        return cls(space, frozenset(space.index_of(l) for l in labels))

    def labels_sorted(self) -> list[str]:
        return [self.space.labels[i] for i in sorted(self.indices)]

    def __len__(self) -> int:
        return len(self.indices)


def diameter(space: FiniteMetricSpace) -> Fraction:
    """Largest pairwise distance; 0 for the one-point space."""
    n = space.n
    return max(
        (space.dist[i][j] for i in range(n) for j in range(i + 1, n)),
        default=Fraction(0),
    )


def closed_ball(space: FiniteMetricSpace, center: int, r) -> PointSubset:
    """Points at distance <= r from the center point. Requires r >= 0."""
    radius = as_fraction(r)
    if radius < 0:
        raise DomainError(f"ball radius must be >= 0, got {radius}")
    if not 0 <= center < space.n:
        raise DomainError(f"center {center} out of range")
    hits = frozenset(i for i in range(space.n) if space.dist[center][i] <= radius)
    return PointSubset(space, hits)  # never empty: the center is inside


def _min_cover_size(universe: int, sets: list[int]) -> int:
    """Exact minimum number of the given bitmask sets whose union is universe."""
    # Drop dominated sets; a subset of another set never helps a minimum cover.
    keep: list[int] = []
    for s in sorted(set(sets), key=lambda m: -bin(m).count("1")):
        if not any(s & k == s for k in keep):
            keep.append(s)
    # Greedy upper bound, then depth-first search on the least-covered point.
    best = 0
    left = universe
    while left:
        pick = max(keep, key=lambda m: bin(m & left).count("1"))
        left &= ~pick
        best += 1

    cover_of: dict[int, list[int]] = {}
    p = 0
    u = universe
    while u:
        if u & 1:
            cover_of[p] = [s for s in keep if s >> p & 1]
        u >>= 1
        p += 1

    def search(left: int, used: int, best: int) -> int:
        if not left:
            return used
        if used + 1 >= best:
            return best
        # branch on the uncovered point with the fewest candidate sets
        point = min(
            (p for p in cover_of if left >> p & 1),
            key=lambda p: len(cover_of[p]),
        )
        for s in cover_of[point]:
            best = search(left & ~s, used + 1, best)
        return best

    return search(universe, 0, best)


def covering_number(space: FiniteMetricSpace, eps) -> int:
    """Minimum number of open eps-balls with centers in the space that cover it.

    Open balls: {y : d(x, y) < eps}. Centers are the space's own points,
    so the count is intrinsic to the matrix. Requires eps > 0.
    """
    epsilon = as_fraction(eps)
    if epsilon <= 0:
        raise DomainError(f"covering radius must be > 0, got {epsilon}")
    n = space.n
    balls = []
    for c in range(n):
        mask = 0
        for i in range(n):
            if space.dist[c][i] < epsilon:
                mask |= 1 << i
        balls.append(mask)
    return _min_cover_size((1 << n) - 1, balls)


def simplex(n: int, lam) -> FiniteMetricSpace:
    """n points with every off-diagonal distance equal to lam (lam > 0).

    simplex(1, lam) is the one-point space regardless of lam.
    """
    if n < 1:
        raise DomainError(f"simplex needs n >= 1, got {n}")
    side = as_fraction(lam)
    if side <= 0:
        raise DomainError(f"simplex side must be > 0, got {side}")
    zero = Fraction(0)
    matrix = [[zero if i == j else side for j in range(n)] for i in range(n)]
    return FiniteMetricSpace.from_matrix(matrix)


def isolation_radius(space: FiniteMetricSpace, z: int) -> Fraction:
    """Distance from point z to the rest of the space: min over z' != z of d(z, z')."""
    if not 0 <= z < space.n:
        raise DomainError(f"point {z} out of range")
    if space.n == 1:
        raise DomainError("isolation radius is undefined on a one-point space")
    return min(space.dist[z][i] for i in range(space.n) if i != z)


def random_metric_space(n: int, seed: int) -> FiniteMetricSpace:
    """Deterministic random n-point metric space for a given seed.

    Draws a symmetric matrix of small positive rationals, then takes its
    shortest-path closure, which enforces the triangle inequality while
    keeping every off-diagonal entry positive.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    rng = random.Random(seed)
    zero = Fraction(0)
    d = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(1, 24), rng.choice((1, 2, 3, 4, 6)))
            d[i][j] = d[j][i] = v
    for k, i, j in itertools.product(range(n), repeat=3):
        through = d[i][k] + d[k][j]
        if through < d[i][j]:
            d[i][j] = through
    # closure of positive weights stays positive; assert rather than retry
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] <= 0:
                raise MetricValidationError(
                    validate_metric(d), "random matrix collapsed to a pseudometric"
                )
    return FiniteMetricSpace.from_matrix(d)
