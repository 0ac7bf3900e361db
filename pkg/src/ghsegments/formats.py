"""On-disk formats: spaces as JSON or CSV, correspondences as JSON.

Rationals travel as "p/q" strings (or bare integers on input); floats
are refused because they cannot round-trip exactly. Both space formats
carry labels plus the full square matrix and are validated on ingestion,
so an asymmetric file is rejected with the violating witness pair.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from .correspondences import Correspondence
from .exceptions import MalformedInputError
from .spaces import FiniteMetricSpace, as_fraction

__all__ = [
    "frac_str",
    "space_to_jsonable",
    "space_from_jsonable",
    "space_to_csv",
    "space_from_csv",
    "load_candidate",
    "load_space",
    "save_space",
    "correspondence_to_jsonable",
    "correspondence_from_jsonable",
]


def frac_str(q: Fraction) -> str:
    return str(Fraction(q))


def space_to_jsonable(space: FiniteMetricSpace) -> dict:
    return {
        "labels": list(space.labels),
        "dist": [[frac_str(v) for v in row] for row in space.dist],
    }


def _candidate_from_jsonable(obj):
    if not isinstance(obj, dict) or "dist" not in obj:
        raise MalformedInputError('expected an object with a "dist" matrix')
    dist = obj["dist"]
    if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
        raise MalformedInputError('"dist" must be a list of rows')
    labels = obj.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or not all(isinstance(l, str) for l in labels)
    ):
        raise MalformedInputError('"labels" must be a list of strings')
    matrix = [[as_fraction(v) for v in row] for row in dist]
    return labels, matrix


def space_from_jsonable(obj) -> FiniteMetricSpace:
    labels, matrix = _candidate_from_jsonable(obj)
    return FiniteMetricSpace.from_matrix(matrix, labels)


def space_to_csv(space: FiniteMetricSpace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(space.labels)
    for row in space.dist:
        writer.writerow([frac_str(v) for v in row])
    return buf.getvalue()


def _candidate_from_csv(text: str):
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise MalformedInputError("empty CSV")
    labels = [c.strip() for c in rows[0]]
    if len(rows) != len(labels) + 1:
        raise MalformedInputError(
            f"CSV needs a header row plus {len(labels)} matrix rows, got "
            f"{len(rows) - 1} rows"
        )
    matrix = [[as_fraction(c.strip()) for c in row] for row in rows[1:]]
    return labels, matrix


def space_from_csv(text: str) -> FiniteMetricSpace:
    labels, matrix = _candidate_from_csv(text)
    return FiniteMetricSpace.from_matrix(matrix, labels)


def load_candidate(path):
    """Parse a space file without checking the metric axioms.

    Returns (labels_or_None, matrix of Fractions); the validate command
    uses this so axiom violations become a report, not a crash.
    """
    p = Path(path)
    suffix = _known_suffix(p)
    try:
        text = p.read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {p}: {exc}") from exc
    if suffix == ".csv":
        return _candidate_from_csv(text)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{p} is not valid JSON: {exc}") from exc
    return _candidate_from_jsonable(obj)


def _known_suffix(p: Path) -> str:
    suffix = p.suffix.lower()
    if suffix not in (".json", ".csv"):
        raise MalformedInputError(
            f"unsupported space file suffix {p.suffix!r} (use .json or .csv)"
        )
    return suffix


def load_space(path) -> FiniteMetricSpace:
    labels, matrix = load_candidate(path)
    return FiniteMetricSpace.from_matrix(matrix, labels)


def save_space(space: FiniteMetricSpace, path) -> None:
    p = Path(path)
    if _known_suffix(p) == ".csv":
        p.write_text(space_to_csv(space))
    else:
        p.write_text(json.dumps(space_to_jsonable(space), indent=2) + "\n")


def correspondence_to_jsonable(
    R: Correspondence, X: FiniteMetricSpace, Y: FiniteMetricSpace
) -> list[list[str]]:
    if R.nx != X.n or R.ny != Y.n:
        raise MalformedInputError("correspondence shape does not match the spaces")
    return [[X.labels[a], Y.labels[b]] for a, b in R.sorted_pairs()]


def correspondence_from_jsonable(
    obj, X: FiniteMetricSpace, Y: FiniteMetricSpace
) -> Correspondence:
    if not isinstance(obj, list):
        raise MalformedInputError("expected a list of [x_label, y_label] pairs")
    pairs = set()
    for item in obj:
        if not isinstance(item, list) or len(item) != 2:
            raise MalformedInputError(f"bad pair entry {item!r}")
        pairs.add((X.index_of(item[0]), Y.index_of(item[1])))
    return Correspondence(frozenset(pairs), X.n, Y.n)
