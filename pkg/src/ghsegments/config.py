"""Run configuration: solver caps, parameter overrides, output locations.

A config file is a JSON object whose keys match RunConfig's fields;
command-line flags override file values, which override the defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exceptions import MalformedInputError
from .geodesics import DEFAULT_GRID
from .solver import SolverLimits
from .spaces import as_fraction

__all__ = ["RunConfig"]


@dataclass
class RunConfig:
    enumeration_cap: int = 20
    bnb_max_side: int = 10
    auto_exhaustive_cells: int = 16
    node_budget: int | None = None
    sample_grid: tuple = DEFAULT_GRID
    delta: Fraction | None = None
    mu: Fraction | None = None
    ms: tuple = (2, 3, 4)
    m_max: int = 5
    strict: bool = False
    seed: int = 0
    out: str | None = None
    out_dir: str | None = None

    def limits(self) -> SolverLimits:
        return SolverLimits(
            enumeration_cap=self.enumeration_cap,
            bnb_max_side=self.bnb_max_side,
            auto_exhaustive_cells=self.auto_exhaustive_cells,
            node_budget=self.node_budget,
        )

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        p = Path(path)
        try:
            obj = json.loads(p.read_text())
        except OSError as exc:
            raise MalformedInputError(f"cannot read config {p}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"config {p} is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedInputError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise MalformedInputError(
                f"unknown config keys: {', '.join(sorted(unknown))}"
            )
        cfg = cls()
        for key, value in obj.items():
            if key in ("delta", "mu") and value is not None:
                value = as_fraction(value)
            elif key == "sample_grid":
                value = tuple(as_fraction(v) for v in value)
            elif key == "ms":
                value = tuple(int(v) for v in value)
            setattr(cfg, key, value)
        return cfg

    def to_jsonable(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Fraction):
                v = str(v)
            elif isinstance(v, tuple):
                v = [str(x) if isinstance(x, Fraction) else x for x in v]
            out[f.name] = v
        return out
