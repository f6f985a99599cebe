"""Run configuration: a single TOML or JSON file fully determines a run."""

from __future__ import annotations

import dataclasses
import json

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence


@dataclass
class MeshSpec:
    """Mesh recipe: background cells plus an optional split band.

    Exactly one of ``alpha`` (constant volume fraction) or ``seed`` (random
    fractions alpha_k = 1e-2 X_k) applies when ``band`` is set; with no band
    the mesh is plain equidistant.
    """

    n: int = 100
    band: Optional[Sequence[float]] = None
    alpha: Optional[float] = None
    seed: Optional[int] = None
    domain: Optional[Sequence[float]] = None   # None -> experiment default


@dataclass
class LimiterSpec:
    enabled: bool = False
    positivity: bool = False
    cut_postprocess: bool = True


@dataclass
class RunConfig:
    """Everything needed to reproduce a run (determinism contract)."""

    equation: str = "burgers"
    flux: Optional[str] = None          # None -> equation default
    case: Optional[str] = None          # manufactured case key, if any
    p: int = 1
    p_list: Optional[Sequence[int]] = None
    nu: float = 0.4
    order: Optional[int] = None         # None -> p + 1
    bc: str = "periodic"
    final_time: Optional[float] = None  # None -> case default
    beta: float = 1.0                   # advection speed
    legacy_j1: bool = False
    n_list: Sequence[int] = (20, 40, 80, 160)
    mesh: MeshSpec = field(default_factory=MeshSpec)
    limiter: LimiterSpec = field(default_factory=LimiterSpec)
    output_dir: str = "out"
    label: str = ""

    def to_dict(self):
        return dataclasses.asdict(self)


def _from_dict(data):
    data = dict(data)
    mesh = MeshSpec(**data.pop("mesh", {}))
    limiter = LimiterSpec(**data.pop("limiter", {}))
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(mesh=mesh, limiter=limiter, **data)


def load_config(path):
    """Parse a RunConfig from a ``.toml`` or ``.json`` file."""
    path = Path(path)
    if path.suffix == ".toml":
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    elif path.suffix == ".json":
        with open(path) as fh:
            data = json.load(fh)
    else:
        raise ValueError(f"config must be .toml or .json, got {path.name}")
    return _from_dict(data)
