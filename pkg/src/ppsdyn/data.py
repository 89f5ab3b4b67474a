"""Time-series ingestion, min-max normalization, and synthetic fixtures.

A Dataset always lives in normalized coordinates: times and the three
species-group columns (prey, predator, scavenger) each mapped to [0, 1],
with the raw ranges kept alongside so every value can be mapped back.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstantColumn,
    MissingColumn,
    NonNumericCell,
    TooFewSamples,
    UnmappedSpecies,
)
from .model import ModelParams, State
from .solver import SolverConfig, integrate

GROUPS = ("prey", "predator", "scavenger")
_EPS = 1e-12


@dataclass
class Dataset:
    """Normalized observations plus the affine maps back to raw units."""

    times: np.ndarray        # (T,), in [0,1], strictly increasing
    observations: np.ndarray  # (T, 3), columns (prey, predator, scavenger), in [0,1]
    mins: np.ndarray         # raw per-column minima
    maxs: np.ndarray
    t_start: float
    t_end: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.observations = np.asarray(self.observations, dtype=float)
        self.mins = np.asarray(self.mins, dtype=float)
        self.maxs = np.asarray(self.maxs, dtype=float)
        if self.times.ndim != 1 or self.times.size < 3:
            raise TooFewSamples(f"need at least 3 samples, got {self.times.size}")
        if self.observations.shape != (self.times.size, 3):
            raise ValueError("observations must have shape (T, 3)")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        lo = min(self.times.min(), self.observations.min())
        hi = max(self.times.max(), self.observations.max())
        if lo < -_EPS or hi > 1.0 + _EPS:
            raise ValueError("normalized values must lie in [0, 1]")
        if self.mins.shape != (3,) or self.maxs.shape != (3,):
            raise ValueError("mins and maxs must have 3 entries")
        if np.any(self.maxs - self.mins <= 0):
            raise ConstantColumn("raw column range must be positive")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")

    @property
    def sample_count(self) -> int:
        return int(self.times.size)

    @property
    def ranges(self) -> np.ndarray:
        return self.maxs - self.mins

    @property
    def raw_times(self) -> np.ndarray:
        return self.t_start + self.times * (self.t_end - self.t_start)

    @property
    def raw_observations(self) -> np.ndarray:
        return self.mins + self.observations * self.ranges

    def to_csv(self, path) -> None:
        """Write normalized rows as `t,x,y,z`; raw ranges and metadata go to a
        .provenance.json sidecar so from_csv can rebuild the dataset exactly."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,x,y,z\n")
            for t, row in zip(self.times, self.observations):
                fh.write(f"{float(t)!r},{float(row[0])!r},{float(row[1])!r},{float(row[2])!r}\n")
        sidecar = {
            "t_start": self.t_start,
            "t_end": self.t_end,
            "mins": [float(v) for v in self.mins],
            "maxs": [float(v) for v in self.maxs],
            "meta": self.meta,
        }
        with open(provenance_path(path), "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, sort_keys=True, indent=2)
            fh.write("\n")

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        times, obs = [], []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["t", "x", "y", "z"]:
                raise MissingColumn("expected header t,x,y,z")
            for line, row in enumerate(reader, start=2):
                if len(row) != 4:
                    raise NonNumericCell(f"row {line}: expected 4 cells")
                try:
                    vals = [float(c) for c in row]
                except ValueError as exc:
                    raise NonNumericCell(f"row {line}: {exc}") from exc
                times.append(vals[0])
                obs.append(vals[1:])
        side = provenance_path(path)
        if not os.path.exists(side):
            raise MissingColumn(f"provenance sidecar not found: {side}")
        with open(side, encoding="utf-8") as fh:
            info = json.load(fh)
        return cls(
            np.array(times),
            np.array(obs),
            np.array(info["mins"]),
            np.array(info["maxs"]),
            float(info["t_start"]),
            float(info["t_end"]),
            info.get("meta", {}),
        )


def provenance_path(csv_path) -> str:
    return os.path.splitext(str(csv_path))[0] + ".provenance.json"


@dataclass(frozen=True)
class SpeciesMap:
    """Species column name -> group; every group must be represented."""

    groups: dict

    def __post_init__(self):
        for name, grp in self.groups.items():
            if grp not in GROUPS:
                raise UnmappedSpecies(f"{name!r} mapped to unknown group {grp!r}")
        for grp in GROUPS:
            if grp not in self.groups.values():
                raise MissingColumn(f"species map has no {grp} entry")

    @classmethod
    def load(cls, path) -> "SpeciesMap":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls({str(k): str(v).strip().lower() for k, v in raw.items()})


def _normalize_column(values: np.ndarray, what: str):
    lo = float(values.min())
    hi = float(values.max())
    if hi - lo <= 0:
        raise ConstantColumn(f"{what} is constant; min-max scaling undefined")
    return (values - lo) / (hi - lo), lo, hi


def ingest(csv_path, species_map: SpeciesMap) -> Dataset:
    """Sum species counts within each group per row, then min-max normalize
    each group column and the time column independently.

    Fixed schema: header row, first column `year`, remaining columns species
    counts.  Rows are sorted by year; years must be distinct.
    """
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise MissingColumn("empty file: no header row")
    header = [h.strip() for h in rows[0]]
    if not header or header[0].lower() != "year":
        raise MissingColumn("first column must be 'year'")
    species = header[1:]
    if not species:
        raise MissingColumn("no species columns after 'year'")
    for name in species:
        if name not in species_map.groups:
            raise UnmappedSpecies(f"column {name!r} missing from the species map")
    group_cols = {
        grp: [ci for ci, name in enumerate(species) if species_map.groups[name] == grp]
        for grp in GROUPS
    }
    for grp, cols in group_cols.items():
        if not cols:
            raise MissingColumn(f"no CSV column mapped to {grp}")
    years = []
    sums = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise NonNumericCell(f"row {line}: expected {len(header)} cells, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError as exc:
            raise NonNumericCell(f"row {line}: {exc}") from exc
        years.append(vals[0])
        sums.append([sum(vals[1 + ci] for ci in group_cols[grp]) for grp in GROUPS])
    order = np.argsort(years)
    years = np.array(years)[order]
    raw = np.array(sums)[order]
    if np.any(np.diff(years) <= 0):
        raise ValueError("year column contains duplicates")
    tnorm, t0, t1 = _normalize_column(years, "year column")
    cols, mins, maxs = [], [], []
    for gi, grp in enumerate(GROUPS):
        col, lo, hi = _normalize_column(raw[:, gi], f"{grp} column")
        cols.append(col)
        mins.append(lo)
        maxs.append(hi)
    return Dataset(
        tnorm,
        np.column_stack(cols),
        np.array(mins),
        np.array(maxs),
        t0,
        t1,
        {"source": os.path.basename(str(csv_path))},
    )


def synthesize(
    p: ModelParams, s0, t_grid, noise_sigma: float = 0.0, seed: int = 0
) -> Dataset:
    """Integrate the model over t_grid, add seeded Gaussian noise scaled by
    each column's clean range, clamp at zero, and normalize."""
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise TooFewSamples("t_grid needs at least 3 points")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be nonnegative")
    cfg = SolverConfig(t_end=float(grid[-1]), abs_tol=1e-9, rel_tol=1e-9)
    start = State(float(s0[0]), float(s0[1]), float(s0[2]), float(grid[0]))
    traj = integrate(p, start, cfg, t_eval=grid)
    raw = np.array(traj.states, dtype=float)
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        span = raw.max(axis=0) - raw.min(axis=0)
        raw = raw + noise_sigma * span * rng.standard_normal(raw.shape)
        raw = np.maximum(raw, 0.0)
    tnorm = (grid - grid[0]) / (grid[-1] - grid[0])
    cols, mins, maxs = [], [], []
    for gi, grp in enumerate(GROUPS):
        col, lo, hi = _normalize_column(raw[:, gi], f"synthesized {grp} column")
        cols.append(col)
        mins.append(lo)
        maxs.append(hi)
    meta = {
        "generator": {
            "params": p.to_dict(),
            "s0": [float(v) for v in s0[:3]],
            "noise_sigma": float(noise_sigma),
            "seed": int(seed),
        }
    }
    return Dataset(
        tnorm,
        np.column_stack(cols),
        np.array(mins),
        np.array(maxs),
        float(grid[0]),
        float(grid[-1]),
        meta,
    )


def denormalize(ds: Dataset, s: State) -> State:
    """Inverse affine map, component-wise; the time coordinate maps back too."""
    raw = ds.mins + np.array([s.x, s.y, s.z]) * ds.ranges
    t = ds.t_start + s.t * (ds.t_end - ds.t_start)
    return State(float(raw[0]), float(raw[1]), float(raw[2]), float(t))


def normalize(ds: Dataset, s: State) -> State:
    norm = (np.array([s.x, s.y, s.z]) - ds.mins) / ds.ranges
    span = ds.t_end - ds.t_start
    t = (s.t - ds.t_start) / span
    return State(float(norm[0]), float(norm[1]), float(norm[2]), float(t))
