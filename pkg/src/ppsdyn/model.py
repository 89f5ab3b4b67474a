"""Model parameters, states, and the right-hand side of the population system.

Three interacting populations: prey x, predator y, scavenger z.  Predation
follows a type-III response x^2/(1 + c x^2) (saturating, sigmoidal); the
scavenger additionally feeds on predator carcasses through the bilinear
h*y*z term and is itself consumed by the predator.

    dx/dt = r x (1 - x/k) - a x^2 y / (1 + a0 x^2) - b x^2 z / (1 + b0 x^2)
    dy/dt = d x^2 y / (1 + a0 x^2) + f z^2 y / (1 + i0 z^2) - e y
    dz/dt = g x^2 z / (1 + b0 x^2) + h y z - i y z^2 / (1 + i0 z^2) - j z

All fourteen parameters are strictly positive.  The exponent in the type-III
response is fixed at 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from typing import NamedTuple

from .errors import MaskViolation, NumericalOverflow

PARAM_ORDER = ("r", "k", "a", "a0", "b", "b0", "d", "e", "f", "g", "h", "i", "i0", "j")


@dataclass(frozen=True)
class ModelParams:
    """The 14 positive model parameters.

    r: prey logistic growth rate          k: prey carrying capacity
    a: prey discovery rate (predator)     a0: prey handling time (predator)
    b: prey discovery rate (scavenger)    b0: prey handling time (scavenger)
    d: predator growth from prey          e: predator natural death rate
    f: predator growth from scavenger     g: scavenger growth from prey
    h: scavenge factor                    i: scavenger discovery rate (predator)
    i0: scavenger handling time           j: scavenger natural death rate

    Growth rates d, f, g are stored already multiplied by their conversion
    factors; no separate conversion symbols are modeled.
    """

    r: float
    k: float
    a: float
    a0: float
    b: float
    b0: float
    d: float
    e: float
    f: float
    g: float
    h: float
    i: float
    i0: float
    j: float

    def __post_init__(self):
        for fld in fields(self):
            v = getattr(self, fld.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"parameter {fld.name} must be a positive finite number, got {v!r}")
            object.__setattr__(self, fld.name, float(v))

    def as_array(self):
        import numpy as np

        return np.array([getattr(self, n) for n in PARAM_ORDER], dtype=float)

    @classmethod
    def from_array(cls, values) -> "ModelParams":
        vals = list(values)
        if len(vals) != len(PARAM_ORDER):
            raise ValueError(f"expected {len(PARAM_ORDER)} parameters, got {len(vals)}")
        return cls(**{n: float(v) for n, v in zip(PARAM_ORDER, vals)})

    def to_dict(self) -> dict:
        return {n: getattr(self, n) for n in PARAM_ORDER}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        extra = set(d) - set(PARAM_ORDER)
        if extra:
            raise ValueError(f"unknown parameter keys: {sorted(extra)}")
        missing = set(PARAM_ORDER) - set(d)
        if missing:
            raise ValueError(f"missing parameter keys: {sorted(missing)}")
        return cls(**{n: float(d[n]) for n in PARAM_ORDER})

    @classmethod
    def load(cls, path) -> "ModelParams":
        """Read the flat `key = value` text format; # starts a comment."""
        d = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
                key, _, val = line.partition("=")
                try:
                    d[key.strip()] = float(val)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: non-numeric value {val.strip()!r}") from None
        return cls.from_dict(d)

    def save(self, path):
        with open(path, "w") as fh:
            for n in PARAM_ORDER:
                fh.write(f"{n} = {getattr(self, n)!r}\n")


class State(NamedTuple):
    """Population triple with a bookkeeping time stamp (the dynamics are autonomous)."""

    x: float
    y: float
    z: float
    t: float = 0.0


class Derivative(NamedTuple):
    dx: float
    dy: float
    dz: float


class Subsystem(enum.Enum):
    """Which populations participate; masked-out components are pinned at zero."""

    FULL = (1, 1, 1)
    PRED_SCAV = (0, 1, 1)  # prey absent
    PRED_PREY = (1, 1, 0)  # scavenger absent
    SCAV_PREY = (1, 0, 1)  # predator absent

    @property
    def mask(self):
        return self.value

    @classmethod
    def parse(cls, name: str) -> "Subsystem":
        table = {
            "full": cls.FULL,
            "predscav": cls.PRED_SCAV,
            "predprey": cls.PRED_PREY,
            "scavprey": cls.SCAV_PREY,
        }
        try:
            return table[name.lower().replace("-", "").replace("_", "")]
        except KeyError:
            raise ValueError(f"unknown subsystem {name!r}; expected one of {sorted(table)}") from None


def holling3(u: float, rate: float, handle: float) -> float:
    """Type-III functional response rate*u^2 / (1 + handle*u^2), exponent fixed at 2."""
    u2 = u * u
    return rate * u2 / (1.0 + handle * u2)


def rhs(s, p: ModelParams) -> Derivative:
    """Full-system derivative at state s = (x, y, z[, t]).

    Raises NumericalOverflow if the result is non-finite.
    """
    d = make_rhs(p)(float(s[0]), float(s[1]), float(s[2]))
    if not all(map(math.isfinite, d)):
        raise NumericalOverflow(f"non-finite derivative at state {tuple(s[:3])}")
    return Derivative(*d)


def rhs_subsystem(s, p: ModelParams, mask: Subsystem) -> Derivative:
    """Derivative of the selected subsystem; the masked species must sit at zero."""
    mx, my, mz = mask.mask
    if (not mx and s[0] != 0) or (not my and s[1] != 0) or (not mz and s[2] != 0):
        raise MaskViolation(f"state {tuple(s[:3])} has a nonzero masked component for {mask.name}")
    d = make_rhs(p, mask)(float(s[0]), float(s[1]), float(s[2]))
    if not all(map(math.isfinite, d)):
        raise NumericalOverflow(f"non-finite derivative at state {tuple(s[:3])}")
    return Derivative(*d)


def make_rhs(p: ModelParams, mask: Subsystem = Subsystem.FULL):
    """Closure evaluating the (masked) derivative on plain floats.

    This is the integrator's hot path: no validation, no array allocation.
    Masked components have their derivative zeroed, which keeps the species
    at zero exactly and makes one code path serve all four subsystems.
    """
    r, k, a, a0, b, b0, d, e, f, g, h, i, i0, j = (getattr(p, n) for n in PARAM_ORDER)
    mx, my, mz = (float(v) for v in mask.mask)

    def deriv(x: float, y: float, z: float):
        x2 = x * x
        z2 = z * z
        qa = 1.0 + a0 * x2
        qb = 1.0 + b0 * x2
        qi = 1.0 + i0 * z2
        return (
            mx * (r * x * (1.0 - x / k) - a * x2 * y / qa - b * x2 * z / qb),
            my * (d * x2 * y / qa + f * z2 * y / qi - e * y),
            mz * (g * x2 * z / qb + h * y * z - i * y * z2 / qi - j * z),
        )

    return deriv
