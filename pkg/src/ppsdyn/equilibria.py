"""Steady states of the full system and its three two-species subsystems.

Candidate list for the full system: the origin, the prey-only point (k,0,0),
one boundary point per subsystem (prey absent / scavenger absent / predator
absent), and the interior coexistence point.  Nonexistence is a finding, not
a failure: every candidate is returned together with its named existence
checks and their numeric values.

The interior point is located two independent ways: a 1-D scan-and-bisect
over x (authoritative), and the positive real roots of a degree-12
polynomial whose coefficients are transcribed in interior_poly_coeffs.  The
two routes are cross-checked but never collapsed into one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np

from .errors import MultipleRoots, NoRoot
from .model import ModelParams, Subsystem

RESIDUAL_TOL = 1e-8
MERGE_TOL = 1e-9

LABEL_ORIGIN = "Origin"
LABEL_PREY_ONLY = "PreyOnly"
LABEL_PRED_SCAV = "PredScav"
LABEL_PRED_PREY = "PredPrey"
LABEL_SCAV_PREY = "ScavPrey"
LABEL_INTERIOR = "Interior"


class ExistenceCheck(NamedTuple):
    name: str
    satisfied: bool
    value: float


@dataclass
class Equilibrium:
    """A candidate steady state.

    point is None when the existence conditions fail and no meaningful
    coordinates can be computed.  aux carries auxiliary solve quantities
    (x0/z0 and the interior existence bounds).  flag marks degenerate
    outcomes such as a non-unique interior root.
    """

    label: str
    subsystem: Subsystem
    point: Optional[tuple]
    exists: bool
    existence: list = field(default_factory=list)
    aux: dict = field(default_factory=dict)
    flag: Optional[str] = None

    def record(self) -> dict:
        """Plain-dict form for JSON reports; stability verdict attached by the caller."""
        return {
            "label": self.label,
            "subsystem": self.subsystem.name,
            "point": list(self.point) if self.point is not None else None,
            "exists": self.exists,
            "existence": [
                {"name": c.name, "satisfied": c.satisfied, "value": c.value} for c in self.existence
            ],
            "aux": dict(self.aux),
            "flag": self.flag,
        }


def _origin(sub: Subsystem) -> Equilibrium:
    return Equilibrium(LABEL_ORIGIN, sub, (0.0, 0.0, 0.0), True)


def _prey_only(p: ModelParams, sub: Subsystem) -> Equilibrium:
    return Equilibrium(LABEL_PREY_ONLY, sub, (p.k, 0.0, 0.0), True)


def predscav_equilibria(p: ModelParams) -> list:
    """Steady states with the prey absent: (0,0) and the predator-scavenger point.

    The coexistence point solves f z^2/(1+i0 z^2) = e for z, then reads y off
    the z-equation; it requires f - i0*e > 0 (real z0) and h*f*z0 - i*e > 0
    (positive y).  Points are reported in (x, y, z) order.
    """
    out = [_origin(Subsystem.PRED_SCAV)]
    c1 = p.f - p.i0 * p.e
    checks = [ExistenceCheck("f - i0*e > 0", c1 > 0, c1)]
    aux = {}
    if c1 > 0:
        z0 = math.sqrt(p.e / c1)
        aux["z0"] = z0
        c2 = p.h * p.f * z0 - p.i * p.e
        checks.append(ExistenceCheck("h*f*z0 - i*e > 0", c2 > 0, c2))
        if c2 > 0:
            y = p.f * p.j * z0 / c2
            out.append(Equilibrium(LABEL_PRED_SCAV, Subsystem.PRED_SCAV, (0.0, y, z0), True, checks, aux))
            return out
    out.append(Equilibrium(LABEL_PRED_SCAV, Subsystem.PRED_SCAV, None, False, checks, aux))
    return out


def predprey_equilibria(p: ModelParams) -> list:
    """Steady states with the scavenger absent: (0,0), (k,0), and the interior pair."""
    out = [_origin(Subsystem.PRED_PREY), _prey_only(p, Subsystem.PRED_PREY)]
    c1 = p.d - p.a0 * p.e
    checks = [ExistenceCheck("d - a0*e > 0", c1 > 0, c1)]
    aux = {}
    if c1 > 0:
        x0 = math.sqrt(p.e / c1)
        aux["x0"] = x0
        checks.append(ExistenceCheck("0 < x0 < k", 0 < x0 < p.k, x0))
        if 0 < x0 < p.k:
            y = p.d * p.r * x0 * (p.k - x0) / (p.a * p.e * p.k)
            out.append(Equilibrium(LABEL_PRED_PREY, Subsystem.PRED_PREY, (x0, y, 0.0), True, checks, aux))
            return out
    out.append(Equilibrium(LABEL_PRED_PREY, Subsystem.PRED_PREY, None, False, checks, aux))
    return out


def scavprey_equilibria(p: ModelParams) -> list:
    """Steady states with the predator absent; mirrors the predator-prey case
    with (g, b, b0, j) in place of (d, a, a0, e)."""
    out = [_origin(Subsystem.SCAV_PREY), _prey_only(p, Subsystem.SCAV_PREY)]
    c1 = p.g - p.b0 * p.j
    checks = [ExistenceCheck("g - b0*j > 0", c1 > 0, c1)]
    aux = {}
    if c1 > 0:
        x0 = math.sqrt(p.j / c1)
        aux["x0"] = x0
        checks.append(ExistenceCheck("0 < x0 < k", 0 < x0 < p.k, x0))
        if 0 < x0 < p.k:
            z = p.g * p.r * x0 * (p.k - x0) / (p.b * p.j * p.k)
            out.append(Equilibrium(LABEL_SCAV_PREY, Subsystem.SCAV_PREY, (x0, 0.0, z), True, checks, aux))
            return out
    out.append(Equilibrium(LABEL_SCAV_PREY, Subsystem.SCAV_PREY, None, False, checks, aux))
    return out


# --- interior point, route 1: 1-D scan and bisect -----------------------------

SCAN_POINTS = 4096
BISECT_TOL = 1e-12


def _interior_z2(x: float, p: ModelParams) -> float:
    # z^2 from the predator equation at y != 0:
    #   d x^2/(1+a0 x^2) + f z^2/(1+i0 z^2) = e
    N = p.e + (p.a0 * p.e - p.d) * x * x
    D = p.f * (1.0 + p.a0 * x * x) - p.i0 * N
    if D == 0:
        return math.nan
    return N / D


def _interior_y(x: float, z: float, p: ModelParams) -> float:
    # y from the scavenger equation at z != 0:
    #   g x^2/(1+b0 x^2) + h y - i y z/(1+i0 z^2) = j
    # which gives y = (j - g x^2/(1+b0 x^2)) * (1+i0 z^2) / (h (1+i0 z^2) - i z)
    M = p.j - p.g * x * x / (1.0 + p.b0 * x * x)
    qi = 1.0 + p.i0 * z * z
    den = p.h * qi - p.i * z
    if den == 0:
        return math.nan
    return M * qi / den


def _prey_residual(x: float, p: ModelParams) -> float:
    """dx/dt = 0 residual (divided by x) along the curve z(x), y(x); NaN off the domain."""
    w = _interior_z2(x, p)
    if not math.isfinite(w) or w <= 0:
        return math.nan
    z = math.sqrt(w)
    y = _interior_y(x, z, p)
    if not math.isfinite(y) or y <= 0:
        return math.nan
    return (
        p.r * (1.0 - x / p.k)
        - p.a * x * y / (1.0 + p.a0 * x * x)
        - p.b * x * z / (1.0 + p.b0 * x * x)
    )


def interior_equilibrium_direct(p: ModelParams) -> Equilibrium:
    """Locate the interior coexistence point by scanning x over (0, k).

    For each x the predator equation fixes z, the scavenger equation fixes y,
    and the prey equation supplies a scalar residual; its unique admissible
    sign change is refined by bisection.  Raises NoRoot / MultipleRoots when
    the count is not exactly one.
    """
    xs = np.linspace(0.0, p.k, SCAN_POINTS + 2)[1:-1]
    vals = [_prey_residual(float(x), p) for x in xs]
    roots = []
    for idx in range(len(xs) - 1):
        f0, f1 = vals[idx], vals[idx + 1]
        if math.isnan(f0) or math.isnan(f1) or f0 * f1 > 0:
            continue
        lo, hi = float(xs[idx]), float(xs[idx + 1])
        flo = f0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = _prey_residual(mid, p)
            if math.isnan(fm):
                break
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
            if hi - lo < BISECT_TOL:
                break
        root = 0.5 * (lo + hi)
        res = _prey_residual(root, p)
        if math.isfinite(res) and abs(res) < 1e-6:
            roots.append(root)
    # adjacent brackets can converge onto the same root when it falls on a grid point
    merged = []
    for rt in roots:
        if not merged or abs(rt - merged[-1]) > MERGE_TOL * max(1.0, p.k):
            merged.append(rt)
    if not merged:
        raise NoRoot("no admissible interior root in (0, k)")
    if len(merged) > 1:
        raise MultipleRoots(merged)

    x = merged[0]
    z = math.sqrt(_interior_z2(x, p))
    y = _interior_y(x, z, p)
    bound_prey = p.r * (1.0 + p.b0 * x * x) * (p.k - x) / (p.b * x)
    bound_pred = p.i * p.e / (p.h * p.f)
    bound = min(bound_prey, bound_pred)
    checks = [
        ExistenceCheck("unique positive real root", True, float(len(merged))),
        ExistenceCheck("z* < min(r(1+b0 x*^2)(k-x*)/(b x*), i*e/(h*f))", z < bound, bound),
    ]
    aux = {"x_star": x, "bound_prey": bound_prey, "bound_pred": bound_pred}
    return Equilibrium(LABEL_INTERIOR, Subsystem.FULL, (x, y, z), True, checks, aux)


# --- interior point, route 2: degree-12 polynomial in x ------------------------


def interior_poly_coeffs(p: ModelParams) -> np.ndarray:
    """Coefficients p_0..p_12 (ascending) of the interior-point polynomial in x.

    Obtained by eliminating y and z from the steady-state equations.  Each
    coefficient is one transcribed sum-of-monomials expression; one term per
    line so the table can be proofread.
    """
    r, k, a, a0, b, b0, d, e, f, g, h, i, i0, j = (
        p.r, p.k, p.a, p.a0, p.b, p.b0, p.d, p.e, p.f, p.g, p.h, p.i, p.i0, p.j,
    )
    p0 = (
        + e**3*i**2*i0**2*k**2*r**2
        - 2*e**2*f*i**2*i0*k**2*r**2
        + e*f**2*h**2*i0*k**2*r**2
        + e*f**2*i**2*k**2*r**2
        - f**3*h**2*k**2*r**2
    )
    p1 = (
        - 2*a*e*f**2*h*i0*j*k**2*r
        - 2*e**3*i**2*i0**2*k*r**2
        + 2*a*f**3*h*j*k**2*r
        + 4*e**2*f*i**2*i0*k*r**2
        - 2*e*f**2*h**2*i0*k*r**2
        - 2*e*f**2*i**2*k*r**2
        + 2*f**3*h**2*k*r**2
    )
    p2 = (
        + 3*a0*e**3*i**2*i0**2*k**2*r**2
        + 2*b0*e**3*i**2*i0**2*k**2*r**2
        - 6*a0*e**2*f*i**2*i0*k**2*r**2
        + 3*a0*e*f**2*h**2*i0*k**2*r**2
        - 4*b0*e**2*f*i**2*i0*k**2*r**2
        + 2*b0*e*f**2*h**2*i0*k**2*r**2
        - 3*d*e**2*i**2*i0**2*k**2*r**2
        + a**2*e*f**2*i0*j**2*k**2
        - 2*a*b*e**2*f*i*i0*j*k**2
        + 3*a0*e*f**2*i**2*k**2*r**2
        - 3*a0*f**3*h**2*k**2*r**2
        + b**2*e**3*i**2*i0*k**2
        + 2*b0*e*f**2*i**2*k**2*r**2
        - 2*b0*f**3*h**2*k**2*r**2
        + 4*d*e*f*i**2*i0*k**2*r**2
        - d*f**2*h**2*i0*k**2*r**2
        - a**2*f**3*j**2*k**2
        + 2*a*b*e*f**2*i*j*k**2
        + 2*a*e*f**2*h*i0*j*k*r
        - b**2*e**2*f*i**2*k**2
        + b**2*e*f**2*h**2*k**2
        - d*f**2*i**2*k**2*r**2
        + e**3*i**2*i0**2*r**2
        - 2*a*f**3*h*j*k*r
        - 2*e**2*f*i**2*i0*r**2
        + e*f**2*h**2*i0*r**2
        + e*f**2*i**2*r**2
        - f**3*h**2*r**2
    )
    p3 = (
        - 4*a*a0*e*f**2*h*i0*j*k**2*r
        - 4*a*b0*e*f**2*h*i0*j*k**2*r
        - 6*a0*e**3*i**2*i0**2*k*r**2
        - 4*b0*e**3*i**2*i0**2*k*r**2
        + 4*a*a0*f**3*h*j*k**2*r
        + 4*a*b0*f**3*h*j*k**2*r
        + 2*a*d*f**2*h*i0*j*k**2*r
        + 2*a*e*f**2*g*h*i0*k**2*r
        + 12*a0*e**2*f*i**2*i0*k*r**2
        - 6*a0*e*f**2*h**2*i0*k*r**2
        + 8*b0*e**2*f*i**2*i0*k*r**2
        - 4*b0*e*f**2*h**2*i0*k*r**2
        + 6*d*e**2*i**2*i0**2*k*r**2
        - 2*a*f**3*g*h*k**2*r
        - 6*a0*e*f**2*i**2*k*r**2
        + 6*a0*f**3*h**2*k*r**2
        - 4*b0*e*f**2*i**2*k*r**2
        + 4*b0*f**3*h**2*k*r**2
        - 8*d*e*f*i**2*i0*k*r**2
        + 2*d*f**2*h**2*i0*k*r**2
        + 2*d*f**2*i**2*k*r**2
    )
    p4 = (
        + 3*a0**2*e**3*i**2*i0**2*k**2*r**2
        + 6*a0*b0*e**3*i**2*i0**2*k**2*r**2
        + b0**2*e**3*i**2*i0**2*k**2*r**2
        - 6*a0**2*e**2*f*i**2*i0*k**2*r**2
        + 3*a0**2*e*f**2*h**2*i0*k**2*r**2
        - 12*a0*b0*e**2*f*i**2*i0*k**2*r**2
        + 6*a0*b0*e*f**2*h**2*i0*k**2*r**2
        - 6*a0*d*e**2*i**2*i0**2*k**2*r**2
        - 2*b0**2*e**2*f*i**2*i0*k**2*r**2
        + b0**2*e*f**2*h**2*i0*k**2*r**2
        - 6*b0*d*e**2*i**2*i0**2*k**2*r**2
        + a**2*a0*e*f**2*i0*j**2*k**2
        + 2*a**2*b0*e*f**2*i0*j**2*k**2
        - 4*a*a0*b*e**2*f*i*i0*j*k**2
        - 2*a*b*b0*e**2*f*i*i0*j*k**2
        + 3*a0**2*e*f**2*i**2*k**2*r**2
        - 3*a0**2*f**3*h**2*k**2*r**2
        + 3*a0*b**2*e**3*i**2*i0*k**2
        + 6*a0*b0*e*f**2*i**2*k**2*r**2
        - 6*a0*b0*f**3*h**2*k**2*r**2
        + 8*a0*d*e*f*i**2*i0*k**2*r**2
        - 2*a0*d*f**2*h**2*i0*k**2*r**2
        + b0**2*e*f**2*i**2*k**2*r**2
        - b0**2*f**3*h**2*k**2*r**2
        + 8*b0*d*e*f*i**2*i0*k**2*r**2
        - 2*b0*d*f**2*h**2*i0*k**2*r**2
        + 3*d**2*e*i**2*i0**2*k**2*r**2
        - a**2*a0*f**3*j**2*k**2
        - 2*a**2*b0*f**3*j**2*k**2
        - a**2*d*f**2*i0*j**2*k**2
        - 2*a**2*e*f**2*g*i0*j*k**2
        + 4*a*a0*b*e*f**2*i*j*k**2
        + 4*a*a0*e*f**2*h*i0*j*k*r
        + 2*a*b*b0*e*f**2*i*j*k**2
        + 4*a*b*d*e*f*i*i0*j*k**2
        + 2*a*b*e**2*f*g*i*i0*k**2
        + 4*a*b0*e*f**2*h*i0*j*k*r
        - 3*a0*b**2*e**2*f*i**2*k**2
        + 3*a0*b**2*e*f**2*h**2*k**2
        - 2*a0*d*f**2*i**2*k**2*r**2
        + 3*a0*e**3*i**2*i0**2*r**2
        - 3*b**2*d*e**2*i**2*i0*k**2
        - 2*b0*d*f**2*i**2*k**2*r**2
        + 2*b0*e**3*i**2*i0**2*r**2
        - 2*d**2*f*i**2*i0*k**2*r**2
        + 2*a**2*f**3*g*j*k**2
        - 4*a*a0*f**3*h*j*k*r
        - 2*a*b*d*f**2*i*j*k**2
        - 2*a*b*e*f**2*g*i*k**2
        - 4*a*b0*f**3*h*j*k*r
        - 2*a*d*f**2*h*i0*j*k*r
        - 2*a*e*f**2*g*h*i0*k*r
        - 6*a0*e**2*f*i**2*i0*r**2
        + 3*a0*e*f**2*h**2*i0*r**2
        + 2*b**2*d*e*f*i**2*k**2
        - b**2*d*f**2*h**2*k**2
        - 4*b0*e**2*f*i**2*i0*r**2
        + 2*b0*e*f**2*h**2*i0*r**2
        - 3*d*e**2*i**2*i0**2*r**2
        + 2*a*f**3*g*h*k*r
        + 3*a0*e*f**2*i**2*r**2
        - 3*a0*f**3*h**2*r**2
        + 2*b0*e*f**2*i**2*r**2
        - 2*b0*f**3*h**2*r**2
        + 4*d*e*f*i**2*i0*r**2
        - d*f**2*h**2*i0*r**2
        - d*f**2*i**2*r**2
    )
    p5 = (
        - 2*a*a0**2*e*f**2*h*i0*j*k**2*r
        - 8*a*a0*b0*e*f**2*h*i0*j*k**2*r
        - 2*a*b0**2*e*f**2*h*i0*j*k**2*r
        - 6*a0**2*e**3*i**2*i0**2*k*r**2
        - 12*a0*b0*e**3*i**2*i0**2*k*r**2
        - 2*b0**2*e**3*i**2*i0**2*k*r**2
        + 2*a*a0**2*f**3*h*j*k**2*r
        + 8*a*a0*b0*f**3*h*j*k**2*r
        + 2*a*a0*d*f**2*h*i0*j*k**2*r
        + 4*a*a0*e*f**2*g*h*i0*k**2*r
        + 2*a*b0**2*f**3*h*j*k**2*r
        + 4*a*b0*d*f**2*h*i0*j*k**2*r
        + 2*a*b0*e*f**2*g*h*i0*k**2*r
        + 12*a0**2*e**2*f*i**2*i0*k*r**2
        - 6*a0**2*e*f**2*h**2*i0*k*r**2
        + 24*a0*b0*e**2*f*i**2*i0*k*r**2
        - 12*a0*b0*e*f**2*h**2*i0*k*r**2
        + 12*a0*d*e**2*i**2*i0**2*k*r**2
        + 4*b0**2*e**2*f*i**2*i0*k*r**2
        - 2*b0**2*e*f**2*h**2*i0*k*r**2
        + 12*b0*d*e**2*i**2*i0**2*k*r**2
        - 4*a*a0*f**3*g*h*k**2*r
        - 2*a*b0*f**3*g*h*k**2*r
        - 2*a*d*f**2*g*h*i0*k**2*r
        - 6*a0**2*e*f**2*i**2*k*r**2
        + 6*a0**2*f**3*h**2*k*r**2
        - 12*a0*b0*e*f**2*i**2*k*r**2
        + 12*a0*b0*f**3*h**2*k*r**2
        - 16*a0*d*e*f*i**2*i0*k*r**2
        + 4*a0*d*f**2*h**2*i0*k*r**2
        - 2*b0**2*e*f**2*i**2*k*r**2
        + 2*b0**2*f**3*h**2*k*r**2
        - 16*b0*d*e*f*i**2*i0*k*r**2
        + 4*b0*d*f**2*h**2*i0*k*r**2
        - 6*d**2*e*i**2*i0**2*k*r**2
        + 4*a0*d*f**2*i**2*k*r**2
        + 4*b0*d*f**2*i**2*k*r**2
        + 4*d**2*f*i**2*i0*k*r**2
    )
    p6 = (
        + a0**3*e**3*i**2*i0**2*k**2*r**2
        + 6*a0**2*b0*e**3*i**2*i0**2*k**2*r**2
        + 3*a0*b0**2*e**3*i**2*i0**2*k**2*r**2
        - 2*a0**3*e**2*f*i**2*i0*k**2*r**2
        + a0**3*e*f**2*h**2*i0*k**2*r**2
        - 12*a0**2*b0*e**2*f*i**2*i0*k**2*r**2
        + 6*a0**2*b0*e*f**2*h**2*i0*k**2*r**2
        - 3*a0**2*d*e**2*i**2*i0**2*k**2*r**2
        - 6*a0*b0**2*e**2*f*i**2*i0*k**2*r**2
        + 3*a0*b0**2*e*f**2*h**2*i0*k**2*r**2
        - 12*a0*b0*d*e**2*i**2*i0**2*k**2*r**2
        - 3*b0**2*d*e**2*i**2*i0**2*k**2*r**2
        + 2*a**2*a0*b0*e*f**2*i0*j**2*k**2
        + a**2*b0**2*e*f**2*i0*j**2*k**2
        - 2*a*a0**2*b*e**2*f*i*i0*j*k**2
        - 4*a*a0*b*b0*e**2*f*i*i0*j*k**2
        + a0**3*e*f**2*i**2*k**2*r**2
        - a0**3*f**3*h**2*k**2*r**2
        + 3*a0**2*b**2*e**3*i**2*i0*k**2
        + 6*a0**2*b0*e*f**2*i**2*k**2*r**2
        - 6*a0**2*b0*f**3*h**2*k**2*r**2
        + 4*a0**2*d*e*f*i**2*i0*k**2*r**2
        - a0**2*d*f**2*h**2*i0*k**2*r**2
        + 3*a0*b0**2*e*f**2*i**2*k**2*r**2
        - 3*a0*b0**2*f**3*h**2*k**2*r**2
        + 16*a0*b0*d*e*f*i**2*i0*k**2*r**2
        - 4*a0*b0*d*f**2*h**2*i0*k**2*r**2
        + 3*a0*d**2*e*i**2*i0**2*k**2*r**2
        + 4*b0**2*d*e*f*i**2*i0*k**2*r**2
        - b0**2*d*f**2*h**2*i0*k**2*r**2
        + 6*b0*d**2*e*i**2*i0**2*k**2*r**2
        - 2*a**2*a0*b0*f**3*j**2*k**2
        - 2*a**2*a0*e*f**2*g*i0*j*k**2
        - a**2*b0**2*f**3*j**2*k**2
        - 2*a**2*b0*d*f**2*i0*j**2*k**2
        - 2*a**2*b0*e*f**2*g*i0*j*k**2
        + 2*a*a0**2*b*e*f**2*i*j*k**2
        + 2*a*a0**2*e*f**2*h*i0*j*k*r
        + 4*a*a0*b*b0*e*f**2*i*j*k**2
        + 4*a*a0*b*d*e*f*i*i0*j*k**2
        + 4*a*a0*b*e**2*f*g*i*i0*k**2
        + 8*a*a0*b0*e*f**2*h*i0*j*k*r
        + 4*a*b*b0*d*e*f*i*i0*j*k**2
        + 2*a*b0**2*e*f**2*h*i0*j*k*r
        - 3*a0**2*b**2*e**2*f*i**2*k**2
        + 3*a0**2*b**2*e*f**2*h**2*k**2
        - a0**2*d*f**2*i**2*k**2*r**2
        + 3*a0**2*e**3*i**2*i0**2*r**2
        - 6*a0*b**2*d*e**2*i**2*i0*k**2
        - 4*a0*b0*d*f**2*i**2*k**2*r**2
        + 6*a0*b0*e**3*i**2*i0**2*r**2
        - 2*a0*d**2*f*i**2*i0*k**2*r**2
        - b0**2*d*f**2*i**2*k**2*r**2
        + b0**2*e**3*i**2*i0**2*r**2
        - 4*b0*d**2*f*i**2*i0*k**2*r**2
        - d**3*i**2*i0**2*k**2*r**2
        + 2*a**2*a0*f**3*g*j*k**2
        + 2*a**2*b0*f**3*g*j*k**2
        + 2*a**2*d*f**2*g*i0*j*k**2
        + a**2*e*f**2*g**2*i0*k**2
        - 2*a*a0**2*f**3*h*j*k*r
        - 2*a*a0*b*d*f**2*i*j*k**2
        - 4*a*a0*b*e*f**2*g*i*k**2
        - 8*a*a0*b0*f**3*h*j*k*r
        - 2*a*a0*d*f**2*h*i0*j*k*r
        - 4*a*a0*e*f**2*g*h*i0*k*r
        - 2*a*b*b0*d*f**2*i*j*k**2
        - 2*a*b*d**2*f*i*i0*j*k**2
        - 4*a*b*d*e*f*g*i*i0*k**2
        - 2*a*b0**2*f**3*h*j*k*r
        - 4*a*b0*d*f**2*h*i0*j*k*r
        - 2*a*b0*e*f**2*g*h*i0*k*r
        - 6*a0**2*e**2*f*i**2*i0*r**2
        + 3*a0**2*e*f**2*h**2*i0*r**2
        + 4*a0*b**2*d*e*f*i**2*k**2
        - 2*a0*b**2*d*f**2*h**2*k**2
        - 12*a0*b0*e**2*f*i**2*i0*r**2
        + 6*a0*b0*e*f**2*h**2*i0*r**2
        - 6*a0*d*e**2*i**2*i0**2*r**2
        + 3*b**2*d**2*e*i**2*i0*k**2
        - 2*b0**2*e**2*f*i**2*i0*r**2
        + b0**2*e*f**2*h**2*i0*r**2
        - 6*b0*d*e**2*i**2*i0**2*r**2
        - a**2*f**3*g**2*k**2
        + 4*a*a0*f**3*g*h*k*r
        + 2*a*b*d*f**2*g*i*k**2
        + 2*a*b0*f**3*g*h*k*r
        + 2*a*d*f**2*g*h*i0*k*r
        + 3*a0**2*e*f**2*i**2*r**2
        - 3*a0**2*f**3*h**2*r**2
        + 6*a0*b0*e*f**2*i**2*r**2
        - 6*a0*b0*f**3*h**2*r**2
        + 8*a0*d*e*f*i**2*i0*r**2
        - 2*a0*d*f**2*h**2*i0*r**2
        - b**2*d**2*f*i**2*k**2
        + b0**2*e*f**2*i**2*r**2
        - b0**2*f**3*h**2*r**2
        + 8*b0*d*e*f*i**2*i0*r**2
        - 2*b0*d*f**2*h**2*i0*r**2
        + 3*d**2*e*i**2*i0**2*r**2
        - 2*a0*d*f**2*i**2*r**2
        - 2*b0*d*f**2*i**2*r**2
        - 2*d**2*f*i**2*i0*r**2
    )
    p7 = (
        - 4*a*a0**2*b0*e*f**2*h*i0*j*k**2*r
        - 4*a*a0*b0**2*e*f**2*h*i0*j*k**2*r
        - 2*a0**3*e**3*i**2*i0**2*k*r**2
        - 12*a0**2*b0*e**3*i**2*i0**2*k*r**2
        - 6*a0*b0**2*e**3*i**2*i0**2*k*r**2
        + 4*a*a0**2*b0*f**3*h*j*k**2*r
        + 2*a*a0**2*e*f**2*g*h*i0*k**2*r
        + 4*a*a0*b0**2*f**3*h*j*k**2*r
        + 4*a*a0*b0*d*f**2*h*i0*j*k**2*r
        + 4*a*a0*b0*e*f**2*g*h*i0*k**2*r
        + 2*a*b0**2*d*f**2*h*i0*j*k**2*r
        + 4*a0**3*e**2*f*i**2*i0*k*r**2
        - 2*a0**3*e*f**2*h**2*i0*k*r**2
        + 24*a0**2*b0*e**2*f*i**2*i0*k*r**2
        - 12*a0**2*b0*e*f**2*h**2*i0*k*r**2
        + 6*a0**2*d*e**2*i**2*i0**2*k*r**2
        + 12*a0*b0**2*e**2*f*i**2*i0*k*r**2
        - 6*a0*b0**2*e*f**2*h**2*i0*k*r**2
        + 24*a0*b0*d*e**2*i**2*i0**2*k*r**2
        + 6*b0**2*d*e**2*i**2*i0**2*k*r**2
        - 2*a*a0**2*f**3*g*h*k**2*r
        - 4*a*a0*b0*f**3*g*h*k**2*r
        - 2*a*a0*d*f**2*g*h*i0*k**2*r
        - 2*a*b0*d*f**2*g*h*i0*k**2*r
        - 2*a0**3*e*f**2*i**2*k*r**2
        + 2*a0**3*f**3*h**2*k*r**2
        - 12*a0**2*b0*e*f**2*i**2*k*r**2
        + 12*a0**2*b0*f**3*h**2*k*r**2
        - 8*a0**2*d*e*f*i**2*i0*k*r**2
        + 2*a0**2*d*f**2*h**2*i0*k*r**2
        - 6*a0*b0**2*e*f**2*i**2*k*r**2
        + 6*a0*b0**2*f**3*h**2*k*r**2
        - 32*a0*b0*d*e*f*i**2*i0*k*r**2
        + 8*a0*b0*d*f**2*h**2*i0*k*r**2
        - 6*a0*d**2*e*i**2*i0**2*k*r**2
        - 8*b0**2*d*e*f*i**2*i0*k*r**2
        + 2*b0**2*d*f**2*h**2*i0*k*r**2
        - 12*b0*d**2*e*i**2*i0**2*k*r**2
        + 2*a0**2*d*f**2*i**2*k*r**2
        + 8*a0*b0*d*f**2*i**2*k*r**2
        + 4*a0*d**2*f*i**2*i0*k*r**2
        + 2*b0**2*d*f**2*i**2*k*r**2
        + 8*b0*d**2*f*i**2*i0*k*r**2
        + 2*d**3*i**2*i0**2*k*r**2
    )
    p8 = (
        + 2*a0**3*b0*e**3*i**2*i0**2*k**2*r**2
        + 3*a0**2*b0**2*e**3*i**2*i0**2*k**2*r**2
        - 4*a0**3*b0*e**2*f*i**2*i0*k**2*r**2
        + 2*a0**3*b0*e*f**2*h**2*i0*k**2*r**2
        - 6*a0**2*b0**2*e**2*f*i**2*i0*k**2*r**2
        + 3*a0**2*b0**2*e*f**2*h**2*i0*k**2*r**2
        - 6*a0**2*b0*d*e**2*i**2*i0**2*k**2*r**2
        - 6*a0*b0**2*d*e**2*i**2*i0**2*k**2*r**2
        + a**2*a0*b0**2*e*f**2*i0*j**2*k**2
        - 2*a*a0**2*b*b0*e**2*f*i*i0*j*k**2
        + a0**3*b**2*e**3*i**2*i0*k**2
        + 2*a0**3*b0*e*f**2*i**2*k**2*r**2
        - 2*a0**3*b0*f**3*h**2*k**2*r**2
        + 3*a0**2*b0**2*e*f**2*i**2*k**2*r**2
        - 3*a0**2*b0**2*f**3*h**2*k**2*r**2
        + 8*a0**2*b0*d*e*f*i**2*i0*k**2*r**2
        - 2*a0**2*b0*d*f**2*h**2*i0*k**2*r**2
        + 8*a0*b0**2*d*e*f*i**2*i0*k**2*r**2
        - 2*a0*b0**2*d*f**2*h**2*i0*k**2*r**2
        + 6*a0*b0*d**2*e*i**2*i0**2*k**2*r**2
        + 3*b0**2*d**2*e*i**2*i0**2*k**2*r**2
        - a**2*a0*b0**2*f**3*j**2*k**2
        - 2*a**2*a0*b0*e*f**2*g*i0*j*k**2
        - a**2*b0**2*d*f**2*i0*j**2*k**2
        + 2*a*a0**2*b*b0*e*f**2*i*j*k**2
        + 2*a*a0**2*b*e**2*f*g*i*i0*k**2
        + 4*a*a0**2*b0*e*f**2*h*i0*j*k*r
        + 4*a*a0*b*b0*d*e*f*i*i0*j*k**2
        + 4*a*a0*b0**2*e*f**2*h*i0*j*k*r
        - a0**3*b**2*e**2*f*i**2*k**2
        + a0**3*b**2*e*f**2*h**2*k**2
        + a0**3*e**3*i**2*i0**2*r**2
        - 3*a0**2*b**2*d*e**2*i**2*i0*k**2
        - 2*a0**2*b0*d*f**2*i**2*k**2*r**2
        + 6*a0**2*b0*e**3*i**2*i0**2*r**2
        - 2*a0*b0**2*d*f**2*i**2*k**2*r**2
        + 3*a0*b0**2*e**3*i**2*i0**2*r**2
        - 4*a0*b0*d**2*f*i**2*i0*k**2*r**2
        - 2*b0**2*d**2*f*i**2*i0*k**2*r**2
        - 2*b0*d**3*i**2*i0**2*k**2*r**2
        + 2*a**2*a0*b0*f**3*g*j*k**2
        + a**2*a0*e*f**2*g**2*i0*k**2
        + 2*a**2*b0*d*f**2*g*i0*j*k**2
        - 2*a*a0**2*b*e*f**2*g*i*k**2
        - 4*a*a0**2*b0*f**3*h*j*k*r
        - 2*a*a0**2*e*f**2*g*h*i0*k*r
        - 2*a*a0*b*b0*d*f**2*i*j*k**2
        - 4*a*a0*b*d*e*f*g*i*i0*k**2
        - 4*a*a0*b0**2*f**3*h*j*k*r
        - 4*a*a0*b0*d*f**2*h*i0*j*k*r
        - 4*a*a0*b0*e*f**2*g*h*i0*k*r
        - 2*a*b*b0*d**2*f*i*i0*j*k**2
        - 2*a*b0**2*d*f**2*h*i0*j*k*r
        - 2*a0**3*e**2*f*i**2*i0*r**2
        + a0**3*e*f**2*h**2*i0*r**2
        + 2*a0**2*b**2*d*e*f*i**2*k**2
        - a0**2*b**2*d*f**2*h**2*k**2
        - 12*a0**2*b0*e**2*f*i**2*i0*r**2
        + 6*a0**2*b0*e*f**2*h**2*i0*r**2
        - 3*a0**2*d*e**2*i**2*i0**2*r**2
        + 3*a0*b**2*d**2*e*i**2*i0*k**2
        - 6*a0*b0**2*e**2*f*i**2*i0*r**2
        + 3*a0*b0**2*e*f**2*h**2*i0*r**2
        - 12*a0*b0*d*e**2*i**2*i0**2*r**2
        - 3*b0**2*d*e**2*i**2*i0**2*r**2
        - a**2*a0*f**3*g**2*k**2
        - a**2*d*f**2*g**2*i0*k**2
        + 2*a*a0**2*f**3*g*h*k*r
        + 2*a*a0*b*d*f**2*g*i*k**2
        + 4*a*a0*b0*f**3*g*h*k*r
        + 2*a*a0*d*f**2*g*h*i0*k*r
        + 2*a*b*d**2*f*g*i*i0*k**2
        + 2*a*b0*d*f**2*g*h*i0*k*r
        + a0**3*e*f**2*i**2*r**2
        - a0**3*f**3*h**2*r**2
        + 6*a0**2*b0*e*f**2*i**2*r**2
        - 6*a0**2*b0*f**3*h**2*r**2
        + 4*a0**2*d*e*f*i**2*i0*r**2
        - a0**2*d*f**2*h**2*i0*r**2
        - a0*b**2*d**2*f*i**2*k**2
        + 3*a0*b0**2*e*f**2*i**2*r**2
        - 3*a0*b0**2*f**3*h**2*r**2
        + 16*a0*b0*d*e*f*i**2*i0*r**2
        - 4*a0*b0*d*f**2*h**2*i0*r**2
        + 3*a0*d**2*e*i**2*i0**2*r**2
        - b**2*d**3*i**2*i0*k**2
        + 4*b0**2*d*e*f*i**2*i0*r**2
        - b0**2*d*f**2*h**2*i0*r**2
        + 6*b0*d**2*e*i**2*i0**2*r**2
        - a0**2*d*f**2*i**2*r**2
        - 4*a0*b0*d*f**2*i**2*r**2
        - 2*a0*d**2*f*i**2*i0*r**2
        - b0**2*d*f**2*i**2*r**2
        - 4*b0*d**2*f*i**2*i0*r**2
        - d**3*i**2*i0**2*r**2
    )
    p9 = (
        - 2*a*a0**2*b0**2*e*f**2*h*i0*j*k**2*r
        - 4*a0**3*b0*e**3*i**2*i0**2*k*r**2
        - 6*a0**2*b0**2*e**3*i**2*i0**2*k*r**2
        + 2*a*a0**2*b0**2*f**3*h*j*k**2*r
        + 2*a*a0**2*b0*e*f**2*g*h*i0*k**2*r
        + 2*a*a0*b0**2*d*f**2*h*i0*j*k**2*r
        + 8*a0**3*b0*e**2*f*i**2*i0*k*r**2
        - 4*a0**3*b0*e*f**2*h**2*i0*k*r**2
        + 12*a0**2*b0**2*e**2*f*i**2*i0*k*r**2
        - 6*a0**2*b0**2*e*f**2*h**2*i0*k*r**2
        + 12*a0**2*b0*d*e**2*i**2*i0**2*k*r**2
        + 12*a0*b0**2*d*e**2*i**2*i0**2*k*r**2
        - 2*a*a0**2*b0*f**3*g*h*k**2*r
        - 2*a*a0*b0*d*f**2*g*h*i0*k**2*r
        - 4*a0**3*b0*e*f**2*i**2*k*r**2
        + 4*a0**3*b0*f**3*h**2*k*r**2
        - 6*a0**2*b0**2*e*f**2*i**2*k*r**2
        + 6*a0**2*b0**2*f**3*h**2*k*r**2
        - 16*a0**2*b0*d*e*f*i**2*i0*k*r**2
        + 4*a0**2*b0*d*f**2*h**2*i0*k*r**2
        - 16*a0*b0**2*d*e*f*i**2*i0*k*r**2
        + 4*a0*b0**2*d*f**2*h**2*i0*k*r**2
        - 12*a0*b0*d**2*e*i**2*i0**2*k*r**2
        - 6*b0**2*d**2*e*i**2*i0**2*k*r**2
        + 4*a0**2*b0*d*f**2*i**2*k*r**2
        + 4*a0*b0**2*d*f**2*i**2*k*r**2
        + 8*a0*b0*d**2*f*i**2*i0*k*r**2
        + 4*b0**2*d**2*f*i**2*i0*k*r**2
        + 4*b0*d**3*i**2*i0**2*k*r**2
    )
    p10 = (
        + a0**3*b0**2*e**3*i**2*i0**2*k**2*r**2
        - 2*a0**3*b0**2*e**2*f*i**2*i0*k**2*r**2
        + a0**3*b0**2*e*f**2*h**2*i0*k**2*r**2
        - 3*a0**2*b0**2*d*e**2*i**2*i0**2*k**2*r**2
        + a0**3*b0**2*e*f**2*i**2*k**2*r**2
        - a0**3*b0**2*f**3*h**2*k**2*r**2
        + 4*a0**2*b0**2*d*e*f*i**2*i0*k**2*r**2
        - a0**2*b0**2*d*f**2*h**2*i0*k**2*r**2
        + 3*a0*b0**2*d**2*e*i**2*i0**2*k**2*r**2
        + 2*a*a0**2*b0**2*e*f**2*h*i0*j*k*r
        + 2*a0**3*b0*e**3*i**2*i0**2*r**2
        - a0**2*b0**2*d*f**2*i**2*k**2*r**2
        + 3*a0**2*b0**2*e**3*i**2*i0**2*r**2
        - 2*a0*b0**2*d**2*f*i**2*i0*k**2*r**2
        - b0**2*d**3*i**2*i0**2*k**2*r**2
        - 2*a*a0**2*b0**2*f**3*h*j*k*r
        - 2*a*a0**2*b0*e*f**2*g*h*i0*k*r
        - 2*a*a0*b0**2*d*f**2*h*i0*j*k*r
        - 4*a0**3*b0*e**2*f*i**2*i0*r**2
        + 2*a0**3*b0*e*f**2*h**2*i0*r**2
        - 6*a0**2*b0**2*e**2*f*i**2*i0*r**2
        + 3*a0**2*b0**2*e*f**2*h**2*i0*r**2
        - 6*a0**2*b0*d*e**2*i**2*i0**2*r**2
        - 6*a0*b0**2*d*e**2*i**2*i0**2*r**2
        + 2*a*a0**2*b0*f**3*g*h*k*r
        + 2*a*a0*b0*d*f**2*g*h*i0*k*r
        + 2*a0**3*b0*e*f**2*i**2*r**2
        - 2*a0**3*b0*f**3*h**2*r**2
        + 3*a0**2*b0**2*e*f**2*i**2*r**2
        - 3*a0**2*b0**2*f**3*h**2*r**2
        + 8*a0**2*b0*d*e*f*i**2*i0*r**2
        - 2*a0**2*b0*d*f**2*h**2*i0*r**2
        + 8*a0*b0**2*d*e*f*i**2*i0*r**2
        - 2*a0*b0**2*d*f**2*h**2*i0*r**2
        + 6*a0*b0*d**2*e*i**2*i0**2*r**2
        + 3*b0**2*d**2*e*i**2*i0**2*r**2
        - 2*a0**2*b0*d*f**2*i**2*r**2
        - 2*a0*b0**2*d*f**2*i**2*r**2
        - 4*a0*b0*d**2*f*i**2*i0*r**2
        - 2*b0**2*d**2*f*i**2*i0*r**2
        - 2*b0*d**3*i**2*i0**2*r**2
    )
    p11 = (
        - 2*a0**3*b0**2*e**3*i**2*i0**2*k*r**2
        + 4*a0**3*b0**2*e**2*f*i**2*i0*k*r**2
        - 2*a0**3*b0**2*e*f**2*h**2*i0*k*r**2
        + 6*a0**2*b0**2*d*e**2*i**2*i0**2*k*r**2
        - 2*a0**3*b0**2*e*f**2*i**2*k*r**2
        + 2*a0**3*b0**2*f**3*h**2*k*r**2
        - 8*a0**2*b0**2*d*e*f*i**2*i0*k*r**2
        + 2*a0**2*b0**2*d*f**2*h**2*i0*k*r**2
        - 6*a0*b0**2*d**2*e*i**2*i0**2*k*r**2
        + 2*a0**2*b0**2*d*f**2*i**2*k*r**2
        + 4*a0*b0**2*d**2*f*i**2*i0*k*r**2
        + 2*b0**2*d**3*i**2*i0**2*k*r**2
    )
    p12 = (
        + a0**3*b0**2*e**3*i**2*i0**2*r**2
        - 2*a0**3*b0**2*e**2*f*i**2*i0*r**2
        + a0**3*b0**2*e*f**2*h**2*i0*r**2
        - 3*a0**2*b0**2*d*e**2*i**2*i0**2*r**2
        + a0**3*b0**2*e*f**2*i**2*r**2
        - a0**3*b0**2*f**3*h**2*r**2
        + 4*a0**2*b0**2*d*e*f*i**2*i0*r**2
        - a0**2*b0**2*d*f**2*h**2*i0*r**2
        + 3*a0*b0**2*d**2*e*i**2*i0**2*r**2
        - a0**2*b0**2*d*f**2*i**2*r**2
        - 2*a0*b0**2*d**2*f*i**2*i0*r**2
        - b0**2*d**3*i**2*i0**2*r**2
    )
    return np.array([p0, p1, p2, p3, p4, p5, p6, p7, p8, p9, p10, p11, p12])


def positive_real_roots(coeffs) -> list:
    """Positive real roots of sum(coeffs[i] * x^i) via companion-matrix eigenvalues.

    A root counts as positive real when its imaginary part is below
    1e-9*max(1, |Re|) and its real part exceeds 1e-9*(1 + |Re|).
    """
    c = np.asarray(coeffs, dtype=float)
    nz = np.nonzero(np.abs(c) > 0)[0]
    if len(nz) == 0:
        raise ValueError("zero polynomial")
    deg = nz[-1]
    if deg == 0:
        return []
    monic = c[: deg + 1] / c[deg]
    comp = np.zeros((deg, deg))
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic[:-1]
    roots = np.linalg.eigvals(comp)
    out = []
    for rt in roots:
        re, im = rt.real, rt.imag
        if abs(im) < 1e-9 * max(1.0, abs(re)) and re > 1e-9 * (1.0 + abs(re)):
            out.append(float(re))
    return sorted(out)


def interior_poly_crosscheck(p: ModelParams) -> dict:
    """Compare the polynomial route against the direct solve.

    Returns a report dict; never raises on disagreement.  The direct solve is
    authoritative; the polynomial is a transcription cross-check.
    """
    roots = positive_real_roots(interior_poly_coeffs(p))
    report = {"poly_positive_roots": roots, "direct_x": None, "agrees": None, "rel_err": None}
    try:
        eq = interior_equilibrium_direct(p)
    except (NoRoot, MultipleRoots):
        return report
    x = eq.point[0]
    report["direct_x"] = x
    if roots:
        # the polynomial also picks up roots whose y or z would be
        # inadmissible, so agreement means x* appears among its roots
        rel = min(abs(rt - x) / max(1.0, abs(x)) for rt in roots)
        report["rel_err"] = rel
        report["agrees"] = rel < 1e-6
    else:
        report["agrees"] = False
    return report


def all_equilibria(p: ModelParams) -> list:
    """Every steady-state candidate of the full system, embedded in 3-D.

    Duplicate points within 1e-9 are merged.  A non-unique interior root is
    returned as a flagged entry rather than raised.
    """
    # boundary points keep their label but are re-tagged FULL: in the full
    # system their verdict needs the 3x3 Jacobian, not the 2-D restriction
    out = [
        Equilibrium(LABEL_ORIGIN, Subsystem.FULL, (0.0, 0.0, 0.0), True),
        Equilibrium(LABEL_PREY_ONLY, Subsystem.FULL, (p.k, 0.0, 0.0), True),
        replace(predscav_equilibria(p)[-1], subsystem=Subsystem.FULL),
        replace(predprey_equilibria(p)[-1], subsystem=Subsystem.FULL),
        replace(scavprey_equilibria(p)[-1], subsystem=Subsystem.FULL),
    ]
    try:
        out.append(interior_equilibrium_direct(p))
    except NoRoot:
        out.append(
            Equilibrium(
                LABEL_INTERIOR, Subsystem.FULL, None, False,
                [ExistenceCheck("unique positive real root", False, 0.0)],
            )
        )
    except MultipleRoots as exc:
        out.append(
            Equilibrium(
                LABEL_INTERIOR, Subsystem.FULL, None, False,
                [ExistenceCheck("unique positive real root", False, float(len(exc.roots)))],
                {"roots": list(exc.roots)},
                flag="multiple_roots",
            )
        )
    merged = []
    for eq in out:
        dup = False
        if eq.point is not None:
            for kept in merged:
                if kept.point is not None and max(
                    abs(a - b) for a, b in zip(kept.point, eq.point)
                ) < MERGE_TOL:
                    dup = True
                    break
        if not dup:
            merged.append(eq)
    return merged
