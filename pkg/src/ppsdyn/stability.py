"""Jacobians, characteristic polynomials, and stability classification.

For a cubic characteristic polynomial lambda^3 + m1 lambda^2 + m2 lambda + m3
the coefficients come from the trace, the principal 2x2 minors, and the
determinant; all eigenvalue real parts are negative iff m1, m2, m3 > 0 and
m1*m2 - m3 > 0.  Eigenvalues are computed independently (companion matrix,
QR) and are authoritative when the two routes disagree near a margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .equilibria import (
    Equilibrium,
    ExistenceCheck,
    LABEL_INTERIOR,
    LABEL_ORIGIN,
    LABEL_PRED_PREY,
    LABEL_PRED_SCAV,
    LABEL_PREY_ONLY,
    LABEL_SCAV_PREY,
)
from .errors import ExistenceViolated
from .model import ModelParams, Subsystem

# eigenvalues with |Re| at or below this band get a Marginal verdict instead
# of a binary call; hyperbolicity is not decidable numerically at the margin
MARGINAL_BAND = 1e-9
RH_MARGIN = 1e-12

STABLE = "Stable"
UNSTABLE = "Unstable"
MARGINAL = "Marginal"


def jacobian(p: ModelParams, s, mask: Subsystem = Subsystem.FULL) -> np.ndarray:
    """Analytic Jacobian of the (masked) system at s; 3x3 for the full system,
    2x2 restricted to the active components for a subsystem."""
    x, y, z = (float(v) for v in s[:3])
    qa = 1.0 + p.a0 * x * x
    qb = 1.0 + p.b0 * x * x
    qi = 1.0 + p.i0 * z * z
    J = np.empty((3, 3))
    # d/dx of u^2/(1+c u^2) is 2u/(1+c u^2)^2
    J[0, 0] = p.r * (1.0 - 2.0 * x / p.k) - 2.0 * p.a * x * y / qa**2 - 2.0 * p.b * x * z / qb**2
    J[0, 1] = -p.a * x * x / qa
    J[0, 2] = -p.b * x * x / qb
    J[1, 0] = 2.0 * p.d * x * y / qa**2
    J[1, 1] = p.d * x * x / qa + p.f * z * z / qi - p.e
    J[1, 2] = 2.0 * p.f * z * y / qi**2
    J[2, 0] = 2.0 * p.g * x * z / qb**2
    J[2, 1] = p.h * z - p.i * z * z / qi
    J[2, 2] = p.g * x * x / qb + p.h * y - 2.0 * p.i * y * z / qi**2 - p.j
    if mask is Subsystem.FULL:
        return J
    active = [idx for idx, on in enumerate(mask.mask) if on]
    return J[np.ix_(active, active)]


@dataclass
class StabilityVerdict:
    classification: str
    eigenvalues: tuple
    m1: Optional[float] = None
    m2: Optional[float] = None
    m3: Optional[float] = None
    criteria: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def discriminant(self) -> Optional[float]:
        """The m1*m2 - m3 quantity; None for 2-D verdicts."""
        if self.m1 is None:
            return None
        return self.m1 * self.m2 - self.m3

    def record(self) -> dict:
        return {
            "classification": self.classification,
            "eigenvalues": [[ev.real, ev.imag] for ev in self.eigenvalues],
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "discriminant": self.discriminant,
            "criteria": [
                {"name": c.name, "satisfied": c.satisfied, "value": c.value} for c in self.criteria
            ],
            "notes": list(self.notes),
        }


def _cubic_roots(m1: float, m2: float, m3: float) -> tuple:
    # companion matrix of lambda^3 + m1 l^2 + m2 l + m3; QR-based eigenvalues
    # sidestep the branch pitfalls of the closed-form cubic
    comp = np.array([[0.0, 0.0, -m3], [1.0, 0.0, -m2], [0.0, 1.0, -m1]])
    ev = np.linalg.eigvals(comp)
    return tuple(sorted((complex(v) for v in ev), key=lambda v: (v.real, v.imag)))


def _quadratic_roots(tr: float, det: float) -> tuple:
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        rt = math.sqrt(disc)
        return tuple(sorted((complex(v) for v in ((tr - rt) / 2.0, (tr + rt) / 2.0)), key=lambda v: v.real))
    rt = math.sqrt(-disc)
    return (complex(tr / 2.0, -rt / 2.0), complex(tr / 2.0, rt / 2.0))


def _verdict_from_eigenvalues(eigenvalues) -> str:
    res = [ev.real for ev in eigenvalues]
    if any(abs(re) <= MARGINAL_BAND for re in res):
        return MARGINAL
    return STABLE if max(res) < 0 else UNSTABLE


def routh_hurwitz_cubic(m1: float, m2: float, m3: float) -> StabilityVerdict:
    """Verdict for lambda^3 + m1 lambda^2 + m2 lambda + m3 from the sign tests alone."""
    tests = [
        ExistenceCheck("m1 > 0", m1 > RH_MARGIN, m1),
        ExistenceCheck("m2 > 0", m2 > RH_MARGIN, m2),
        ExistenceCheck("m3 > 0", m3 > RH_MARGIN, m3),
        ExistenceCheck("m1*m2 - m3 > 0", m1 * m2 - m3 > RH_MARGIN, m1 * m2 - m3),
    ]
    if any(abs(c.value) <= RH_MARGIN for c in tests):
        cls = MARGINAL
    elif all(c.satisfied for c in tests):
        cls = STABLE
    else:
        cls = UNSTABLE
    return StabilityVerdict(cls, _cubic_roots(m1, m2, m3), m1, m2, m3, tests)


def _char_coeffs_3(J: np.ndarray):
    m1 = -float(np.trace(J))
    m2 = float(
        J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
        + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
    )
    m3 = -float(np.linalg.det(J))
    return m1, m2, m3


def _threshold_check(name: str, ksq: float, num: float, den: float) -> ExistenceCheck:
    # k^2 < num/den with den <= 0 meaning the response saturates below the
    # death rate, so the direction is stable for every k
    if den <= 0:
        return ExistenceCheck(name, True, math.inf)
    return ExistenceCheck(name, ksq < num / den, num / den)


def _named_criteria(p: ModelParams, eq: Equilibrium) -> list:
    label, sub = eq.label, eq.subsystem
    full = sub is Subsystem.FULL
    checks = []
    if label == LABEL_ORIGIN:
        if sub in (Subsystem.FULL, Subsystem.PRED_PREY, Subsystem.SCAV_PREY):
            checks.append(ExistenceCheck("prey eigenvalue r < 0", False, p.r))
        else:  # prey absent: eigenvalues -e and -j
            checks.append(ExistenceCheck("eigenvalues -e, -j < 0", True, max(-p.e, -p.j)))
    elif label == LABEL_PREY_ONLY:
        ksq = p.k * p.k
        if sub in (Subsystem.FULL, Subsystem.PRED_PREY):
            checks.append(_threshold_check("k^2 < e/(d - a0*e)", ksq, p.e, p.d - p.a0 * p.e))
        if sub in (Subsystem.FULL, Subsystem.SCAV_PREY):
            checks.append(_threshold_check("k^2 < j/(g - b0*j)", ksq, p.j, p.g - p.b0 * p.j))
    elif label == LABEL_PRED_SCAV:
        if full:
            checks.append(ExistenceCheck("prey eigenvalue r < 0", False, p.r))
        else:
            # eigenvalue product -2je(f-i0e)/f is negative whenever the point
            # exists, so the 2-D point is a saddle
            prod = -2.0 * p.j * p.e * (p.f - p.i0 * p.e) / p.f
            checks.append(ExistenceCheck("eigenvalue product > 0", prod > 0, prod))
    elif label == LABEL_PRED_PREY:
        x0 = eq.point[0]
        checks.append(
            ExistenceCheck(
                "2*a0*e*(k - x0)/(d*k) < 1",
                2.0 * p.a0 * p.e * (p.k - x0) / (p.d * p.k) < 1.0,
                2.0 * p.a0 * p.e * (p.k - x0) / (p.d * p.k),
            )
        )
        if full:
            dd = p.d + (p.b0 - p.a0) * p.e
            v = p.h * p.d * p.r * x0 * (1.0 - x0 / p.k) * dd + p.a * p.e * (p.g * p.e - p.j * dd)
            checks.append(ExistenceCheck("scavenger-direction eigenvalue term < 0", v < 0, v))
    elif label == LABEL_SCAV_PREY:
        x0 = eq.point[0]
        checks.append(
            ExistenceCheck(
                "2*b0*j*(k - x0)/(g*k) < 1",
                2.0 * p.b0 * p.j * (p.k - x0) / (p.g * p.k) < 1.0,
                2.0 * p.b0 * p.j * (p.k - x0) / (p.g * p.k),
            )
        )
        if full:
            z0 = eq.point[2]
            gg = p.g + p.j * (p.a0 - p.b0)
            t = (p.e * gg - p.d * p.j) / gg if gg != 0 else math.nan
            lhs = p.f * z0 * z0 / (1.0 + p.i0 * z0 * z0)
            checks.append(ExistenceCheck("f*z0^2/(1 + i0*z0^2) < t", lhs < t, lhs - t))
    return checks


def classify(p: ModelParams, eq: Equilibrium) -> StabilityVerdict:
    """Stability verdict for an existing equilibrium.

    Eigenvalue real parts decide the classification; the label's closed-form
    criteria are evaluated alongside and a disagreement is noted, not
    silently resolved.
    """
    if not eq.exists or eq.point is None:
        raise ExistenceViolated(f"{eq.label} does not exist for these parameters")
    J = jacobian(p, eq.point, eq.subsystem)
    criteria = _named_criteria(p, eq)
    if J.shape == (3, 3):
        m1, m2, m3 = _char_coeffs_3(J)
        eigenvalues = _cubic_roots(m1, m2, m3)
        if eq.label == LABEL_INTERIOR:
            criteria.extend(routh_hurwitz_cubic(m1, m2, m3).criteria)
    else:
        m1 = m2 = m3 = None
        tr = float(np.trace(J))
        det = float(np.linalg.det(J))
        eigenvalues = _quadratic_roots(tr, det)
        criteria.extend(
            [
                ExistenceCheck("-trace > 0", -tr > RH_MARGIN, -tr),
                ExistenceCheck("det > 0", det > RH_MARGIN, det),
            ]
        )
    cls = _verdict_from_eigenvalues(eigenvalues)
    verdict = StabilityVerdict(cls, eigenvalues, m1, m2, m3, criteria)
    if criteria and cls != MARGINAL:
        implied = all(c.satisfied for c in criteria)
        if implied != (cls == STABLE):
            verdict.notes.append(
                "named criteria imply "
                + (STABLE if implied else UNSTABLE)
                + f" but eigenvalues give {cls}; eigenvalues are authoritative"
            )
    return verdict
