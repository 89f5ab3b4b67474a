"""Shared fixtures: canonical parameter sets and the zero-noise dataset.

The dicts below are regression anchors. The first five correspond to the
.params files shipped in fixtures/; the last three are frozen draws that
exercise the no-root and multiple-root branches of the interior solver.
"""

from pathlib import Path

import numpy as np
import pytest

from ppsdyn.data import synthesize
from ppsdyn.model import ModelParams, State

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# pred/scav pair with a collapsing nontrivial equilibrium; prey params unused
PREDSCAV_CASE = dict(r=1.0, k=1.0, a=1.0, a0=1.0, b=1.0, b0=1.0, d=1.0,
                     e=0.5, f=0.5, g=1.0, h=0.5, i=0.5, i0=0.25, j=1.5)

# prey/predator pair with a stable interior point; scavenger params unused
PREDPREY_CASE = dict(r=1.0, k=2.0, a=1.0, a0=0.25, b=1.0, b0=1.0, d=1.0,
                     e=1.0, f=1.0, g=1.0, h=1.0, i=1.0, i0=1.0, j=1.0)

INTERIOR_UNSTABLE = dict(r=0.5, k=100.0, a=0.5, a0=0.25, b=0.5, b0=0.25,
                         d=0.5, e=1.0, f=0.1, g=0.5, h=0.1, i=0.1,
                         i0=0.25, j=1.0)

INTERIOR_STABLE = dict(r=1.0, k=2.0, a=1.0, a0=0.25, b=1.0, b0=0.25, d=1.0,
                       e=1.0, f=1.0, g=1.0, h=0.25, i=1.0, i0=0.25, j=1.0)

# stable-focus set used for the synthetic-data estimation benchmarks
REFERENCE = dict(r=0.9701107742719246, k=573.2545487545212544,
                 a=0.7668876233328743, a0=0.4686878655732233,
                 b=0.6893067418603573, b0=0.053266947840986595,
                 d=0.42441058569930494, e=0.888598932493589,
                 f=0.46630691773424437, g=0.08334616995047056,
                 h=0.16502232050920586, i=1.05992612257741696,
                 i0=0.105259076974745925, j=0.5320956432008955)

# interior scan finds no admissible root for this draw
NOROOT_CASE = dict(r=1.391226996802409, k=1.4115054112707228,
                   a=5.5473374876564945, a0=0.7224319768563565,
                   b=0.6637868545263941, b0=0.5215145093451167,
                   d=1.6368661638133994, e=2.467431754461647,
                   f=0.9128734964212238, g=0.5106222588691333,
                   h=0.5170658865009429, i=1.6828255072772786,
                   i0=1.8123119252126134, j=1.544226927610764)

# two admissible interior roots near x = 0.026125 and 0.657764
MULTI2_CASE = dict(r=1.0750765037239864, k=1.2003133696903825,
                   a=7.493074770359758, a0=4.488307531908622,
                   b=0.5053041870530137, b0=0.7946077444972219,
                   d=0.31013313639134477, e=0.6234008107185817,
                   f=1.2872189041848656, g=2.6239554596278487,
                   h=0.5580721241553076, i=0.5925517002022683,
                   i0=0.1794549237444363, j=0.8779788833978804)

# three admissible interior roots
MULTI3_CASE = dict(r=3.6282469437129, k=7.686475547092399,
                   a=0.7230944621177466, a0=0.21236040322329,
                   b=0.7800578612525602, b0=0.7953457447021609,
                   d=0.8590406180709739, e=0.41036411274092044,
                   f=1.5898646931785156, g=1.521361869093817,
                   h=0.30254522884177776, i=1.7495478539062277,
                   i0=5.166254642977647, j=1.1474800371128024)


@pytest.fixture(scope="session")
def predscav_params():
    return ModelParams(**PREDSCAV_CASE)


@pytest.fixture(scope="session")
def predprey_params():
    return ModelParams(**PREDPREY_CASE)


@pytest.fixture(scope="session")
def unstable_params():
    return ModelParams(**INTERIOR_UNSTABLE)


@pytest.fixture(scope="session")
def stable_params():
    return ModelParams(**INTERIOR_STABLE)


@pytest.fixture(scope="session")
def reference_params():
    return ModelParams(**REFERENCE)


@pytest.fixture(scope="session")
def reference_dataset(reference_params):
    """Zero-noise 40-point dataset on t in [0, 5] from the reference set."""
    grid = np.linspace(0.0, 5.0, 40)
    return synthesize(reference_params, State(4.991, 1.178, 0.577), grid)


def rand_params(rng, lo=0.1, hi=2.0) -> ModelParams:
    from ppsdyn.model import PARAM_ORDER
    return ModelParams(**{name: float(rng.uniform(lo, hi))
                          for name in PARAM_ORDER})
