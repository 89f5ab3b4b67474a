import math

import numpy as np
import pytest

from conftest import INTERIOR_STABLE, rand_params
from ppsdyn.errors import MaskViolation
from ppsdyn.model import (PARAM_ORDER, Derivative, ModelParams, State,
                          Subsystem, holling3, make_rhs, rhs, rhs_subsystem)


def test_param_order_matches_fields():
    assert len(PARAM_ORDER) == 14
    p = ModelParams(**{name: i + 1.0 for i, name in enumerate(PARAM_ORDER)})
    assert list(p.as_array()) == [i + 1.0 for i in range(14)]


def test_array_round_trip():
    p = ModelParams(**INTERIOR_STABLE)
    q = ModelParams.from_array(p.as_array())
    assert p == q


def test_dict_round_trip():
    p = ModelParams(**INTERIOR_STABLE)
    assert ModelParams.from_dict(p.to_dict()) == p


def test_from_dict_rejects_missing_and_unknown_keys():
    d = ModelParams(**INTERIOR_STABLE).to_dict()
    d.pop("r")
    with pytest.raises(ValueError):
        ModelParams.from_dict(d)
    d["r"] = 1.0
    d["bogus"] = 1.0
    with pytest.raises(ValueError):
        ModelParams.from_dict(d)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_params_must_be_positive_finite(bad):
    kw = dict(INTERIOR_STABLE)
    kw["h"] = bad
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_params_coerced_to_python_float():
    kw = {k: np.float64(v) for k, v in INTERIOR_STABLE.items()}
    p = ModelParams(**kw)
    assert all(type(getattr(p, name)) is float for name in PARAM_ORDER)


def test_save_load_round_trip(tmp_path):
    p = rand_params(np.random.default_rng(7))
    path = tmp_path / "draw.params"
    p.save(path)
    assert ModelParams.load(path) == p


def test_load_skips_comments_and_blanks(tmp_path):
    p = ModelParams(**INTERIOR_STABLE)
    path = tmp_path / "annotated.params"
    lines = ["# header comment", ""]
    lines += [f"{name} = {getattr(p, name)!r}" for name in PARAM_ORDER]
    path.write_text("\n".join(lines) + "\n")
    assert ModelParams.load(path) == p


def test_load_rejects_malformed_line(tmp_path):
    path = tmp_path / "broken.params"
    path.write_text("r 1.0\n")
    with pytest.raises(ValueError):
        ModelParams.load(path)


def test_holling3_value():
    # 0.5 * 2^2 / (1 + 0.25 * 2^2) = 1.0
    assert holling3(2.0, 0.5, 0.25) == pytest.approx(1.0, abs=1e-15)
    assert holling3(0.0, 3.0, 1.0) == 0.0


def test_rhs_hand_computed_point():
    p = ModelParams(**{name: 1.0 for name in PARAM_ORDER})
    d = rhs(State(1.0, 1.0, 1.0), p)
    assert isinstance(d, Derivative)
    assert d.dx == pytest.approx(-1.0, abs=1e-15)
    assert d.dy == pytest.approx(0.0, abs=1e-15)
    assert d.dz == pytest.approx(0.0, abs=1e-15)


def test_state_default_time():
    s = State(1.0, 2.0, 3.0)
    assert s.t == 0.0
    assert State(1.0, 2.0, 3.0, 5.0).t == 5.0


def test_subsystem_parse_aliases():
    assert Subsystem.parse("predscav") is Subsystem.PRED_SCAV
    assert Subsystem.parse("PRED-SCAV") is Subsystem.PRED_SCAV
    assert Subsystem.parse("pred_prey") is Subsystem.PRED_PREY
    assert Subsystem.parse("full") is Subsystem.FULL
    with pytest.raises(ValueError):
        Subsystem.parse("plankton")


def test_subsystem_masks():
    assert Subsystem.FULL.mask == (1, 1, 1)
    assert Subsystem.PRED_SCAV.mask == (0, 1, 1)
    assert Subsystem.PRED_PREY.mask == (1, 1, 0)
    assert Subsystem.SCAV_PREY.mask == (1, 0, 1)


def test_masked_rhs_zeroes_inactive_component():
    p = ModelParams(**INTERIOR_STABLE)
    d = rhs_subsystem(State(0.0, 4.0, 6.0), p, Subsystem.PRED_SCAV)
    assert d.dx == 0.0
    d = rhs_subsystem(State(2.0, 4.0, 0.0), p, Subsystem.PRED_PREY)
    assert d.dz == 0.0


def test_masked_rhs_rejects_nonzero_masked_state():
    p = ModelParams(**INTERIOR_STABLE)
    with pytest.raises(MaskViolation):
        rhs_subsystem(State(0.5, 4.0, 6.0), p, Subsystem.PRED_SCAV)


def test_make_rhs_matches_rhs():
    rng = np.random.default_rng(11)
    p = rand_params(rng)
    f = make_rhs(p, Subsystem.FULL)
    for _ in range(25):
        x, y, z = rng.uniform(0.01, 5.0, 3)
        got = f(x, y, z)
        want = rhs(State(x, y, z), p)
        assert got == pytest.approx(tuple(want), rel=1e-15)
        assert all(isinstance(v, float) and math.isfinite(v) for v in got)
