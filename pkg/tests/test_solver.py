import numpy as np
import pytest

from conftest import INTERIOR_STABLE, rand_params
from ppsdyn.errors import IntegrationFailed, MaskViolation, NumericalOverflow
from ppsdyn.model import ModelParams, State, Subsystem
from ppsdyn.solver import SolverConfig, Trajectory, detect_settling, integrate

S0 = State(4.0, 3.0, 2.0)


def _final(p, cfg, s0=S0, **kw):
    return np.asarray(integrate(p, s0, cfg, **kw).final_state[:3])


def test_rk4_error_scales_as_fourth_order(stable_params):
    # halving the step should shrink the global error by about 2^4
    ref = _final(stable_params, SolverConfig(t_end=10.0, abs_tol=1e-12, rel_tol=1e-12))
    coarse = _final(stable_params, SolverConfig(t_end=10.0, method="rk4", step=0.1))
    fine = _final(stable_params, SolverConfig(t_end=10.0, method="rk4", step=0.05))
    ratio = np.linalg.norm(coarse - ref) / np.linalg.norm(fine - ref)
    assert 12.0 < ratio < 21.0


def test_adaptive_and_fixed_step_agree(stable_params):
    a = _final(stable_params, SolverConfig(t_end=10.0))
    b = _final(stable_params, SolverConfig(t_end=10.0, method="rk4", step=0.005))
    assert np.linalg.norm(a - b) < 1e-6


def test_rk4_time_reversibility(stable_params):
    fwd = integrate(stable_params, S0, SolverConfig(t_end=10.0, method="rk4", step=0.01))
    x, y, z = fwd.final_state[:3]
    back = integrate(stable_params, State(x, y, z, t=10.0),
                     SolverConfig(t_end=0.0, method="rk4", step=0.01))
    assert np.linalg.norm(np.asarray(back.final_state[:3]) - np.asarray(S0[:3])) < 1e-6


def test_final_state_carries_time(stable_params):
    traj = integrate(stable_params, S0, SolverConfig(t_end=7.5))
    assert traj.final_state.t == pytest.approx(7.5, abs=1e-12)
    assert traj.times[0] == 0.0


def test_nonzero_start_time(stable_params):
    traj = integrate(stable_params, State(4.0, 3.0, 2.0, t=2.0), SolverConfig(t_end=5.0))
    assert traj.times[0] == 2.0
    assert traj.final_state.t == pytest.approx(5.0, abs=1e-12)


def test_overflow_raises(stable_params):
    p = ModelParams(r=1.0, k=1.0, a=1.0, a0=1.0, b=1.0, b0=1.0, d=1.0,
                    e=1e-6, f=5.0, g=1.0, h=20.0, i=1e-6, i0=1e-6, j=1e-6)
    with pytest.raises(NumericalOverflow):
        integrate(p, State(1.0, 1.0, 1.0), SolverConfig(t_end=50.0))


def test_step_limit_raises(stable_params):
    with pytest.raises(IntegrationFailed):
        integrate(stable_params, S0, SolverConfig(t_end=200.0, max_steps=10))


def test_stiff_parameters_hit_step_limit(stable_params):
    kw = dict(INTERIOR_STABLE)
    kw["r"] = 1e9
    with pytest.raises(IntegrationFailed):
        integrate(ModelParams(**kw), S0, SolverConfig(t_end=200.0))


def test_clamp_policy_keeps_states_nonnegative(predscav_params):
    cfg = SolverConfig(t_end=200.0, negativity_policy="clamp")
    traj = integrate(predscav_params, State(0.0, 4.0, 6.0), cfg,
                     mask=Subsystem.PRED_SCAV)
    assert np.all(traj.states >= 0.0)
    assert traj.diagnostics.clamped >= 0  # count of clipped steps


def test_diagnose_policy_records_minimum(predscav_params):
    cfg = SolverConfig(t_end=200.0)
    traj = integrate(predscav_params, State(0.0, 4.0, 6.0), cfg,
                     mask=Subsystem.PRED_SCAV)
    assert traj.diagnostics.min_component <= float(traj.states.min())
    # attempted steps include rejected trials, so the count can exceed
    # the number of recorded points
    assert traj.diagnostics.steps >= len(traj.times) - 1
    assert traj.diagnostics.termination == "completed"


def test_masked_component_stays_zero(predscav_params):
    traj = integrate(predscav_params, State(0.0, 4.0, 6.0),
                     SolverConfig(t_end=50.0), mask=Subsystem.PRED_SCAV)
    assert np.all(traj.states[:, 0] == 0.0)


def test_masked_start_state_validated(stable_params):
    with pytest.raises(MaskViolation):
        integrate(stable_params, State(0.5, 4.0, 6.0),
                  SolverConfig(t_end=10.0), mask=Subsystem.PRED_SCAV)


def test_t_eval_lands_exactly(stable_params):
    pts = [0.0, 0.7, 1.3, 2.0, 5.0]
    traj = integrate(stable_params, S0, SolverConfig(t_end=5.0), t_eval=pts)
    assert np.allclose(traj.times, pts, atol=0.0)
    dense = integrate(stable_params, S0, SolverConfig(t_end=5.0))
    assert np.allclose(traj.states[-1], dense.states[-1], atol=1e-7)


def test_t_eval_must_start_at_t0(stable_params):
    with pytest.raises(ValueError):
        integrate(stable_params, S0, SolverConfig(t_end=5.0), t_eval=[0.5, 1.0])


def test_settling_detected_for_damped_case(stable_params):
    traj = integrate(stable_params, S0, SolverConfig(t_end=200.0))
    settled = detect_settling(traj, window=40.0, tol=1e-2)
    assert settled is not None
    assert settled.x == pytest.approx(1.1331137, abs=1e-3)


def test_settling_rejected_for_oscillatory_case(unstable_params):
    traj = integrate(unstable_params, S0, SolverConfig(t_end=500.0))
    assert detect_settling(traj, window=100.0, tol=1e-2) is None


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(t_end=10.0, method="rk4")  # fixed step required
    with pytest.raises(ValueError):
        SolverConfig(t_end=10.0, method="euler")
    with pytest.raises(ValueError):
        SolverConfig(t_end=10.0, negativity_policy="ignore")


def test_trajectory_csv_round_trip(tmp_path, stable_params):
    traj = integrate(stable_params, S0, SolverConfig(t_end=5.0))
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    back = Trajectory.from_csv(path)
    assert np.allclose(back.times, traj.times, atol=0.0)
    assert np.allclose(back.states, traj.states, atol=0.0)


def test_random_params_never_return_nonfinite():
    # draws may legitimately blow up; the contract is a clean exception,
    # never a trajectory containing NaN or inf
    rng = np.random.default_rng(3)
    for _ in range(8):
        p = rand_params(rng, 0.2, 1.5)
        try:
            traj = integrate(p, State(*rng.uniform(0.1, 3.0, 3)),
                             SolverConfig(t_end=20.0))
        except IntegrationFailed:
            continue
        assert np.all(np.isfinite(traj.states))
