"""Round trip: synthesize observations, then recover the parameters.

Generates a noiseless 40-point series from the reference parameter set,
runs the two-stage estimator on it, and compares the errors before and
after the polishing stage. Takes about half a minute.

Run from the repository root:

    python3 demos/estimate_roundtrip.py [seed ...]
"""

import sys
from pathlib import Path

import numpy as np

from ppsdyn.data import synthesize
from ppsdyn.model import PARAM_ORDER, ModelParams, State
from ppsdyn.pinn import estimate

ROOT = Path(__file__).resolve().parents[1]


def main(argv):
    seeds = [int(a) for a in argv] or [0, 1, 2]
    p_true = ModelParams.load(ROOT / "fixtures" / "reference.params")
    grid = np.linspace(0.0, 5.0, 40)
    ds = synthesize(p_true, State(4.991, 1.178, 0.577), grid)
    print(f"dataset: {ds.sample_count} samples on t in "
          f"[{ds.t_start:g}, {ds.t_end:g}], no noise\n")
    for seed in seeds:
        report = estimate(ds, seed=seed)
        print(f"seed {seed}: data error {report.post_nn_mse:.5f} after the"
              f" network stage, {report.final_mse:.5f} after polishing")
    print("\nper-parameter view for the last run (truth vs estimate):")
    truth = p_true.as_array()
    for name, t, e in zip(PARAM_ORDER, truth, report.final_params):
        print(f"  {name:<3} {t:>10.4f} {e:>10.4f}")
    print("\nnote: several parameter combinations produce nearly identical"
          "\ntrajectories over a short window, so a small data error does"
          "\nnot force every individual parameter to match the truth.")


if __name__ == "__main__":
    main(sys.argv[1:])
