"""Adam and BFGS minimizers over real parameter vectors.

Both optimizers are deterministic given their inputs and know nothing about
the model; objectives are supplied as callables.  BFGS supports two forms of
the rank-two update for the matrix B used in the direction p = -B g:
"inverse" (the standard inverse-Hessian update) and "direct" (the
direct-Hessian-shaped update applied to B as-is).  The direct form converges
noticeably slower and can stall on ill-conditioned problems, so inverse is
the default; the switch exists because both behaviours are wanted in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import LineSearchFailed, NonFiniteLoss

CURVATURE_FLOOR = 1e-12


@dataclass(frozen=True)
class AdamConfig:
    alpha: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    num_steps: int = 100

    def __post_init__(self):
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in [0, 1)")
        if self.alpha <= 0 or self.epsilon <= 0:
            raise ValueError("alpha and epsilon must be positive")
        if self.num_steps < 0:
            raise ValueError("num_steps must be nonnegative")


class AdamState(NamedTuple):
    m: np.ndarray
    v: np.ndarray
    t: int

    @classmethod
    def fresh(cls, n: int) -> "AdamState":
        return cls(np.zeros(n), np.zeros(n), 0)


@dataclass(frozen=True)
class BfgsConfig:
    max_iterations: int = 200
    gradient_tolerance: float = 1e-6
    step_tolerance: float = 1e-10
    initial_step: float = 1.0
    shrink: float = 0.5
    sufficient_decrease: float = 1e-4
    max_halvings: int = 60
    update_form: str = "inverse"
    # applied to every line-search candidate; lets callers keep iterates in a
    # feasible set (e.g. positivity floors) without the optimizer knowing why
    project: Optional[Callable] = None

    def __post_init__(self):
        if min(self.max_iterations, self.max_halvings) <= 0:
            raise ValueError("iteration budgets must be positive")
        if min(self.gradient_tolerance, self.step_tolerance, self.initial_step) <= 0:
            raise ValueError("tolerances and initial step must be positive")
        if not (0.0 < self.shrink < 1.0 and 0.0 < self.sufficient_decrease < 1.0):
            raise ValueError("shrink and sufficient_decrease must lie in (0, 1)")
        if self.update_form not in ("inverse", "direct"):
            raise ValueError("update_form must be 'inverse' or 'direct'")


@dataclass
class Objective:
    """Evaluation contract: value(theta) -> scalar, gradient(theta) -> vector.

    Without an analytic gradient, central differences with per-coordinate
    step fd_step*(1+|theta_i|) are used; if one side of a stencil is
    non-finite the gradient falls back to the one-sided difference.
    """

    fn: Callable
    grad: Optional[Callable] = None
    fd_step: float = 1e-6

    def value(self, theta) -> float:
        return float(self.fn(np.asarray(theta, dtype=float)))

    def gradient(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(theta), dtype=float)
        g = np.empty(theta.size)
        base = None
        for idx in range(theta.size):
            h = self.fd_step * (1.0 + abs(theta[idx]))
            up = theta.copy()
            up[idx] += h
            dn = theta.copy()
            dn[idx] -= h
            fu = self.value(up)
            fd = self.value(dn)
            if math.isfinite(fu) and math.isfinite(fd):
                g[idx] = (fu - fd) / (2.0 * h)
                continue
            if base is None:
                base = self.value(theta)
            if math.isfinite(fu) and math.isfinite(base):
                g[idx] = (fu - base) / h
            elif math.isfinite(fd) and math.isfinite(base):
                g[idx] = (base - fd) / h
            else:
                # both sides blew up; drop the coordinate rather than poison
                # the whole direction
                g[idx] = 0.0
        return g


def adam_step(state: AdamState, grad, theta, cfg: AdamConfig):
    """One Adam update; returns (new state, new theta).

    The step counter increments before the bias corrections, and epsilon
    sits inside the square root.
    """
    g = np.asarray(grad, dtype=float)
    theta = np.asarray(theta, dtype=float)
    t = state.t + 1
    m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * g
    v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * g * g
    m_hat = m / (1.0 - cfg.beta1**t)
    v_hat = v / (1.0 - cfg.beta2**t)
    return AdamState(m, v, t), theta - cfg.alpha * m_hat / np.sqrt(v_hat + cfg.epsilon)


def adam_run(obj: Objective, theta0, cfg: AdamConfig):
    """Run cfg.num_steps Adam updates; returns (theta, per-step loss history).

    The loss is recorded at the pre-update iterate, so the history has
    exactly num_steps entries and history[0] is the loss at theta0.
    """
    theta = np.asarray(theta0, dtype=float).copy()
    state = AdamState.fresh(theta.size)
    history: list = []
    for _ in range(cfg.num_steps):
        loss = obj.value(theta)
        if not math.isfinite(loss):
            raise NonFiniteLoss(
                f"objective non-finite at step {len(history)}", history=history
            )
        history.append(loss)
        g = obj.gradient(theta)
        if not np.all(np.isfinite(g)):
            raise NonFiniteLoss(
                f"gradient non-finite at step {len(history) - 1}", history=history
            )
        state, theta = adam_step(state, g, theta, cfg)
    return theta, history


def _update_inverse(B: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    rho = 1.0 / float(y @ s)
    V = np.eye(B.shape[0]) - rho * np.outer(s, y)
    return V @ B @ V.T + rho * np.outer(s, s)


def _update_direct(B: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    Bs = B @ s
    return B + np.outer(y, y) / float(y @ s) - np.outer(Bs, Bs) / float(s @ Bs)


def _line_search(obj, x, fx, g, p, cfg):
    # backtracking Armijo; returns (candidate, value) or None after the
    # halving budget is spent
    slope = float(g @ p)
    t = cfg.initial_step
    for _ in range(cfg.max_halvings + 1):
        cand = x + t * p
        if cfg.project is not None:
            cand = np.asarray(cfg.project(cand), dtype=float)
        f_new = obj.value(cand)
        if math.isfinite(f_new) and f_new <= fx + cfg.sufficient_decrease * t * slope:
            return cand, f_new
        t *= cfg.shrink
    return None


def bfgs_run(obj: Objective, x0, B0=None, cfg: Optional[BfgsConfig] = None):
    """Quasi-Newton minimization from x0; returns (x, loss history).

    history[0] is the loss at x0 and one entry is appended per accepted
    iterate, so the history is nonincreasing.  Stops on gradient norm,
    step size, or the iteration budget.  If the BFGS direction fails the
    line search, B is reset to the identity and steepest descent is tried
    once; LineSearchFailed (carrying the last iterate and history) is
    raised only if that also finds no acceptable step.
    """
    cfg = cfg or BfgsConfig()
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    B = np.eye(n) if B0 is None else np.array(B0, dtype=float)
    fx = obj.value(x)
    if not math.isfinite(fx):
        raise NonFiniteLoss("objective non-finite at x0", history=[])
    g = obj.gradient(x)
    history = [fx]
    if np.linalg.norm(g) < cfg.gradient_tolerance:
        return x, history
    await_rescale = True
    for _ in range(cfg.max_iterations):
        p = -B @ g
        if float(g @ p) >= 0.0:
            p = -g
        trial = _line_search(obj, x, fx, g, p, cfg)
        if trial is None:
            B = np.eye(n)
            await_rescale = True
            trial = _line_search(obj, x, fx, g, -g, cfg)
            if trial is None:
                raise LineSearchFailed(
                    f"no acceptable step after {cfg.max_halvings} halvings",
                    x=x,
                    history=history,
                )
        x_new, f_new = trial
        g_new = obj.gradient(x_new)
        s = x_new - x
        y = g_new - g
        ys = float(y @ s)
        if ys > CURVATURE_FLOOR:
            if await_rescale:
                yy = float(y @ y)
                if yy > 0.0:
                    # match B's scale to the local curvature before trusting
                    # the first rank-two update
                    B = B * (ys / yy)
                await_rescale = False
            if cfg.update_form == "inverse":
                B = _update_inverse(B, s, y)
            else:
                B = _update_direct(B, s, y)
        x, fx, g = x_new, f_new, g_new
        history.append(fx)
        if np.linalg.norm(g) < cfg.gradient_tolerance:
            break
        if np.linalg.norm(s) < cfg.step_tolerance:
            break
    return x, history


def write_loss_csv(history, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,loss\n")
        for step, loss in enumerate(history):
            fh.write(f"{step},{loss!r}\n")
