"""Numerical integration of the Hamiltonian flow with integral monitoring.

A hand-rolled classical RK4 and an embedded Dormand-Prince RK45 on the
analytic right-hand side from the pmp module.  Early termination (leaving the
model's domain, phase blow-up, adaptive step underflow) is a normal return
carried in Trajectory.stop_reason, never an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from . import models, pmp
from .models import DomainError, ModelSpec
from .pmp import FirstIntegralSet, PhasePoint

STOP_REASONS = ("horizon", "domain_exit", "blow_up", "step_failure")


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk45_adaptive"
    step: float = 0.01
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_steps: int = 1_000_000
    blow_up_norm: float = 1e8
    domain_margin: float = 1e-6

    def validate(self) -> list[str]:
        errors = []
        if self.method not in ("rk4_fixed", "rk45_adaptive"):
            errors.append(f"unknown method {self.method!r}")
        if not self.step > 0:
            errors.append("step must be positive")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            errors.append("tolerances must be positive")
        if self.max_steps < 1:
            errors.append("max_steps must be >= 1")
        if not self.blow_up_norm > 0:
            errors.append("blow_up_norm must be positive")
        if self.domain_margin < 0:
            errors.append("domain_margin must be nonnegative")
        return errors


@dataclass(frozen=True)
class Trajectory:
    """Accepted integration nodes; immutable once returned.

    costates/integrals may be omitted for externally built state curves
    (energy only needs times, states, controls).
    """

    times: np.ndarray
    states: np.ndarray
    costates: np.ndarray = None
    controls: np.ndarray = None
    integral_names: tuple[str, ...] = ()
    integrals: np.ndarray = None
    stop_reason: str = "horizon"

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "states", np.asarray(self.states, dtype=float))
        n = len(self.times)
        if self.states.shape[0] != n:
            raise ValueError("states and times length mismatch")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        for name in ("costates", "controls", "integrals"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, dtype=float)
                object.__setattr__(self, name, val)
                if val.shape[0] != n:
                    raise ValueError(f"{name} and times length mismatch")
        if self.stop_reason not in STOP_REASONS:
            raise ValueError(f"unknown stop_reason {self.stop_reason!r}")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def integral_log(self) -> tuple[FirstIntegralSet, ...]:
        if self.integrals is None:
            return ()
        return tuple(FirstIntegralSet(self.integral_names, tuple(row))
                     for row in self.integrals)

    def final_point(self) -> PhasePoint:
        return PhasePoint(self.states[-1], self.costates[-1])


# Dormand-Prince 5(4) tableau.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                   -92097 / 339200, 187 / 2100, 1 / 40])


class _StageFailure(Exception):
    def __init__(self, domain: bool):
        self.domain = domain


def _rhs_factory(spec: ModelSpec):
    n = spec.dim

    def rhs(y):
        try:
            xdot, pdot = pmp.hamilton_rhs(spec, PhasePoint(y[:n], y[n:]))
        except DomainError:
            raise _StageFailure(domain=True)
        except (ValueError, OverflowError, FloatingPointError):
            raise _StageFailure(domain=False)
        out = np.concatenate([xdot, pdot])
        if not np.all(np.isfinite(out)):
            raise _StageFailure(domain=False)
        return out

    return rhs


def _rk4_step(rhs, y, h):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _dp_step(rhs, y, h, k1):
    """One Dormand-Prince step; returns (y5, err_vec, k_last)."""
    ks = [k1]
    for i in range(1, 7):
        yi = y + h * sum(a * k for a, k in zip(_DP_A[i], ks))
        ks.append(rhs(yi))
    y5 = y + h * sum(b * k for b, k in zip(_DP_B5, ks))
    err = h * sum((b5 - b4) * k for b5, b4, k in zip(_DP_B5, _DP_B4, ks))
    return y5, err, ks[-1]


def _node_ok(spec: ModelSpec, y, cfg: IntegratorConfig):
    """None if y is a recordable node, else the stop reason."""
    n = spec.dim
    if not np.all(np.isfinite(y)):
        return "blow_up"
    if float(np.max(np.abs(y))) > cfg.blow_up_norm:
        return "blow_up"
    x = y[:n]
    if not models.in_domain(spec, x):
        return "domain_exit"
    if any(s <= cfg.domain_margin for s in models.singular_slacks(spec, x)):
        return "domain_exit"
    return None


def integrate(spec: ModelSpec, start: PhasePoint, t_span,
              cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    """Integrate the maximized Hamiltonian flow over t_span = (t0, t1)."""
    errs = cfg.validate()
    if errs:
        raise ValueError("invalid integrator config: " + "; ".join(errs))
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t0 < t1:
        raise ValueError("need t0 < t1")
    models._require_domain(spec, start.x)

    n = spec.dim
    rhs = _rhs_factory(spec)
    y = np.concatenate([start.x, start.p])
    times, ys = [t0], [y.copy()]
    stop = "horizon"

    if cfg.method == "rk4_fixed":
        steps = max(1, int(round((t1 - t0) / cfg.step)))
        h = (t1 - t0) / steps
        t = t0
        for _ in range(min(steps, cfg.max_steps)):
            try:
                y_new = _rk4_step(rhs, y, h)
            except _StageFailure as sf:
                stop = "domain_exit" if sf.domain else "step_failure"
                break
            t += h
            reason = _node_ok(spec, y_new, cfg)
            if reason is not None:
                stop = reason
                break
            y = y_new
            times.append(t)
            ys.append(y.copy())
        else:
            if steps > cfg.max_steps:
                stop = "step_failure"
    else:
        t = t0
        h = min((t1 - t0) / 100.0, 0.1)
        h_min = 1e-14 * max(1.0, abs(t1))
        try:
            k1 = rhs(y)
        except _StageFailure as sf:
            k1 = None
            stop = "domain_exit" if sf.domain else "step_failure"
        nsteps = 0
        while k1 is not None and t < t1:
            if nsteps >= cfg.max_steps:
                stop = "step_failure"
                break
            h = min(h, t1 - t)
            try:
                y_new, err_vec, k_last = _dp_step(rhs, y, h, k1)
            except _StageFailure as sf:
                if h <= h_min:
                    stop = "domain_exit" if sf.domain else "step_failure"
                    break
                h = max(h * 0.5, h_min)
                continue
            nsteps += 1
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
            if err <= 1.0:
                t += h
                reason = _node_ok(spec, y_new, cfg)
                if reason is not None:
                    stop = reason
                    break
                y = y_new
                k1 = k_last  # FSAL
                times.append(t)
                ys.append(y.copy())
                factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
                h *= factor
            else:
                if h <= h_min:
                    stop = "step_failure"
                    break
                h = max(h * max(0.2, 0.9 * err ** -0.2), h_min)

    ys = np.array(ys)
    times = np.array(times)
    states = ys[:, :n]
    costates = ys[:, n:]
    controls = np.array([pmp.optimal_control(spec, PhasePoint(x, p))
                         for x, p in zip(states, costates)])
    names = pmp.first_integrals(spec, start).names
    integrals = np.array([pmp.first_integrals(spec, PhasePoint(x, p)).values
                          for x, p in zip(states, costates)])
    return Trajectory(times, states, costates, controls, names, integrals, stop)


def flow_at(spec: ModelSpec, start: PhasePoint, times,
            cfg: IntegratorConfig = IntegratorConfig()) -> np.ndarray:
    """States of the flow at exact times > t0 = 0 (segment-by-segment)."""
    pt = start
    t_prev = 0.0
    out = []
    for t in times:
        if t < t_prev:
            raise ValueError("times must be nondecreasing from 0")
        if t > t_prev:
            traj = integrate(spec, pt, (t_prev, t), cfg)
            if traj.stop_reason != "horizon":
                raise DomainError(f"flow stopped early: {traj.stop_reason}")
            pt = traj.final_point()
            t_prev = t
        out.append(pt.x)
    return np.array(out)


def energy(spec: ModelSpec, traj: Trajectory) -> float:
    """Composite-Simpson value of E = int (1/2) G(x(t)) u*(t)^2 dt."""
    if traj.controls is None:
        raise ValueError("trajectory has no recorded controls")
    if len(traj) < 3:
        raise ValueError("energy needs at least 3 nodes")
    q = np.array([models.cost_Q(spec, x, u)
                  for x, u in zip(traj.states, traj.controls)])
    return float(simpson(q, x=traj.times))


def integral_drift(spec: ModelSpec, traj: Trajectory) -> dict:
    """Per-integral max over nodes of |I(t) - I(t0)| / max(1, |I(t0)|)."""
    if traj.integrals is None or len(traj) == 0:
        raise ValueError("trajectory has no integral log")
    out = {}
    ref = traj.integrals[0]
    for j, name in enumerate(traj.integral_names):
        dev = np.max(np.abs(traj.integrals[:, j] - ref[j]))
        out[name] = float(dev / max(1.0, abs(ref[j])))
    return out
