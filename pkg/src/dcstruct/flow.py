"""Extended Ricci flow, Calabi flow and a damped Newton solver."""

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .curvature import curvature_jacobian, extended_curvature_jacobian, vertex_curvature
from .energy import check_target, potential_difference
from .errors import DegenerateFace, DegenerateStart, DomainError, LineSearchStall
from .state import EUCLIDEAN, ConformalState, kernels

__all__ = [
    "FlowOptions",
    "FlowTrace",
    "FlowStatus",
    "NewtonInfo",
    "run_extended_ricci",
    "run_calabi",
    "newton_solve",
]

MAX_DU = 0.1
GROWTH_LIMIT = 2.0
DOUBLE_AFTER = 10
DIVERGE_FACTOR = 10.0
DIVERGE_STEPS = 1000
DT_FLOOR = 1e-12


class FlowStatus(str, enum.Enum):
    CONVERGED = "Converged"
    TMAX_REACHED = "TMaxReached"
    DIVERGED = "Diverged"
    DEGENERACY_HALT = "DegeneracyHalt"

    def __str__(self):
        return self.value


@dataclass
class FlowOptions:
    dt: float = 0.05
    t_max: float = 1000.0
    tol: float = 1e-9
    method: str = "explicit-rk4"
    max_newton_iter: int = 50
    record_every: int = 1

    def __post_init__(self):
        if not (self.dt > 0 and self.tol > 0 and self.t_max > 0):
            raise ValueError("dt, tol and t_max must be positive")
        if self.method not in ("explicit-rk4", "implicit-euler"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.record_every < 1 or self.max_newton_iter < 1:
            raise ValueError("record_every and max_newton_iter must be >= 1")


@dataclass
class FlowTrace:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    sum_u: list = field(default_factory=list)
    status: FlowStatus = None
    steps: int = 0
    rejected: int = 0
    wall_time: float = 0.0
    final_state: ConformalState = None

    def record(self, t, u, err):
        self.times.append(float(t))
        self.states.append(np.array(u, dtype=float))
        self.errors.append(float(err))
        self.sum_u.append(float(np.sum(u)))

    @property
    def final_error(self):
        return self.errors[-1] if self.errors else math.nan


def _prepare(surface, scheme, state0, K_bar, background):
    if state0.background != background:
        raise ValueError(f"state is {state0.background}, run requested {background}")
    K_bar = check_target(surface, K_bar, background)
    u0 = np.array(state0.u, dtype=float)
    # validates the hyperbolic u-box
    kernels(background).f_of_u(u0, scheme.epsilon)
    return K_bar, u0


def _in_domain(u, eps, background):
    return background == EUCLIDEAN or not np.any((eps == 1) & ~(u < 0))


class _Stepper:
    """Adaptive step controller shared by both flows."""

    def __init__(self, surface, scheme, K_bar, background, opts, velocity, error):
        self.surface, self.scheme = surface, scheme
        self.K_bar, self.background, self.opts = K_bar, background, opts
        self.eps = np.asarray(scheme.epsilon, dtype=float)
        self.velocity = velocity
        self.error = error

    def rk4(self, u, dt):
        v = self.velocity
        k1 = v(u)
        k2 = v(self._checked(u + 0.5 * dt * k1))
        k3 = v(self._checked(u + 0.5 * dt * k2))
        k4 = v(self._checked(u + dt * k3))
        return dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def implicit_euler(self, u, dt):
        """Backward Euler solved by Newton on the extended curvature."""
        target = u.copy()
        x = u + dt * self.velocity(u)
        x = self._checked(x)
        n = len(u)
        for _ in range(self.opts.max_newton_iter):
            res = x - target - dt * self.velocity(x)
            if np.max(np.abs(res)) < 1e-13:
                return x - u
            state = ConformalState.from_u(self.background, x, self.eps)
            lam = extended_curvature_jacobian(self.surface, self.scheme, state, sparse=False)
            x = self._checked(x - np.linalg.solve(np.eye(n) + dt * lam, res))
        raise _Reject()

    def _checked(self, u):
        if not _in_domain(u, self.eps, self.background):
            raise _Reject()
        return u

    def run(self, u0, trace):
        opts = self.opts
        dt = opts.dt
        t = 0.0
        u = u0.copy()
        err = self.error(u)
        err0 = err
        trace.record(t, u, err)
        accepted_run = 0
        above = 0
        step = self.rk4 if opts.method == "explicit-rk4" else self.implicit_euler
        while True:
            if err < opts.tol:
                trace.status = FlowStatus.CONVERGED
                break
            if t >= opts.t_max:
                trace.status = FlowStatus.TMAX_REACHED
                break
            h = min(dt, opts.t_max - t)
            try:
                du = step(u, h)
                new = self._checked(u + du)
                if np.max(np.abs(du)) > MAX_DU:
                    raise _Reject()
                new_err = self.error(new)
                if new_err > GROWTH_LIMIT * err and h > DT_FLOOR:
                    raise _Reject()
            except (_Reject, _Degenerate):
                trace.rejected += 1
                dt = 0.5 * h
                accepted_run = 0
                if dt < DT_FLOOR:
                    trace.status = FlowStatus.DEGENERACY_HALT
                    break
                continue
            u, err, t = new, new_err, t + h
            trace.steps += 1
            accepted_run += 1
            if accepted_run >= DOUBLE_AFTER:
                dt *= 2.0
                accepted_run = 0
            above = above + 1 if err > DIVERGE_FACTOR * err0 else 0
            if trace.steps % opts.record_every == 0:
                trace.record(t, u, err)
            if above >= DIVERGE_STEPS:
                trace.status = FlowStatus.DIVERGED
                break
        if trace.times[-1] != t:
            trace.record(t, u, err)
        trace.final_state = ConformalState.from_u(self.background, u, self.eps)
        return trace


class _Reject(Exception):
    pass


class _Degenerate(Exception):
    pass


def run_extended_ricci(surface, scheme, state0, K_bar, background, opts=None, extended=True):
    """Integrate du/dt = K_bar - K~ (extended curvature).

    With ``extended=False`` the ordinary curvature is used and the run
    stops with DegenerateFace as soon as any face degenerates.
    """
    opts = opts or FlowOptions()
    K_bar, u0 = _prepare(surface, scheme, state0, K_bar, background)
    eps = np.asarray(scheme.epsilon, dtype=float)
    if opts.method == "implicit-euler" and not extended:
        raise ValueError("implicit-euler integrates the extended flow only")

    def curvature(u):
        try:
            st = ConformalState.from_u(background, u, eps)
        except DomainError:
            raise _Reject() from None
        return vertex_curvature(surface, scheme, st, extended=extended).values

    def velocity(u):
        return K_bar - curvature(u)

    def error(u):
        return float(np.max(np.abs(curvature(u) - K_bar)))

    trace = FlowTrace()
    t0 = time.perf_counter()
    _Stepper(surface, scheme, K_bar, background, opts, velocity, error).run(u0, trace)
    trace.wall_time = time.perf_counter() - t0
    return trace


def run_calabi(surface, scheme, state0, K_bar, background, opts=None):
    """Integrate du/dt = -Lambda (K - K_bar); halts if a face degenerates."""
    opts = opts or FlowOptions()
    K_bar, u0 = _prepare(surface, scheme, state0, K_bar, background)
    eps = np.asarray(scheme.epsilon, dtype=float)
    try:
        vertex_curvature(surface, scheme, state0, extended=False)
    except DegenerateFace as exc:
        raise DegenerateStart(f"initial state is degenerate: {exc}") from None
    if opts.method != "explicit-rk4":
        raise ValueError("the Calabi flow supports explicit-rk4 only")

    def state_of(u):
        try:
            return ConformalState.from_u(background, u, eps)
        except DomainError:
            raise _Reject() from None

    def velocity(u):
        st = state_of(u)
        try:
            K = vertex_curvature(surface, scheme, st).values
            lam = curvature_jacobian(surface, scheme, st)
        except DegenerateFace:
            raise _Degenerate() from None
        return -(lam @ (K - K_bar))

    def error(u):
        try:
            K = vertex_curvature(surface, scheme, state_of(u)).values
        except DegenerateFace:
            raise _Degenerate() from None
        return float(np.max(np.abs(K - K_bar)))

    trace = FlowTrace()
    t0 = time.perf_counter()
    _Stepper(surface, scheme, K_bar, background, opts, velocity, error).run(u0, trace)
    trace.wall_time = time.perf_counter() - t0
    return trace


@dataclass
class NewtonInfo:
    iterations: int
    final_error: float
    step_lengths: list


def newton_solve(surface, scheme, state0, K_bar, background, opts=None, return_info=False):
    """Damped Newton descent on the target potential.

    Euclidean steps solve ``(Lambda + 1 1^T / N) d = K_bar - K``, which
    keeps sum(u) fixed because the right-hand side sums to zero.
    """
    opts = opts or FlowOptions()
    K_bar, u = _prepare(surface, scheme, state0, K_bar, background)
    eps = np.asarray(scheme.epsilon, dtype=float)
    n = surface.vertex_count

    def curvature(u):
        st = ConformalState.from_u(background, u, eps)
        return vertex_curvature(surface, scheme, st).values, st

    try:
        K, state = curvature(u)
    except DegenerateFace as exc:
        raise DegenerateStart(f"initial state is degenerate: {exc}") from None
    steps = []
    for it in range(opts.max_newton_iter + 1):
        res = K - K_bar
        err = float(np.max(np.abs(res)))
        if err < opts.tol:
            info = NewtonInfo(it, err, steps)
            return (state, info) if return_info else state
        if it == opts.max_newton_iter:
            break
        lam = curvature_jacobian(surface, scheme, state, sparse=False)
        if background == EUCLIDEAN:
            lam = lam + np.ones((n, n)) / n
        d = np.linalg.solve(lam, -res)
        alpha = 1.0
        for _ in range(40):
            trial = u + alpha * d
            if _in_domain(trial, eps, background):
                try:
                    K_trial, st_trial = curvature(trial)
                except DegenerateFace:
                    K_trial = None
                if K_trial is not None and (
                        np.max(np.abs(K_trial - K_bar)) < err
                        or potential_difference(surface, scheme, u, trial, K_bar, background) < 0):
                    break
            alpha *= 0.5
        else:
            raise LineSearchStall()
        steps.append(alpha)
        u, K, state = trial, K_trial, st_trial
    raise LineSearchStall(f"no convergence in {opts.max_newton_iter} Newton iterations "
                          f"(error {err:.3g}); try run_extended_ricci instead")
