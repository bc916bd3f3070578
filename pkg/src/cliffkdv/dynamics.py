"""Right-hand side of the lambda-family system and fixed-step integrators.

The system evolved here is

    u_t     = -u''' - (u^2)'/2 - (lam/4) (sum_i phi_i^2)'
    phi_i,t = -phi_i''' - (lam/2) (u phi_i)'

lam = 1 is the supersymmetry-broken system proper; lam = 2 decouples into
two independent KdV equations in u +- phi and is the only member with
Galileo invariance.  Every term is a total x-derivative, so the grid
quadrature conserves the means (h1 and h_half) exactly, step by step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .charges import ChargeReport, charge_report
from .errors import BlowUpError, ConfigError, UnsupportedShapeError
from .fields import FieldState
from .grid import Grid, deriv

INTEGRATORS = ("rk4", "ifrk4")

#: abort threshold on any field value
BLOWUP_LIMIT = 1e12

#: explicit-stability guard for rk4 against the u''' term
RK4_STABILITY = 2.5


@dataclass(frozen=True)
class SolverConfig:
    lam: float
    dt: float
    t_end: float
    integrator: str = "ifrk4"
    dealias: bool = True
    sample_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ConfigError(f"t_end must be >= 0, got {self.t_end}")
        if self.integrator not in INTEGRATORS:
            raise ConfigError(
                f"integrator must be one of {INTEGRATORS}, got {self.integrator!r}"
            )
        if int(self.sample_every) < 1:
            raise ConfigError(f"sample_every must be >= 1, got {self.sample_every}")

    def n_steps(self) -> int:
        steps = round(self.t_end / self.dt)
        if abs(steps * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise ConfigError(
                f"t_end={self.t_end} is not an integer multiple of dt={self.dt}"
            )
        return steps


def _stack(state: FieldState) -> np.ndarray:
    return np.vstack([state.u[None, :], state.phi])


def _unstack(grid: Grid, stack: np.ndarray, t: float) -> FieldState:
    return FieldState(grid, stack[0], stack[1:], t)


def _check_finite_stack(stack: np.ndarray, t: float) -> None:
    for row in range(stack.shape[0]):
        bad = not np.isfinite(stack[row]).all() or np.max(np.abs(stack[row])) > BLOWUP_LIMIT
        if bad:
            name = "u" if row == 0 else f"phi_{row}"
            raise BlowUpError(t, name)


def _flux_stack(grid: Grid, phys: np.ndarray, lam: float, dealias: bool) -> np.ndarray:
    """Quadratic flux q such that the nonlinear term is -q'.

    q[0] = u^2/2 + (lam/4) sum phi_i^2 and q[i] = (lam/2) u phi_i.
    """
    if dealias:
        from .grid import dealiased_product

        sq = dealiased_product(grid, phys, phys)
        cross = dealiased_product(
            grid, np.broadcast_to(phys[0], phys[1:].shape), phys[1:]
        ) if phys.shape[0] > 1 else phys[1:]
    else:
        sq = phys * phys
        cross = phys[0] * phys[1:]
    q = np.empty_like(phys)
    q[0] = 0.5 * sq[0] + 0.25 * lam * np.sum(sq[1:], axis=0)
    q[1:] = 0.5 * lam * cross
    return q


def _rhs_stack(grid: Grid, phys: np.ndarray, lam: float, dealias: bool) -> np.ndarray:
    q = _flux_stack(grid, phys, lam, dealias)
    return -deriv(grid, phys, 3) - deriv(grid, q, 1)


def rhs(state: FieldState, lam: float, dealias: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Time derivative (du/dt, dphi/dt) of the coupled system."""
    phys = _stack(state)
    out = _rhs_stack(state.grid, phys, lam, dealias)
    if not np.isfinite(out).all():
        bad = [r for r in range(out.shape[0]) if not np.isfinite(out[r]).all()]
        name = "u" if bad[0] == 0 else f"phi_{bad[0]}"
        raise BlowUpError(state.t, name)
    return out[0], out[1:]


class _Stepper:
    """Precomputed fixed-step integrator bound to one grid and config."""

    def __init__(self, grid: Grid, cfg: SolverConfig):
        self.grid = grid
        self.cfg = cfg
        if cfg.integrator == "rk4":
            limit = RK4_STABILITY / grid.k_max**3
            if cfg.dt > limit:
                raise ConfigError(
                    f"rk4 needs dt <= {limit:.3e} at this resolution, got {cfg.dt}"
                )
        k = grid.k_rfft.copy()
        k[-1] = 0.0  # Nyquist frozen, as for odd-order derivatives
        self._ik = 1j * k
        # exact propagator of the linear part -d_x^3  <->  +i k^3
        self._exp_half = np.exp(1j * k**3 * (cfg.dt / 2.0))
        self._exp_full = self._exp_half**2

    # -- physical-space classical RK4 ------------------------------------
    def _step_rk4(self, phys: np.ndarray) -> np.ndarray:
        g, lam, da, dt = self.grid, self.cfg.lam, self.cfg.dealias, self.cfg.dt
        k1 = _rhs_stack(g, phys, lam, da)
        k2 = _rhs_stack(g, phys + 0.5 * dt * k1, lam, da)
        k3 = _rhs_stack(g, phys + 0.5 * dt * k2, lam, da)
        k4 = _rhs_stack(g, phys + dt * k3, lam, da)
        return phys + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    # -- integrating-factor RK4 in transform space -----------------------
    def _nonlinear_hat(self, y_hat: np.ndarray) -> np.ndarray:
        phys = np.fft.irfft(y_hat, n=self.grid.n_points, axis=-1)
        q = _flux_stack(self.grid, phys, self.cfg.lam, self.cfg.dealias)
        return -self._ik * np.fft.rfft(q, axis=-1)

    def _step_ifrk4(self, phys: np.ndarray) -> np.ndarray:
        dt = self.cfg.dt
        e, e2 = self._exp_half, self._exp_full
        y = np.fft.rfft(phys, axis=-1)
        n1 = self._nonlinear_hat(y)
        n2 = self._nonlinear_hat(e * (y + 0.5 * dt * n1))
        n3 = self._nonlinear_hat(e * y + 0.5 * dt * n2)
        n4 = self._nonlinear_hat(e2 * y + dt * e * n3)
        y = e2 * y + (dt / 6.0) * (e2 * n1 + 2.0 * e * (n2 + n3) + n4)
        return np.fft.irfft(y, n=self.grid.n_points, axis=-1)

    def step(self, phys: np.ndarray) -> np.ndarray:
        if self.cfg.integrator == "rk4":
            return self._step_rk4(phys)
        return self._step_ifrk4(phys)


def step(state: FieldState, cfg: SolverConfig) -> FieldState:
    """Advance the state by one time step of the configured integrator."""
    stepper = _Stepper(state.grid, cfg)
    out = stepper.step(_stack(state))
    t_next = state.t + cfg.dt
    _check_finite_stack(out, t_next)
    return _unstack(state.grid, out, t_next)


def evolve(
    state: FieldState,
    cfg: SolverConfig,
    observer: Callable[[ChargeReport], None] | None = None,
) -> tuple[FieldState, list[ChargeReport]]:
    """Integrate to t_end, reporting charges every sample_every steps.

    The initial state is always reported; so is the final one.  Blow-up
    aborts with the last good time attached.
    """
    stepper = _Stepper(state.grid, cfg)
    n_steps = cfg.n_steps()
    t0 = state.t
    phys = _stack(state)
    reports: list[ChargeReport] = []

    def sample(current: FieldState) -> None:
        rep = charge_report(current, cfg.lam)
        reports.append(rep)
        if observer is not None:
            observer(rep)

    current = state
    sample(current)
    for i in range(1, n_steps + 1):
        phys = stepper.step(phys)
        t = t0 + i * cfg.dt
        _check_finite_stack(phys, t)
        if i % cfg.sample_every == 0 or i == n_steps:
            current = _unstack(state.grid, phys, t)
            sample(current)
    if n_steps > 0:
        current = _unstack(state.grid, phys, t0 + n_steps * cfg.dt)
    return current, reports


def galileo_boost(state: FieldState, c: float) -> FieldState:
    """Shift u by the boost velocity c; component fields are untouched.

    The accompanying coordinate shift x -> x + c t is applied by the
    caller (tests compare against a resampled translate).
    """
    return FieldState(state.grid, state.u + c, state.phi, state.t)


def decouple_lambda2(state: FieldState) -> tuple[np.ndarray, np.ndarray]:
    """Characteristic combination v+- = u +- phi_1 for the lam = 2 system.

    Each of v+ and v- then satisfies the scalar equation
    v_t = -v''' - (v^2)'/2 on its own.
    """
    if state.n_components != 1:
        raise UnsupportedShapeError(
            f"decoupling needs exactly one component field, got {state.n_components}"
        )
    return state.u + state.phi[0], state.u - state.phi[0]
