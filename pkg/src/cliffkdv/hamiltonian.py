"""Hamiltonian reconstruction of the dynamics via constrained potentials.

The system is Lagrangian once written in potentials w, eta_i with u = w'
and phi_i = eta_i'.  The Legendre transform is degenerate: the momenta
satisfy p = w'/2 and sigma_i = eta_i'/2 identically (second-class
constraints), and eliminating them with the constrained bracket turns the
flow into

    u_t     = d/dx ( (1/2) dH5/du )
    phi_i,t = d/dx ( (1/2) dH5/dphi_i )

with H5 the quadrature of -u^3/3 - (lam/2) u P + (u')^2 + P' density (the
h5 charge).  This module evaluates that bracket-side flow and the
Legendre identity H = h5/2 as executable cross-checks against the direct
right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .errors import GridShapeError, InvalidPhasePointError
from .fields import FieldState, body_p
from .grid import Grid, antideriv, deriv, integrate

#: tolerance for the primary constraints p - w'/2 and sigma_i - eta_i'/2
CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class ConstraintPair:
    """Phase-space point in potential variables with its momenta."""

    grid: Grid
    w: np.ndarray
    eta: np.ndarray  # (K, n)
    p: np.ndarray
    sigma: np.ndarray  # (K, n)

    def __post_init__(self):
        n = self.grid.n_points
        for name in ("w", "p"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (n,):
                raise GridShapeError(f"{name} has shape {arr.shape}, expected ({n},)")
            object.__setattr__(self, name, arr)
        for name in ("eta", "sigma"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 2 or arr.shape[1] != n:
                raise GridShapeError(f"{name} has shape {arr.shape}, expected (K, {n})")
            object.__setattr__(self, name, arr)

    @property
    def n_components(self) -> int:
        return self.eta.shape[0]

    def constraint_residual(self) -> float:
        g = self.grid
        res = float(np.max(np.abs(self.p - 0.5 * deriv(g, self.w, 1))))
        if self.n_components:
            res = max(res, float(np.max(np.abs(self.sigma - 0.5 * deriv(g, self.eta, 1)))))
        return res

    def _scale(self) -> float:
        scale = float(np.max(np.abs(self.p), initial=0.0))
        if self.n_components:
            scale = max(scale, float(np.max(np.abs(self.sigma))))
        return max(1.0, scale)

    def require_on_constraints(self) -> None:
        res = self.constraint_residual()
        if res > CONSTRAINT_TOL * self._scale():
            raise InvalidPhasePointError(
                f"primary constraints violated by {res:.3e}"
            )


def lift_to_potentials(state: FieldState) -> ConstraintPair:
    """Build (w, eta, p, sigma) from a zero-mean field state.

    w and eta_i are the periodic antiderivatives (zero-mean fields only;
    localized bump states with non-zero mean have no periodic potential),
    and the momenta take their constrained values u/2 and phi_i/2.
    """
    g = state.grid
    w = antideriv(g, state.u)
    eta = np.array([antideriv(g, state.phi[i]) for i in range(state.n_components)])
    if state.n_components == 0:
        eta = np.zeros((0, g.n_points))
    return ConstraintPair(grid=g, w=w, eta=eta, p=0.5 * state.u,
                          sigma=0.5 * state.phi)


def potentials_to_state(cp: ConstraintPair, t: float = 0.0) -> FieldState:
    g = cp.grid
    u = deriv(g, cp.w, 1)
    phi = deriv(g, cp.eta, 1) if cp.n_components else np.zeros((0, g.n_points))
    return FieldState(g, u, phi, t)


def _potential_velocities(cp: ConstraintPair, u_t: np.ndarray,
                          phi_t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    g = cp.grid
    w_t = antideriv(g, u_t)
    eta_t = np.array([antideriv(g, phi_t[i]) for i in range(cp.n_components)])
    if cp.n_components == 0:
        eta_t = np.zeros((0, g.n_points))
    return w_t, eta_t


def lagrangian_density(cp: ConstraintPair, u_t: np.ndarray, phi_t: np.ndarray,
                       lam: float) -> np.ndarray:
    """Pointwise Lagrangian density in potential variables.

    (1/2) w' w_t + (w')^3/6 - (w'')^2/2 + (lam/4) w' sum (eta_i')^2
      + sum [ (1/2) eta_i' eta_i,t - (eta_i'')^2/2 ],
    with the potential velocities recovered by antidifferentiation (the
    field velocities are total derivatives, so they are zero mean).
    """
    g = cp.grid
    w_t, eta_t = _potential_velocities(cp, u_t, phi_t)
    wp = deriv(g, cp.w, 1)
    wpp = deriv(g, cp.w, 2)
    density = 0.5 * wp * w_t + wp**3 / 6.0 - 0.5 * wpp**2
    if cp.n_components:
        etap = deriv(g, cp.eta, 1)
        etapp = deriv(g, cp.eta, 2)
        density = density + 0.25 * lam * wp * np.sum(etap**2, axis=0)
        density = density + np.sum(0.5 * etap * eta_t - 0.5 * etapp**2, axis=0)
    return density


def legendre_hamiltonian(cp: ConstraintPair, lam: float) -> float:
    """<p w_t + sigma_i eta_i,t - L> with on-shell velocities.

    The velocity terms cancel against the Lagrangian's own on the
    constraint surface, so the value must equal half the h5 charge; both
    sides are computed through entirely different code paths.
    """
    cp.require_on_constraints()
    g = cp.grid
    state = potentials_to_state(cp)
    u_t, phi_t = dynamics.rhs(state, lam)
    w_t, eta_t = _potential_velocities(cp, u_t, phi_t)
    dens = cp.p * w_t
    if cp.n_components:
        dens = dens + np.sum(cp.sigma * eta_t, axis=0)
    dens = dens - lagrangian_density(cp, u_t, phi_t, lam)
    return integrate(g, dens)


# ---------------------------------------------------------------------------
# field-level bracket evolution (no potentials required)
# ---------------------------------------------------------------------------

def functional_derivative_u(state: FieldState, lam: float) -> np.ndarray:
    """Euler operator applied to the h5 density with respect to u.

    d/du - d/dx d/du' of the density gives -u^2 - (lam/2) P - 2 u''.
    """
    g = state.grid
    return -state.u**2 - 0.5 * lam * body_p(state) - 2.0 * deriv(g, state.u, 2)


def functional_derivative_phi(state: FieldState, lam: float, i: int) -> np.ndarray:
    """Same Euler operator with respect to component i: -lam u phi_i - 2 phi_i''."""
    g = state.grid
    return -lam * state.u * state.phi[i] - 2.0 * deriv(g, state.phi[i], 2)


def dirac_rhs(state: FieldState, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Time derivatives generated by the constrained bracket.

    {u(x), u(y)} = d_x delta(x, y) on the constraint surface, so the flow
    of H = h5/2 is u_t = d/dx ((1/2) dH5/du), and likewise per component.
    Shares no code with dynamics.rhs beyond the spectral derivative.
    """
    g = state.grid
    du = deriv(g, 0.5 * functional_derivative_u(state, lam), 1)
    if state.n_components:
        fd = np.array([
            functional_derivative_phi(state, lam, i)
            for i in range(state.n_components)
        ])
        dphi = deriv(g, 0.5 * fd, 1)
    else:
        dphi = np.zeros((0, g.n_points))
    return du, dphi


def smeared_constraint_bracket(cp: ConstraintPair, i_index: int, j_index: int,
                               f: np.ndarray, g: np.ndarray) -> float:
    """Bracket of smeared constraints V_f[v_I] and V_g[v_J].

    Assembled by bilinearity from the canonical pairs {w, p} and
    {eta_i, sigma_i}: cross-sector brackets vanish, and within a sector
    the w-dependence of one constraint pairs with the p-dependence of the
    other, leaving <f' g - f g'>/2.
    """
    if i_index != j_index:
        return 0.0
    grid = cp.grid
    fp = deriv(grid, f, 1)
    gp = deriv(grid, g, 1)
    return 0.5 * integrate(grid, fp * g - f * gp)


def constraint_bracket_matrix_check(cp: ConstraintPair, n_modes: int = 3,
                                    tol: float = 1e-10) -> bool:
    """Verify {v_I(f), v_J(g)} = -delta_IJ <f g'> on low-mode test functions.

    Uses the constant and the first n_modes sine/cosine pairs as smearing
    functions across every constraint pair (the u sector plus one per
    component).
    """
    grid = cp.grid
    x = grid.x
    tests = [np.ones_like(x)]
    for m in range(1, n_modes + 1):
        tests.append(np.sin(2.0 * np.pi * m * x / grid.length))
        tests.append(np.cos(2.0 * np.pi * m * x / grid.length))
    n_constraints = 1 + cp.n_components
    ok = True
    for i_index in range(n_constraints):
        for j_index in range(n_constraints):
            delta = 1.0 if i_index == j_index else 0.0
            for f in tests:
                for g in tests:
                    lhs = smeared_constraint_bracket(cp, i_index, j_index, f, g)
                    rhs_val = -delta * integrate(grid, f * deriv(grid, g, 1))
                    if abs(lhs - rhs_val) > tol * (1.0 + abs(rhs_val)):
                        ok = False
    return ok
