"""Constrained Hamiltonian structure cross-checked against the direct flow."""

import numpy as np
import pytest

from cliffkdv import (
    FieldState,
    Grid,
    InvalidPhasePointError,
    NonIntegrableInputError,
    charge_h5,
    constraint_bracket_matrix_check,
    deriv,
    dirac_rhs,
    functional_derivative_phi,
    functional_derivative_u,
    integrate,
    lagrangian_density,
    legendre_hamiltonian,
    lift_to_potentials,
    potentials_to_state,
    rhs,
    zero_state,
)
from cliffkdv.hamiltonian import ConstraintPair, smeared_constraint_bracket
from cliffkdv.solitons import SolitonSpec, one_soliton
from cliffkdv.verify import _finite_difference_gradients, random_band_limited_state


@pytest.fixture
def grid():
    return Grid(80.0, 256)


def rand_state(grid, seed, k=2):
    rng = np.random.default_rng(seed)
    return random_band_limited_state(grid, rng, k)


def test_lift_zero_state(grid):
    cp = lift_to_potentials(zero_state(grid, 2))
    assert np.max(np.abs(cp.w)) == 0.0
    assert np.max(np.abs(cp.p)) == 0.0
    assert cp.constraint_residual() == 0.0


def test_lift_cosine(grid):
    u = np.cos(2 * np.pi * grid.x / grid.length)
    cp = lift_to_potentials(FieldState(grid, u, None))
    expected_w = (grid.length / (2 * np.pi)) * np.sin(2 * np.pi * grid.x / grid.length)
    assert np.max(np.abs(cp.w - expected_w)) < 1e-12
    assert np.max(np.abs(cp.p - 0.5 * u)) == 0.0


def test_lift_satisfies_constraints(grid):
    cp = lift_to_potentials(rand_state(grid, 3))
    assert cp.constraint_residual() <= 1e-12 * (1 + np.max(np.abs(cp.p)))


def test_lift_rejects_nonzero_mean(grid):
    grid512 = Grid(80.0, 512)
    sol = one_soliton(SolitonSpec(c=1.0, a=-40.0), grid512)
    with pytest.raises(NonIntegrableInputError):
        lift_to_potentials(sol)


def test_potentials_roundtrip(grid):
    state = rand_state(grid, 5)
    back = potentials_to_state(lift_to_potentials(state))
    assert np.max(np.abs(back.u - state.u)) < 1e-11
    assert np.max(np.abs(back.phi - state.phi)) < 1e-11


def test_lagrangian_density_zero(grid):
    cp = lift_to_potentials(zero_state(grid, 1))
    dens = lagrangian_density(cp, np.zeros(grid.n_points),
                              np.zeros((1, grid.n_points)), 1.0)
    assert np.max(np.abs(dens)) == 0.0


def test_lagrangian_density_static_mode(grid):
    # with vanishing velocities only (w')^3/6 - (w'')^2/2 survives
    u = np.cos(2 * np.pi * grid.x / grid.length)
    cp = lift_to_potentials(FieldState(grid, u, None))
    dens = lagrangian_density(cp, np.zeros(grid.n_points),
                              np.zeros((0, grid.n_points)), 1.0)
    up = deriv(grid, u, 1)
    expected = u**3 / 6.0 - 0.5 * up**2
    assert np.max(np.abs(dens - expected)) < 1e-11


def test_on_shell_legendre_identity(grid):
    # <p w_t + sigma eta_t - L> equals h5/2 through explicit pieces
    state = rand_state(grid, 7)
    lam = 1.0
    cp = lift_to_potentials(state)
    u_t, phi_t = rhs(state, lam)
    from cliffkdv.grid import antideriv
    w_t = antideriv(grid, u_t)
    eta_t = np.array([antideriv(grid, row) for row in phi_t])
    dens = cp.p * w_t + np.sum(cp.sigma * eta_t, axis=0)
    dens -= lagrangian_density(cp, u_t, phi_t, lam)
    assert integrate(grid, dens) == pytest.approx(0.5 * charge_h5(state, lam), abs=1e-9)


@pytest.mark.parametrize("lam", [1.0, 3.0])
def test_legendre_hamiltonian(grid, lam):
    state = rand_state(grid, 11)
    cp = lift_to_potentials(state)
    assert legendre_hamiltonian(cp, lam) == pytest.approx(
        0.5 * charge_h5(state, lam), abs=1e-9)
    assert legendre_hamiltonian(lift_to_potentials(zero_state(grid, 1)), lam) == 0.0


def test_legendre_rejects_off_constraint_points(grid):
    state = rand_state(grid, 13)
    cp = lift_to_potentials(state)
    broken = ConstraintPair(grid=grid, w=cp.w, eta=cp.eta,
                            p=cp.p + 0.5, sigma=cp.sigma)
    with pytest.raises(InvalidPhasePointError):
        legendre_hamiltonian(broken, 1.0)


def test_functional_derivative_u_examples(grid):
    assert np.max(np.abs(functional_derivative_u(zero_state(grid, 1), 1.0))) == 0.0
    u = np.sin(2 * np.pi * grid.x / grid.length)
    state = FieldState(grid, u, None)
    k1 = 2 * np.pi / grid.length
    expected = -u**2 + 2 * k1**2 * u
    assert np.max(np.abs(functional_derivative_u(state, 1.0) - expected)) < 1e-12


def test_functional_derivative_phi_examples(grid):
    phi = np.cos(2 * np.pi * grid.x / grid.length)
    state = FieldState(grid, np.zeros(grid.n_points), phi[None, :])
    k1 = 2 * np.pi / grid.length
    expected = 2 * k1**2 * phi
    assert np.max(np.abs(functional_derivative_phi(state, 1.0, 0) - expected)) < 1e-12


def test_functional_derivatives_vs_finite_differences():
    small = Grid(80.0, 128)
    rng = np.random.default_rng(17)
    state = random_band_limited_state(small, rng, 1, max_mode=5)
    lam = 1.4
    fd_u, fd_p = _finite_difference_gradients(state, lam)
    ref_u = functional_derivative_u(state, lam)
    ref_p = functional_derivative_phi(state, lam, 0)
    assert np.max(np.abs(fd_u - ref_u)) <= 1e-6 * max(1, np.max(np.abs(ref_u)))
    assert np.max(np.abs(fd_p - ref_p)) <= 1e-6 * max(1, np.max(np.abs(ref_p)))


@pytest.mark.parametrize("lam", [-1.0, 0.0, 1.0, 2.0, 3.0])
def test_dirac_rhs_equals_direct_rhs(grid, lam):
    for seed in range(5):
        state = rand_state(grid, 100 + seed)
        du_a, dphi_a = rhs(state, lam)
        du_b, dphi_b = dirac_rhs(state, lam)
        assert np.max(np.abs(du_a - du_b)) < 1e-10
        assert np.max(np.abs(dphi_a - dphi_b)) < 1e-10


def test_dirac_rhs_trivial_cases(grid):
    du, dphi = dirac_rhs(zero_state(grid, 2), 1.0)
    assert np.max(np.abs(du)) == 0.0 and np.max(np.abs(dphi)) == 0.0
    const = FieldState(grid, np.full(grid.n_points, 1.5), None)
    du_c, _ = dirac_rhs(const, 1.0)
    du_d, _ = rhs(const, 1.0)
    assert np.max(np.abs(du_c)) < 1e-13 and np.max(np.abs(du_d)) < 1e-13


def test_smeared_bracket_examples(grid):
    cp = lift_to_potentials(rand_state(grid, 19, k=1))
    const = np.ones(grid.n_points)
    assert smeared_constraint_bracket(cp, 0, 0, const, const) == pytest.approx(0.0, abs=1e-12)
    f = np.sin(2 * np.pi * grid.x / grid.length)
    g = np.cos(2 * np.pi * grid.x / grid.length)
    # -<f g'> = (2 pi / L) <sin^2> = pi
    value = smeared_constraint_bracket(cp, 0, 0, f, g)
    assert value == pytest.approx(np.pi, rel=1e-10)
    assert smeared_constraint_bracket(cp, 0, 1, f, g) == 0.0


def test_constraint_bracket_matrix(grid):
    cp = lift_to_potentials(rand_state(grid, 23, k=2))
    assert constraint_bracket_matrix_check(cp)
