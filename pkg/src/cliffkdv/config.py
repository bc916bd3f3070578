"""Run configuration: JSON parsing and initial-condition construction."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dynamics import SolverConfig
from .errors import ConfigError
from .fields import FieldState, load_state
from .grid import Grid
from .solitons import SolitonSpec, kdv_two_soliton, one_soliton

IC_TYPES = ("soliton", "two_soliton", "modes", "file")

DEFAULT_SEED = 20260809


@dataclass(frozen=True)
class RunConfig:
    grid: Grid
    n_components: int
    solver: SolverConfig
    initial_condition: dict
    state_path: str | None
    charges_path: str | None
    seed: int = DEFAULT_SEED


def parse_run_config(data: dict) -> RunConfig:
    try:
        grid_spec = data["grid"]
        grid = Grid(float(grid_spec["L"]), int(grid_spec["n"]))
        n_components = int(data["K"])
        solver = SolverConfig(
            lam=float(data["lambda"]),
            dt=float(data["dt"]),
            t_end=float(data["t_end"]),
            integrator=str(data.get("integrator", "ifrk4")),
            dealias=bool(data.get("dealias", True)),
            sample_every=int(data.get("sample_every", 1)),
        )
    except KeyError as exc:
        raise ConfigError(f"missing config key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from exc
    if n_components < 0:
        raise ConfigError(f"K must be >= 0, got {n_components}")
    ic = data.get("initial_condition", {"type": "modes", "modes": []})
    if not isinstance(ic, dict) or ic.get("type") not in IC_TYPES:
        raise ConfigError(
            f"initial_condition.type must be one of {IC_TYPES}, got {ic!r}"
        )
    output = data.get("output", {})
    return RunConfig(
        grid=grid,
        n_components=n_components,
        solver=solver,
        initial_condition=ic,
        state_path=output.get("state_path"),
        charges_path=output.get("charges_path"),
        seed=int(data.get("seed", DEFAULT_SEED)),
    )


def load_run_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    return parse_run_config(data)


def _parse_velocity(raw) -> str | float:
    if isinstance(raw, str) and raw not in ("paper", "oracle"):
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"bad soliton velocity {raw!r}") from exc
    if isinstance(raw, (int, float)):
        return float(raw)
    return raw


def build_initial_state(cfg: RunConfig) -> FieldState:
    """Construct the t=0 state described by the initial_condition block."""
    ic = cfg.initial_condition
    kind = ic["type"]
    g = cfg.grid
    k = cfg.n_components

    if kind == "soliton":
        spec = SolitonSpec(
            c=float(ic.get("c", 1.0)),
            a=float(ic.get("a", -g.length / 2.0)),
            velocity=_parse_velocity(ic.get("velocity", "oracle")),
        )
        base = one_soliton(spec, g, t=0.0)
        state = FieldState(g, base.u, np.zeros((k, g.n_points)), 0.0)
        return _apply_extra_fields(state, ic)

    if kind == "two_soliton":
        base = kdv_two_soliton(
            float(ic["c1"]), float(ic["c2"]), g, t=0.0,
            x1=ic.get("x1"), x2=ic.get("x2"),
        )
        return FieldState(g, base.u, np.zeros((k, g.n_points)), 0.0)

    if kind == "modes":
        u = np.zeros(g.n_points)
        phi = np.zeros((k, g.n_points))
        for entry in ic.get("modes", []):
            target = _field_row(entry.get("field", "u"), k)
            m = int(entry["m"])
            amp = float(entry["amplitude"])
            phase = float(entry.get("phase", 0.0))
            wave = amp * np.cos(2.0 * np.pi * m * g.x / g.length + phase)
            if target == 0:
                u += wave
            else:
                phi[target - 1] += wave
        return _apply_extra_fields(FieldState(g, u, phi, 0.0), ic)

    # kind == "file"
    state, _ = load_state(ic["path"])
    if state.grid != g or state.n_components != k:
        raise ConfigError(
            "state file geometry does not match the run configuration"
        )
    return state


def _field_row(name: str, k: int) -> int:
    if name == "u":
        return 0
    if name.startswith("phi_"):
        idx = int(name[4:])
        if 1 <= idx <= k:
            return idx
    raise ConfigError(f"unknown field {name!r} for K={k}")


def _apply_extra_fields(state: FieldState, ic: dict) -> FieldState:
    """Optional Gaussian pulses stacked on any field, for mixed-run setups.

    Each entry: {"field": "phi_1", "amplitude": A, "center": x0, "width": s}
    adds A exp(-(x-x0)^2 / (2 s^2)).
    """
    pulses = ic.get("gaussians", [])
    if not pulses:
        return state
    g = state.grid
    u = state.u.copy()
    phi = state.phi.copy()
    for pulse in pulses:
        target = _field_row(pulse.get("field", "u"), state.n_components)
        amp = float(pulse["amplitude"])
        x0 = float(pulse.get("center", g.length / 2.0))
        width = float(pulse.get("width", 4.0))
        wave = amp * np.exp(-((g.x - x0) ** 2) / (2.0 * width**2))
        if target == 0:
            u += wave
        else:
            phi[target - 1] += wave
    return FieldState(g, u, phi, state.t)
