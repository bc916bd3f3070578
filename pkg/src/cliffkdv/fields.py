"""Field state for the coupled system and its norms.

The algebra-valued field is represented by K real component fields
phi_1..phi_K sampled on the grid; the only piece of the algebra the
dynamics and charges ever need is the body projection sum(phi_i^2), so
that is all this module models.  Orthogonal mixings of the components are
a symmetry of everything downstream.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GridShapeError
from .grid import Grid, deriv, integrate


@dataclass(frozen=True)
class FieldState:
    """The real field u plus K component fields on a common grid.

    Arrays are copied on construction, validated (shape and finiteness)
    and frozen, so states are safely shareable values.
    """

    grid: Grid
    u: np.ndarray
    phi: np.ndarray = field(default=None)  # shape (K, n); K may be 0
    t: float = 0.0

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        if u.shape != (self.grid.n_points,):
            raise GridShapeError(
                f"u has shape {u.shape}, expected ({self.grid.n_points},)"
            )
        phi = self.phi
        if phi is None:
            phi = np.zeros((0, self.grid.n_points))
        phi = np.array(phi, dtype=float)
        if phi.ndim == 1:
            phi = phi[None, :]
        if phi.ndim != 2 or phi.shape[1] != self.grid.n_points:
            raise GridShapeError(
                f"phi has shape {phi.shape}, expected (K, {self.grid.n_points})"
            )
        if not np.isfinite(u).all():
            raise ValueError("u contains non-finite values")
        if not np.isfinite(phi).all():
            raise ValueError("phi contains non-finite values")
        u.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n_components(self) -> int:
        return self.phi.shape[0]


def zero_state(grid: Grid, n_components: int = 0, t: float = 0.0) -> FieldState:
    return FieldState(grid, np.zeros(grid.n_points),
                      np.zeros((n_components, grid.n_points)), t)


def body_p(state: FieldState) -> np.ndarray:
    """Body projection of xi*conj(xi): pointwise sum of squared components."""
    if state.n_components == 0:
        return np.zeros(state.grid.n_points)
    return np.sum(state.phi**2, axis=0)


def l2_norm_sq(state: FieldState) -> float:
    """Squared L2 norm of the full field pair: integral of u^2 + sum phi_i^2."""
    return integrate(state.grid, state.u**2 + body_p(state))


def sobolev_h1_norm_sq(state: FieldState) -> float:
    """Squared H1 norm: L2 of all fields plus L2 of their x-derivatives."""
    g = state.grid
    density = state.u**2 + body_p(state) + deriv(g, state.u, 1) ** 2
    if state.n_components:
        density = density + np.sum(deriv(g, state.phi, 1) ** 2, axis=0)
    return integrate(g, density)


# ---------------------------------------------------------------------------
# serialization: one JSON header line followed by columnar CSV
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def save_state(state: FieldState, path, lam: float, seed: int | None = None) -> None:
    """Write the state as a JSON header line plus x,u,phi_1..phi_K CSV.

    Values carry 17 significant digits so the round-trip is bit exact.
    """
    with open(path, "w", newline="") as fh:
        fh.write(dumps_state(state, lam, seed))


def dumps_state(state: FieldState, lam: float, seed: int | None = None) -> str:
    header = {
        "L": state.grid.length,
        "n_points": state.grid.n_points,
        "K": state.n_components,
        "t": state.t,
        "lambda": lam,
    }
    if seed is not None:
        header["seed"] = int(seed)
    buf = io.StringIO()
    buf.write(json.dumps(header, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "u"] + [f"phi_{i + 1}" for i in range(state.n_components)])
    x = state.grid.x
    for j in range(state.grid.n_points):
        row = [_fmt(x[j]), _fmt(state.u[j])]
        row += [_fmt(state.phi[i, j]) for i in range(state.n_components)]
        writer.writerow(row)
    return buf.getvalue()


def load_state(path) -> tuple[FieldState, float]:
    """Read a serialized state; returns the state and the lambda it was run at."""
    with open(path, "r", newline="") as fh:
        return loads_state(fh.read())


def loads_state(text: str) -> tuple[FieldState, float]:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("state file truncated: missing header or column row")
    header = json.loads(lines[0])
    for key in ("L", "n_points", "K", "t", "lambda"):
        if key not in header:
            raise ValueError(f"state header missing key '{key}'")
    grid = Grid(float(header["L"]), int(header["n_points"]))
    k = int(header["K"])
    rows = list(csv.reader(lines[1:]))
    columns = rows[0]
    if columns[:2] != ["x", "u"] or len(columns) != 2 + k:
        raise ValueError(f"unexpected state columns {columns}")
    data = rows[1:]
    if len(data) != grid.n_points:
        raise ValueError(
            f"state file has {len(data)} sample rows, expected {grid.n_points}"
        )
    u = np.array([float(r[1]) for r in data])
    phi = np.array([[float(r[2 + i]) for r in data] for i in range(k)])
    if k == 0:
        phi = np.zeros((0, grid.n_points))
    state = FieldState(grid, u, phi, t=float(header["t"]))
    return state, float(header["lambda"])
