"""Conserved quantities of the coupled system and the lower-bound checks.

The local charges are, per component where applicable,

    h_half_i = int phi_i dx
    h1       = int u dx
    h3       = int (u^2 + sum phi_i^2) dx          (== squared L2 norm)
    h5       = int (-u^3/3 - (lam/2) u sum phi_i^2
                    + (u')^2 + sum (phi_i')^2) dx

together with the non-local charge int phi_i(x) int_{-inf}^x phi_i(s) ds dx
summed over components.  h5/2 is the Hamiltonian that generates the flow,
and h5 >= -(1 + (m/(4 sqrt 2))^2) h3 with m = max(1, |lam|) is the
boundedness property checked here.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError
from .fields import FieldState, body_p, l2_norm_sq, sobolev_h1_norm_sq
from .grid import cumulative_integral, deriv, integrate


@dataclass(frozen=True)
class ChargeReport:
    """Snapshot of every monitored quantity at one sample time."""

    t: float
    h_half: np.ndarray  # per-component, length K
    h1: float
    h3: float
    h5: float
    nonlocal_charge: float
    l2: float
    sobolev_h1: float


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    margin: float
    holds: bool


@dataclass(frozen=True)
class SupBoundCheck:
    sup_u: float
    bound: float
    holds: bool


def charge_h_half(state: FieldState) -> np.ndarray:
    """Per-component integral of phi_i over the box."""
    g = state.grid
    return np.array([integrate(g, state.phi[i]) for i in range(state.n_components)])


def charge_h1(state: FieldState) -> float:
    return integrate(state.grid, state.u)


def charge_h3(state: FieldState) -> float:
    """Squared L2 norm, cross-checked against its Parseval evaluation."""
    value = l2_norm_sq(state)
    parseval = _parseval_l2_sq(state)
    assert abs(value - parseval) <= 1e-12 * (1.0 + abs(value)), (
        f"h3 quadrature {value!r} disagrees with Parseval {parseval!r}"
    )
    return value


def _parseval_l2_sq(state: FieldState) -> float:
    g = state.grid
    n = g.n_points
    total = 0.0
    fields = [state.u] + [state.phi[i] for i in range(state.n_components)]
    for f in fields:
        fh = np.fft.rfft(f)
        weights = np.full(fh.shape, 2.0)
        weights[0] = 1.0
        weights[-1] = 1.0
        total += float(np.sum(weights * np.abs(fh) ** 2)) * g.dx / n
    return total


def charge_h5(state: FieldState, lam: float) -> float:
    g = state.grid
    pp = body_p(state)
    density = -state.u**3 / 3.0 - 0.5 * lam * state.u * pp
    density += deriv(g, state.u, 1) ** 2
    if state.n_components:
        density += np.sum(deriv(g, state.phi, 1) ** 2, axis=0)
    return integrate(g, density)


def charge_nonlocal(state: FieldState) -> float:
    """Non-local charge, evaluated two ways and cross-asserted.

    (a) quadrature of sum_i phi_i * F_i with F_i the left-anchored
        half-sample running integral of phi_i;
    (b) the closed form sum_i (int phi_i)^2 / 2, valid for commuting real
        components since phi * (int phi) is half a total derivative.
    """
    g = state.grid
    path_a = 0.0
    path_b = 0.0
    for i in range(state.n_components):
        phi = state.phi[i]
        path_a += integrate(g, phi * cumulative_integral(g, phi))
        path_b += 0.5 * integrate(g, phi) ** 2
    if abs(path_a - path_b) > 1e-8 * max(1.0, abs(path_b)):
        raise InternalConsistencyError(
            f"non-local charge paths disagree: direct {path_a!r} vs closed form {path_b!r}"
        )
    return path_a


def broken_charge_witness(state: FieldState) -> float:
    """The cross moment int u * (running integral of phi_1) dx.

    The analogous quantity is conserved by the supersymmetric parent
    system but NOT by this one; its drift is a quantitative witness of the
    broken symmetry.  Requires at least one component field.
    """
    g = state.grid
    if state.n_components == 0:
        raise ValueError("witness requires at least one component field")
    return integrate(g, state.u * cumulative_integral(g, state.phi[0]))


def bound_constant(lam: float) -> float:
    """1 + (m/(4 sqrt 2))^2 with m = max(1, |lam|), written as 1 + m^2/32."""
    m = max(1.0, abs(lam))
    return 1.0 + m * m / 32.0


def bound_check(state: FieldState, lam: float) -> BoundCheck:
    """Check h5 >= -(1 + (m/(4 sqrt 2))^2) h3 with m = max(1, |lam|)."""
    lhs = charge_h5(state, lam)
    rhs = -bound_constant(lam) * charge_h3(state)
    margin = lhs - rhs
    holds = lhs >= rhs - 1e-10 * (1.0 + abs(rhs))
    return BoundCheck(lhs=lhs, rhs=rhs, margin=margin, holds=bool(holds))


def sobolev_sup_bound_check(state: FieldState) -> SupBoundCheck:
    """Check sup|u| <= H1 norm of u alone divided by sqrt 2."""
    g = state.grid
    sup_u = float(np.max(np.abs(state.u)))
    h1_u_sq = integrate(g, state.u**2 + deriv(g, state.u, 1) ** 2)
    bound = float(np.sqrt(h1_u_sq / 2.0))
    holds = sup_u <= bound + 1e-12 * (1.0 + bound)
    return SupBoundCheck(sup_u=sup_u, bound=bound, holds=bool(holds))


def charge_report(state: FieldState, lam: float) -> ChargeReport:
    h3 = charge_h3(state)
    return ChargeReport(
        t=state.t,
        h_half=charge_h_half(state),
        h1=charge_h1(state),
        h3=h3,
        h5=charge_h5(state, lam),
        nonlocal_charge=charge_nonlocal(state),
        l2=h3,
        sobolev_h1=sobolev_h1_norm_sq(state),
    )


# ---------------------------------------------------------------------------
# CSV serialization: one row per sample, 17 significant digits
# ---------------------------------------------------------------------------

def csv_columns(n_components: int) -> list[str]:
    return ["t", "h1", "h3", "h5", "nonlocal", "l2", "sobolev_h1"] + [
        f"h_half_{i + 1}" for i in range(n_components)
    ]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def report_row(report: ChargeReport) -> list[str]:
    row = [
        _fmt(report.t),
        _fmt(report.h1),
        _fmt(report.h3),
        _fmt(report.h5),
        _fmt(report.nonlocal_charge),
        _fmt(report.l2),
        _fmt(report.sobolev_h1),
    ]
    row += [_fmt(v) for v in report.h_half]
    return row


def dumps_reports(reports: list[ChargeReport], seed: int | None = None) -> str:
    if not reports:
        raise ValueError("no charge reports to serialize")
    k = len(reports[0].h_half)
    buf = io.StringIO()
    if seed is not None:
        buf.write(f"# seed={int(seed)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_columns(k))
    for rep in reports:
        writer.writerow(report_row(rep))
    return buf.getvalue()


def save_reports(reports: list[ChargeReport], path, seed: int | None = None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(dumps_reports(reports, seed))


def load_reports(path) -> dict[str, np.ndarray]:
    """Read a charges CSV into a column-name -> array mapping."""
    with open(path, "r", newline="") as fh:
        lines = [ln for ln in fh.read().splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    if len(rows) < 2:
        raise ValueError("charges CSV has no data rows")
    header, data = rows[0], rows[1:]
    out: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        out[name] = np.array([float(r[j]) for r in data])
    return out
