"""Lambda-ladder residual suite: perturbation theory vs exact diagonalization.

For a shrinking ladder of coupling multipliers the discrepancy between
each perturbative observable and its exact-diagonalization counterpart
must shrink at least as lambda^3 (ratio >= 8 per halving, with a
tolerance factor), since the perturbative results are complete through
order lambda^2.  This is the decisive correctness gate for the amplitude
bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CouplingModel, ModeSet, PhysicalParams
from .oracle import (
    TruncationSpec,
    build_hamiltonian,
    first_order_coefficient,
    ground_state,
    measure_correlation,
    measure_phi_squared_shift,
    vacuum_weight_deficit,
)
from .perturb import (
    PerturbativeState,
    phi_squared_shift,
    squared_field_correlation_discrete,
)

DEFAULT_LADDER = (0.04, 0.02, 0.01)
MIN_RATIO = 8.0 / 1.5


@dataclass(frozen=True)
class LadderRow:
    """Residuals of one observable down the lambda ladder."""

    name: str
    lambdas: tuple[float, ...]
    residuals: tuple[float, ...]
    ratios: tuple[float, ...]
    passed: bool


@dataclass(frozen=True)
class LadderReport:
    rows: tuple[LadderRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def format_table(self) -> str:
        lines = ["observable            " + "  ".join(f"resid(l={l:g})" for l in self.rows[0].lambdas) + "  ratios        status"]
        for r in self.rows:
            res = "  ".join(f"{v:11.3e}" for v in r.residuals)
            rat = ",".join(f"{v:.1f}" for v in r.ratios)
            lines.append(f"{r.name:<20}  {res}  {rat:<12}  {'PASS' if r.passed else 'FAIL'}")
        return "\n".join(lines)


def _residuals_at(lam: float, params: PhysicalParams, modes: ModeSet, trunc: TruncationSpec,
                  x1: float, x2: float) -> dict[str, float]:
    model = CouplingModel(params=params, scale=lam)
    state = PerturbativeState(modes=modes, model=model)
    h = build_hamiltonian(trunc, modes, model)
    _, vec = ground_state(h)

    out = {}
    out["lambda_sq"] = abs(state.lambda_sq - vacuum_weight_deficit(vec))
    for (j, k) in ((1, 2), (1, 1)):
        exact = first_order_coefficient(vec, trunc, 1, j, k)
        out[f"amp(1,{j},{k})"] = abs(state.first_order_amplitude(1, j, k) - exact)
    exact_shift = measure_phi_squared_shift(vec, x1, 1, trunc, modes, params)
    out["phi2_shift"] = abs(phi_squared_shift(x1, 1, state) - exact_shift)
    exact_c = measure_correlation(vec, x1, x2, trunc, modes, params).value
    pert_c = squared_field_correlation_discrete(x1, x2, state).value
    out["C(x1,x2)"] = abs(pert_c - exact_c)
    return out


def run_lambda_ladder(
    params: PhysicalParams | None = None,
    modes: ModeSet | None = None,
    trunc: TruncationSpec | None = None,
    lambdas: tuple[float, ...] = DEFAULT_LADDER,
    x1: float | None = None,
    x2: float | None = None,
    min_ratio: float = MIN_RATIO,
) -> LadderReport:
    """Run the residual suite; defaults reproduce the standard 2-mode gate."""
    params = params or PhysicalParams(m=1.0, omega0=1.0, L0=math.pi)
    modes = modes or ModeSet.dirichlet(2, params.L0)
    trunc = trunc or TruncationSpec(m1=2, m2=2, n_wall_max=5, n_mode_max=5, q_max=5)
    if x1 is None:
        x1 = 0.4 * params.L0
    if x2 is None:
        x2 = 1.7 * params.L0

    tables = [_residuals_at(lam, params, modes, trunc, x1, x2) for lam in lambdas]
    rows = []
    for name in tables[0]:
        residuals = tuple(t[name] for t in tables)
        ratios = tuple(
            residuals[i] / residuals[i + 1] if residuals[i + 1] > 0 else math.inf
            for i in range(len(residuals) - 1)
        )
        rows.append(
            LadderRow(
                name=name,
                lambdas=tuple(lambdas),
                residuals=residuals,
                ratios=ratios,
                passed=all(r >= min_ratio for r in ratios),
            )
        )
    return LadderReport(rows=tuple(rows))
