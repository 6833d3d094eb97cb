"""Exact-diagonalization cross-check on a truncated Fock basis.

Assembles the full Hamiltonian (free wall + free fields + normal-ordered
bilinear wall-field interaction) over occupation-number states of the
wall oscillator and a small number of modes per cavity, computes the
ground state with a symmetric eigensolver, and measures the same
observables as the perturbative path, nonperturbatively.

Matrix elements are generated purely from ladder-operator algebra
(sqrt(n) factors), never from perturbative amplitude formulas, so this
module is logically independent of :mod:`mirrorcorr.perturb`.  Field
operators use the same global-coordinate mode convention as the printed
couplings (cavity-2 modes sin(k x) on (L0, 2 L0)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .errors import BasisSizeError, DomainError, ConvergenceError
from .model import CouplingModel, ModeSet, PhysicalParams, wall_distance
from .perturb import CorrelationResult

_DENSE_LIMIT = 500


@dataclass(frozen=True)
class FockBasisState:
    """Occupation numbers |n_wall; {n^1}; {n^2}>."""

    n_wall: int
    occ1: tuple[int, ...]
    occ2: tuple[int, ...]

    def __post_init__(self):
        if self.n_wall < 0 or any(n < 0 for n in self.occ1 + self.occ2):
            raise DomainError("occupation numbers must be non-negative")

    @property
    def total_quanta(self) -> int:
        return self.n_wall + sum(self.occ1) + sum(self.occ2)


@dataclass(frozen=True)
class TruncationSpec:
    """Caps defining the truncated Fock basis."""

    m1: int
    m2: int
    n_wall_max: int
    n_mode_max: int
    q_max: int
    max_dimension: int = 200_000

    def __post_init__(self):
        for name in ("n_wall_max", "n_mode_max", "q_max"):
            if getattr(self, name) < 2:
                raise DomainError(f"{name} must be >= 2 (second-order physics needs it)")
        if self.m1 < 0 or self.m2 < 0:
            raise DomainError("mode counts must be non-negative")


def enumerate_basis(trunc: TruncationSpec) -> list[FockBasisState]:
    """All states within the caps, lexicographic, vacuum first."""
    states = []
    n_modes = trunc.m1 + trunc.m2
    for n_wall in range(min(trunc.n_wall_max, trunc.q_max) + 1):
        budget = trunc.q_max - n_wall
        per_mode = min(trunc.n_mode_max, budget)
        for occ in itertools.product(range(per_mode + 1), repeat=n_modes):
            if sum(occ) <= budget:
                states.append(
                    FockBasisState(n_wall, tuple(occ[: trunc.m1]), tuple(occ[trunc.m1 :]))
                )
    states.sort(key=lambda s: (s.n_wall, s.occ1, s.occ2))
    return states


def _occ_tuple(state: FockBasisState) -> tuple[int, ...]:
    return (state.n_wall,) + state.occ1 + state.occ2


def build_hamiltonian(
    trunc: TruncationSpec, modes: ModeSet, model: CouplingModel
) -> sp.csr_matrix:
    """H0 + H_I over the enumerated basis, exactly symmetric, in energy units."""
    if max(trunc.m1, trunc.m2) > modes.n_modes:
        raise DomainError("truncation uses more modes than the ModeSet provides")
    basis = enumerate_basis(trunc)
    dim = len(basis)
    if dim > trunc.max_dimension:
        raise BasisSizeError(
            f"basis dimension {dim} exceeds budget {trunc.max_dimension}", dimension=dim
        )
    p = model.params
    w = modes.frequencies(p.c)
    index = {_occ_tuple(s): i for i, s in enumerate(basis)}

    diag = np.array(
        [
            p.hbar
            * (
                p.omega0 * s.n_wall
                + sum(n * w[a] for a, n in enumerate(s.occ1))
                + sum(n * w[a] for a, n in enumerate(s.occ2))
            )
            for s in basis
        ]
    )
    rows, cols, vals = [], [], []

    c1 = model.coupling_matrix(1, modes)

    def ladder(occ: list[int], slot: int, dag: bool) -> tuple[float, list[int]] | None:
        n = occ[slot]
        if dag:
            out = occ.copy()
            out[slot] = n + 1
            return math.sqrt(n + 1.0), out
        if n == 0:
            return None
        out = occ.copy()
        out[slot] = n - 1
        return math.sqrt(float(n)), out

    # Normal-ordered bilinear: a_j a_k + a_j+ a_k + a_k+ a_j + a_j+ a_k+,
    # applied right-to-left as (second_op, first_op) pairs on slots.
    def bilinear_ops(slot_j: int, slot_k: int):
        return (
            ((slot_k, False), (slot_j, False)),
            ((slot_k, False), (slot_j, True)),
            ((slot_j, False), (slot_k, True)),
            ((slot_k, True), (slot_j, True)),
        )

    n_modes_cav = (trunc.m1, trunc.m2)
    offsets = (1, 1 + trunc.m1)
    for i, s in enumerate(basis):
        occ0 = list(_occ_tuple(s))
        for wall_dag in (False, True):
            rw = ladder(occ0, 0, wall_dag)
            if rw is None:
                continue
            fwall, occ_w = rw
            for cav in (1, 2):
                sign = 1.0 if cav == 1 else -1.0
                off = offsets[cav - 1]
                for j in range(n_modes_cav[cav - 1]):
                    for k in range(n_modes_cav[cav - 1]):
                        coup = sign * c1[j, k]
                        for (op1, op2) in bilinear_ops(off + j, off + k):
                            r1 = ladder(occ_w, op1[0], op1[1])
                            if r1 is None:
                                continue
                            f1, occ_a = r1
                            r2 = ladder(occ_a, op2[0], op2[1])
                            if r2 is None:
                                continue
                            f2, occ_b = r2
                            col = index.get(tuple(occ_b))
                            if col is not None:
                                rows.append(col)
                                cols.append(i)
                                vals.append(-coup * fwall * f1 * f2)

    h = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    h = h + sp.diags(diag).tocsr()
    return h


def ground_state(h: sp.spmatrix, tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """Lowest eigenpair; vector normalized with positive vacuum coefficient.

    The vacuum occupies basis index 0 (enumeration is lexicographic in
    total occupations).  Dense solve below 500 states, Lanczos above.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    dim = h.shape[0]
    if dim <= _DENSE_LIMIT:
        evals, evecs = np.linalg.eigh(h.toarray())
        energy, vec = float(evals[0]), evecs[:, 0]
    else:
        evals, evecs = eigsh(h, k=1, which="SA", tol=tol, maxiter=5000)
        energy, vec = float(evals[0]), evecs[:, 0]
    resid = float(np.linalg.norm(h @ vec - energy * vec))
    if resid > max(tol, 1e-9 * max(1.0, abs(energy))) * 100:
        raise ConvergenceError(
            f"eigensolver residual {resid:.3e} above tolerance", best_estimate=energy
        )
    vec = vec / np.linalg.norm(vec)
    if vec[0] < 0:
        vec = -vec
    return energy, vec


def field_operator(
    x: float,
    cavity: int,
    trunc: TruncationSpec,
    modes: ModeSet,
    params: PhysicalParams,
) -> sp.csr_matrix:
    """phi(x) over the truncated basis, global-coordinate mode functions."""
    wall_distance(x, cavity, params)  # domain check only
    basis = enumerate_basis(trunc)
    index = {_occ_tuple(s): i for i, s in enumerate(basis)}
    k = modes.wavenumbers()
    w = modes.frequencies(params.c)
    n_cav = trunc.m1 if cavity == 1 else trunc.m2
    off = 1 if cavity == 1 else 1 + trunc.m1
    pref = math.sqrt(params.hbar * params.c**2 / params.L0)
    coeff = [pref * math.sin(k[a] * x) / math.sqrt(w[a]) for a in range(n_cav)]
    rows, cols, vals = [], [], []
    for i, s in enumerate(basis):
        occ = list(_occ_tuple(s))
        for a in range(n_cav):
            n = occ[off + a]
            if n > 0:
                out = occ.copy()
                out[off + a] = n - 1
                j = index.get(tuple(out))
                if j is not None:
                    rows.append(j)
                    cols.append(i)
                    vals.append(coeff[a] * math.sqrt(float(n)))
            out = occ.copy()
            out[off + a] = n + 1
            j = index.get(tuple(out))
            if j is not None:
                rows.append(j)
                cols.append(i)
                vals.append(coeff[a] * math.sqrt(n + 1.0))
    return sp.coo_matrix((vals, (rows, cols)), shape=(len(basis), len(basis))).tocsr()


def _expect(vec: np.ndarray, op: sp.spmatrix) -> float:
    return float(vec @ (op @ vec))


def measure_correlation(
    vector: np.ndarray,
    x1: float,
    x2: float,
    trunc: TruncationSpec,
    modes: ModeSet,
    params: PhysicalParams,
    tol: float = 1e-10,
) -> CorrelationResult:
    """Connected <phi^2(x1) phi^2(x2)> on the exact truncated ground state."""
    basis_dim = len(enumerate_basis(trunc))
    if vector.shape != (basis_dim,):
        raise DomainError(
            f"vector length {vector.shape} does not match basis dimension {basis_dim}"
        )
    p1 = field_operator(x1, 1, trunc, modes, params)
    p2 = field_operator(x2, 2, trunc, modes, params)
    p1sq = p1 @ p1
    p2sq = p2 @ p2
    e1 = _expect(vector, p1sq)
    e2 = _expect(vector, p2sq)
    e12 = float(vector @ (p1sq @ (p2sq @ vector)))
    return CorrelationResult(
        value=e12 - e1 * e2,
        method="exact_diag",
        est_abs_err=tol * max(abs(e12), abs(e1 * e2), 1e-300),
        n_modes_used=max(trunc.m1, trunc.m2),
        diagnostics={"phi2_1": e1, "phi2_2": e2},
    )


def measure_phi_phi(
    vector: np.ndarray,
    x1: float,
    x2: float,
    trunc: TruncationSpec,
    modes: ModeSet,
    params: PhysicalParams,
) -> float:
    """Connected <phi(x1) phi(x2)> (expected zero to solver tolerance)."""
    p1 = field_operator(x1, 1, trunc, modes, params)
    p2 = field_operator(x2, 2, trunc, modes, params)
    return float(vector @ (p1 @ (p2 @ vector))) - _expect(vector, p1) * _expect(vector, p2)


def measure_phi_squared_shift(
    vector: np.ndarray,
    x: float,
    cavity: int,
    trunc: TruncationSpec,
    modes: ModeSet,
    params: PhysicalParams,
) -> float:
    """<phi^2(x)> on the exact state minus the truncated bare-vacuum value."""
    op = field_operator(x, cavity, trunc, modes, params)
    k = modes.wavenumbers()
    w = modes.frequencies(params.c)
    n_cav = trunc.m1 if cavity == 1 else trunc.m2
    bare = (
        params.hbar
        * params.c**2
        / params.L0
        * sum(math.sin(k[a] * x) ** 2 / w[a] for a in range(n_cav))
    )
    return _expect(vector, op @ op) - bare


def first_order_coefficient(
    vector: np.ndarray, trunc: TruncationSpec, cavity: int, j: int, k: int
) -> float:
    """Exact ground-state coefficient on the normalized state |1; {1_j 1_k}>."""
    basis = enumerate_basis(trunc)
    index = {_occ_tuple(s): i for i, s in enumerate(basis)}
    n_modes = trunc.m1 + trunc.m2
    occ = [0] * (1 + n_modes)
    occ[0] = 1
    off = 1 if cavity == 1 else 1 + trunc.m1
    occ[off + j - 1] += 1
    occ[off + k - 1] += 1
    return float(vector[index[tuple(occ)]])


def vacuum_weight_deficit(vector: np.ndarray) -> float:
    """1 - |<vacuum|ground>|^2, the exact analogue of Lambda^2."""
    return 1.0 - float(vector[0]) ** 2


def dump_coordinates(h: sp.spmatrix, path) -> None:
    """Write the matrix as 'row col value' lines, 17 significant digits."""
    coo = h.tocoo()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {v:.17g}\n")
