"""Physical parameters, cavity mode grids, and mirror-field couplings.

The system is two 1D cavities sharing a movable, perfectly reflecting
wall of mass ``m`` bound harmonically at ``x = L0`` with angular
frequency ``omega0``; the outer walls sit at ``x = 0`` and ``x = 2 L0``.
Each cavity hosts a massless scalar field whose modes are taken relative
to the wall's equilibrium position.  The wall couples bilinearly to each
cavity's mode pairs with opposite signs in the two cavities.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError

HBAR_SI = 1.054571817e-34  # J s
C_SI = 299792458.0  # m / s

_UNIT_MODES = ("natural", "si")


@dataclass(frozen=True)
class PhysicalParams:
    """Mirror mass, binding frequency, equilibrium half-length, unit system."""

    m: float
    omega0: float
    L0: float
    units: str = "natural"

    def __post_init__(self):
        if self.units not in _UNIT_MODES:
            raise ConfigError(f"unknown unit mode {self.units!r}; expected one of {_UNIT_MODES}")
        for name in ("m", "omega0", "L0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")

    @property
    def hbar(self) -> float:
        return 1.0 if self.units == "natural" else HBAR_SI

    @property
    def c(self) -> float:
        return 1.0 if self.units == "natural" else C_SI

    @property
    def k0(self) -> float:
        """Wavenumber scale omega0 / c of the wall's oscillation."""
        return self.omega0 / self.c


@dataclass(frozen=True)
class ModeSet:
    """Discrete cavity mode grid k_j = j * spacing, j = 1..n_modes.

    ``spacing`` defaults to the Dirichlet quantum pi/L0.  ``uv_cutoff``
    (an angular frequency) switches on the smooth regulator weight
    exp(-omega/uv_cutoff) applied once per mode index appearing in a
    coupling constant.
    """

    n_modes: int
    spacing: float
    uv_cutoff: float | None = None

    def __post_init__(self):
        if not (isinstance(self.n_modes, int) and self.n_modes >= 1):
            raise DomainError(f"n_modes must be a positive integer, got {self.n_modes!r}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise DomainError(f"spacing must be positive and finite, got {self.spacing!r}")
        if self.uv_cutoff is not None and not self.uv_cutoff > 0:
            raise DomainError(f"uv_cutoff must be positive, got {self.uv_cutoff!r}")

    @classmethod
    def dirichlet(cls, n_modes: int, L0: float, uv_cutoff: float | None = None) -> "ModeSet":
        return cls(n_modes=n_modes, spacing=math.pi / L0, uv_cutoff=uv_cutoff)

    def _check_index(self, j: int) -> None:
        if not (1 <= j <= self.n_modes):
            raise DomainError(f"mode index {j} out of range 1..{self.n_modes}")

    def k(self, j: int) -> float:
        self._check_index(j)
        return j * self.spacing

    def omega(self, j: int, c: float = 1.0) -> float:
        return c * self.k(j)

    def wavenumbers(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.n_modes + 1, dtype=float)

    def frequencies(self, c: float = 1.0) -> np.ndarray:
        return c * self.wavenumbers()

    def regulator_weights(self, c: float = 1.0) -> np.ndarray:
        """Per-mode weight in (0, 1]; all ones when no cutoff is configured."""
        if self.uv_cutoff is None:
            return np.ones(self.n_modes)
        return np.exp(-self.frequencies(c) / self.uv_cutoff)


@dataclass(frozen=True)
class CouplingModel:
    """Coupling constants of the wall-field interaction.

    ``scale`` is a dimensionless multiplier on every coupling constant;
    it is a numerical probe of the perturbative regime (amplitudes are
    linear, all second-order observables quadratic in it), not physics.
    """

    params: PhysicalParams
    scale: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.scale):
            raise DomainError(f"scale must be finite, got {self.scale!r}")

    def coupling_matrix(self, cavity: int, modes: ModeSet) -> np.ndarray:
        """Dense (n_modes, n_modes) array of coupling constants.

        Entry (j-1, k-1) is
            scale * (-1)^(j+k) * (hbar/2)^(3/2) / (L0 sqrt(m))
                  * sqrt(omega_j omega_k / omega0) * w_j * w_k
        for cavity 1 and its negative for cavity 2, with w the optional
        UV regulator weights.
        """
        if cavity not in (1, 2):
            raise DomainError(f"cavity must be 1 or 2, got {cavity!r}")
        p = self.params
        w = modes.frequencies(p.c)
        reg = modes.regulator_weights(p.c)
        j = np.arange(1, modes.n_modes + 1)
        signs = np.where((j[:, None] + j[None, :]) % 2 == 0, 1.0, -1.0)
        pref = (p.hbar / 2.0) ** 1.5 / (p.L0 * math.sqrt(p.m))
        mat = signs * pref * np.sqrt(np.outer(w, w) / p.omega0)
        mat *= np.outer(reg, reg)
        mat *= self.scale
        if cavity == 2:
            mat = -mat
        return mat


def coupling(cavity: int, j: int, k: int, modes: ModeSet, model: CouplingModel) -> float:
    """Single coupling constant C^cavity_{kj} (energy units)."""
    modes._check_index(j)
    modes._check_index(k)
    p = model.params
    sign = 1.0 if (j + k) % 2 == 0 else -1.0
    reg = modes.regulator_weights(p.c)
    val = (
        model.scale
        * sign
        * (p.hbar / 2.0) ** 1.5
        / (p.L0 * math.sqrt(p.m))
        * math.sqrt(modes.omega(j, p.c) * modes.omega(k, p.c) / p.omega0)
        * reg[j - 1]
        * reg[k - 1]
    )
    return val if cavity == 1 else -val if cavity == 2 else _bad_cavity(cavity)


def _bad_cavity(cavity):
    raise DomainError(f"cavity must be 1 or 2, got {cavity!r}")


def wall_distance(x: float, cavity: int, params: PhysicalParams) -> float:
    """Distance of a position from the movable wall, validating its cavity interval."""
    if cavity == 1:
        if not (0.0 < x < params.L0):
            raise DomainError(f"cavity-1 position must lie in (0, {params.L0}), got {x}")
        return params.L0 - x
    if cavity == 2:
        if not (params.L0 < x < 2.0 * params.L0):
            raise DomainError(
                f"cavity-2 position must lie in ({params.L0}, {2 * params.L0}), got {x}"
            )
        return x - params.L0
    return _bad_cavity(cavity)


def mode_function(x: float, j: int, cavity: int, modes: ModeSet, params: PhysicalParams) -> float:
    """Mode amplitude sqrt(hbar c^2 / L0) sin(k_j x~) / sqrt(omega_j).

    x~ is the coordinate within the cavity measured from the wall at
    which the mode phase is anchored: x~ = x for cavity 1, x - L0 for
    cavity 2, so modes vanish at both cavity walls.
    """
    if cavity == 1:
        wall_distance(x, 1, params)
        xt = x
    elif cavity == 2:
        xt = wall_distance(x, 2, params)
    else:
        return _bad_cavity(cavity)
    p = params
    return math.sqrt(p.hbar * p.c**2 / p.L0) * math.sin(modes.k(j) * xt) / math.sqrt(
        modes.omega(j, p.c)
    )


_REQUIRED_KEYS = ("units", "m", "omega0", "L0", "n_modes")
_OPTIONAL_KEYS = ("uv_cutoff", "lambda")


def load_config(path) -> tuple[PhysicalParams, ModeSet, CouplingModel]:
    """Load the strict JSON configuration file.

    Keys: units ("natural"|"si"), m, omega0, L0, n_modes, and optional
    uv_cutoff and lambda (coupling multiplier, default 1).  Unknown keys
    are an error.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(raw).__name__}")
    unknown = sorted(set(raw) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    missing = sorted(set(_REQUIRED_KEYS) - set(raw))
    if missing:
        raise ConfigError(f"missing required config key(s): {', '.join(missing)}")
    if not isinstance(raw["n_modes"], int):
        raise ConfigError(f"n_modes must be an integer, got {raw['n_modes']!r}")
    params = PhysicalParams(m=raw["m"], omega0=raw["omega0"], L0=raw["L0"], units=raw["units"])
    modes = ModeSet.dirichlet(raw["n_modes"], params.L0, uv_cutoff=raw.get("uv_cutoff"))
    model = CouplingModel(params=params, scale=float(raw.get("lambda", 1.0)))
    return params, modes, model
