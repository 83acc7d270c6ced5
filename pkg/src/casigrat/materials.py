"""Dielectric response models along the imaginary frequency axis.

All Casimir kernels in this package evaluate permittivities at imaginary
frequencies omega = i*xi with xi > 0 (in rad/s), where every causal
dielectric function is real, greater than one, and monotonically
decreasing in xi.  Four model families are supported:

* ``PerfectConductor`` -- the ideal-mirror limit.  It has no finite
  permittivity; reflection code must branch on it instead of evaluating
  ``epsilon``.
* ``Drude`` -- eps(i xi) = 1 + wp^2 / (xi (xi + gamma)).
* ``DrudeLorentz`` -- a tabulated bound-electron background plus a Drude
  free-carrier term, used for doped semiconductors.
* ``Tabulated`` -- interpolation of a two-column (xi, eps) table, linear
  in log(xi), held constant below the grid and continued above it with
  (eps - 1) ~ 1/xi^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.interpolate import PchipInterpolator

from .constants import ev_to_rad_per_s

Array = np.ndarray


class MaterialDataError(ValueError):
    """Raised when a tabulated material file is malformed."""


@dataclass(frozen=True)
class DrudeParams:
    """Free-carrier Drude parameters, both in rad/s."""

    plasma_frequency: float
    relaxation_rate: float

    def __post_init__(self) -> None:
        if not self.plasma_frequency > 0.0:
            raise ValueError("plasma_frequency must be positive")
        if not self.relaxation_rate > 0.0:
            raise ValueError("relaxation_rate must be positive")

    @classmethod
    def from_ev(cls, plasma_ev: float, relaxation_ev: float) -> "DrudeParams":
        """Build from photon energies in eV."""
        return cls(ev_to_rad_per_s(plasma_ev), ev_to_rad_per_s(relaxation_ev))

    def epsilon(self, xi):
        xi_arr = _checked_xi(xi)
        out = 1.0 + self.plasma_frequency**2 / (xi_arr * (xi_arr + self.relaxation_rate))
        return out if np.ndim(xi) else float(out[0])


@dataclass(frozen=True)
class EpsilonTable:
    """Permittivity samples on a strictly increasing imaginary-frequency grid."""

    xi: Array
    eps: Array

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi, dtype=float)
        eps = np.asarray(self.eps, dtype=float)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)
        if xi.ndim != 1 or xi.size < 2 or eps.shape != xi.shape:
            raise MaterialDataError("table needs matching 1-d xi and eps columns, >= 2 rows")
        if not np.all(np.diff(xi) > 0.0):
            raise MaterialDataError("xi grid must be strictly increasing")
        if not np.all(xi > 0.0):
            raise MaterialDataError("xi grid must be positive")
        if np.any(eps < 1.0):
            raise MaterialDataError("eps(i xi) < 1 is unphysical for a passive dielectric")
        # Monotone cubic in log-log: C1 smooth (kink-free integrands for
        # fixed-order quadrature), overshoot-free, exact at the knots.
        object.__setattr__(self, "_spline",
                           PchipInterpolator(np.log(xi), np.log(eps)))

    def __call__(self, xi):
        """Interpolate (monotone cubic in log-log); extrapolation rules:
        hold the first value below the grid, roll off as 1/xi^2 above."""
        xi_in = _checked_xi(xi)
        out = np.empty(xi_in.shape)
        low = xi_in <= self.xi[0]
        high = xi_in > self.xi[-1]
        mid = ~(low | high)
        out[low] = self.eps[0]
        out[high] = 1.0 + (self.eps[-1] - 1.0) * (self.xi[-1] / xi_in[high]) ** 2
        if np.any(mid):
            out[mid] = np.exp(self._spline(np.log(xi_in[mid])))
        return out if np.ndim(xi) else float(out[0])


class PerfectConductor:
    """Ideal mirror: |r_TE| = |r_TM| = 1 at all frequencies.

    Represented as a limit flag.  ``epsilon`` is deliberately absent from
    the numeric path: evaluating it raises.
    """

    def epsilon(self, xi):
        raise ValueError("a perfect conductor has no finite permittivity; "
                         "branch on is_perfect_conductor() instead")

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "PerfectConductor()"


@dataclass(frozen=True)
class Drude:
    """Free-electron metal."""

    params: DrudeParams

    def epsilon(self, xi):
        return self.params.epsilon(xi)


@dataclass(frozen=True)
class DrudeLorentz:
    """Doped semiconductor: intrinsic background table plus free carriers."""

    drude: DrudeParams
    intrinsic: EpsilonTable

    def epsilon(self, xi):
        xi_arr = _checked_xi(xi)
        out = self.intrinsic(xi_arr) + (self.drude.epsilon(xi_arr) - 1.0)
        return out if np.ndim(xi) else float(out[0])


@dataclass(frozen=True)
class Tabulated:
    """Purely tabulated response."""

    table: EpsilonTable

    def epsilon(self, xi):
        return self.table(xi)


DielectricModel = PerfectConductor | Drude | DrudeLorentz | Tabulated


def is_perfect_conductor(model: DielectricModel) -> bool:
    return isinstance(model, PerfectConductor)


def epsilon_at_imaginary_frequency(model: DielectricModel, xi):
    """Evaluate eps(i xi) for any finite-permittivity model.

    Parameters
    ----------
    model : DielectricModel
        Material model.  Passing a PerfectConductor raises ValueError.
    xi : float or array
        Imaginary angular frequency in rad/s, strictly positive.
    """
    return model.epsilon(xi)


def load_tabulated_epsilon(path) -> EpsilonTable:
    """Read a two-column (xi [rad/s], eps) text table.

    Lines starting with ``#`` and blank lines are ignored.  Errors carry
    the 1-based line number of the offending row.
    """
    xi_col: list[float] = []
    eps_col: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MaterialDataError(
                    f"{path}:{lineno}: expected two columns, got {len(parts)}")
            try:
                xi_col.append(float(parts[0]))
                eps_col.append(float(parts[1]))
            except ValueError as exc:
                raise MaterialDataError(f"{path}:{lineno}: {exc}") from None
    if len(xi_col) < 2:
        raise MaterialDataError(f"{path}: table needs at least two data rows")
    return EpsilonTable(np.asarray(xi_col), np.asarray(eps_col))


def intrinsic_silicon_table() -> EpsilonTable:
    """The packaged intrinsic-silicon eps(i xi) table."""
    ref = resources.files("casigrat.data").joinpath("silicon_intrinsic_epsilon.txt")
    with resources.as_file(ref) as path:
        return load_tabulated_epsilon(path)


# Registry of the materials used by the bundled pipelines.
#   gold_drude      : Drude gold, wp = 9 eV, gamma = 35 meV
#   silicon_doped   : intrinsic background + free carriers of the etched sample,
#                     wp = 1.36e14 rad/s, gamma = 4.75e13 rad/s
#   conductor_proxy : Drude mirror with wp far above every sampled frequency;
#                     stands in for the ideal conductor where a finite
#                     permittivity is required (corrugated-layer expansions)
#   silicon_intrinsic, perfect_conductor, vacuum : as named
_GOLD = DrudeParams.from_ev(9.0, 0.035)
_SILICON_CARRIERS = DrudeParams(1.36e14, 4.75e13)
_CONDUCTOR_PROXY = DrudeParams.from_ev(1000.0, 0.001)


def available_materials() -> tuple[str, ...]:
    return ("gold_drude", "silicon_doped", "silicon_intrinsic",
            "conductor_proxy", "perfect_conductor", "vacuum")


def get_material(name: str) -> DielectricModel:
    """Look up a named material model."""
    if name == "gold_drude":
        return Drude(_GOLD)
    if name == "silicon_doped":
        return DrudeLorentz(_SILICON_CARRIERS, intrinsic_silicon_table())
    if name == "silicon_intrinsic":
        return Tabulated(intrinsic_silicon_table())
    if name == "conductor_proxy":
        return Drude(_CONDUCTOR_PROXY)
    if name == "perfect_conductor":
        return PerfectConductor()
    if name == "vacuum":
        table = EpsilonTable(np.array([1e11, 1e19]), np.array([1.0, 1.0]))
        return Tabulated(table)
    raise KeyError(f"unknown material {name!r}; known: {available_materials()}")


def _checked_xi(xi) -> Array:
    arr = np.asarray(xi, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("imaginary frequency xi must be strictly positive")
    return np.atleast_1d(arr) if arr.ndim == 0 else arr
