"""Torsional-oscillator calibration: frequency shifts to force gradients.

The oscillator converts a force gradient at the sphere into a resonance
frequency shift, delta_f = coeff * dF/dz, with the signed transduction
coefficient coeff = -b^2 / (8 pi^2 I f0) < 0 (lever arm b, moment of
inertia I, unperturbed frequency f0).  Force gradients of decaying
attractions are positive in this package, so attractive interactions
lower the frequency.

Distance bookkeeping: the sphere-surface gap of a sample is
z = z0 - z_piezo - b * theta, with z0 the unextended standoff, z_piezo
the piezo extension and theta the measured tilt.

``fit_calibration`` recovers (coeff, z0) from frequency-shift samples by
separable least squares: for trial z0 the model is linear in coeff, and
the concentrated residual is minimized over z0 with a bounded scalar
search.  A known Casimir force-gradient background can be added to the
model, or cancelled exactly by fitting voltage differences at shared
distances.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import EPS0
from .electrostatics import (
    SpherePlaneES,
    solve_corrugated_capacitor,
    sphere_plane_gradient,
)
from .geometry import GratingProfile

Array = np.ndarray


class FitError(RuntimeError):
    """Calibration data cannot support the requested fit."""


# --------------------------------------------------------------------------
# measurement model


@dataclass(frozen=True)
class DistanceModel:
    """Gap bookkeeping z = z0 - z_piezo - lever_b * theta for one sample.

    ``z0`` is the standoff at zero piezo extension and zero tilt,
    ``lever_b`` the lever arm converting tilt to vertical displacement.
    """

    z0: float
    z_piezo: float
    theta: float = 0.0
    lever_b: float = 0.0

    def __post_init__(self) -> None:
        if not self.gap > 0.0:
            raise ValueError("distance model gives a non-positive gap")

    @property
    def gap(self) -> float:
        return self.z0 - self.z_piezo - self.lever_b * self.theta


@dataclass(frozen=True)
class FrequencyShiftSample:
    """One oscillator reading: piezo extension, tilt, voltage, shift."""

    z_piezo: float
    theta: float
    volt: float
    delta_f: float

    def __post_init__(self) -> None:
        vals = (self.z_piezo, self.theta, self.volt, self.delta_f)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("sample fields must be finite")


def predict_frequency_shift(coeff: float, grad):
    """Frequency shift (Hz) for a force gradient (N/m): coeff * grad."""
    return coeff * np.asarray(grad, dtype=float) if np.ndim(grad) \
        else coeff * grad


def oscillator_coefficient(lever_b: float, inertia: float, f0: float) -> float:
    """Signed transduction coefficient -b^2 / (8 pi^2 I f0), in m/(N s)."""
    if lever_b <= 0.0 or inertia <= 0.0 or f0 <= 0.0:
        raise ValueError("lever arm, inertia and base frequency must be "
                         "positive")
    return -lever_b**2 / (8.0 * math.pi**2 * inertia * f0)


def inertia_from_coefficient(coeff: float, lever_b: float, f0: float) -> float:
    """Moment of inertia consistent with a signed coefficient (kg m^2)."""
    if coeff >= 0.0:
        raise ValueError("transduction coefficient must be negative")
    if lever_b <= 0.0 or f0 <= 0.0:
        raise ValueError("lever arm and base frequency must be positive")
    return -lever_b**2 / (8.0 * math.pi**2 * coeff * f0)


# --------------------------------------------------------------------------
# electrostatic force-gradient models


@dataclass(frozen=True)
class GradientModel:
    """Force gradient dF/dz (N/m) as a function of gap and voltage.

    ``fn(z, volt)`` is evaluated only inside [z_min, z_max]; the residual
    voltage is part of the model, so callers pass raw applied voltages.
    """

    fn: Callable[[float, float], float]
    z_min: float
    z_max: float
    label: str

    def __call__(self, z: float, volt: float) -> float:
        if not self.z_min <= z <= self.z_max:
            raise ValueError(
                f"gap {z:.3e} m outside the {self.label} model domain "
                f"[{self.z_min:.3e}, {self.z_max:.3e}] m")
        return self.fn(z, volt)


def series_gradient_model(radius: float, v0: float = 0.0) -> GradientModel:
    """Sphere-plane gradient from the exact image-charge series."""

    def fn(z: float, volt: float) -> float:
        return sphere_plane_gradient(SpherePlaneES(R=radius, d=z, V=volt,
                                                   V0=v0))

    return GradientModel(fn=fn, z_min=1e-12, z_max=0.1 * radius,
                         label="series")


def fem_gradient_model(profile: GratingProfile, radius: float,
                       z_min: float, z_max: float, n_points: int = 48,
                       v0: float = 0.0, control=None) -> GradientModel:
    """Sphere-grating gradient from tabulated capacitor-cell energies.

    The unit-voltage field energy per area E1(z) is solved on a geometric
    grid and interpolated monotonically; the sphere force follows the
    close-proximity mapping F = -2 pi R (V - V0)^2 E1(z), so the gradient
    is -2 pi R (V - V0)^2 E1'(z) > 0.
    """
    from scipy.interpolate import PchipInterpolator

    if not 0.0 < z_min < z_max:
        raise ValueError("need 0 < z_min < z_max")
    if n_points < 8:
        raise ValueError("n_points must be >= 8")
    grid = np.geomspace(0.98 * z_min, 1.02 * z_max, n_points)
    energies = np.array([solve_corrugated_capacitor(profile, z, 1.0, control)
                         for z in grid])
    slope = PchipInterpolator(grid, energies).derivative()

    def fn(z: float, volt: float) -> float:
        dv = volt - v0
        return -2.0 * math.pi * radius * dv * dv * float(slope(z))

    return GradientModel(fn=fn, z_min=z_min, z_max=z_max, label="capacitor-fem")


def plate_gradient_model(radius: float, v0: float = 0.0) -> GradientModel:
    """Small-gap plate law pi eps0 R (V - V0)^2 / z^2, for fast synthetics."""

    def fn(z: float, volt: float) -> float:
        dv = volt - v0
        return math.pi * EPS0 * radius * dv * dv / (z * z)

    return GradientModel(fn=fn, z_min=1e-12, z_max=0.1 * radius, label="plate")


# --------------------------------------------------------------------------
# calibration fit


@dataclass(frozen=True)
class CalibrationFit:
    """Separable least-squares estimate of (coeff, z0) with 1-sigma errors."""

    coeff: float
    coeff_sigma: float
    z0: float
    z0_sigma: float
    n_samples: int
    rss: float
    residuals: Array

    def report(self) -> str:
        return (f"coeff = {self.coeff:.6g} +/- {self.coeff_sigma:.2g} m/(N s)\n"
                f"z0    = {self.z0 * 1e9:.4f} +/- {self.z0_sigma * 1e9:.2g} nm\n"
                f"rss   = {self.rss:.3e} Hz^2 over {self.n_samples} samples")


def _sample_arrays(samples: Sequence[FrequencyShiftSample], lever_b: float):
    zp = np.array([s.z_piezo for s in samples])
    th = np.array([s.theta for s in samples])
    vv = np.array([s.volt for s in samples])
    df = np.array([s.delta_f for s in samples])
    return zp + lever_b * th, vv, df


def _difference_observations(offsets: Array, volts: Array, shifts: Array):
    """Pair samples sharing a distance; differences cancel any background."""
    d_off, d_volt_a, d_volt_b, d_shift = [], [], [], []
    for off in np.unique(offsets):
        idx = np.flatnonzero(offsets == off)
        if idx.size < 2:
            continue
        ref = idx[0]
        for j in idx[1:]:
            if volts[j] == volts[ref]:
                continue
            d_off.append(off)
            d_volt_a.append(volts[j])
            d_volt_b.append(volts[ref])
            d_shift.append(shifts[j] - shifts[ref])
    if not d_off:
        raise FitError("voltage differencing needs repeated distances at "
                       "distinct voltages")
    return (np.array(d_off), np.array(d_volt_a), np.array(d_volt_b),
            np.array(d_shift))


def fit_calibration(samples: Sequence[FrequencyShiftSample],
                    gradient_model: GradientModel,
                    casimir_background: Callable[[float], float] | None = None,
                    lever_b: float = 0.0,
                    use_voltage_differences: bool = False,
                    z0_bounds: tuple[float, float] | None = None,
                    ) -> CalibrationFit:
    """Fit the transduction coefficient and standoff distance.

    The model for each sample is delta_f = coeff * [g_es(z, V) + g_cas(z)]
    with z = z0 - z_piezo - lever_b * theta.  For a trial z0 the optimal
    coeff is the linear projection; the concentrated sum of squares is
    minimized over z0 inside ``z0_bounds`` (derived from the data and the
    model domain when omitted).  With ``use_voltage_differences`` the fit
    runs on shift differences at shared distances, which cancels any
    voltage-independent background exactly.

    Returns a CalibrationFit; 1-sigma uncertainties come from the
    residual covariance at the optimum.
    """
    if len(samples) < 3:
        raise FitError("need at least 3 samples")
    offsets, volts, shifts = _sample_arrays(samples, lever_b)
    if np.unique(volts).size < 2 and len(samples) < 10:
        raise FitError("need >= 2 distinct voltages or >= 10 samples")
    if np.unique(offsets).size < 2:
        raise FitError("all samples share one distance; z0 and coeff are "
                       "degenerate")

    if use_voltage_differences:
        offsets, volt_a, volt_b, shifts = _difference_observations(
            offsets, volts, shifts)
        if np.unique(offsets).size < 2:
            raise FitError("voltage differencing left a single distance")

        def model_vector(z0: float) -> Array:
            gaps = z0 - offsets
            return np.array([gradient_model(z, va) - gradient_model(z, vb)
                             for z, va, vb in zip(gaps, volt_a, volt_b)])
    else:

        def model_vector(z0: float) -> Array:
            gaps = z0 - offsets
            g = np.array([gradient_model(z, v)
                          for z, v in zip(gaps, volts)])
            if casimir_background is not None:
                g += np.array([casimir_background(z) for z in gaps])
            return g

    base = float(offsets.max())
    floor = float(offsets.min())
    if z0_bounds is None:
        lo = base + max(gradient_model.z_min, 1e-10)
        hi = min(floor + gradient_model.z_max, base + 50e-6)
        z0_bounds = (lo, hi)
    if not z0_bounds[0] < z0_bounds[1]:
        raise FitError("empty z0 search interval; distances are "
                       "incompatible with the gradient model domain")

    def concentrated(z0: float):
        g = model_vector(z0)
        gg = float(g @ g)
        if gg == 0.0:
            raise FitError("gradient model vanishes on all samples")
        coeff = float(g @ shifts) / gg
        resid = shifts - coeff * g
        return float(resid @ resid), coeff, g, resid

    result = minimize_scalar(lambda z0: concentrated(z0)[0],
                             bounds=z0_bounds, method="bounded",
                             options={"xatol": 1e-15, "maxiter": 500})
    if not result.success:  # pragma: no cover - bounded search rarely fails
        raise FitError(f"z0 search failed: {result.message}")
    z0_hat = float(result.x)
    rss, coeff_hat, g_hat, resid = concentrated(z0_hat)

    # 1-sigma errors from the residual covariance at the optimum
    n = shifts.size
    dof = max(n - 2, 1)
    sigma2 = rss / dof
    h = max(1e-12, 1e-7 * (z0_hat - base))
    dg = (model_vector(z0_hat + h) - model_vector(z0_hat - h)) / (2.0 * h)
    jac = np.column_stack([g_hat, coeff_hat * dg])
    # normalize columns (they carry different units) before conditioning
    scale = np.sqrt((jac**2).sum(axis=0))
    if np.any(scale == 0.0):
        raise FitError("rank-deficient design: a fit direction has no "
                       "leverage in the data")
    corr = (jac / scale).T @ (jac / scale)
    if np.linalg.cond(corr) > 1e12:
        raise FitError("rank-deficient design: distance leverage is "
                       "insufficient to separate coeff from z0")
    cov = sigma2 * np.linalg.inv(corr) / np.outer(scale, scale)
    return CalibrationFit(coeff=coeff_hat,
                          coeff_sigma=math.sqrt(max(cov[0, 0], 0.0)),
                          z0=z0_hat,
                          z0_sigma=math.sqrt(max(cov[1, 1], 0.0)),
                          n_samples=n, rss=rss, residuals=resid)


def average_calibration_fits(fits: Sequence[CalibrationFit]):
    """Mean coefficient and standoff over repeated fits, with standard
    errors of the mean; averaging k sets shrinks the spread by sqrt(k)."""
    if len(fits) < 2:
        raise ValueError("need at least two fits to average")
    coeffs = np.array([f.coeff for f in fits])
    z0s = np.array([f.z0 for f in fits])
    k = math.sqrt(len(fits))
    return (float(coeffs.mean()), float(coeffs.std(ddof=1)) / k,
            float(z0s.mean()), float(z0s.std(ddof=1)) / k)


# --------------------------------------------------------------------------
# residual voltage


def find_residual_voltage(samples: Sequence[FrequencyShiftSample]) -> float:
    """Vertex of the parabolic delta_f(V) at one fixed distance.

    The electrostatic shift scales with (V - V0)^2, so the applied
    voltage at which the shift magnitude is smallest is the residual
    voltage V0.  Requires >= 3 distinct voltages bracketing the vertex.
    """
    if len(samples) < 3:
        raise FitError("need at least 3 samples")
    zp = np.array([s.z_piezo for s in samples])
    th = np.array([s.theta for s in samples])
    if np.ptp(zp) > 1e-12 or np.ptp(th) > 1e-12:
        raise FitError("vertex samples must share one distance")
    volts = np.array([s.volt for s in samples])
    shifts = np.array([s.delta_f for s in samples])
    if np.unique(volts).size < 3:
        raise FitError("need >= 3 distinct voltages")

    quad, lin, _ = np.polyfit(volts, shifts, 2)
    span = np.ptp(volts)
    scale = np.ptp(shifts)
    if scale == 0.0 or abs(quad) * span * span < 1e-9 * scale:
        raise FitError("shift data show no parabolic curvature in voltage")
    vertex = -lin / (2.0 * quad)
    if not volts.min() <= vertex <= volts.max():
        raise FitError(f"parabola vertex {vertex:.4f} V lies outside the "
                       "sampled voltage range")
    return float(vertex)


def residual_voltage_drift_ok(vertices: Sequence[float],
                              tol: float = 3e-3) -> bool:
    """True when vertex estimates agree within ``tol`` volts."""
    if len(vertices) < 2:
        raise ValueError("need at least two vertex estimates")
    return float(np.ptp(np.asarray(vertices, dtype=float))) < tol


# --------------------------------------------------------------------------
# synthetic data and CSV interchange


def synthesize_frequency_shifts(coeff: float, z0: float,
                                gradient_model: GradientModel,
                                voltages: Sequence[float],
                                z_piezo: Sequence[float],
                                thetas: Sequence[float] | None = None,
                                lever_b: float = 0.0,
                                casimir_background=None,
                                noise_frac: float = 0.0,
                                rng: np.random.Generator | None = None,
                                ) -> list[FrequencyShiftSample]:
    """Forward-model samples on the (voltage x piezo) grid.

    Tilts default to zero.  ``noise_frac`` adds multiplicative Gaussian
    noise to the shifts and requires an explicit ``rng``.
    """
    z_piezo = np.asarray(z_piezo, dtype=float)
    thetas = (np.zeros_like(z_piezo) if thetas is None
              else np.asarray(thetas, dtype=float))
    if thetas.shape != z_piezo.shape:
        raise ValueError("thetas must match z_piezo in shape")
    if noise_frac < 0.0:
        raise ValueError("noise_frac must be non-negative")
    if noise_frac > 0.0 and rng is None:
        raise ValueError("noisy synthesis requires an explicit rng")
    samples = []
    for volt in voltages:
        for zp, th in zip(z_piezo, thetas):
            gap = DistanceModel(z0=z0, z_piezo=zp, theta=th,
                                lever_b=lever_b).gap
            grad = gradient_model(gap, volt)
            if casimir_background is not None:
                grad += casimir_background(gap)
            shift = predict_frequency_shift(coeff, grad)
            if noise_frac > 0.0:
                shift *= 1.0 + noise_frac * rng.standard_normal()
            samples.append(FrequencyShiftSample(z_piezo=zp, theta=th,
                                                volt=volt, delta_f=shift))
    return samples


_CSV_FIELDS = ("z_piezo_nm", "theta_rad", "V_volt", "delta_f_hz")


def read_frequency_shift_samples(path) -> list[FrequencyShiftSample]:
    """Load samples from CSV with columns z_piezo_nm, theta_rad, V_volt,
    delta_f_hz; lines starting with '#' are skipped."""
    with open(path, newline="") as fh:
        rows = csv.DictReader(line for line in fh if not line.startswith("#"))
        if rows.fieldnames is None or not set(_CSV_FIELDS) <= set(
                name.strip() for name in rows.fieldnames):
            raise ValueError(f"CSV must provide columns {_CSV_FIELDS}")
        samples = []
        for row in rows:
            clean = {k.strip(): v for k, v in row.items() if k is not None}
            samples.append(FrequencyShiftSample(
                z_piezo=float(clean["z_piezo_nm"]) * 1e-9,
                theta=float(clean["theta_rad"]),
                volt=float(clean["V_volt"]),
                delta_f=float(clean["delta_f_hz"])))
    if not samples:
        raise ValueError("CSV contains no data rows")
    return samples


def write_frequency_shift_samples(path,
                                  samples: Sequence[FrequencyShiftSample],
                                  ) -> None:
    """Write samples as CSV in the ingestion column convention."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_FIELDS)
        for s in samples:
            # repr of builtin float round-trips exactly
            writer.writerow([repr(float(s.z_piezo) * 1e9),
                             repr(float(s.theta)), repr(float(s.volt)),
                             repr(float(s.delta_f))])
