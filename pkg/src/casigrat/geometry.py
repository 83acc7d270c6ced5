"""Corrugation geometry: trapezoidal trench arrays and their staircase slicing.

The unit cell of width ``period`` consists of, left to right: a solid top
plateau of width ``top_width`` at height 0, a sidewall ramp descending to
``depth``, a trench floor of width ``floor_width``, and a ramp back up.
Heights are measured downward from the top surface, so ``height_profile``
returns the local etch depth.

Fractions of the period:

* ``p1 = top_width / period`` faces the opposing surface at the nominal gap,
* ``p2 = floor_width / period`` at gap + depth,
* ``p3 = (1 - p1 - p2) / 2`` per sidewall.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

Array = np.ndarray


@dataclass(frozen=True)
class GratingProfile:
    """Trapezoidal trench array, lengths in meters.

    Parameters
    ----------
    period : float
        Lateral period of the array.
    top_width : float
        Width of the un-etched plateau at the top surface.
    floor_width : float
        Width of the trench floor.
    depth : float
        Etch depth.
    sidewall_angle_deg : float, optional
        Interior angle between the trench floor and the sidewall; 90 means
        vertical walls.  Used only as a consistency check against the
        width-derived sidewall run.
    """

    period: float
    top_width: float
    floor_width: float
    depth: float
    sidewall_angle_deg: float = 90.0

    def __post_init__(self) -> None:
        if not self.period > 0.0:
            raise ValueError("period must be positive")
        # top_width == period (with floor_width == 0) is the degenerate
        # un-etched limit, kept valid as a cross-check configuration.
        if not 0.0 < self.top_width <= self.period:
            raise ValueError("top_width must lie in (0, period]")
        if not 0.0 <= self.floor_width < self.period:
            raise ValueError("floor_width must lie in [0, period)")
        if self.top_width + self.floor_width > self.period:
            raise ValueError("top_width + floor_width must not exceed period")
        if self.depth < 0.0:
            raise ValueError("depth must be non-negative")
        if not 45.0 <= self.sidewall_angle_deg <= 135.0:
            raise ValueError("sidewall_angle_deg outside the supported 45..135 range")
        self._check_sidewall_consistency()

    def _check_sidewall_consistency(self) -> None:
        # The horizontal sidewall run implied by the angle should agree with
        # the run implied by the widths; a >10% mismatch means the inputs
        # describe different trapezoids.
        if self.depth == 0.0 or self.sidewall_angle_deg == 90.0:
            return
        run_widths = self.p3 * self.period
        run_angle = self.depth * abs(math.tan(math.radians(self.sidewall_angle_deg - 90.0)))
        if run_widths <= 0.0:
            if run_angle > 0.1 * self.depth:
                warnings.warn("sidewall angle implies sloped walls but widths give p3 = 0",
                              stacklevel=3)
            return
        mismatch = abs(run_angle - run_widths) / run_widths
        if mismatch > 0.10:
            warnings.warn(
                f"sidewall angle and widths disagree on the sidewall run by "
                f"{100.0 * mismatch:.1f}% ({run_angle * 1e9:.2f} nm vs "
                f"{run_widths * 1e9:.2f} nm)", stacklevel=3)

    @property
    def p1(self) -> float:
        return self.top_width / self.period

    @property
    def p2(self) -> float:
        return self.floor_width / self.period

    @property
    def p3(self) -> float:
        return 0.5 * (1.0 - self.p1 - self.p2)

    def trench_width_at_depth(self, d):
        """Trench opening width at depth d below the top surface.

        Linear in d: the opening narrows from period - top_width at the
        surface to floor_width at the floor.
        """
        d = np.asarray(d, dtype=float)
        if np.any(d < 0.0) or np.any(d > self.depth):
            raise ValueError("depth coordinate outside [0, depth]")
        if self.depth == 0.0:
            return np.full_like(d, self.period - self.top_width)
        frac = (self.depth - d) / self.depth
        return self.floor_width + 2.0 * self.p3 * self.period * frac


def reference_trench_profile() -> GratingProfile:
    """The measured trench-array sample targeted by the validation suite.

    400 nm period, 185.3 nm top plateau, 199.1 nm floor, 98 nm deep,
    94.6 degree sidewalls.
    """
    return GratingProfile(period=400e-9, top_width=185.3e-9,
                          floor_width=199.1e-9, depth=98e-9,
                          sidewall_angle_deg=94.6)


def height_profile(profile: GratingProfile, x):
    """Etch depth h(x) over one unit cell, x in [0, period).

    Layout: plateau (h = 0) on [0, top_width), descending ramp, floor
    (h = depth), ascending ramp back to the period boundary.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or np.any(x_arr >= profile.period):
        raise ValueError("x must lie in [0, period)")
    lam = profile.period
    l1 = profile.top_width
    l2 = profile.floor_width
    ramp = profile.p3 * lam
    t = profile.depth

    h = np.zeros_like(x_arr)
    if ramp > 0.0:
        on_down = (x_arr >= l1) & (x_arr < l1 + ramp)
        h = np.where(on_down, t * (x_arr - l1) / ramp, h)
        on_up = x_arr >= l1 + ramp + l2
        h = np.where(on_up, t * (lam - x_arr) / ramp, h)
    on_floor = (x_arr >= l1 + ramp) & (x_arr < l1 + ramp + l2)
    h = np.where(on_floor, t, h)
    return h if np.ndim(x) else float(h)


@dataclass(frozen=True)
class Slab:
    """One staircase slice of the trench cross-section.

    ``solid_fraction`` is the silicon fill of the slice; ``slot_width`` the
    complementary vacuum opening.  ``depth_mid`` locates the slice midpoint
    below the top surface.
    """

    thickness: float
    solid_fraction: float
    slot_width: float
    depth_mid: float


def staircase(profile: GratingProfile, n_slices: int) -> list[Slab]:
    """Slice the trapezoidal trench into n equal-thickness lamellar slabs.

    Returned top to bottom (index 0 touches the top surface).  Each slab
    takes the trench width at its mid-depth, which preserves the etched
    cross-section area exactly for the linear sidewalls used here.
    """
    if n_slices < 1:
        raise ValueError("n_slices must be >= 1")
    if profile.depth == 0.0:
        return []
    dt = profile.depth / n_slices
    slabs = []
    for i in range(n_slices):
        d_mid = (i + 0.5) * dt
        w = float(profile.trench_width_at_depth(d_mid))
        slabs.append(Slab(thickness=dt, solid_fraction=1.0 - w / profile.period,
                          slot_width=w, depth_mid=d_mid))
    return slabs


def staircase_profile_error(profile: GratingProfile, n_slices: int) -> float:
    """L1 distance between the staircase and the true trench opening.

    Integral over depth of |w_staircase(d) - w_true(d)|, normalized by the
    etched cross-section area.  Scales as 1/n_slices for sloped walls.
    """
    slabs = staircase(profile, n_slices)
    if not slabs:
        return 0.0
    err = 0.0
    area = 0.0
    for slab in slabs:
        d0 = slab.depth_mid - 0.5 * slab.thickness
        d1 = slab.depth_mid + 0.5 * slab.thickness
        # |w_true(d) - w_slab| for linear w_true is triangular about d_mid.
        d_fine = np.linspace(d0, d1, 64)
        w_true = profile.trench_width_at_depth(d_fine)
        err += float(np.trapezoid(np.abs(w_true - slab.slot_width), d_fine))
        area += slab.slot_width * slab.thickness
    return err / area
