"""Shared physical constants and unit conversions.

Every module takes its constants from here so that unit conversions
(notably eV -> rad/s for plasma frequencies) agree to the last digit
across materials, force kernels, and the CLI.
"""

from __future__ import annotations

import scipy.constants as _sc

HBAR = _sc.hbar                 # J s
C_LIGHT = _sc.c                 # m / s
EPS0 = _sc.epsilon_0            # F / m
E_CHARGE = _sc.elementary_charge  # C

# One electron-volt of photon energy expressed as an angular frequency.
EV_TO_RAD_PER_S = E_CHARGE / HBAR


def ev_to_rad_per_s(energy_ev: float) -> float:
    """Convert a photon energy in eV to an angular frequency in rad/s."""
    return energy_ev * EV_TO_RAD_PER_S


def rad_per_s_to_ev(omega: float) -> float:
    """Convert an angular frequency in rad/s to a photon energy in eV."""
    return omega / EV_TO_RAD_PER_S
