"""Exact grating force from scattering theory, against its proximity value.

The modal solver computes the Casimir pressure on the trench array
without assuming additivity; dividing by the proximity-force prediction
gives the geometry correction rho(z) > 1.
"""

import time

import numpy as np

from casigrat import (
    GratingProfile,
    TruncationSpec,
    casimir_pressure_grating_grid,
    convergence_sweep,
    get_material,
    ideal_pressure,
    reference_trench_profile,
    rho_ratio,
)


def main() -> None:
    gold = get_material("gold_drude")
    si = get_material("silicon_doped")
    pc = get_material("perfect_conductor")

    print("= sanity: an un-etched cell reproduces the planar theory =")
    flat = GratingProfile(400e-9, 400e-9, 0.0, 0.0)
    z = 300e-9
    p = casimir_pressure_grating_grid(flat, pc, pc, [z],
                                      TruncationSpec(orders=2))[0]
    print(f"  z = {z * 1e9:.0f} nm   modal {p:+.6e} Pa   "
          f"ideal {ideal_pressure(z):+.6e} Pa   "
          f"rel diff {abs(p / ideal_pressure(z) - 1):.2e}")

    profile = reference_trench_profile()
    print("\n= diffraction-order convergence at z = 150 nm =")
    t0 = time.time()
    rows = convergence_sweep(profile, si, gold, 150e-9, [4, 6, 8],
                             TruncationSpec(orders=4))
    for n_orders, pressure in rows:
        print(f"  orders {n_orders:2d}   P = {pressure:+.8e} Pa")
    last, prev = rows[-1][1], rows[-2][1]
    print(f"  last change {abs(last / prev - 1):.2e}   "
          f"({time.time() - t0:.1f} s)")

    print("\n= geometry correction rho(z) = exact / proximity =")
    z_grid = np.array([100e-9, 150e-9, 200e-9, 250e-9])
    t0 = time.time()
    curve = rho_ratio(profile, si, gold, z_grid, TruncationSpec(orders=8))
    for zi, ri in zip(curve.z, curve.values):
        print(f"  z = {zi * 1e9:5.0f} nm   rho = {ri:.4f}")
    print(f"  ({time.time() - t0:.1f} s at orders = 8; the curve rises "
          "to a ~10% hump near 150 nm and relaxes toward 1 far away)")


if __name__ == "__main__":
    main()
