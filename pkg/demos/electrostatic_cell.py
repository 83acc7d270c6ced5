"""Electrostatics of the sphere-plane and trench-capacitor geometries.

Shows the exact series force, the finite-element field solve over one
trench period (with its mesh-refinement certificate), and the resulting
sphere force gradients: the trench always weakens the attraction.
"""

import numpy as np

from casigrat import (
    EPS0,
    GratingProfile,
    MeshControl,
    SpherePlaneES,
    build_trench_mesh,
    corrugated_sphere_force,
    mesh_statistics,
    reference_trench_profile,
    solve_corrugated_capacitor,
    sphere_plane_force,
    sphere_plane_gradient,
)


def main() -> None:
    radius, volt = 50e-6, 0.3
    print("= exact sphere-plane series vs the small-gap asymptote =")
    for d_over_r in (0.02, 0.002, 0.0005):
        d = d_over_r * radius
        f = sphere_plane_force(SpherePlaneES(R=radius, d=d, V=volt))
        plate = -np.pi * EPS0 * radius * volt**2 / d
        print(f"  d/R = {d_over_r:7.4f}   F = {f:+.6e} N   "
              f"asymptote {plate:+.6e} N   rel diff "
              f"{abs(f / plate - 1):.3%}")

    print("\n= matched potentials kill the interaction exactly =")
    f0 = sphere_plane_force(SpherePlaneES(R=radius, d=1e-7, V=-0.499,
                                          V0=-0.499))
    print(f"  V = V0 = -0.499 V   F = {f0!r} N")

    profile = reference_trench_profile()
    gap = 150e-9
    print(f"\n= periodic capacitor cell at gap {gap * 1e9:.0f} nm =")
    flat = GratingProfile(profile.period, profile.period, 0.0, 0.0)
    e_flat = solve_corrugated_capacitor(flat, gap, 1.0)
    exact = 0.5 * EPS0 / gap
    print(f"  flat cell    E = {e_flat:.8e} J/m^2  "
          f"(plate formula {exact:.8e}, rel diff "
          f"{abs(e_flat / exact - 1):.2e})")
    e_trench, mesh = solve_corrugated_capacitor(profile, gap, 1.0,
                                                return_mesh=True)
    stats = mesh_statistics(mesh)
    print(f"  trench cell  E = {e_trench:.8e} J/m^2  "
          f"({stats['n_triangles']} triangles, worst aspect "
          f"{stats['max_aspect']:.0f})")
    e_fine = solve_corrugated_capacitor(profile, gap, 1.0,
                                        MeshControl().scaled(2))
    print(f"  refinement   doubled node counts move E by "
          f"{abs(e_fine / e_trench - 1):.2e}")

    print("\n= sphere force gradients: trench lies below flat =")
    for z in (100e-9, 150e-9, 250e-9):
        flat_grad = sphere_plane_gradient(SpherePlaneES(R=radius, d=z,
                                                        V=volt))
        h = 1e-2 * z
        f_lo = corrugated_sphere_force(profile, z - h, volt, radius)
        f_hi = corrugated_sphere_force(profile, z + h, volt, radius)
        trench_grad = (f_hi - f_lo) / (2.0 * h)
        print(f"  z = {z * 1e9:5.0f} nm   flat {flat_grad:.4e} N/m   "
              f"trench {trench_grad:.4e} N/m   "
              f"ratio {trench_grad / flat_grad:.3f}")


if __name__ == "__main__":
    main()
