"""Torsional-oscillator calibration from synthetic frequency-shift sweeps.

Generates frequency shifts from the exact electrostatic gradient model,
then recovers the transduction coefficient and the standoff distance by
separable least squares; repeats with noise, finds the residual voltage,
and backs out the moment of inertia.
"""

import numpy as np

from casigrat import (
    FrequencyShiftSample,
    find_residual_voltage,
    fit_calibration,
    inertia_from_coefficient,
    oscillator_coefficient,
    plate_gradient_model,
    predict_frequency_shift,
    series_gradient_model,
    synthesize_frequency_shifts,
)

COEFF_TRUE = -614.0
Z0_TRUE = 800e-9
RADIUS = 50e-6
LEVER = 210e-6
F0 = 1783.0


def main() -> None:
    model = series_gradient_model(RADIUS)
    piezo = np.linspace(0.0, 600e-9, 13)
    clean = synthesize_frequency_shifts(COEFF_TRUE, Z0_TRUE, model,
                                        voltages=(0.245, 0.300),
                                        z_piezo=piezo)
    print("= noiseless round trip =")
    fit = fit_calibration(clean, model)
    print(fit.report())
    print(f"  coeff error {abs(fit.coeff / COEFF_TRUE - 1):.2e} rel, "
          f"z0 error {abs(fit.z0 / Z0_TRUE - 1):.2e} rel")

    print("\n= with 1% multiplicative noise =")
    rng = np.random.default_rng(20240817)
    noisy = synthesize_frequency_shifts(COEFF_TRUE, Z0_TRUE, model,
                                        voltages=(0.245, 0.300),
                                        z_piezo=piezo, noise_frac=0.01,
                                        rng=rng)
    fit_n = fit_calibration(noisy, model)
    print(fit_n.report())
    print(f"  pulls: coeff {(fit_n.coeff - COEFF_TRUE) / fit_n.coeff_sigma:+.2f} sigma, "
          f"z0 {(fit_n.z0 - Z0_TRUE) / fit_n.z0_sigma:+.2f} sigma")

    print("\n= residual voltage from a parabola sweep =")
    plate = plate_gradient_model(RADIUS, v0=-0.499)
    sweep = [FrequencyShiftSample(1e-7, 0.0, v,
                                  predict_frequency_shift(
                                      COEFF_TRUE, plate(300e-9, v)))
             for v in np.linspace(-0.8, -0.2, 9)]
    v0 = find_residual_voltage(sweep)
    print(f"  vertex V0 = {v0:+.4f} V")

    print("\n= oscillator bookkeeping =")
    inertia = inertia_from_coefficient(fit.coeff, LEVER, F0)
    print(f"  lever {LEVER * 1e6:.0f} um, f0 {F0:.0f} Hz  ->  "
          f"I = {inertia:.4e} kg m^2")
    back = oscillator_coefficient(LEVER, inertia, F0)
    print(f"  coefficient back from I: {back:.1f} m/(N s)")


if __name__ == "__main__":
    main()
