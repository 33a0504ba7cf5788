"""Minimum-noise resonator design at the hydrogen line for a range of photon lifetimes."""

from quietlaser import design


def main():
    print(f"b = {design.coupling_constant():.6g} m^3/s^2")
    print(f"d = {design.well_width(2 * 3.141592653589793 * design.HYDROGEN_LINE_HZ) * 1e6:.5f} um")
    print(f"{'tau_p [s]':>10} {'V/tau^2':>9} {'sqrt(A) [m]':>12} {'C [F]':>11} {'L [H]':>11}")
    for tau_p in (1e-8, 1e-7, 1e-6, 1e-5):
        ex = design.paper_design_example(tau_p)
        print(f"{tau_p:10.0e} {ex.volume / tau_p**2:9.3f} {ex.plate_side:12.5g} "
              f"{ex.capacitance:11.4g} {ex.inductance:11.4g}")


if __name__ == "__main__":
    main()
