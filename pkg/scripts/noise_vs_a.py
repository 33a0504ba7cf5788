"""Closed-loop detected noise against the operating parameter a."""

import numpy as np

from quietlaser import RateParams, analytics


def main():
    a_opt, level = analytics.optimal_operating_point()
    print(f"optimum: a = {a_opt:.12f}, detected level = {level:.12f}")
    print(f"{'a':>8} {'fano0':>8} {'A':>8} {'level':>8}")
    for a in np.geomspace(0.01, 10.0, 13):
        p = RateParams.from_a(a)
        print(f"{a:8.4f} {analytics.zero_frequency_fano(p):8.4f} "
              f"{analytics.pump_feedback_gain(p):8.4f} {analytics.detected_noise_level(p):8.4f}")


if __name__ == "__main__":
    main()
