"""How flat is the damped-call price over the (alpha, L) design box?

For each profile the surface is computed twice: once holding the term
count at its preset value while the truncation range widens (the
frequency cutoff N*pi/(b-a) then degrades), and once growing N
proportionally to L so the cutoff holds.  The printed spread is
max - min over the whole grid; a flat surface means the damping and
range choices are free parameters, which is the point of the method.
"""

import numpy as np

from cospricer.harness import run_stability_surface
from cospricer.presets import PROFILE_NAMES, method_preset
from cospricer.cos_engine import Variant


def main():
    print("price spread over 21 dampings x 13 range widths, strike 80\n")
    print(f"{'profile':<9s}{'fixed N':>14s}{'N scaled with L':>18s}")
    for name in PROFILE_NAMES:
        preset = method_preset(name, Variant.STABLE)
        fixed = run_stability_surface(name)
        scaled = run_stability_surface(name, reference_width=preset.range_width)
        print(f"{name:<9s}{fixed.value_spread:>14.2e}{scaled.value_spread:>18.2e}")
    print(
        "\nwide ranges at a fixed term count undersample the series;"
        "\nscaling N with L keeps the surface flat (the widest-tail"
        "\nprofile also needs L >= 7 before range truncation is below 1e-6)"
    )


if __name__ == "__main__":
    main()
