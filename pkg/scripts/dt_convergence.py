#!/usr/bin/env python3
"""Second-order convergence study of the coupled integrator.

For a band-limited Gaussian packet on a 32x32 rectangle, measures the worst
Hall-law mismatch and continuity residual along runs at dt, dt/2, dt/4 and
prints the reduction ratios (expected: about 4 per halving).

Usage:
    python scripts/dt_convergence.py [--base-dt 0.05] [--time 10.0]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from hallsim import (Params, advance, band_limited, build_rectangle,
                     gaussian_packet, initialize_consistent)
from hallsim.diagnostics import continuity_residual, ohm_residual


def measure(dt, total_time):
    d = build_rectangle(32, 32, 1.0, [])
    p = Params(sigma_h=1.0, dt=dt)
    psi = gaussian_packet(d, (15.5, 15.5), 3.0, (0.12, 0.0), norm=1.0)
    psi = band_limited(psi, d, p, ecut=0.05, norm=1.0)
    s = initialize_consistent(d, psi, p)
    states = [s]
    for _ in range(int(round(total_time / dt))):
        states.append(advance(states[-1]))
    ohm = max(ohm_residual(states[i - 1], states[i], states[i + 1])
              for i in range(1, len(states) - 1))
    cont = max(continuity_residual(states[i - 1], states[i + 1])
               for i in range(1, len(states) - 1))
    return ohm, cont


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base-dt", type=float, default=0.05)
    ap.add_argument("--time", type=float, default=10.0)
    args = ap.parse_args()

    results = []
    for k in range(3):
        dt = args.base_dt / 2 ** k
        ohm, cont = measure(dt, args.time)
        results.append((dt, ohm, cont))
        print(f"dt = {dt:.4g}: ohm mismatch {ohm:.3e}, continuity {cont:.3e}")
    for (dt1, o1, c1), (dt2, o2, c2) in zip(results, results[1:]):
        print(f"ratio {dt1:.4g} -> {dt2:.4g}: ohm {o1 / o2:.2f}, "
              f"continuity {c1 / c2:.2f}")


if __name__ == "__main__":
    main()
