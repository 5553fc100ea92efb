"""Classify a few traveling waves and build their profiles by quadrature.

Writes two-column files (xi, phi) to demos/out/ for plotting with gnuplot.
"""
from pathlib import Path

import numpy as np

from mch import WaveParameters, build_quadrature, classify, find_roots, fit_local_exponent

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

waves = {
    "smooth": WaveParameters.two_real(-1.0, -0.5, 0.3),
    "cuspon": WaveParameters.two_real(0.0, 2.0, 1.0),
    "smooth_decay": WaveParameters.four_real(0.5, 0.6, 0.5),
    "cuspon_decay": WaveParameters.four_real(0.1, 0.5, 0.1),
}

for name, p in waves.items():
    cat = classify(p)
    # the quartic alone determines the roots again
    s = find_roots(p.poly)
    print(f"{name:13s} c = {p.c:.4f}  a = {p.a:+.5f}  -> {cat}  ({s.kind} roots)")
    prof = build_quadrature(p, 2001)
    np.savetxt(out / f"{name}.dat", np.column_stack([prof.xi, prof.phi]), fmt="%.10e")
    if prof.period is not None:
        print(f"{'':13s} period {prof.period:.6f}, crest exponent "
              f"{fit_local_exponent(prof, 'crest'):.4f}")
    else:
        print(f"{'':13s} tail decay rate {fit_local_exponent(prof, 'tail'):.4f}")

# a point off the admissible orderings has no bounded wave
try:
    classify(WaveParameters.two_real(0.0, 2.0, -1.0))
except ValueError as err:
    print("c below both roots:", err)
