"""Glue cuspons with a plateau (stumpon) and a peakon with a cuspon (composite).

Both are checked as weak solutions against a family of bump test functions.
"""
from pathlib import Path

import numpy as np

from mch.classify import classify, gluing_compatible, level_set_points
from mch.profile import assemble_composite, build_quadrature
from mch.quartic import WaveParameters, stumpon_a
from mch.weakform import TestFunctionFamily, tw_conditions, weak_residual

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
c = 0.5


def cuspons(a, m, M_range):
    return [p for p in level_set_points("ellipsoid", c, a, m, M_range, n_scan=400)
            if classify(p).tag.value == "periodic-cuspon"]


def certify(name, prof):
    fam = TestFunctionFamily.spread(float(prof.xi[0]), float(prof.xi[-1]), 24)
    rep = tw_conditions(prof)
    print(f"{name}: weak residual {weak_residual(prof, fam):.1e}, TW conditions "
          f"{'pass' if rep.passed else 'fail'}, plateau length {rep.plateau_measure:.3f}")
    np.savetxt(out / f"{name}.dat", np.column_stack([prof.xi, prof.phi]), fmt="%.10e")


# plateaus at phi = c need a = 2c^3 - 2c^2
a = stumpon_a(c)
segs = [cuspons(a, m, (c + 1e-9, 3.0))[0] for m in (0.4, 0.45)]
print("stumpon segments share c and a:", gluing_compatible(segs))
certify("stumpon", assemble_composite([build_quadrature(p, 4001) for p in segs], [1.0]))

# a periodic peakon and a cuspon on the same level set of (c, a)
m = 0.45
r = 0.5 * (-(m + c) + np.sqrt((m + c) ** 2 - 4 * (m * m + c * c + m * c - 2 * c)))
peak = WaveParameters.four_real(m, c, r, c)
cusp = cuspons(peak.a, 0.4055, (c + 1e-9, 1.5))[0]
print(f"peakon a = {peak.a:.6f}, cuspon a = {cusp.a:.6f}, M = {cusp.M:.5f}")
certify("composite", assemble_composite([build_quadrature(peak, 4001), build_quadrature(cusp, 4001)]))
