"""Closed-form peakons against the quadrature inversion.

The sup-norm gap between the two constructions is tiny for the corrected
constants; the uncorrected constants are shown for comparison.
"""
import numpy as np

from mch.profile import (build_quadrature, compare_profiles, decay_peakon_parameters,
                         explicit_decay_peakon, explicit_periodic_peakon,
                         periodic_peakon_parameters, periodic_peakon_range)

print("periodic peakons")
for c in (0.5, 1.0, 1.5):
    lo, hi = periodic_peakon_range(c)
    p = periodic_peakon_parameters(c, 0.5 * (lo + hi))
    q = build_quadrature(p, 1001)
    dev = compare_profiles(explicit_periodic_peakon(p, 1001), q)
    raw = compare_profiles(explicit_periodic_peakon(p, 1001, uncorrected=True), q)
    print(f"  c = {c:.2f}  m = {p.m:.4f}  period {q.period:.5f}  dev {dev:.1e}  (uncorrected {raw:.1e})")

print("decaying peakons")
for c in np.linspace(0.5, 2.5, 5):
    p = decay_peakon_parameters(c)
    q = build_quadrature(p, 1001)
    dev = compare_profiles(explicit_decay_peakon(p, 1001), q)
    raw = compare_profiles(explicit_decay_peakon(p, 1001, uncorrected=True), q)
    print(f"  c = {c:.2f}  m = {p.m:.4f}  dev {dev:.1e}  (uncorrected {raw:.1e})")
