import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from conftest import composite_pair, stumpon_cuspons
from mch.classify import Tag, WaveCategory
from mch.profile import WaveProfile, assemble_composite, build_quadrature
from mch.weakform import (SupportNotCovered, TestFunctionFamily, TWReport, pointwise_residual,
                          tw_conditions, weak_residual)


def family_for(prof, n=24):
    return TestFunctionFamily.spread(float(prof.xi[0]), float(prof.xi[-1]), n)


def corrupted(prof, factor=1.01):
    return dataclasses.replace(prof, phi=prof.phi * factor, _branch=None)


def constant_profile(params, kappa, n=401):
    xi = np.linspace(-3, 3, n)
    return WaveProfile(xi, np.full(n, kappa), WaveCategory(Tag.SMOOTH_PERIODIC), params)


def test_bump_norm_constant():
    fam = TestFunctionFamily(np.array([0.0]), np.array([1.0]))
    x = np.linspace(-1, 1, 200001)
    assert trapezoid(fam.psi(0, x), x) == pytest.approx(fam.norm(0), rel=1e-9)


def test_bump_second_derivative():
    fam = TestFunctionFamily(np.array([0.2]), np.array([0.7]))
    x = np.linspace(-0.3, 0.7, 11)
    h = 1e-4
    fd = (fam.psi(0, x + h) - 2 * fam.psi(0, x) + fam.psi(0, x - h)) / h**2
    assert np.allclose(fam.psi_dd(0, x), fd, atol=1e-5)


def test_spread_supports_inside():
    fam = TestFunctionFamily.spread(-2.0, 3.0, 20)
    assert len(fam) == 20
    assert np.all(fam.centers - fam.widths >= -2.0) and np.all(fam.centers + fam.widths <= 3.0)


def test_constant_profile_residual_is_exact(smooth_params):
    """For phi = kappa the weak residual per unit mass is 2 kappa^3 - 2 c kappa - a."""
    p = smooth_params
    kappa = -0.7
    prof = constant_profile(p, kappa, 4001)
    expected = abs(2 * kappa**3 - 2 * p.c * kappa - p.a)
    assert weak_residual(prof, family_for(prof)) == pytest.approx(expected, rel=1e-7)


@pytest.mark.parametrize("fixture", ["smooth_params", "peakon_params", "cuspon_params", "decay_params"])
def test_constructed_profiles_are_weak_solutions(fixture, request):
    prof = build_quadrature(request.getfixturevalue(fixture), 4001)
    fam = family_for(prof)
    res = weak_residual(prof, fam)
    assert res < 1e-5
    assert weak_residual(corrupted(prof), fam) > 1e3 * res


def test_shifted_family_on_cuspon(cuspon_params):
    prof = build_quadrature(cuspon_params, 4001)
    fam = TestFunctionFamily.spread(-0.5, 0.5, 8).shifted(0.5)     # straddles the cusp at L/2
    assert weak_residual(prof, fam) < 1e-5


def test_support_must_be_covered(smooth_params):
    prof = build_quadrature(smooth_params, 201)
    fam = TestFunctionFamily(np.array([prof.xi[-1]]), np.array([0.5]))
    with pytest.raises(SupportNotCovered):
        weak_residual(prof, fam)


def test_stumpon_certified():
    segs = [build_quadrature(p, 4001) for p in stumpon_cuspons()]
    prof = assemble_composite(segs, [1.0])
    fam = family_for(prof)
    res = weak_residual(prof, fam)
    assert res < 1e-5
    assert weak_residual(corrupted(prof), fam) > 1e3 * res
    rep = tw_conditions(prof)
    assert rep.passed
    assert rep.a_condition_required and rep.plateau_measure == pytest.approx(1.0, rel=1e-9)


def test_composite_certified():
    peak, cusp = composite_pair()
    prof = assemble_composite([build_quadrature(peak, 4001), build_quadrature(cusp, 4001)])
    assert weak_residual(prof, family_for(prof)) < 1e-5
    rep = tw_conditions(prof)
    assert rep.passed and not rep.a_condition_required


def test_plateau_with_wrong_a_fails_tw(peakon_params):
    seg = build_quadrature(peakon_params, 801)
    prof = assemble_composite([seg, seg], [1.0], check=False)
    rep = tw_conditions(prof)
    assert rep.a_condition_required and not rep.a_condition_ok
    assert not rep.passed


def test_pointwise_residual(smooth_params, cuspon_params):
    assert pointwise_residual(build_quadrature(smooth_params, 2001)) < 1e-5
    assert pointwise_residual(build_quadrature(cuspon_params, 4001)) < 1e-4
    assert pointwise_residual(corrupted(build_quadrature(smooth_params, 2001))) > 1e-3


def test_report_serialisation(smooth_params):
    rep = tw_conditions(build_quadrature(smooth_params, 801))
    d = rep.to_dict()
    assert d["passed"] is True and isinstance(rep, TWReport)
    assert '"passed": true' in rep.to_json()


@settings(max_examples=8)
@given(st.floats(-1.5, -0.6), st.floats(0.1, 0.5))
def test_smooth_waves_certified(m, gap):
    from mch.quartic import WaveParameters
    try:
        p = WaveParameters.two_real(m, m + gap, m + gap + 0.5)
    except ValueError:
        return
    prof = build_quadrature(p, 1001)
    assert weak_residual(prof, family_for(prof, 12)) < 1e-5
