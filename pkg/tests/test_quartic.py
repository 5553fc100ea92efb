import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from mch.quartic import (ConstraintViolation, DegenerateRootsError, DoubleRealPair, FourReal,
                         TravelingWavePolynomial, TwoRealPair, WaveParameters,
                         constraint_residual, expand_roots, find_roots, integration_constant_a,
                         quadric_form, quadric_name, recover_d, reduced_axes, stumpon_a)

vals = st.floats(-3.0, 3.0)


def test_polynomial_evaluation():
    P = TravelingWavePolynomial(c=1.0, a=0.5, d=-0.25)
    assert P(2.0) == pytest.approx(4 * (1 - 2) + 1 - 0.25)
    assert P.derivative(2.0) == pytest.approx(-16 + 4 + 0.5)
    assert P.coefficients().tolist() == [-0.5, 0.0, 1.0, 0.5, -0.25]


def test_expand_roots_known():
    # -1/2 (x - 1)(x + 1)(x - 2)(x + 2) = -1/2 x^4 + 5/2 x^2 - 2
    c, a, d = expand_roots([1, -1, 2, -2])
    assert (c, a, d) == pytest.approx((2.5, 0.0, -2.0))


def test_smooth_wave_constants(smooth_params):
    # m = -1, M = -1/2, c = 0.3: |z|^2 = 1.15, a = (M+m)(|z|^2 - mM)/2, d = -mM|z|^2/2
    p = smooth_params
    assert p.aux == pytest.approx(np.sqrt(0.5875), rel=1e-15)
    assert p.a == pytest.approx(-0.4875, rel=1e-14)
    assert p.d == pytest.approx(-0.2875, rel=1e-14)
    assert expand_roots(p.roots()) == pytest.approx((0.3, -0.4875, -0.2875), abs=1e-14)


def test_find_roots_structures():
    s = find_roots(TravelingWavePolynomial.from_roots([-2.0, -0.5, 1.0, 1.5]))
    assert isinstance(s, FourReal)
    assert (s.z, s.r, s.m, s.M) == pytest.approx((-2.0, -0.5, 1.0, 1.5), abs=1e-12)
    z = complex(-0.75, 0.9)
    s = find_roots(TravelingWavePolynomial.from_roots([0.5, 1.0, z, z.conjugate()]))
    assert isinstance(s, TwoRealPair)
    assert (s.m, s.M) == pytest.approx((0.5, 1.0), abs=1e-12)
    assert s.z == pytest.approx(z, abs=1e-12)


def test_find_roots_double_root():
    z = complex(-0.7, 1.3)
    s = find_roots(TravelingWavePolynomial.from_roots([0.7, 0.7, z, z.conjugate()]))
    assert isinstance(s, DoubleRealPair)
    assert s.m == pytest.approx(0.7, abs=1e-10)
    assert recover_d(s) == pytest.approx(-0.5 * 0.49 * abs(z) ** 2, rel=1e-9)


def test_find_roots_rejects_two_pairs():
    z, w = complex(1.0, 0.5), complex(-1.0, 2.0)
    P = TravelingWavePolynomial.from_roots([z, z.conjugate(), w, w.conjugate()])
    with pytest.raises(DegenerateRootsError):
        find_roots(P)


def test_find_roots_rejects_nonfinite():
    with pytest.raises(ValueError):
        find_roots(TravelingWavePolynomial(np.nan, 0.0, 0.0))


def test_family_aliases():
    assert quadric_name("two-real") == quadric_name("hyperboloid") == "hyperboloid"
    assert quadric_name("four-real") == "ellipsoid"
    with pytest.raises(ValueError):
        quadric_name("torus")


def test_quadric_forms_are_symmetric():
    for fam in ("hyperboloid", "ellipsoid"):
        Q = quadric_form(fam)
        assert np.array_equal(Q, Q.T)


def test_reduced_axes_ellipsoid():
    signs, axes, _ = reduced_axes("ellipsoid", 1.0)
    assert signs.tolist() == [1, 1, 1]
    assert sorted(axes) == pytest.approx([1.0, 2.0, 2.0])   # sqrt(c), 2 sqrt(c), 2 sqrt(c)


def test_reduced_axes_hyperboloid():
    signs, axes, _ = reduced_axes("hyperboloid", -1.0)
    # for c < 0 the surface has two sheets: one positive, two negative directions
    assert sorted(signs.tolist()) == [-1, -1, 1]
    assert sorted(axes) == pytest.approx([np.sqrt(2), np.sqrt(2), 2.0])


def test_reduced_axes_cone():
    with pytest.raises(ValueError):
        reduced_axes("ellipsoid", 0.0)


def test_integration_constant_off_surface():
    with pytest.raises(ConstraintViolation):
        integration_constant_a("ellipsoid", 0.0, 1.0, -0.3, 1.0)


def test_two_real_without_pair():
    with pytest.raises(ConstraintViolation):
        WaveParameters.two_real(2.0, 0.0, 5.0)


def test_two_real_from_imz_derives_c():
    p = WaveParameters.two_real(0.0, 2.0, imz=1.0)
    assert p.c == pytest.approx(1.0)
    assert p.residual() == pytest.approx(0.0, abs=1e-15)
    q = WaveParameters.two_real(0.0, 2.0, c=1.5, imz=1.0)
    assert q.residual() == pytest.approx(-1.0)


def test_double_real_constants():
    p = WaveParameters.double_real(1.0, 0.25)
    # Re z = -m, Im z^2 = 2 m^2 - 2c, a = m Im z^2
    assert p.z == pytest.approx(complex(-1.0, np.sqrt(1.5)))
    assert p.a == pytest.approx(1.5)
    assert expand_roots(p.roots()) == pytest.approx((0.25, 1.5, p.d), abs=1e-14)


def test_stumpon_a():
    assert stumpon_a(0.5) == -0.25
    assert stumpon_a(-1.0) == -4.0
    assert stumpon_a(1.0) == 0.0


def test_params_dict_roundtrip(peakon_params):
    d = peakon_params.to_dict()
    assert WaveParameters.from_dict(d) == peakon_params


@given(vals, vals, st.floats(0.05, 3.0))
def test_hyperboloid_from_coefficient_matching(m, M, im):
    """The quartic with roots m, M, z, conj(z) has c and a given by the hyperboloid formulas."""
    z = complex(-0.5 * (m + M), im)
    c, a, d = expand_roots([m, M, z, z.conjugate()])
    assert constraint_residual("two-real", m, M, im, c) == pytest.approx(0.0, abs=1e-12)
    assert integration_constant_a("two-real", m, M, im, c) == pytest.approx(a, abs=1e-11)


@given(vals, vals, vals)
def test_ellipsoid_from_coefficient_matching(m, M, r):
    z = -m - M - r
    c, a, d = expand_roots([z, r, m, M])
    assert constraint_residual("four-real", m, M, r, c) == pytest.approx(0.0, abs=1e-12)
    p = WaveParameters.four_real(m, M, r)
    assert (p.c, p.a, p.d) == pytest.approx((c, a, d), abs=1e-11)


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3, unique=True))
def test_four_real_roundtrip(xs):
    roots = sorted(xs + [-sum(xs)])
    assume(min(np.diff(roots)) > 1e-3)
    P = TravelingWavePolynomial.from_roots(roots)
    s = find_roots(P)
    assert isinstance(s, FourReal)
    assert list(s.real_roots) == pytest.approx(roots, abs=1e-8)
    assert recover_d(s) == pytest.approx(P.d, abs=1e-8)


@given(vals, vals, st.floats(0.05, 3.0))
def test_two_real_roundtrip(m, M, im):
    assume(abs(M - m) > 1e-3)
    z = complex(-0.5 * (m + M), im)
    P = TravelingWavePolynomial.from_roots([m, M, z, z.conjugate()])
    s = find_roots(P)
    assert isinstance(s, TwoRealPair)
    Q = TravelingWavePolynomial.from_roots(s.roots())
    scale = max(1.0, abs(P.c), abs(P.a), abs(P.d))
    assert np.allclose(Q.coefficients(), P.coefficients(), atol=1e-8 * scale)


@given(st.floats(-2, 2), st.floats(0.05, 2.0))
def test_P_factored_matches_expanded(m, im):
    p = WaveParameters.two_real(m, m + 1.0, imz=im)
    phi = np.linspace(-3, 3, 13)
    assert np.allclose(p.P(phi), p.poly(phi), atol=1e-10)


def test_double_root_survives_polishing():
    # companion eigenvalues split this double root into a pair with Im ~ 1e-8;
    # a plain Newton step would push the pair further apart
    p = WaveParameters.double_real(1.945698179003589, 2.713543322555605)
    s = find_roots(p.poly)
    assert s.kind == "double-real"
    assert s.m == pytest.approx(p.m, abs=1e-12)
