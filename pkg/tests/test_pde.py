import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mch import pde
from mch.pde import (BlowUp, BreakingMonitor, CFLViolation, LagrangianState, NoInflectionPoint,
                     SimulationState, derivative, helmholtz_solve, invariants, rhs, simulate,
                     simulate_breaking, step)
from mch.profile import build_quadrature


def gaussian(A, w, L, n):
    return SimulationState.from_function(lambda x: A * np.exp(-(((x - L / 2) / w) ** 2)), L, n)


def test_state_validation():
    with pytest.raises(ValueError):
        SimulationState(np.zeros(32), 1.0)
    with pytest.raises(ValueError):
        SimulationState(np.zeros(64), 0.0)
    s = SimulationState(np.zeros(128), 4.0)
    assert s.dx == 4.0 / 128 and s.x[-1] == pytest.approx(4.0 - s.dx)


def test_helmholtz_constant():
    assert np.allclose(helmholtz_solve(np.ones(64), 10.0), 1.0, atol=1e-15)


def test_helmholtz_fourier_mode():
    L, n = 7.0, 128
    x = np.arange(n) * L / n
    k = 2 * np.pi / L
    assert np.allclose(helmholtz_solve(np.cos(k * x), L), np.cos(k * x) / (1 + k * k), atol=1e-14)


@given(st.integers(0, 2**31 - 1))
def test_helmholtz_residual(seed):
    rng = np.random.default_rng(seed)
    L, n = 20.0, 256
    x = np.arange(n) * L / n
    f = sum(rng.normal() * np.cos(2 * np.pi * j * x / L + rng.uniform(0, 6)) for j in range(12))
    P = helmholtz_solve(f, L)
    assert np.max(np.abs(P - derivative(P, L, 2) - f)) < 1e-10


def test_helmholtz_matches_green_convolution():
    # on a long domain the periodic kernel is e^{-|x|}/2 up to exponentially small terms
    L, n = 40.0, 1024
    x = np.arange(n) * L / n
    f = np.exp(-((x - 20) ** 2))
    xs = np.linspace(10, 30, 9)
    green = [np.sum(0.5 * np.exp(-np.abs(x0 - x)) * f) * (L / n) for x0 in xs]
    P = helmholtz_solve(f, L)
    assert np.allclose(np.interp(xs, x, P), green, atol=2e-4)


def test_periodic_green_matches_direct_sum():
    rng = np.random.default_rng(0)
    L, n = 6.0, 200
    X = np.sort(rng.uniform(0, L, n))
    f = rng.normal(size=n)
    d = np.mod(X[:, None] - X[None, :], L)
    G = np.cosh(d - L / 2) / (2 * np.sinh(L / 2))
    dG = np.where(d == 0, 0.0, np.sinh(d - L / 2) / (2 * np.sinh(L / 2)))
    P, Px = pde.periodic_green(X, f, L)
    assert np.allclose(P, G @ f, atol=1e-12)
    assert np.allclose(Px, dG @ f, atol=1e-12)


def test_rhs_constant_is_stationary():
    assert np.allclose(rhs(np.full(64, 0.7), 5.0), 0.0, atol=1e-14)


def test_rhs_traveling_wave(smooth_params):
    prof = build_quadrature(smooth_params, 801)
    L, n = prof.period, 256
    phi = prof.phi_at(np.arange(n) * L / n)
    assert np.max(np.abs(rhs(phi, L) + smooth_params.c * derivative(phi, L))) < 1e-10


def test_other_source_sign_does_not_carry_the_wave(smooth_params):
    prof = build_quadrature(smooth_params, 801)
    L, n = prof.period, 256
    phi = prof.phi_at(np.arange(n) * L / n)
    assert np.max(np.abs(rhs(phi, L, quadratic=0.5) + smooth_params.c * derivative(phi, L))) > 1e-2


def test_linear_dispersion():
    # u_t = -omega/k u_x with omega = k (1 - 1/(1+k^2))... linearised: u_t + P_x = 0, P ~ -u/2 term
    L, n, j = 10.0, 128, 3
    x = np.arange(n) * L / n
    k = 2 * np.pi * j / L
    eps = 1e-6
    u = eps * np.sin(k * x)
    # linear part: -(quadratic u^2 + ...) vanish at O(eps); (u^2/2)_x is O(eps^2) as well
    lin = rhs(u, L) / eps
    assert np.max(np.abs(lin)) < 1e-5
    # around a constant background kappa the linear speed is kappa + (3 kappa^2 - kappa) / (1 + k^2)
    kappa = 0.4
    du = (rhs(kappa + u, L) - rhs(np.full(n, kappa), L)) / eps
    speed = kappa + (3 * kappa**2 - kappa) / (1 + k * k)
    assert np.allclose(du, -speed * k * np.cos(k * x), atol=1e-5)


def test_zero_stays_zero():
    s = SimulationState(np.zeros(64), 10.0)
    s1 = step(s, 0.01)
    assert np.all(s1.u == 0.0) and s1.t == 0.01


def test_cfl_violation():
    s = gaussian(1.0, 1.0, 20.0, 128)
    with pytest.raises(CFLViolation):
        step(s, 1.0)


def test_blow_up_signal_on_nonfinite():
    u = np.zeros(64)
    u[3] = np.nan
    with pytest.raises(BlowUp):
        step(SimulationState(u, 10.0), 1e-3)


def test_blow_up_cap_signal():
    s = gaussian(1.0, 0.5, 20.0, 256)
    with pytest.raises(BlowUp) as err:
        step(s, 1e-3, blow_up_cap=1.0)
    assert err.value.max_slope > 1.0


def test_rk4_order():
    s = gaussian(0.5, 1.0, 20.0, 128)
    ref = s
    for _ in range(64):
        ref = step(ref, 0.0025)
    errs = []
    for dt in (0.04, 0.02):
        cur = s
        for _ in range(int(round(0.16 / dt))):
            cur = step(cur, dt)
        errs.append(np.max(np.abs(cur.u - ref.u)))
    assert 12 < errs[0] / errs[1] < 20


def test_invariants_closed_forms():
    assert invariants(SimulationState(np.zeros(64), 3.0)).as_array().tolist() == [0.0, 0.0, 0.0]
    kappa, L = 0.8, 6.0
    inv = invariants(SimulationState(np.full(128, kappa), L))
    assert inv.E == pytest.approx(-kappa**4 * L / 4)
    assert inv.F == pytest.approx(kappa**2 * L / 2)
    assert inv.V == pytest.approx(kappa * L)


@given(st.floats(-2, 2), st.floats(0.2, 2))
def test_F_nonnegative(A, w):
    assert invariants(gaussian(A, w, 20.0, 128)).F >= 0


def test_conservation_short_run():
    L = 20.0
    s = SimulationState.from_function(
        lambda x: 0.3 * np.exp(-(((x - 10) / 1.5) ** 2)) + 0.2 * np.sin(2 * np.pi * x / L), L, 256)
    res = simulate(s, 1.0, trace_stride=20)
    tr = res.trace
    drift = np.max(np.abs(tr[:, 1:4] - tr[0, 1:4]), axis=0) / np.abs(tr[0, 1:4])
    assert drift[0] < 1e-6 and drift[1] < 1e-8 and drift[2] < 1e-12


def test_traveling_wave_translates(smooth_params):
    prof = build_quadrature(smooth_params, 801)
    L, n = prof.period, 128
    x = np.arange(n) * L / n
    s = SimulationState(prof.phi_at(x), L)
    res = simulate(s, 1.0)
    assert np.max(np.abs(res.state.u - prof.phi_at(x - smooth_params.c))) < 1e-8
    assert pde.measure_shift(s.u, res.state.u, L) == pytest.approx(smooth_params.c, rel=1e-8)


def test_trace_csv_and_snapshots():
    s = gaussian(0.2, 1.0, 20.0, 64)
    res = simulate(s, 0.5, trace_stride=5, snapshot_stride=10)
    lines = res.trace_csv().splitlines()
    assert lines[0] == "t,E,F,V,min_ux,xbar,rho"
    assert res.snapshots[0][0] == 0.0 and res.snapshots[-1][0] == pytest.approx(0.5)


def test_threshold_and_tau():
    M = 1.0
    s = np.sqrt(6.0)
    assert pde.breaking_threshold(M) == pytest.approx(-s)
    rho0 = -3.0
    k = np.log(abs((rho0 + s) / (rho0 - s)))
    assert pde.tau_bound(rho0, M) == pytest.approx(-2 * k / s)
    assert pde.riccati_blowup_time(rho0, M) == pytest.approx(-k / s)
    # exactly at the threshold k = ln 0 diverges: no bound
    assert np.isnan(pde.tau_bound(-s, M))
    assert pde.riccati_blowup_time(-s, M) == np.inf


def test_riccati_majorant_closed_form():
    rho0, M = -3.0, 1.0
    s = np.sqrt(6.0)
    t = np.linspace(0, 0.9 * pde.riccati_blowup_time(rho0, M), 20)
    r = (s - rho0) / (s + rho0)
    exact = s * (1 - r * np.exp(-s * t)) / (1 + r * np.exp(-s * t))
    assert np.allclose(pde.riccati_majorant(rho0, M, t), exact, rtol=1e-8)
    assert pde.riccati_majorant(rho0, M, [10.0])[0] == -np.inf


def test_monitor_requires_inflection():
    with pytest.raises(NoInflectionPoint):
        BreakingMonitor.start(SimulationState(np.zeros(64), 5.0))


def test_monitor_locates_gaussian_inflection():
    A, w, L = 1.0, 0.5, 10.0
    mon = BreakingMonitor.start(gaussian(A, w, L, 1024))
    # linear location of the u_xx sign change is second order in dx
    assert mon.xbar == pytest.approx(L / 2 + w / np.sqrt(2), abs=1e-4)
    assert mon.rho == pytest.approx(-A * np.sqrt(2) / w * np.exp(-0.5), rel=1e-8)
    assert mon.threshold_exceeded is False and np.isnan(mon.tau_bound)


def test_monitor_at_threshold_not_exceeded():
    # choose w so that rho0 equals the threshold for A = 1
    w = np.sqrt(2) * np.exp(-0.5) / np.sqrt(6.0)
    mon = BreakingMonitor.start(gaussian(1.0, w, 10.0, 4096))
    assert mon.rho0 == pytest.approx(mon.threshold, rel=1e-6)
    assert np.isnan(pde.tau_bound(mon.threshold, mon.M))


def test_lagrangian_matches_eulerian_before_steepening():
    s = gaussian(1.0, 0.3, 10.0, 2048)
    eul = simulate(s, 0.3, monitor=True)
    lag = simulate_breaking(s, 0.3)
    assert not lag.blew_up
    assert lag.monitor.rho == pytest.approx(eul.monitor.rho, rel=1e-3)
    assert np.allclose(lag.state.to_eulerian().u, eul.state.u, atol=1e-3)


def test_lagrangian_invariants_start_equal():
    s = gaussian(0.4, 1.0, 20.0, 512)
    lag = LagrangianState.from_eulerian(s)
    a, b = pde.lagrangian_invariants(lag), invariants(s)
    assert a.as_array() == pytest.approx(b.as_array(), rel=1e-12)


def test_breaking_run():
    run = simulate_breaking(gaussian(1.0, 0.3, 10.0, 1024), 3.0)
    mon = run.monitor
    assert mon.threshold_exceeded
    assert run.blew_up and run.max_slope > 1e6
    assert run.blow_up_time <= mon.tau_bound
    assert run.majorant_violation() <= 1e-2
    assert run.to_dict()["monitor"]["broken"] is True


@settings(max_examples=5)
@given(st.floats(0.05, 0.15))
def test_small_data_survive(A):
    res = simulate(gaussian(A, 1.0, 40.0, 256), 2.0, trace_stride=50)
    assert not res.blew_up
    assert res.max_slope < 10 * np.max(np.abs(derivative(gaussian(A, 1.0, 40.0, 256).u, 40.0)))
