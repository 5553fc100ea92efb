"""Pseudospectral solver for the mCH equation in conservation-law form

    u_t + (u^2/2)_x + P_x = 0,    (1 - d_xx) P = u^3 - u^2/2 + u_x^2/2,

on a periodic domain, with the three conserved quantities and a monitor
for slope steepening at an inflection point.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.fft import irfft, rfft, rfftfreq

CFL = 0.3
# coefficient of u^2 in the nonlocal source; -1/2 makes the system equivalent
# to u_t - u_xxt = u u_xxx + 2 u_x u_xx - 3 u^2 u_x
QUADRATIC = -0.5
# weight of u^4 in E; 1/4 is the antiderivative of the flux u^3 and makes E conserved
QUARTIC = 0.25
BLOW_UP_CAP = 1e6
MIN_POINTS = 64


class CFLViolation(ValueError):
    pass


class BlowUp(ArithmeticError):
    """Raised by :func:`step` when the slope passes the cap or values stop being finite."""

    def __init__(self, message, state=None, max_slope=np.inf):
        super().__init__(message)
        self.state = state
        self.max_slope = max_slope


class NoInflectionPoint(ValueError):
    pass


@dataclass(frozen=True)
class SimulationState:
    u: np.ndarray
    length: float
    t: float = 0.0

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        object.__setattr__(self, "u", u)
        if u.ndim != 1 or u.size < MIN_POINTS:
            raise ValueError(f"need a 1-d grid with at least {MIN_POINTS} points")
        if not self.length > 0:
            raise ValueError("domain length must be positive")

    @property
    def n(self) -> int:
        return self.u.size

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n) * self.dx

    @classmethod
    def from_function(cls, f, length: float, n: int, t: float = 0.0) -> "SimulationState":
        x = np.arange(n) * (length / n)
        return cls(np.asarray(f(x), dtype=float), length, t)


@dataclass(frozen=True)
class InvariantTriple:
    E: float
    F: float
    V: float

    def as_array(self) -> np.ndarray:
        return np.array([self.E, self.F, self.V])


def wavenumbers(n: int, length: float) -> np.ndarray:
    return 2.0 * np.pi * rfftfreq(n, d=length / n)


def _ddx(u, k, order=1):
    uh = rfft(u)
    if order == 1:
        uh = 1j * k * uh
        if u.size % 2 == 0:
            uh[-1] = 0.0  # Nyquist mode has no odd derivative
    else:
        uh = (1j * k) ** order * uh
    return irfft(uh, n=u.size)


def derivative(u, length: float, order: int = 1) -> np.ndarray:
    """Spectral x-derivative of a periodic grid function."""
    u = np.asarray(u, dtype=float)
    return _ddx(u, wavenumbers(u.size, length), order)


def helmholtz_solve(f, length: float) -> np.ndarray:
    """Solve (1 - d_xx) P = f on the periodic domain of the given length."""
    f = np.asarray(f, dtype=float)
    k = wavenumbers(f.size, length)
    return irfft(rfft(f) / (1.0 + k * k), n=f.size)


def nonlocal_source(u, ux, quadratic: float = QUADRATIC):
    return u**3 + quadratic * u * u + 0.5 * ux * ux


def rhs(u, length: float, quadratic: float = QUADRATIC) -> np.ndarray:
    """Time derivative -(u^2/2)_x - P_x of the conservation-law form.

    ``quadratic=+0.5`` gives the variant whose traveling waves do not solve
    the mCH equation; kept for comparison.
    """
    u = np.asarray(u, dtype=float)
    n = u.size
    k = wavenumbers(n, length)
    ux = _ddx(u, k)
    flux = rfft(0.5 * u * u) + rfft(nonlocal_source(u, ux, quadratic)) / (1.0 + k * k)
    dflux = 1j * k * flux
    if n % 2 == 0:
        dflux[-1] = 0.0
    return -irfft(dflux, n=n)


def max_stable_dt(state: SimulationState, cfl: float = CFL) -> float:
    return cfl * state.dx / max(1.0, float(np.max(np.abs(state.u))))


def step(state: SimulationState, dt: float, cfl: float = CFL,
         blow_up_cap: float = BLOW_UP_CAP) -> SimulationState:
    """One classical RK4 step."""
    limit = max_stable_dt(state, cfl)
    if dt > limit * (1.0 + 1e-12):
        raise CFLViolation(f"dt = {dt:.3e} exceeds the CFL limit {limit:.3e}")
    L, u = state.length, state.u
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = rhs(u, L)
        k2 = rhs(u + 0.5 * dt * k1, L)
        k3 = rhs(u + 0.5 * dt * k2, L)
        k4 = rhs(u + dt * k3, L)
        new = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out = SimulationState(new, L, state.t + dt)
        if not np.all(np.isfinite(new)):
            raise BlowUp(f"non-finite values at t = {out.t:.6g}", out)
        slope = float(np.max(np.abs(derivative(new, L))))
    if not np.isfinite(slope) or slope > blow_up_cap:
        raise BlowUp(f"|u_x| = {slope:.3e} passed the cap at t = {out.t:.6g}", out, slope)
    return out


def invariants(state: SimulationState, quartic: float = QUARTIC) -> InvariantTriple:
    """E = -int(u^4/4 + u u_x^2/2), F = int(u^2 + u_x^2)/2, V = int u (trapezoid).

    ``quartic=1/8`` reproduces a variant of E that is not conserved.
    """
    u, dx = state.u, state.dx
    ux = derivative(u, state.length)
    E = -np.sum(quartic * u**4 + 0.5 * u * ux * ux) * dx
    F = 0.5 * np.sum(u * u + ux * ux) * dx
    V = np.sum(u) * dx
    return InvariantTriple(float(E), float(F), float(V))


# ---------------------------------------------------------------------------
# slope steepening

def breaking_threshold(M: float) -> float:
    """-sqrt(2 (M^2 + 2 M^3)) for sup norm M."""
    return -math.sqrt(2.0 * (M * M + 2.0 * M**3))


def tau_bound(rho0: float, M: float) -> float:
    """Predicted blow-up bound -2k / sqrt(2 Mbar); NaN when rho0 is not below threshold."""
    s = math.sqrt(2.0 * (M * M + 2.0 * M**3))
    if not rho0 < -s:
        return math.nan
    k = math.log(abs((rho0 + s) / (rho0 - s)))
    return -2.0 * k / s


def riccati_blowup_time(rho0: float, M: float) -> float:
    """Time at which rho' = -rho^2/2 + Mbar started from rho0 < -sqrt(2 Mbar) reaches -inf."""
    s = math.sqrt(2.0 * (M * M + 2.0 * M**3))
    if not rho0 < -s:
        return math.inf
    return -math.log(abs((rho0 + s) / (rho0 - s))) / s


def riccati_majorant(rho0: float, M: float, times) -> np.ndarray:
    """Integrate rho' = -rho^2/2 + Mbar numerically; -inf past the blow-up time."""
    from scipy.integrate import solve_ivp

    Mbar = M * M + 2.0 * M**3
    times = np.asarray(times, dtype=float)
    out = np.full(times.shape, -np.inf)
    tb = riccati_blowup_time(rho0, M)
    ok = times < tb
    if not np.any(ok):
        return out
    # integrate 1/rho, which stays finite through the blow-up
    sol = solve_ivp(lambda t, w: [0.5 - Mbar * w[0] ** 2], (0.0, float(times[ok].max())),
                    [1.0 / rho0], t_eval=np.sort(times[ok]), rtol=1e-12, atol=1e-14)
    w = np.interp(times[ok], sol.t, sol.y[0])
    out[ok] = 1.0 / w
    return out


def _fourier_eval(u, length, x):
    """Evaluate the trigonometric interpolant of u at the point x."""
    n = u.size
    uh = rfft(u) / n
    k = wavenumbers(n, length)
    w = np.full(k.size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    return float(np.real(np.sum(w * uh * np.exp(1j * k * x))))


def _inflections(state):
    """Downward-slope zero crossings of u_xx, linearly located."""
    L = state.length
    ux = derivative(state.u, L)
    uxx = derivative(state.u, L, order=2)
    nxt = np.roll(uxx, -1)
    idx = np.nonzero((np.sign(uxx) != np.sign(nxt)) & (ux < 0))[0]
    frac = uxx[idx] / (uxx[idx] - nxt[idx])
    return (idx + frac) * state.dx, ux


@dataclass
class BreakingMonitor:
    """Tracks the inflection point right of the maximum and its slope rho(t).

    ``M`` is the running maximum of the sup norm; ``tau_bound`` is fixed from
    the initial data, ``tau_bound_sup`` uses the running maximum.
    """

    xbar: float
    rho: float
    rho0: float
    M: float
    threshold: float
    tau_bound: float
    blow_up_cap: float = BLOW_UP_CAP
    broken: bool = False
    tracking_lost: bool = False
    times: list = field(default_factory=list)
    rhos: list = field(default_factory=list)
    xbars: list = field(default_factory=list)

    @property
    def threshold_exceeded(self) -> bool:
        return self.rho0 < self.threshold

    @property
    def Mbar(self) -> float:
        return self.M**2 + 2.0 * self.M**3

    @property
    def tau_bound_sup(self) -> float:
        return tau_bound(self.rho0, self.M)

    @classmethod
    def from_candidates(cls, t, xs, slope_at, xmax, sup_norm, length,
                        blow_up_cap: float = BLOW_UP_CAP) -> "BreakingMonitor":
        """Start on the first candidate inflection to the right of ``xmax``."""
        xs = np.asarray(xs, dtype=float)
        if xs.size == 0:
            raise NoInflectionPoint("no inflection point with negative slope")
        j = int(np.argmin(np.mod(xs - xmax, length)))
        rho = float(slope_at(j))
        M = float(sup_norm)
        mon = cls(float(xs[j]), rho, rho, M, breaking_threshold(M), tau_bound(rho, M), blow_up_cap)
        mon._record(t)
        return mon

    @classmethod
    def start(cls, state: SimulationState, blow_up_cap: float = BLOW_UP_CAP) -> "BreakingMonitor":
        xs, ux = _inflections(state)
        xmax = state.x[int(np.argmax(state.u))]
        return cls.from_candidates(state.t, xs, lambda j: _fourier_eval(ux, state.length, xs[j]),
                                   xmax, np.max(np.abs(state.u)), state.length, blow_up_cap)

    def _record(self, t):
        self.times.append(float(t))
        self.rhos.append(self.rho)
        self.xbars.append(self.xbar)

    def observe(self, t, xs, slope_at, sup_norm, length, max_shift=None) -> "BreakingMonitor":
        """Follow the candidate nearest the previous position."""
        self.M = max(self.M, float(sup_norm))
        self.threshold = breaking_threshold(self.M)
        xs = np.asarray(xs, dtype=float)
        if xs.size == 0:
            self.tracking_lost = True
            return self
        dist = np.abs(np.mod(xs - self.xbar + 0.5 * length, length) - 0.5 * length)
        j = int(np.argmin(dist))
        if max_shift is not None and dist[j] > max_shift:
            self.tracking_lost = True
        self.xbar = float(xs[j])
        self.rho = float(slope_at(j))
        if not np.isfinite(self.rho) or abs(self.rho) > self.blow_up_cap:
            self.broken = True
        self._record(t)
        return self

    def update(self, state: SimulationState, max_shift: float | None = None) -> "BreakingMonitor":
        xs, ux = _inflections(state)
        return self.observe(state.t, xs, lambda j: _fourier_eval(ux, state.length, xs[j]),
                            np.max(np.abs(state.u)), state.length, max_shift)

    def majorant(self) -> np.ndarray:
        """Riccati comparison solution at the recorded times, using the running sup norm."""
        return riccati_majorant(self.rho0, self.M, self.times)

    def to_dict(self) -> dict:
        return {"xbar": self.xbar, "rho": self.rho, "rho0": self.rho0, "M": self.M,
                "threshold": self.threshold, "tau_bound": self.tau_bound,
                "tau_bound_sup": self.tau_bound_sup,
                "threshold_exceeded": self.threshold_exceeded, "broken": self.broken,
                "tracking_lost": self.tracking_lost}


def breaking_monitor(state: SimulationState, previous: BreakingMonitor | None = None) -> BreakingMonitor:
    if previous is None:
        return BreakingMonitor.start(state)
    return previous.update(state)


# ---------------------------------------------------------------------------
# driver

TRACE_COLUMNS = ("t", "E", "F", "V", "min_ux", "xbar", "rho")


@dataclass
class SimulationResult:
    state: SimulationState
    trace: np.ndarray
    snapshots: list
    blew_up: bool = False
    blow_up_time: float | None = None
    max_slope: float = 0.0
    monitor: BreakingMonitor | None = None
    message: str = ""

    def trace_csv(self) -> str:
        buf = io.StringIO()
        np.savetxt(buf, self.trace, delimiter=",", header=",".join(TRACE_COLUMNS),
                   comments="", fmt="%.12e")
        return buf.getvalue()


def simulate(state: SimulationState, t_end: float, dt: float | None = None,
             cfl: float = CFL, blow_up_cap: float = BLOW_UP_CAP, monitor: bool = False,
             trace_stride: int = 1, snapshot_stride: int = 0) -> SimulationResult:
    """Advance to ``t_end``, recording invariants and (optionally) the breaking monitor.

    With ``dt=None`` the step is recomputed from the CFL limit every step.
    Blow-up stops the run and is reported rather than raised.
    """
    mon = BreakingMonitor.start(state, blow_up_cap) if monitor else None
    rows, snaps = [], []
    max_slope = float(np.max(np.abs(derivative(state.u, state.length))))

    def record(s, i):
        if i % trace_stride == 0:
            inv = invariants(s)
            ux = derivative(s.u, s.length)
            xb, rho = (mon.xbar, mon.rho) if mon is not None else (np.nan, np.nan)
            rows.append((s.t, inv.E, inv.F, inv.V, float(ux.min()), xb, rho))
        if snapshot_stride and i % snapshot_stride == 0:
            snaps.append((s.t, s.u.copy()))

    record(state, 0)
    i = 0
    result = SimulationResult(state, None, snaps, monitor=mon)
    while state.t < t_end - 1e-14:
        h = max_stable_dt(state, cfl) if dt is None else dt
        h = min(h, t_end - state.t)
        try:
            new = step(state, h, cfl, blow_up_cap)
        except BlowUp as err:
            result.blew_up = True
            result.blow_up_time = err.state.t if err.state is not None else state.t + h
            result.max_slope = err.max_slope
            result.message = str(err)
            if mon is not None:
                mon.broken = True
            break
        i += 1
        if mon is not None:
            mon.update(new, max_shift=max(10 * new.dx, 2.0 * h * (1.0 + mon.M)))
        state = new
        max_slope = max(max_slope, float(np.max(np.abs(derivative(state.u, state.length)))))
        record(state, i)
    result.state = state
    if not result.blew_up:
        result.max_slope = max_slope
    if snapshot_stride and (not snaps or snaps[-1][0] != state.t):
        snaps.append((state.t, state.u.copy()))
    result.trace = np.array(rows, dtype=float)
    return result


def measure_shift(u0, u1, length: float) -> float:
    """Translation d (mod length) that best maps u0 onto u1, by spectral cross-correlation."""
    n = u0.size
    cross = irfft(np.conj(rfft(u0)) * rfft(u1), n=n)
    j = int(np.argmax(cross))
    # parabolic refinement of the discrete peak
    y0, y1, y2 = cross[j - 1], cross[j], cross[(j + 1) % n]
    off = 0.5 * (y0 - y2) / (y0 - 2.0 * y1 + y2)
    coarse = (j + off) * length / n
    # Newton polish on the Fourier representation of the correlation
    k = wavenumbers(n, length)
    ch = np.conj(rfft(u0)) * rfft(u1)
    w = np.full(k.size, 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    d = coarse
    for _ in range(5):
        e = np.exp(1j * k * d)
        g1 = np.real(np.sum(w * 1j * k * ch * e))
        g2 = np.real(np.sum(w * -(k * k) * ch * e))
        if g2 == 0:
            break
        d -= g1 / g2
    return float(np.mod(d, length))


# ---------------------------------------------------------------------------
# characteristic (Lagrangian) form, used to follow a slope to the blow-up cap
#
# Along x = X(xi, t) with X_t = u, and with y = X_xi, v = u_xi, h = u_x^2 y,
#   u_t = -P_x,  y_t = v,  v_t = y R + h/2,  h_t = 2 v R,  R = u^3 - u^2/2 - P,
# every right-hand side stays bounded while u_x = v / y = h / v diverges.

@dataclass(frozen=True)
class LagrangianState:
    X: np.ndarray
    u: np.ndarray
    y: np.ndarray
    v: np.ndarray
    h: np.ndarray
    length: float
    t: float = 0.0
    quadratic: float = QUADRATIC

    @property
    def n(self) -> int:
        return self.u.size

    @property
    def dxi(self) -> float:
        return self.length / self.n

    @property
    def slope(self) -> np.ndarray:
        """u_x at every particle; uses h / v where y has collapsed."""
        with np.errstate(divide="ignore", invalid="ignore"):
            direct = self.v / self.y
            alt = self.h / self.v
        return np.where(self.y > 1e-3, direct, alt)

    @classmethod
    def from_eulerian(cls, state: SimulationState, quadratic: float = QUADRATIC) -> "LagrangianState":
        ux = derivative(state.u, state.length)
        return cls(state.x.copy(), state.u.copy(), np.ones(state.n), ux, ux * ux,
                   state.length, state.t, quadratic)

    def _replace(self, X, u, y, v, h, t):
        return LagrangianState(X, u, y, v, h, self.length, t, self.quadratic)

    def to_eulerian(self, n: int | None = None) -> SimulationState:
        """Interpolate back to a uniform grid (linear in the particle positions)."""
        n = self.n if n is None else n
        x = np.arange(n) * self.length / n
        X = np.concatenate([self.X - self.length, self.X, self.X + self.length])
        u = np.tile(self.u, 3)
        return SimulationState(np.interp(x, X, u), self.length, self.t)


def periodic_green(X, f, length: float):
    """P_i = sum_j G(X_i - X_j) f_j and its x-derivative with the periodic kernel.

    G(d) = cosh(d - L/2) / (2 sinh(L/2)) for d in [0, L).  ``X`` must be
    sorted within one period.  O(n) via cumulative sums; each sum is dominated
    by its largest term, so no cancellation is amplified.
    """
    L = length
    X = np.asarray(X, dtype=float) - X[0]
    ep, em = np.exp(X), np.exp(-X)
    A = np.cumsum(f * em)                       # j <= i
    B = np.cumsum(f * ep)
    C = np.concatenate([np.cumsum((f * em)[::-1])[::-1][1:], [0.0]])  # j > i
    D = np.concatenate([np.cumsum((f * ep)[::-1])[::-1][1:], [0.0]])
    s = 4.0 * np.sinh(0.5 * L)
    t1 = np.exp(X - 0.5 * L) * A
    t2 = np.exp(0.5 * L - X) * B
    t3 = np.exp(X + 0.5 * L) * C
    t4 = np.exp(-0.5 * L - X) * D
    P = (t1 + t2 + t3 + t4) / s
    # the j = i term sits on the kink of G; its symmetric derivative is zero
    Px = (t1 - t2 + t3 - t4) / s + 0.5 * f
    return P, Px


def lagrangian_rhs(st: LagrangianState):
    w = st.dxi
    f = ((st.u**3 + st.quadratic * st.u**2) * st.y + 0.5 * st.h) * w
    P, Px = periodic_green(st.X, f, st.length)
    R = st.u**3 + st.quadratic * st.u**2 - P
    return st.u, -Px, st.v, st.y * R + 0.5 * st.h, 2.0 * st.v * R


def lagrangian_step(st: LagrangianState, dt: float) -> LagrangianState:
    fields = (st.X, st.u, st.y, st.v, st.h)

    def shifted(k, c):
        return st._replace(*(a + c * b for a, b in zip(fields, k)), st.t)

    k1 = lagrangian_rhs(st)
    k2 = lagrangian_rhs(shifted(k1, 0.5 * dt))
    k3 = lagrangian_rhs(shifted(k2, 0.5 * dt))
    k4 = lagrangian_rhs(shifted(k3, dt))
    new = [a + dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
           for a, b1, b2, b3, b4 in zip(fields, k1, k2, k3, k4)]
    return st._replace(*new, st.t + dt)


def lagrangian_invariants(st: LagrangianState) -> InvariantTriple:
    w = st.dxi
    E = -np.sum(QUARTIC * st.u**4 * st.y + 0.5 * st.u * st.h) * w
    F = 0.5 * np.sum(st.u**2 * st.y + st.h) * w
    V = np.sum(st.u * st.y) * w
    return InvariantTriple(float(E), float(F), float(V))


def _slope_minima(st: LagrangianState):
    """Particles where u_x has a local minimum with u_x < 0 (inflection points)."""
    s = st.slope
    prev, nxt = np.roll(s, 1), np.roll(s, -1)
    idx = np.nonzero((s <= prev) & (s < nxt) & (s < 0))[0]
    return idx, s


@dataclass
class BreakingRun:
    """Outcome of :func:`simulate_breaking`."""

    monitor: BreakingMonitor
    state: LagrangianState
    trace: np.ndarray
    blew_up: bool
    blow_up_time: float | None
    max_slope: float

    def majorant_violation(self) -> float:
        """Largest (rho - rho_majorant) / |rho_majorant| over times where the majorant is finite."""
        maj = self.monitor.majorant()
        rho = np.asarray(self.monitor.rhos)
        ok = np.isfinite(maj)
        if not np.any(ok):
            return -np.inf
        return float(np.max((rho[ok] - maj[ok]) / np.abs(maj[ok])))

    def to_dict(self) -> dict:
        return {"blew_up": self.blew_up, "blow_up_time": self.blow_up_time,
                "max_slope": self.max_slope, "monitor": self.monitor.to_dict(),
                "majorant_violation": self.majorant_violation()}


def simulate_breaking(state: SimulationState, t_end: float, blow_up_cap: float = BLOW_UP_CAP,
                      dt_max: float = 0.01, slope_step: float = 0.05) -> BreakingRun:
    """Follow the inflection slope along characteristics until |u_x| passes the cap.

    The step is ``min(dt_max, slope_step / max|u_x|)`` so the approach to a
    blow-up time is resolved geometrically.
    """
    st = LagrangianState.from_eulerian(state)
    L = st.length

    def candidates(s):
        idx, slope = _slope_minima(s)
        return np.mod(s.X[idx], L), (lambda j: slope[idx[j]]), slope

    xs, at, slope = candidates(st)
    mon = BreakingMonitor.from_candidates(st.t, xs, at, np.mod(st.X[np.argmax(st.u)], L),
                                          np.max(np.abs(st.u)), L, blow_up_cap)
    rows = []

    def record(s, slope):
        inv = lagrangian_invariants(s)
        rows.append((s.t, inv.E, inv.F, inv.V, float(np.min(slope)), mon.xbar, mon.rho))

    record(st, slope)
    max_slope = float(np.max(np.abs(slope)))
    blew, t_blow = False, None
    while st.t < t_end - 1e-14:
        dt = min(dt_max, slope_step / max(1.0, max_slope), t_end - st.t)
        new = lagrangian_step(st, dt)
        if not all(np.all(np.isfinite(a)) for a in (new.X, new.u, new.y, new.v, new.h)):
            blew, t_blow = True, new.t
            break
        st = new
        xs, at, slope = candidates(st)
        mon.observe(st.t, xs, at, np.max(np.abs(st.u)), L,
                    max_shift=max(10 * st.dxi, 2.0 * dt * (1.0 + mon.M)))
        record(st, slope)
        max_slope = float(np.max(np.abs(slope)))
        if max_slope > blow_up_cap or mon.broken:
            blew, t_blow = True, st.t
            mon.broken = True
            break
    return BreakingRun(mon, st, np.array(rows), blew, t_blow, max_slope)
