"""Traveling-wave profiles: quadrature inversion and closed-form peakons.

Profiles are built by inverting xi(phi) = int dy / sqrt(F(y)) on one monotone
branch.  With the substitution phi = lo + (hi - lo) sin^2(theta) the
1/sqrt singularities at simple zeros of F cancel and the integrand in theta
is smooth; only double zeros (exponential tails) leave a 1/theta blow-up,
which is truncated.

Layout conventions:

* periodic waves: trough at xi = 0, crests at xi = +-L/2;
* decaying waves: crest at xi = 0, tails towards +-infinity (truncated);
* kinks: the midpoint level at xi = 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .classify import (
    DECAYING,
    PERIODIC,
    Orientation,
    Tag,
    WaveCategory,
    classify,
    eq_tol,
    gluing_compatible,
)
from .elliptic import complementary_modulus, incomplete_F, jacobi
from .quartic import WaveParameters, stumpon_a

SCHEMA = "mch/1"
DECAY_CUTOFF = 1e-10
REFINE_LEVELS = 20
REFINE_RATIO = 0.5

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


class ProfileError(ValueError):
    pass


class CategoryMismatch(ProfileError):
    pass


class PoleError(ZeroDivisionError):
    pass


class InsufficientSamples(ProfileError):
    pass


def eval_F(phi, params: WaveParameters):
    """F(phi) = P(phi) / (c - phi) with P taken from its factored form."""
    phi = np.asarray(phi, dtype=float)
    gap = params.c - phi
    if np.any(np.abs(gap) < 1e-13):
        raise PoleError("F has a pole at phi = c")
    out = params.P(phi) / gap
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Piece:
    """Sub-interval [xi0, xi1] of a profile governed by one parameter set."""

    xi0: float
    xi1: float
    params: WaveParameters


@dataclass(frozen=True, eq=False)
class WaveProfile:
    xi: np.ndarray
    phi: np.ndarray
    category: WaveCategory
    params: WaveParameters
    period: float | None = None
    crest_xi: float = 0.0
    pieces: tuple = ()
    plateaus: tuple = ()
    _branch: object = field(default=None, repr=False)

    def __len__(self):
        return len(self.xi)

    @property
    def c(self) -> float:
        return self.params.c

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def length_scale(self) -> float:
        if self.period is not None:
            return self.period
        return float(self.xi[-1] - self.xi[0])

    def phi_at(self, xi):
        """Profile value at arbitrary xi (exact inversion when available)."""
        xi = np.asarray(xi, dtype=float)
        if self._branch is not None:
            return self._branch.evaluate(xi, self.period)
        if self.period is not None:
            x0 = self.xi[0]
            xi = x0 + np.mod(xi - x0, self.period)
        return np.interp(xi, self.xi, self.phi)

    def params_at(self, xi: float) -> WaveParameters:
        for piece in self.pieces:
            if piece.xi0 <= xi <= piece.xi1:
                return piece.params
        return self.params

    def shifted(self, dx: float) -> "WaveProfile":
        pieces = tuple(Piece(p.xi0 + dx, p.xi1 + dx, p.params) for p in self.pieces)
        plateaus = tuple((s + dx, e + dx) for s, e in self.plateaus)
        return replace(self, xi=self.xi + dx, crest_xi=self.crest_xi + dx,
                       pieces=pieces, plateaus=plateaus, _branch=None)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "category": self.category.to_dict(),
            "params": self.params.to_dict(),
            "period": self.period,
            "crest_xi": self.crest_xi,
            "pieces": [{"xi0": p.xi0, "xi1": p.xi1, "params": p.params.to_dict()}
                       for p in self.pieces],
            "plateaus": [list(p) for p in self.plateaus],
            "samples": {"xi": self.xi.tolist(), "phi": self.phi.tolist()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WaveProfile":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        return cls(
            xi=np.array(d["samples"]["xi"], dtype=float),
            phi=np.array(d["samples"]["phi"], dtype=float),
            category=WaveCategory.from_dict(d["category"]),
            params=WaveParameters.from_dict(d["params"]),
            period=d["period"],
            crest_xi=d["crest_xi"],
            pieces=tuple(Piece(p["xi0"], p["xi1"], WaveParameters.from_dict(p["params"]))
                         for p in d["pieces"]),
            plateaus=tuple(tuple(p) for p in d["plateaus"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "WaveProfile":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        rows = ["xi,phi"] + [f"{x!r},{p!r}" for x, p in zip(self.xi.tolist(), self.phi.tolist())]
        return "\n".join(rows) + "\n"

    @staticmethod
    def read_csv(text: str):
        data = np.loadtxt(text.splitlines(), delimiter=",", skiprows=1, ndmin=2)
        return data[:, 0], data[:, 1]


class Branch:
    """One monotone branch phi: lo -> hi of (phi')^2 = F(phi).

    ``kinds`` maps each endpoint to "zero" (simple zero of F), "double"
    (double zero, exponential approach), "peak" (simple zero of P at phi = c)
    or "cusp" (pole of F).
    """

    def __init__(self, params: WaveParameters, category: WaveCategory):
        self.params = params
        self.category = category
        c = params.c
        tol = eq_tol(c)
        up = category.orientation is Orientation.CREST_UP
        if up:
            lo, hi = params.m, min(params.M, c)
        else:
            lo, hi = max(params.M, c), params.m
        if not hi > lo:
            raise CategoryMismatch("empty wave interval")
        self.lo, self.hi = float(lo), float(hi)
        self.crest = "hi" if up else "lo"

        roots = list(params.roots())
        self.mult = {}
        self.others = []
        for y in roots:
            if abs(y.imag) < tol and abs(y.real - self.lo) <= tol:
                self.mult["lo"] = self.mult.get("lo", 0) + 1
            elif abs(y.imag) < tol and abs(y.real - self.hi) <= tol:
                self.mult["hi"] = self.mult.get("hi", 0) + 1
            else:
                self.others.append(complex(y))
        self.c_at = None
        if abs(c - self.hi) <= tol:
            self.c_at = "hi"
        elif abs(c - self.lo) <= tol:
            self.c_at = "lo"

        self.kinds = {}
        self.expo = {}
        for end in ("lo", "hi"):
            k = self.mult.get(end, 0)
            pole = self.c_at == end
            if k == 0 and not pole:
                raise CategoryMismatch(f"endpoint {end} is neither a zero nor a pole of F")
            if pole:
                kind = "peak" if k == 1 else "cusp"
                if k > 1:
                    raise CategoryMismatch("multiple root at the pole")
            else:
                kind = "zero" if k == 1 else "double"
            self.kinds[end] = kind
            # Power of (distance to endpoint) left in the theta-integrand.
            self.expo[end] = 0.5 + (0.5 if pole else 0.0) - 0.5 * k

        mid = 0.5 * (self.lo + self.hi)
        Fmid = params.P(mid) / (c - mid)
        if not Fmid > 0:
            raise CategoryMismatch(
                f"F(phi) <= 0 inside [{self.lo:.6g}, {self.hi:.6g}]: "
                f"no real profile for {category.tag.value} ({category.orientation.value})"
            )

        self.width = self.hi - self.lo
        self.theta_min = {}
        for end in ("lo", "hi"):
            if self.kinds[end] == "double":
                self.theta_min[end] = float(np.arcsin(np.sqrt(DECAY_CUTOFF)))
        self.theta_a = self.theta_min.get("lo", 0.0)
        self.theta_b = 0.5 * np.pi - self.theta_min.get("hi", 0.0)
        self._build_table()

    # phi(theta) and the smooth theta-integrand dxi/dtheta
    def phi_of(self, theta):
        return self.lo + self.width * np.sin(theta) ** 2

    def rate(self, theta):
        theta = np.asarray(theta, dtype=float)
        s2, c2 = np.sin(theta) ** 2, np.cos(theta) ** 2
        dlo, dhi = self.width * s2, self.width * c2
        phi = self.lo + dlo
        val = 2.0 * np.sqrt(2.0) * np.ones_like(phi)
        val = val * np.power(dlo, self.expo["lo"]) * np.power(dhi, self.expo["hi"])
        if self.c_at is None:
            val = val * np.sqrt(np.abs(self.params.c - phi))
        for y in self.others:
            val = val / np.sqrt(np.abs(phi - y))
        return val

    def _segment_integral(self, t0, t1):
        t0, t1 = np.asarray(t0, float), np.asarray(t1, float)
        half = 0.5 * (t1 - t0)
        mid = 0.5 * (t1 + t0)
        nodes = mid[..., None] + half[..., None] * _GL_X
        return half * np.sum(_GL_W * self.rate(nodes), axis=-1)

    def _build_table(self):
        a, b = self.theta_a, self.theta_b
        nodes = [np.linspace(a, b, 2049)]
        for end, t in (("lo", a), ("hi", b)):
            if self.kinds[end] == "double":
                inner = np.geomspace(t, 0.2, 400) if end == "lo" else 0.5 * np.pi - np.geomspace(
                    0.5 * np.pi - t, 0.2, 400)
                nodes.append(inner)
            else:
                d = 0.5 * np.pi * REFINE_RATIO ** np.arange(1, REFINE_LEVELS + 12)
                d = np.concatenate([d * f for f in (1.0, 0.84, 0.71, 0.59)])
                nodes.append(t + d if end == "lo" else t - d)
        th = np.unique(np.clip(np.concatenate(nodes), a, b))
        inc = self._segment_integral(th[:-1], th[1:])
        self.table_theta = th
        self.table_s = np.concatenate([[0.0], np.cumsum(inc)])
        self.total = float(self.table_s[-1])

    def s_of_theta(self, theta):
        """Arc-parameter s(theta) = int_{theta_a}^{theta} rate."""
        theta = np.asarray(theta, dtype=float)
        i = np.clip(np.searchsorted(self.table_theta, theta) - 1, 0, len(self.table_theta) - 2)
        return self.table_s[i] + self._segment_integral(self.table_theta[i], theta)

    def theta_of_s(self, s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.total)
        theta = np.interp(s, self.table_s, self.table_theta)
        for _ in range(4):
            r = self.rate(theta)
            step = (self.s_of_theta(theta) - s) / np.where(r > 0, r, np.inf)
            theta = np.clip(theta - step, self.theta_a, self.theta_b)
        return theta

    def endpoint_value(self, end):
        return self.hi if end == "hi" else self.lo

    # Mapping between xi (in the profile layout) and s.
    def evaluate(self, xi, period=None):
        tag = self.category.tag
        xi = np.asarray(xi, dtype=float)
        if tag in PERIODIC:
            L = period if period is not None else 2.0 * self.total
            x = np.abs(xi - L * np.round(xi / L))
            s = self._s_from_trough(x)
        elif tag in DECAYING:
            s = self._s_from_crest(np.abs(xi))
        else:  # kink
            s = self.s_mid + xi
        theta = self.theta_of_s(s)
        return self.phi_of(theta)

    def _s_from_trough(self, dist):
        # trough is the endpoint opposite the crest
        return dist if self.crest == "hi" else self.total - dist

    def _s_from_crest(self, dist):
        return self.total - dist if self.crest == "hi" else dist

    @property
    def s_mid(self):
        return float(self.s_of_theta(0.25 * np.pi))


def _category_for(params, category):
    if category is None:
        category = classify(params)
    if category.tag in (Tag.UNBOUNDED, Tag.COMPOSITE, Tag.STUMPON):
        raise CategoryMismatch(f"no single-branch profile for {category.tag.value}")
    return category


def build_quadrature(params: WaveParameters, n_samples: int = 2001,
                     category: WaveCategory | None = None) -> WaveProfile:
    """Profile from numerical inversion of xi = int dy / sqrt(F(y))."""
    category = _category_for(params, category)
    br = Branch(params, category)
    th = br.table_theta
    s = br.table_s
    if n_samples and n_samples > 0:
        # uniform-in-s samples on top of the refined table
        s_u = np.linspace(0.0, br.total, n_samples)
        th_u = br.theta_of_s(s_u)
        th = np.concatenate([th, th_u])
        s = np.concatenate([s, s_u])
        order = np.argsort(th, kind="stable")
        th, s = th[order], s[order]
        # drop the earlier of near-coincident samples; the endpoints survive
        keep = np.concatenate([np.diff(s) > 1e-14 * max(br.total, 1.0), [True]])
        th, s = th[keep], s[keep]
    phi = br.phi_of(th)
    tag = category.tag

    if tag in PERIODIC:
        L = 2.0 * br.total
        dist = br._s_from_trough(s)  # distance from trough
        order = np.argsort(dist)
        d, ph = dist[order], phi[order]
        xi = np.concatenate([-d[::-1], d[1:]])
        values = np.concatenate([ph[::-1], ph[1:]])
        pieces = (Piece(-0.5 * L, 0.5 * L, params),)
        return WaveProfile(xi, values, category, params, period=L, crest_xi=0.5 * L,
                           pieces=pieces, _branch=br)
    if tag in DECAYING:
        dist = br._s_from_crest(s)
        order = np.argsort(dist)
        d, ph = dist[order], phi[order]
        xi = np.concatenate([-d[::-1], d[1:]])
        values = np.concatenate([ph[::-1], ph[1:]])
        pieces = (Piece(float(xi[0]), float(xi[-1]), params),)
        return WaveProfile(xi, values, category, params, period=None, crest_xi=0.0,
                           pieces=pieces, _branch=br)
    # kink: monotone from lo to hi
    xi = s - br.s_mid
    pieces = (Piece(float(xi[0]), float(xi[-1]), params),)
    return WaveProfile(xi, phi, category, params, period=None, crest_xi=0.0,
                       pieces=pieces, _branch=br)


def period(params: WaveParameters, category: WaveCategory | None = None) -> float:
    """L = 2 int_m^{min(M, c)} sqrt(c - y) / sqrt(P(y)) dy via adaptive quadrature."""
    category = _category_for(params, category)
    if not category.periodic:
        raise CategoryMismatch(f"{category.tag.value} is not periodic")
    br = Branch(params, category)
    val, _ = quad(br.rate, 0.0, 0.5 * np.pi, epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * val


def _peakon_ratios(params):
    m, M, c = params.m, params.M, params.c
    if params.family != "four-real":
        raise ProfileError("explicit peakons need four real roots")
    z, r = sorted((params.z, params.r))
    A = (c - m) / (M - m)
    B = (m - r) / (M - m)
    C = (m - z) / (M - m)
    return A, B, C


def decay_peakon_parameters(c: float) -> WaveParameters:
    """The peakon with exponential decay at speed c: roots z < m = m < M = c.

    Exists for 1/3 < c < 3.
    """
    c = float(c)
    disc = 24.0 * c - 8.0 * c * c
    if not disc > 0:
        raise ProfileError(f"no decaying peakon at c = {c}")
    m = (-2.0 * c + np.sqrt(disc)) / 6.0
    if not (-c / 3.0 < m < c):
        raise ProfileError(f"no decaying peakon at c = {c} (needs 1/3 < c < 3)")
    return WaveParameters.four_real(m, c, m, c)


def periodic_peakon_range(c: float) -> tuple[float, float]:
    """Open interval of troughs m admitting a periodic peakon at speed c."""
    m_lo = decay_peakon_parameters(c).m
    # the ellipsoid section M = c is real while -3m^2 - 2mc - 3c^2 + 8c >= 0
    m_edge = (-c + np.sqrt(max(c * c - 3.0 * (3.0 * c * c - 8.0 * c), 0.0))) / 3.0
    return m_lo, min(c, m_edge)


def periodic_peakon_parameters(c: float, m: float | None = None) -> WaveParameters:
    """The periodic peakon with trough m and crest M = c on the ellipsoid.

    ``m`` must lie between the decaying-peakon trough and the smaller of c
    and the edge of the ellipsoid; the default is the midpoint.
    """
    c = float(c)
    m_lo, m_hi = periodic_peakon_range(c)
    if m is None:
        m = 0.5 * (m_lo + m_hi)
    m = float(m)
    disc = (m + c) ** 2 - 4.0 * (m * m + c * c + m * c - 2.0 * c)
    if not disc > 0:
        raise ProfileError(f"no periodic peakon with c = {c}, m = {m}")
    r = 0.5 * (-(m + c) + np.sqrt(disc))
    if not (r < m < c):
        raise ProfileError(f"no periodic peakon with c = {c}, m = {m} (m must lie in ({m_lo}, {m_hi}))")
    return WaveParameters.four_real(m, c, r, c)


def peakon_constants(params: WaveParameters, uncorrected: bool = False) -> dict:
    """Constants of the closed-form periodic peakon m + D2 tn^2(D1 |xi|; k').

    With ``uncorrected`` the amplitude B^2 (c - m) and the crest angle
    arcsin(sqrt((1/B^2)/(1 + 1/B^2))) are used; by default B replaces
    B^2 in both, which is what the quadrature reproduces.
    """
    A, B, C = _peakon_ratios(params)
    tol = eq_tol(params.c)
    if abs(A - 1.0) > tol or not B > tol or not C > B:
        raise ProfileError(f"periodic peakon requires A = 1, 0 < B < C (A={A}, B={B}, C={C})")
    m, c = params.m, params.c
    D1 = np.sqrt(C) * np.sqrt(c - m) / (2.0 * np.sqrt(2.0))
    k = np.sqrt(B / C)
    kp = complementary_modulus(k)
    q = B * B if uncorrected else B
    D2 = q * (c - m)
    D3 = 2.0 / D1
    crest_angle = np.arcsin(np.sqrt((1.0 / q) / (1.0 + 1.0 / q)))
    L = D3 * incomplete_F(crest_angle, kp)
    return {"A": A, "B": B, "C": C, "D1": D1, "D2": D2, "D3": D3, "k": k, "k_prime": kp,
            "period": float(L)}


def decay_peakon_constants(params: WaveParameters, uncorrected: bool = False) -> dict:
    """Constants of m + D4 e^{-D5|xi|} / (D6 e^{-D5|xi|} - 1)^2.

    The uncorrected D4, D6 place the singularity of the formula at
    D5 |xi| = ln D6 instead of making it decay from the peak; the corrected
    pair is D4 / D6^2 and 1 / D6.
    """
    A, B, C = _peakon_ratios(params)
    tol = eq_tol(params.c)
    if abs(A - 1.0) > tol or abs(B) > tol or not C > 0:
        raise ProfileError(f"decaying peakon requires A = 1, B = 0, C > 0 (A={A}, B={B}, C={C})")
    m, c = params.m, params.c
    g = 1.0 + np.sqrt(1.0 + 1.0 / C)
    D4 = 4.0 * C * C * (c - m) * g * g
    D5 = np.sqrt(C) * np.sqrt(c - m) / np.sqrt(2.0)
    D6 = C * g * g
    if not uncorrected:
        D4, D6 = D4 / D6**2, 1.0 / D6
    return {"A": A, "B": B, "C": C, "D4": D4, "D5": D5, "D6": D6}


def explicit_periodic_peakon(params: WaveParameters, n_samples: int = 2001, xi=None,
                             uncorrected: bool = False) -> WaveProfile:
    """Closed-form periodic peakon in Jacobi tn, trough at xi = 0."""
    k = peakon_constants(params, uncorrected)
    L = k["period"]
    if xi is None:
        xi = np.linspace(-0.5 * L, 0.5 * L, n_samples)
    xi = np.asarray(xi, dtype=float)
    u = k["D1"] * np.abs(xi - L * np.round(xi / L))
    vals = jacobi(u, k["k_prime"])
    phi = params.m + k["D2"] * np.asarray(vals.tn) ** 2
    cat = WaveCategory(Tag.PERIODIC_PEAKON)
    return WaveProfile(xi, phi, cat, params, period=L, crest_xi=0.5 * L,
                       pieces=(Piece(-0.5 * L, 0.5 * L, params),))


def explicit_decay_peakon(params: WaveParameters, n_samples: int = 2001, xi=None,
                          extent: float | None = None,
                          uncorrected: bool = False) -> WaveProfile:
    """Closed-form peakon with exponential decay, crest at xi = 0."""
    k = decay_peakon_constants(params, uncorrected)
    if xi is None:
        extent = extent if extent is not None else 30.0 / k["D5"]
        xi = np.linspace(-extent, extent, n_samples)
    xi = np.asarray(xi, dtype=float)
    e = np.exp(-k["D5"] * np.abs(xi))
    with np.errstate(divide="ignore"):
        phi = params.m + k["D4"] * e / (k["D6"] * e - 1.0) ** 2
    cat = WaveCategory(Tag.PEAKON_DECAY)
    return WaveProfile(xi, phi, cat, params, period=None, crest_xi=0.0,
                       pieces=(Piece(float(xi[0]), float(xi[-1]), params),))


def compare_profiles(reference: WaveProfile, candidate: WaveProfile) -> float:
    """Sup-norm deviation of ``candidate`` from ``reference`` on the reference grid."""
    return float(np.max(np.abs(candidate.phi_at(reference.xi) - reference.phi)))


def fit_local_exponent(profile: WaveProfile, at: str = "crest",
                       window=(1e-4, 1e-2)) -> float:
    """Local power law (crest, trough) or exponential decay rate (tail).

    ``crest``/``trough``: least-squares slope of log|phi - phi0| against
    log|xi - xi0| for |xi - xi0| in ``window`` times the length scale.
    ``tail``: slope of -log|phi - level| against |xi| where the tail is
    within 1e-8 .. 1e-4 of the amplitude.
    """
    xi, phi = profile.xi, profile.phi
    cat = profile.category
    up = cat.orientation is Orientation.CREST_UP
    if at == "tail":
        if cat.tag not in DECAYING:
            raise ProfileError("tail rate needs a decaying profile")
        level = float(phi[0] if abs(xi[0]) > abs(xi[-1]) else phi[-1])
        amp = float(np.max(np.abs(phi - level)))
        dev = np.abs(phi - level)
        sel = (dev > 1e-8 * amp) & (dev < 1e-4 * amp) & (xi > profile.crest_xi)
        if sel.sum() < 5:
            raise InsufficientSamples("too few tail samples")
        slope = np.polyfit(xi[sel], np.log(dev[sel]), 1)[0]
        return float(-slope)
    if at not in ("crest", "trough"):
        raise ValueError(f"unknown location {at!r}")

    if cat.tag in PERIODIC:
        x0 = profile.crest_xi if at == "crest" else 0.0
    elif cat.tag in DECAYING:
        if at != "crest":
            raise ProfileError("decaying profiles have no trough")
        x0 = profile.crest_xi
    else:
        raise ProfileError(f"no crest/trough for {cat.tag.value}")
    i0 = int(np.argmin(np.abs(xi - x0)))
    phi0 = float(phi[i0])
    scale = profile.length_scale
    dist = np.abs(xi - x0)
    # one side only: towards the interior of the sampled range
    side = (xi < x0) if x0 >= xi[-1] - 1e-12 * scale else (xi > x0)
    sel = side & (dist >= window[0] * scale) & (dist <= window[1] * scale)
    sel &= np.abs(phi - phi0) > 0
    if sel.sum() < 5:
        raise InsufficientSamples(f"only {int(sel.sum())} samples in the fitting window")
    slope = np.polyfit(np.log(dist[sel]), np.log(np.abs(phi[sel] - phi0)), 1)[0]
    return float(slope)


def assemble_composite(segments: list[WaveProfile], plateaus: list[float] | None = None,
                       check: bool = True, plateau_samples_per_unit: float | None = None
                       ) -> WaveProfile:
    """Glue crest-to-crest segments at phi = c, optionally with plateaus phi = c.

    ``plateaus[i]`` is the length of the flat stretch inserted after segment i
    (len(segments) - 1 entries).  Plateaus of positive length require
    a = 2c^3 - 2c^2 unless ``check`` is False.
    """
    if not segments:
        raise ProfileError("no segments")
    plateaus = list(plateaus or [0.0] * (len(segments) - 1))
    if len(plateaus) != len(segments) - 1:
        raise ProfileError("need one plateau length between each pair of segments")
    params = [s.params for s in segments]
    c = params[0].c
    if check:
        if not gluing_compatible(params):
            raise ProfileError("segments do not share c, a and the quadric surface")
        if any(p > 0 for p in plateaus) and abs(params[0].a - stumpon_a(c)) > 1e-9:
            raise ProfileError("plateaus phi = c need a = 2c^3 - 2c^2")
    for s in segments:
        if s.period is None or abs(s.phi[0] - c) > 1e-9 or abs(s.phi[-1] - c) > 1e-9:
            raise ProfileError("segments must run crest to crest with phi = c at both ends")

    xs, ps, pieces, flats = [], [], [], []
    cursor = 0.0
    for i, seg in enumerate(segments):
        x = seg.xi - seg.xi[0] + cursor
        if xs:
            x, ph = x[1:], seg.phi[1:]
        else:
            ph = seg.phi
        xs.append(x)
        ps.append(ph)
        pieces.append(Piece(cursor, float(x[-1]), seg.params))
        cursor = float(x[-1])
        if i < len(plateaus) and plateaus[i] > 0:
            density = plateau_samples_per_unit or len(seg.xi) / (seg.xi[-1] - seg.xi[0])
            n = max(int(np.ceil(plateaus[i] * density)), 2)
            xp = cursor + np.linspace(0.0, plateaus[i], n + 1)[1:]
            xs.append(xp)
            ps.append(np.full_like(xp, c))
            flats.append((cursor, cursor + plateaus[i]))
            cursor += plateaus[i]
    xi = np.concatenate(xs)
    phi = np.concatenate(ps)
    shift = -0.5 * cursor
    tag = Tag.STUMPON if flats else (Tag.COMPOSITE if len(segments) > 1 else segments[0].category.tag)
    cat = WaveCategory(tag, segments[0].category.orientation)
    if len(segments) == 1 and not flats:
        return segments[0]
    return WaveProfile(
        xi + shift, phi, cat, params[0], period=None, crest_xi=shift,
        pieces=tuple(Piece(p.xi0 + shift, p.xi1 + shift, p.params) for p in pieces),
        plateaus=tuple((s + shift, e + shift) for s, e in flats),
    )
