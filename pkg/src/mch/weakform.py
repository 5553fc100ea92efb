"""Certification of traveling-wave profiles against the weak equation

    (phi')^2 + 2 phi^3 - 2 c phi = ((phi - c)^2)'' + a

tested against smooth bump functions, plus the pointwise first-order form
(phi')^2 = F(phi) and the side conditions on the set {phi = c}.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .classify import eq_tol
from .profile import WaveProfile, eval_F
from .quartic import stumpon_a


class SupportNotCovered(ValueError):
    pass


def _bump(s):
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    q = 1.0 - s[inside] ** 2
    out[inside] = np.exp(-1.0 / q)
    return out


def _bump_dd(s):
    # d^2/ds^2 exp(-1/(1-s^2)) = exp(-1/(1-s^2)) (6 s^4 - 2) / (1 - s^2)^4
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    q = 1.0 - si**2
    out[inside] = np.exp(-1.0 / q) * (6.0 * si**4 - 2.0) / q**4
    return out


@dataclass(frozen=True)
class TestFunctionFamily:
    """Bumps psi_j(xi) = exp(-1/(1 - s^2)), s = (xi - center_j) / width_j."""

    centers: np.ndarray
    widths: np.ndarray

    __test__ = False  # not a pytest class

    @classmethod
    def spread(cls, lo: float, hi: float, n: int = 24, widths=None) -> "TestFunctionFamily":
        """n bumps with supports inside [lo, hi], cycling through a few widths."""
        span = hi - lo
        if widths is None:
            widths = (0.05 * span, 0.1 * span, 0.2 * span)
        widths = np.resize(np.asarray(widths, dtype=float), n)
        centers = np.empty(n)
        for j in range(n):
            w = widths[j]
            centers[j] = lo + w + (span - 2 * w) * (j + 0.5) / n
        return cls(centers, widths)

    def shifted(self, dx: float) -> "TestFunctionFamily":
        return TestFunctionFamily(self.centers + dx, self.widths)

    def __len__(self):
        return len(self.centers)

    def psi(self, j, xi):
        return _bump((xi - self.centers[j]) / self.widths[j])

    def psi_dd(self, j, xi):
        w = self.widths[j]
        return _bump_dd((xi - self.centers[j]) / w) / (w * w)

    def norm(self, j) -> float:
        # L1 norm of the bump, 0.443993816168... * width
        return 0.44399381616807943 * self.widths[j]


_GX, _GW = np.polynomial.legendre.leggauss(3)


def _weak_terms(xi, phi, c, a, fam, j):
    """Integral of the weak residual against psi_j on the given samples.

    phi is treated as piecewise linear between samples while psi is
    evaluated exactly: (phi')^2 is the squared secant slope of each cell,
    the cubic terms use 3-point Gauss nodes per cell, and the psi'' term is
    integrated by parts cell by cell, int g psi'' = -sum (dg/h) (d psi),
    which is exact for piecewise linear g.
    """
    h = np.diff(xi)
    lo = fam.centers[j] - fam.widths[j]
    hi = fam.centers[j] + fam.widths[j]
    cells = np.flatnonzero((xi[1:] > lo) & (xi[:-1] < hi))
    if cells.size == 0:
        return 0.0
    x0, hc = xi[cells], h[cells]
    p0, dp = phi[cells], phi[cells + 1] - phi[cells]
    t = 0.5 * (_GX + 1.0)
    xg = x0[:, None] + hc[:, None] * t
    pg = p0[:, None] + dp[:, None] * t
    psi = fam.psi(j, xg)
    w = 0.5 * hc[:, None] * _GW
    slope2 = (dp / hc) ** 2
    body = slope2[:, None] + 2.0 * pg**3 - 2.0 * c * pg - a
    t1 = np.sum(w * body * psi)
    g = (phi - c) ** 2
    dg = g[cells + 1] - g[cells]
    dpsi = fam.psi(j, xi[cells + 1]) - fam.psi(j, xi[cells])
    t2 = np.sum(dg / hc * dpsi)
    return t1 + t2


def weak_residual(profile: WaveProfile, test_family: TestFunctionFamily,
                  richardson: bool = True) -> float:
    """Max over the family of |<weak residual, psi>| / ||psi||_1."""
    xi, phi = profile.xi, profile.phi
    lo = test_family.centers - test_family.widths
    hi = test_family.centers + test_family.widths
    if np.any(lo < xi[0]) or np.any(hi > xi[-1]):
        raise SupportNotCovered("a test function reaches outside the sampled profile")
    c, a = profile.c, profile.a
    worst = 0.0
    for j in range(len(test_family)):
        fine = _weak_terms(xi, phi, c, a, test_family, j)
        if richardson and len(xi) > 8:
            coarse = _weak_terms(xi[::2] if len(xi) % 2 else np.append(xi[:-1:2], xi[-1]),
                                 phi[::2] if len(xi) % 2 else np.append(phi[:-1:2], phi[-1]),
                                 c, a, test_family, j)
            val = (4.0 * fine - coarse) / 3.0
        else:
            val = fine
        worst = max(worst, abs(val) / test_family.norm(j))
    return float(worst)


def _derivative(xi, phi):
    """Second-order three-point derivative on a nonuniform grid (interior)."""
    h0 = xi[1:-1] - xi[:-2]
    h1 = xi[2:] - xi[1:-1]
    return (-h1 / (h0 * (h0 + h1)) * phi[:-2]
            + (h1 - h0) / (h0 * h1) * phi[1:-1]
            + h0 / (h1 * (h0 + h1)) * phi[2:])


def _singular_points(profile):
    tol = max(eq_tol(profile.c), 1e-12)
    pts = list(profile.xi[np.abs(profile.phi - profile.c) <= tol])
    for piece in profile.pieces:
        pts.extend([piece.xi0, piece.xi1])
    return np.unique(np.asarray(pts, dtype=float))


def _near_c_mask(profile, collar=2, resolution=0.02):
    """Samples to skip in pointwise checks.

    Points at phi = c and piece boundaries, ``collar`` neighbours on each
    side, and samples whose stencil spacing exceeds ``resolution`` times the
    distance to the nearest such point (finite differences cannot resolve a
    cusp there).
    """
    xi = profile.xi
    tol = max(eq_tol(profile.c), 1e-12)
    bad = np.abs(profile.phi - profile.c) <= tol
    sing = _singular_points(profile)
    for x in sing:
        bad |= np.abs(xi - x) <= 1e-12 * (1 + abs(x))
    idx = np.flatnonzero(bad)
    out = bad.copy()
    for k in range(1, collar + 1):
        out[np.clip(idx - k, 0, len(out) - 1)] = True
        out[np.clip(idx + k, 0, len(out) - 1)] = True
    if sing.size:
        h = np.empty_like(xi)
        gaps = np.diff(xi)
        h[1:-1] = np.maximum(gaps[1:], gaps[:-1])
        h[0], h[-1] = gaps[0], gaps[-1]
        pos = np.clip(np.searchsorted(sing, xi), 1, len(sing)) if len(sing) > 1 else None
        if pos is None:
            dist = np.abs(xi - sing[0])
        else:
            dist = np.minimum(np.abs(xi - sing[pos - 1]), np.abs(xi - sing[np.minimum(pos, len(sing) - 1)]))
        out |= h > resolution * dist
    return out


def pointwise_residual(profile: WaveProfile, collar: int = 2) -> float:
    """sup |(phi')^2 - F(phi)| / (1 + |F(phi)|) over interior smooth samples."""
    xi, phi = profile.xi, profile.phi
    dphi = _derivative(xi, phi)
    skip = _near_c_mask(profile, collar)[1:-1]
    worst = 0.0
    interior_xi = xi[1:-1]
    interior_phi = phi[1:-1]
    pieces = profile.pieces or ()
    for piece in pieces or [None]:
        if piece is None:
            sel = ~skip
            params = profile.params
        else:
            sel = (~skip) & (interior_xi > piece.xi0) & (interior_xi < piece.xi1)
            params = piece.params
        if not np.any(sel):
            continue
        F = eval_F(interior_phi[sel], params)
        res = np.abs(dphi[sel] ** 2 - F) / (1.0 + np.abs(F))
        worst = max(worst, float(np.max(res)))
    return worst


@dataclass
class TWReport:
    plateau_intervals: list = field(default_factory=list)
    plateau_measure: float = 0.0
    smooth_residual: float = 0.0
    smooth_ok: bool = True
    endpoint_limits_ok: bool = True
    a_condition_required: bool = False
    a_condition_ok: bool = True
    a_mismatch: float = 0.0
    tw3_variation: float = 0.0
    tw3_variation_coarse: float = 0.0
    tw3_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.smooth_ok and self.endpoint_limits_ok and self.a_condition_ok and self.tw3_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _plateaus(xi, phi, c, tol, min_length):
    on = np.abs(phi - c) <= tol
    out = []
    i = 0
    n = len(xi)
    while i < n:
        if on[i]:
            j = i
            while j + 1 < n and on[j + 1]:
                j += 1
            if xi[j] - xi[i] > min_length:
                out.append((float(xi[i]), float(xi[j])))
            i = j + 1
        else:
            i += 1
    return out


def _variation_of_derivative(xi, g):
    d = np.diff(g) / np.diff(xi)
    return float(np.sum(np.abs(np.diff(d))))


def tw_conditions(profile: WaveProfile, smooth_tol: float = 1e-4,
                  tw3_rtol: float = 0.05) -> TWReport:
    """Check the structure conditions on {phi = c}, the segments and (phi - c)^2."""
    xi, phi, c = profile.xi, profile.phi, profile.c
    tol = eq_tol(c)
    rep = TWReport()
    # runs shorter than this are crest points sampled densely, not plateaus
    plats = _plateaus(xi, phi, c, tol, 1e-6 * (xi[-1] - xi[0]))
    rep.plateau_intervals = plats
    rep.plateau_measure = float(sum(e - s for s, e in plats))

    rep.smooth_residual = pointwise_residual(profile)
    rep.smooth_ok = rep.smooth_residual < smooth_tol

    # every piece boundary interior to the profile must sit at phi = c
    ends = []
    for piece in profile.pieces:
        for x in (piece.xi0, piece.xi1):
            if xi[0] < x < xi[-1]:
                ends.append(x)
    for s, e in plats:
        ends.extend([s, e])
    for x in ends:
        i = int(np.argmin(np.abs(xi - x)))
        if abs(phi[i] - c) > 1e-8 * (1 + abs(c)):
            rep.endpoint_limits_ok = False

    if rep.plateau_measure > 0:
        rep.a_condition_required = True
        rep.a_mismatch = float(abs(profile.a - stumpon_a(c)))
        rep.a_condition_ok = rep.a_mismatch < 1e-9
        for piece in profile.pieces:
            if abs(piece.params.a - stumpon_a(c)) >= 1e-9:
                rep.a_condition_ok = False

    g = (phi - c) ** 2
    fine = _variation_of_derivative(xi, g)
    sub = slice(None, None, 2)
    xc, gc = xi[sub], g[sub]
    if xc[-1] != xi[-1]:
        xc, gc = np.append(xc, xi[-1]), np.append(gc, g[-1])
    coarse = _variation_of_derivative(xc, gc)
    rep.tw3_variation, rep.tw3_variation_coarse = fine, coarse
    rep.tw3_ok = bool(np.isfinite(fine) and abs(fine - coarse) <= tw3_rtol * max(fine, 1e-300))
    return rep
