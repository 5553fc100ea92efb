"""Taxonomy of bounded traveling waves of the mCH equation.

The ordering of the roots (z, r, m, M) relative to the speed c selects the
wave type.  Crest-down ("primed") cases are the mirror images of the
crest-up ones and are handled by negating every parameter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .quartic import (
    ConstraintViolation,
    WaveParameters,
    _a_from_roots,
    constraint_residual,
    quadric_name,
    stumpon_a,
)


class ClassificationError(ValueError):
    pass


class AmbiguousBoundary(ClassificationError):
    """Two orderings cannot be told apart at the equality tolerance."""


class NoBoundedWave(ClassificationError):
    """The ordering matches none of the bounded cases."""


class Tag(str, enum.Enum):
    SMOOTH_PERIODIC = "smooth-periodic"
    SMOOTH_DECAY = "smooth-decay"
    KINK = "kink"
    PERIODIC_PEAKON = "periodic-peakon"
    PEAKON_DECAY = "peakon-decay"
    PERIODIC_CUSPON = "periodic-cuspon"
    CUSPON_DECAY = "cuspon-decay"
    COMPOSITE = "composite"
    STUMPON = "stumpon"
    UNBOUNDED = "unbounded"


class Orientation(str, enum.Enum):
    CREST_UP = "crest-up"
    CREST_DOWN = "crest-down"

    def flipped(self) -> "Orientation":
        return Orientation.CREST_DOWN if self is Orientation.CREST_UP else Orientation.CREST_UP


PERIODIC = {Tag.SMOOTH_PERIODIC, Tag.PERIODIC_PEAKON, Tag.PERIODIC_CUSPON}
DECAYING = {Tag.SMOOTH_DECAY, Tag.PEAKON_DECAY, Tag.CUSPON_DECAY}


@dataclass(frozen=True)
class WaveCategory:
    tag: Tag
    orientation: Orientation = Orientation.CREST_UP

    def __str__(self):
        return self.tag.value

    @property
    def periodic(self) -> bool:
        return self.tag in PERIODIC

    def to_dict(self) -> dict:
        return {"tag": self.tag.value, "orientation": self.orientation.value}

    @classmethod
    def from_dict(cls, d: dict) -> "WaveCategory":
        return cls(Tag(d["tag"]), Orientation(d["orientation"]))


def eq_tol(c: float) -> float:
    return 1e-9 * (1.0 + abs(c))


class _Cmp:
    """Tolerant comparisons shared by every branch of the classifier."""

    def __init__(self, c):
        self.tol = eq_tol(c)

    def eq(self, x, y):
        return abs(x - y) <= self.tol

    def lt(self, x, y):
        return y - x > self.tol


def reflect(params: WaveParameters) -> WaveParameters:
    """Mirror (m, M, z, r, c) -> (-m, -M, -z, -r, -c).

    Only the labels are mirrored (a and d follow the negated roots); this is a
    symmetry of the case list, not of the equation itself.
    """
    if params.family == "four-real":
        return WaveParameters.four_real(-params.m, -params.M, -params.aux, -params.c)
    if params.family == "two-real":
        m, M, c = -params.m, -params.M, -params.c
        a = _a_from_roots("hyperboloid", m, M, params.aux)
        zz = 0.25 * (m + M) ** 2 + params.aux**2
        return WaveParameters("two-real", m, M, c, params.aux, a, -0.5 * m * M * zz)
    m, c = -params.m, -params.c
    return WaveParameters("double-real", m, m, c, params.aux, m * params.aux**2,
                          params.d)


def classify(params: WaveParameters) -> WaveCategory:
    """Wave category selected by the ordering of the roots and c."""
    cmp = _Cmp(params.c)
    if params.family == "double-real":
        if cmp.eq(params.m, params.c):
            raise AmbiguousBoundary("double root coincides with c")
        return WaveCategory(Tag.UNBOUNDED)

    m, M, c = params.m, params.M, params.c
    if cmp.eq(m, M):
        if cmp.eq(m, c):
            return WaveCategory(Tag.STUMPON)
        raise AmbiguousBoundary("m = M away from c: the wave degenerates to a constant")
    if M < m:
        return WaveCategory(_classify_up(reflect(params), cmp), Orientation.CREST_DOWN)
    return WaveCategory(_classify_up(params, cmp), Orientation.CREST_UP)


def _classify_up(p: WaveParameters, cmp: _Cmp) -> Tag:
    m, M, c = p.m, p.M, p.c
    if cmp.eq(m, c):
        raise AmbiguousBoundary("m = c: peak and trough coincide with the pole")
    if cmp.lt(c, m):
        raise NoBoundedWave("c below both m and M in the crest-up ordering")

    if p.family == "two-real":
        if cmp.lt(M, c):
            return Tag.SMOOTH_PERIODIC
        if cmp.eq(M, c):
            return Tag.PERIODIC_PEAKON
        return Tag.PERIODIC_CUSPON

    z, r = sorted((p.z, p.r))
    # Kink: the other two roots double up on m and M.
    if cmp.eq(z, m) and cmp.eq(r, M):
        if cmp.lt(M, c):
            return Tag.KINK
        raise NoBoundedWave("kink ordering requires M < c")
    if cmp.lt(m, r):
        raise NoBoundedWave("fourth root r lies above m")
    if cmp.eq(z, r) and cmp.eq(r, m):
        raise AmbiguousBoundary("triple root at m")
    decay = cmp.eq(r, m)
    if cmp.lt(M, c):
        return Tag.SMOOTH_DECAY if decay else Tag.SMOOTH_PERIODIC
    if cmp.eq(M, c):
        return Tag.PEAKON_DECAY if decay else Tag.PERIODIC_PEAKON
    return Tag.CUSPON_DECAY if decay else Tag.PERIODIC_CUSPON


def stumpon_points(c: float, family: str) -> list[WaveParameters]:
    """The two points of the quadric with m = M = c and a = 2c^3 - 2c^2.

    Empty when c is outside the family's admissible range (c < 0 for the
    hyperboloid, 0 < c < 1 for the ellipsoid).
    """
    fam = quadric_name(family)
    c = float(c)
    a = stumpon_a(c)
    out = []
    if fam == "hyperboloid":
        rad = 2.0 * c * c - 2.0 * c
        if not (c < 0 and rad > 0):
            return []
        im = float(np.sqrt(rad))
        zz = c * c + rad
        for aux in (im, -im):
            out.append(WaveParameters("two-real", c, c, c, aux, a, -0.5 * c * c * zz))
        return out
    rad = -2.0 * c * c + 2.0 * c
    if not rad > 0:
        return []
    for r in (-c + np.sqrt(rad), -c - np.sqrt(rad)):
        z = -2.0 * c - r
        out.append(WaveParameters("four-real", c, c, c, float(r), a, -0.5 * z * r * c * c))
    return out


def gluing_compatible(points: list[WaveParameters], tol: float = 1e-9) -> bool:
    """True when the segments share c, a and the same quadric surface."""
    if not points:
        return False
    p0 = points[0]
    res0 = p0.residual()
    for p in points[1:]:
        if p.family != p0.family:
            return False
        if abs(p.c - p0.c) > tol or abs(p.a - p0.a) > tol:
            return False
        if abs(p.residual() - res0) > tol:
            return False
    return True


def level_set_points(family: str, c: float, a: float, m: float,
                     M_range=(-10.0, 10.0), n_scan: int = 4001) -> list[WaveParameters]:
    """All points on the quadric with given c, a and first root m.

    Scans M over ``M_range`` for sign changes of the a-mismatch and refines
    each with Brent's method.  Used to find segments that can be glued.
    """
    from scipy.optimize import brentq

    fam = quadric_name(family)

    def branches(M):
        if fam == "hyperboloid":
            im2 = 0.75 * m * m + 0.75 * M * M + 0.5 * m * M - 2.0 * c
            return [np.sqrt(im2)] if im2 > 0 else []
        disc = (m + M) ** 2 - 4.0 * (m * m + M * M + m * M - 2.0 * c)
        if disc < 0:
            return []
        s = np.sqrt(disc)
        return [0.5 * (-(m + M) + s), 0.5 * (-(m + M) - s)]

    def mismatch(M, b):
        br = branches(M)
        if len(br) <= b:
            return np.nan
        return _a_from_roots(fam, m, M, br[b]) - a

    out = []
    seen = set()
    grid = np.linspace(*M_range, n_scan)
    for b in range(1 if fam == "hyperboloid" else 2):
        vals = np.array([mismatch(M, b) for M in grid])
        for i in range(n_scan - 1):
            v0, v1 = vals[i], vals[i + 1]
            if np.isfinite(v0) and np.isfinite(v1) and v0 * v1 < 0:
                M = brentq(mismatch, grid[i], grid[i + 1], args=(b,), xtol=1e-15, rtol=1e-15)
                aux = branches(M)[b]
                if fam == "hyperboloid":
                    p = WaveParameters.two_real(m, M, c)
                else:
                    z = -m - M - aux
                    p = WaveParameters.four_real(m, M, max(aux, z), c)
                key = tuple(np.round(np.sort(p.roots().real), 10))
                if key not in seen:
                    seen.add(key)
                    out.append(p)
    return out


__all__ = [
    "AmbiguousBoundary", "ClassificationError", "ConstraintViolation", "NoBoundedWave",
    "Orientation", "Tag", "WaveCategory", "classify", "gluing_compatible",
    "level_set_points", "reflect", "stumpon_points", "constraint_residual",
]
