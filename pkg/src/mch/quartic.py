"""The traveling-wave quartic P(phi) = phi^2 (c - phi^2/2) + a phi + d.

Root finding and classification of its zero set, the quadric constraint
surfaces on which the roots live, and the integration constants a and d
recovered from the roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

SNAP_TOL = 1e-9
# Pairs closer than this are tested for a genuine double root.
CLUSTER_TOL = 1e-6

HYPERBOLOID = "hyperboloid"
ELLIPSOID = "ellipsoid"
_FAMILY_ALIASES = {
    HYPERBOLOID: HYPERBOLOID,
    "two-real": HYPERBOLOID,
    ELLIPSOID: ELLIPSOID,
    "four-real": ELLIPSOID,
}


class DegenerateRootsError(ValueError):
    """Root classification is ambiguous under the snapping tolerance."""


class ConstraintViolation(ValueError):
    """Parameter point is not on the required quadric surface."""


def quadric_name(family: str) -> str:
    try:
        return _FAMILY_ALIASES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}") from None


@dataclass(frozen=True)
class TravelingWavePolynomial:
    c: float
    a: float
    d: float

    def coefficients(self) -> np.ndarray:
        """Coefficients, highest degree first."""
        return np.array([-0.5, 0.0, self.c, self.a, self.d])

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        return phi * phi * (self.c - 0.5 * phi * phi) + self.a * phi + self.d

    def derivative(self, phi):
        phi = np.asarray(phi, dtype=float)
        return -2.0 * phi**3 + 2.0 * self.c * phi + self.a

    @classmethod
    def from_roots(cls, roots) -> "TravelingWavePolynomial":
        c, a, d = expand_roots(roots)
        return cls(c, a, d)


def expand_roots(roots):
    """(c, a, d) of -1/2 * prod(phi - root); the roots must sum to zero."""
    coef = -0.5 * np.poly(np.asarray(roots, dtype=complex))
    return float(coef[2].real), float(coef[3].real), float(coef[4].real)


@dataclass(frozen=True)
class FourReal:
    z: float
    r: float
    m: float
    M: float
    kind = "four-real"

    def roots(self) -> np.ndarray:
        return np.array([self.z, self.r, self.m, self.M], dtype=complex)

    @property
    def real_roots(self):
        return (self.z, self.r, self.m, self.M)


@dataclass(frozen=True)
class TwoRealPair:
    m: float
    M: float
    z: complex
    kind = "two-real"

    def roots(self) -> np.ndarray:
        return np.array([self.m, self.M, self.z, np.conj(self.z)], dtype=complex)

    @property
    def real_roots(self):
        return (self.m, self.M)


@dataclass(frozen=True)
class DoubleRealPair:
    m: float
    z: complex
    kind = "double-real"

    def roots(self) -> np.ndarray:
        return np.array([self.m, self.m, self.z, np.conj(self.z)], dtype=complex)

    @property
    def real_roots(self):
        return (self.m,)


RootStructure = Union[FourReal, TwoRealPair, DoubleRealPair]


def _newton_polish(poly, x, steps=2):
    coef = poly.coefficients()
    dcoef = np.polyder(coef)
    for _ in range(steps):
        dp = np.polyval(dcoef, x)
        if dp == 0:
            break
        new = x - np.polyval(coef, x) / dp
        # near a double root P' ~ 0 and the step can push a cluster apart
        if abs(np.polyval(coef, new)) >= abs(np.polyval(coef, x)):
            break
        x = new
    return x


def _double_root_near(poly, x0):
    # A double root of P is a simple root of P'.
    coef = np.polyder(poly.coefficients())
    ddcoef = np.polyder(coef)
    x = float(np.real(x0))
    for _ in range(6):
        dd = np.polyval(ddcoef, x)
        if dd == 0:
            break
        x = x - np.polyval(coef, x) / dd
    return x


def find_roots(poly: TravelingWavePolynomial) -> RootStructure:
    """Classify the zero set of P via companion-matrix eigenvalues.

    Conjugate pairs with ``|Im| < 1e-9 (1 + |root|)`` snap to a real double
    root; near-coincident pairs are resolved by locating the zero of P'.
    """
    coef = poly.coefficients()
    if not np.all(np.isfinite(coef)):
        raise ValueError("polynomial coefficients must be finite")
    scale = max(1.0, float(np.max(np.abs(coef[2:]))))
    raw = np.roots(coef)
    raw = np.array([_newton_polish(poly, x) for x in raw])

    upper = [x for x in raw if x.imag > SNAP_TOL * (1 + abs(x))]
    real = [float(x.real) for x in raw if abs(x.imag) <= SNAP_TOL * (1 + abs(x))]
    pairs = []
    for zc in upper:
        if abs(zc.imag) < CLUSTER_TOL * (1 + abs(zc)):
            x = _double_root_near(poly, zc.real)
            if abs(poly(x)) > 1e-12 * scale:
                raise DegenerateRootsError(
                    f"conjugate pair {zc} too close to the real axis to classify"
                )
            real += [x, x]
        else:
            pairs.append(complex(zc))
    real = sorted(real)

    if len(pairs) == 2 or len(real) + 2 * len(pairs) != 4:
        raise DegenerateRootsError("no consistent real root set for the traveling-wave quartic")

    if not pairs:
        real = _merge_close_pairs(poly, real, scale)
        return FourReal(*(float(x) for x in real))

    zc = pairs[0]
    m, M = real
    if abs(M - m) < CLUSTER_TOL * (1 + abs(m)):
        x = _double_root_near(poly, 0.5 * (m + M))
        if abs(poly(x)) <= 1e-12 * scale:
            return DoubleRealPair(float(x), zc)
        if abs(M - m) < SNAP_TOL * (1 + abs(m)):
            raise DegenerateRootsError("real roots coincide but P' does not vanish")
    return TwoRealPair(float(m), float(M), zc)


def _merge_close_pairs(poly, real, scale):
    real = list(real)
    for i in range(3):
        if abs(real[i + 1] - real[i]) < CLUSTER_TOL * (1 + abs(real[i])):
            x = _double_root_near(poly, 0.5 * (real[i] + real[i + 1]))
            if abs(poly(x)) <= 1e-12 * scale:
                real[i] = real[i + 1] = x
    return real


def recover_d(structure: RootStructure) -> float:
    """Constant term of -1/2 * prod(phi - root)."""
    if isinstance(structure, FourReal):
        return -0.5 * structure.z * structure.r * structure.m * structure.M
    if isinstance(structure, TwoRealPair):
        return -0.5 * structure.m * structure.M * abs(structure.z) ** 2
    if isinstance(structure, DoubleRealPair):
        return -0.5 * structure.m**2 * abs(structure.z) ** 2
    raise TypeError(f"not a root structure: {structure!r}")


# Quadratic forms Q with (m, M, aux) Q (m, M, aux)^T = 2c on each surface.
_FORMS = {
    HYPERBOLOID: np.array([[0.75, 0.25, 0.0], [0.25, 0.75, 0.0], [0.0, 0.0, -1.0]]),
    ELLIPSOID: np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]]),
}


def quadric_form(family: str) -> np.ndarray:
    return _FORMS[quadric_name(family)].copy()


def constraint_residual(family: str, m: float, M: float, aux: float, c: float) -> float:
    """Left-hand side of the quadric constraint linking (m, M, aux) to c.

    ``aux`` is Im z for the two-real-root family (hyperboloid) and the fourth
    real root r for the four-real-root family (ellipsoid).
    """
    fam = quadric_name(family)
    if fam == HYPERBOLOID:
        return 0.75 * m * m + 0.75 * M * M + 0.5 * m * M - aux * aux - 2.0 * c
    return aux * aux + m * m + M * M + aux * m + aux * M + m * M - 2.0 * c


def reduced_axes(family: str, c: float):
    """Diagonalise the constraint quadric by an orthogonal change of variables.

    Returns ``(signs, axes, basis)``: in the rotated coordinates
    ``y = basis.T @ (m, M, aux)`` the surface reads
    ``sum(signs * y**2 / axes**2) = 1``.
    """
    Q = quadric_form(family)
    if c == 0:
        raise ValueError("quadric degenerates to a cone at c = 0")
    w, V = np.linalg.eigh(Q)
    lam = w / (2.0 * c)
    return np.sign(lam), 1.0 / np.sqrt(np.abs(lam)), V


def integration_constant_a(family: str, m: float, M: float, aux: float, c: float,
                           tol: float = 1e-8) -> float:
    """The constant a of a root configuration lying on its quadric."""
    res = constraint_residual(family, m, M, aux, c)
    if abs(res) > tol * (1 + abs(c)):
        raise ConstraintViolation(f"point is off the {quadric_name(family)} (residual {res:.3e})")
    return _a_from_roots(quadric_name(family), m, M, aux)


def _a_from_roots(fam, m, M, aux):
    if fam == HYPERBOLOID:
        z2 = 0.25 * (m + M) ** 2 + aux * aux
        return 0.5 * (M + m) * (z2 - m * M)
    r = aux
    return 0.5 * (-(M + m) * r * r - (m + r) * M * M - (M + r) * m * m - 2.0 * m * r * M)


def stumpon_a(c: float) -> float:
    """The constant a = 2c^3 - 2c^2 for which plateaus phi = c are admissible."""
    return 2.0 * c**3 - 2.0 * c**2


@dataclass(frozen=True)
class WaveParameters:
    """Root configuration (m, M, aux) with speed c and constants a, d.

    ``family`` is ``"two-real"`` (aux = Im z), ``"four-real"`` (aux = r) or
    ``"double-real"`` (m is a double root, aux = Im z, M = m).
    """

    family: str
    m: float
    M: float
    c: float
    aux: float
    a: float
    d: float

    @classmethod
    def four_real(cls, m, M, r, c=None):
        m, M, r = float(m), float(M), float(r)
        if c is None:
            c = 0.5 * (r * r + m * m + M * M + r * m + r * M + m * M)
        z = -m - M - r
        a = _a_from_roots(ELLIPSOID, m, M, r)
        return cls("four-real", m, M, float(c), r, a, -0.5 * z * r * m * M)

    @classmethod
    def two_real(cls, m, M, c=None, imz=None):
        """Two real roots m, M and z = -(m + M)/2 + i imz.

        Give ``c`` to place the pair on the hyperboloid, ``imz`` to derive c
        from it, or both to keep an off-surface point (see ``residual``).
        """
        m, M = float(m), float(M)
        base = 0.75 * m * m + 0.75 * M * M + 0.5 * m * M
        if c is None and imz is None:
            raise ValueError("two_real needs c or imz")
        if imz is None:
            c = float(c)
            im2 = base - 2.0 * c
            if im2 <= 0:
                raise ConstraintViolation(
                    f"(m, M, c) = ({m}, {M}, {c}) admits no complex root pair (Im z^2 = {im2:.3e})"
                )
            imz = float(np.sqrt(im2))
        else:
            imz = abs(float(imz))
            if imz == 0.0:
                raise ConstraintViolation("Im z must be nonzero")
            c = 0.5 * (base - imz * imz) if c is None else float(c)
        a = _a_from_roots(HYPERBOLOID, m, M, imz)
        zz = 0.25 * (m + M) ** 2 + imz * imz
        return cls("two-real", m, M, c, imz, a, -0.5 * m * M * zz)

    @classmethod
    def double_real(cls, m, c):
        m, c = float(m), float(c)
        im2 = 2.0 * m * m - 2.0 * c
        if im2 <= 0:
            raise ConstraintViolation("no complex pair accompanies this double root")
        a = m * im2
        return cls("double-real", m, m, c, float(np.sqrt(im2)), a, -0.5 * m * m * (m * m + im2))

    @classmethod
    def from_structure(cls, s: RootStructure, c: float) -> "WaveParameters":
        """Label sorted roots in the crest-up convention (z <= r <= m <= M)."""
        if isinstance(s, FourReal):
            return cls.four_real(s.m, s.M, s.r, c)
        if isinstance(s, TwoRealPair):
            p = cls.two_real(s.m, s.M, c)
            return p
        return cls.double_real(s.m, c)

    @property
    def z(self):
        if self.family == "four-real":
            return -self.m - self.M - self.aux
        if self.family == "two-real":
            return complex(-0.5 * (self.m + self.M), self.aux)
        return complex(-self.m, self.aux)

    @property
    def r(self):
        return self.aux if self.family == "four-real" else None

    def roots(self) -> np.ndarray:
        if self.family == "four-real":
            return np.array([self.z, self.r, self.m, self.M], dtype=complex)
        z = self.z
        return np.array([self.m, self.M, z, np.conj(z)], dtype=complex)

    @property
    def poly(self) -> TravelingWavePolynomial:
        return TravelingWavePolynomial(self.c, self.a, self.d)

    def residual(self) -> float:
        if self.family == "double-real":
            return 2.0 * self.m**2 - self.aux**2 - 2.0 * self.c
        return constraint_residual(self.family, self.m, self.M, self.aux, self.c)

    def P(self, phi):
        """P(phi) evaluated from the factored form."""
        phi = np.asarray(phi, dtype=float)
        out = -0.5 * np.ones_like(phi, dtype=complex)
        for root in self.roots():
            out = out * (phi - root)
        return out.real

    def to_dict(self) -> dict:
        return {"family": self.family, "m": self.m, "M": self.M, "c": self.c,
                "aux": self.aux, "a": self.a, "d": self.d}

    @classmethod
    def from_dict(cls, d: dict) -> "WaveParameters":
        return cls(d["family"], float(d["m"]), float(d["M"]), float(d["c"]),
                   float(d["aux"]), float(d["a"]), float(d["d"]))
