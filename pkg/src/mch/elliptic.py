"""Elliptic integral of the first kind and the Jacobi functions sn, cn, tn.

Only real arguments and moduli with ``0 <= k**2 < 1`` are supported.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class EllipticDomainError(ValueError):
    """Raised for a modulus outside ``0 <= k**2 < 1``."""


class JacobiValues(NamedTuple):
    sn: np.ndarray
    cn: np.ndarray
    tn: np.ndarray
    # True where cn vanishes (to 1e-13); tn is NaN there.
    pole: np.ndarray


def _check_modulus(k):
    k = float(k)
    if not np.isfinite(k) or k * k >= 1.0:
        raise EllipticDomainError(f"modulus must satisfy 0 <= k^2 < 1, got k={k!r}")
    return k


def complementary_modulus(k: float) -> float:
    k = _check_modulus(k)
    return float(np.sqrt((1.0 - k) * (1.0 + k)))


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive numbers."""
    for _ in range(64):
        if abs(a - b) < 1e-15 * a:
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(k: float) -> float:
    """Complete elliptic integral K(k) = pi / (2 AGM(1, k'))."""
    kp = complementary_modulus(k)
    return float(np.pi / (2.0 * agm(1.0, kp)))


def _carlson_rf(x, y, z):
    # Duplication algorithm (Carlson 1995), vectorised; all arguments >= 0,
    # at most one of them zero.
    x, y, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
    x, y, z = x.copy(), y.copy(), z.copy()
    for _ in range(40):
        mu = (x + y + z) / 3.0
        dev = np.max(np.abs(np.stack([x - mu, y - mu, z - mu])) / mu)
        if dev < 1e-4:
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    mu = (x + y + z) / 3.0
    X, Y = 1.0 - x / mu, 1.0 - y / mu
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    poly = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return poly / np.sqrt(mu)


def incomplete_F(phi, k: float):
    """Incomplete integral F(phi, k) = int_0^phi dt / sqrt(1 - k^2 sin^2 t).

    Accepts any finite real ``phi``; outside [-pi/2, pi/2] the quasi-periodicity
    F(phi + n pi) = F(phi) + 2 n K is used.
    """
    k = _check_modulus(k)
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise ValueError("phi must be finite")
    n = np.round(phi / np.pi)
    red = phi - n * np.pi
    s, c = np.sin(red), np.cos(red)
    val = s * _carlson_rf(c * c, 1.0 - k * k * s * s, 1.0)
    out = val + 2.0 * n * complete_K(k)
    return out if out.ndim else float(out)


def amplitude(u, k: float):
    """am(u, k): inverse of phi -> F(phi, k).

    The argument is reduced to [0, K]; the reduced amplitude is bracketed in
    [0, pi/2] by bisection and then polished with Newton steps.
    """
    k = _check_modulus(k)
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("u must be finite")
    K = complete_K(k)
    n = np.round(u / (2.0 * K))
    v = u - 2.0 * n * K
    sign = np.sign(v)
    v = np.abs(v)

    lo = np.zeros_like(v)
    hi = np.full_like(v, 0.5 * np.pi)
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        below = incomplete_F(mid, k) < v
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    phi = 0.5 * (lo + hi)
    for _ in range(4):
        dF = 1.0 / np.sqrt(1.0 - (k * np.sin(phi)) ** 2)
        phi = phi - (incomplete_F(phi, k) - v) / dF
    phi = np.clip(phi, 0.0, 0.5 * np.pi)
    out = n * np.pi + sign * phi
    return out if out.ndim else float(out)


def jacobi(u, k: float) -> JacobiValues:
    """Jacobi sn, cn and tn = sn/cn, with real period 4K(k).

    ``tn`` is not returned as +-inf at its poles; the ``pole`` mask marks
    samples with |cn| < 1e-13 and ``tn`` holds NaN there.
    """
    am = np.asarray(amplitude(u, k))
    sn, cn = np.sin(am), np.cos(am)
    pole = np.abs(cn) < 1e-13
    with np.errstate(divide="ignore", invalid="ignore"):
        tn = np.where(pole, np.nan, sn / np.where(pole, 1.0, cn))
    if am.ndim == 0:
        return JacobiValues(float(sn), float(cn), float(tn), bool(pole))
    return JacobiValues(sn, cn, tn, pole)
