"""Scaled spherical harmonics and translation constants.

Conventions:

    Y_n^m(theta, phi) = Phat_n^m(cos theta) e^{i m phi},
    Phat_n^m(x) = sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!) P_n^m(x),

with P_n^m the Condon-Shortley-free associated Legendre function
(P_1^1 = sin theta), so Y_1^1 = +sqrt(3/8 pi) sin theta e^{i phi}.  This
differs from the physics harmonic (scipy's sph_harm) by a factor (-1)^m,
and is the one convention under which the translation constants
C_n^m = i^{2n-m} sqrt(...) satisfy the complex-direction identity

    (i k0 . rhat)^n / n! = sum_m C_n^m Phat_n^m(cos theta) e^{i m (alpha-phi)},
    k0 = (cos alpha, sin alpha, i),

on which every Sommerfeld-type basis reduction in this package rests.
Useful identities, all exercised by the test-suite:

    Y_n^{-m} = (-1)^m conj(Y_n^m)
    Y_n^m(pi - theta, phi)  = (-1)^{n+m} Y_n^m(theta, phi)
    Y_n^m(theta, pi + phi)  = (-1)^m     Y_n^m(theta, phi)

The translation constants

    c_n   = sqrt((2n+1)/(4 pi))
    A_n^m = (-1)^n c_n / sqrt((n-m)!(n+m)!)
    C_n^m = i^{2n-m} sqrt(4 pi / ((2n+1)(n+m)!(n-m)!)) = i^{-m} A_n^m / c_n^2

feed every expansion operator; the factorials only ever appear through
log-gamma so tables stay finite up to the supported order 60.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import lgamma, log, pi, sqrt

import numpy as np

from .errors import DomainError

MAX_ORDER = 60


def legendre_p(n, x):
    """Legendre polynomial P_n(x) by the three-term recurrence."""
    if abs(x) > 1.0:
        raise DomainError(f"Legendre argument {x} outside [-1, 1]")
    if n == 0:
        return 1.0
    pm1, p = 1.0, float(x)
    for k in range(2, n + 1):
        pm1, p = p, ((2 * k - 1) * x * p - (k - 1) * pm1) / k
    return p


def normalized_legendre(n_max, x):
    """Table of normalized associated Legendre values Phat_n^m(x).

    Returns an (n_max+1, n_max+1) array with entry [n, m] for 0 <= m <= n;
    entries with m > n are zero.  Seeded on the diagonal and recurred
    upward in degree, which is stable for all orders here (the
    unnormalized P_n^m would overflow near n = 40).
    """
    if abs(x) > 1.0:
        raise DomainError(f"Legendre argument {x} outside [-1, 1]")
    s = sqrt(max(0.0, 1.0 - x * x))
    tab = np.zeros((n_max + 1, n_max + 1))
    tab[0, 0] = sqrt(1.0 / (4.0 * pi))
    for m in range(1, n_max + 1):
        tab[m, m] = sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * tab[m - 1, m - 1]
    for m in range(n_max):
        tab[m + 1, m] = sqrt(2.0 * m + 3.0) * x * tab[m, m]
    for m in range(n_max + 1):
        for n in range(m + 2, n_max + 1):
            alpha = sqrt((2.0 * n + 1.0) * (2.0 * n - 1.0) / ((n - m) * (n + m)))
            beta = sqrt(
                (2.0 * n + 1.0)
                * (n - m - 1.0)
                * (n + m - 1.0)
                / ((2.0 * n - 3.0) * (n - m) * (n + m))
            )
            tab[n, m] = alpha * x * tab[n - 1, m] - beta * tab[n - 2, m]
    return tab


def sph_harm_table(n_max, theta, phi):
    """All Y_n^m(theta, phi) for n <= n_max as an (n_max+1, 2 n_max+1)
    complex array; entry [n, m + n_max] holds order m, zero for |m| > n."""
    ph = normalized_legendre(n_max, np.cos(theta))
    out = np.zeros((n_max + 1, 2 * n_max + 1), dtype=complex)
    ms = np.arange(0, n_max + 1)
    epos = np.exp(1j * ms * phi)
    for n in range(n_max + 1):
        vals = ph[n, : n + 1] * epos[: n + 1]
        out[n, n_max : n_max + n + 1] = vals
        # Y_n^{-m} = (-1)^m conj(Y_n^m)
        signs = (-1.0) ** ms[1 : n + 1]
        out[n, n_max - n : n_max] = (signs * np.conj(vals[1:]))[::-1]
    return out


def sph_harm(n, m, theta, phi):
    """Single scaled spherical harmonic; returns 0 for |m| > n by the
    convention used throughout the expansion formulas."""
    if abs(m) > n:
        return 0.0 + 0.0j
    ph = normalized_legendre(n, np.cos(theta))[n, abs(m)]
    if m < 0:
        ph *= (-1.0) ** (-m)
    return ph * np.exp(1j * m * phi)


@dataclass(frozen=True)
class HarmonicConstants:
    """Precomputed c_n, A_n^m, C_n^m tables up to degree p_max.

    A is even in m (A_n^m = A_n^{-m}); its magnitude is kept in log form
    alongside the plain value so operator weights can be assembled in log
    space without re-touching factorials.
    """

    p_max: int
    c: np.ndarray = field(repr=False)
    log_c: np.ndarray = field(repr=False)
    log_abs_a: np.ndarray = field(repr=False)  # [n, |m|], -inf beyond |m|>n
    c_table: np.ndarray = field(repr=False)  # C_n^m, [n, m+p_max]

    def a(self, n, m):
        if abs(m) > n:
            return 0.0
        return (-1.0) ** n * np.exp(self.log_abs_a[n, abs(m)])

    def C(self, n, m):
        if abs(m) > n:
            return 0.0 + 0.0j
        return self.c_table[n, m + self.p_max]


@lru_cache(maxsize=None)
def constants(p_max):
    """Build the constant tables; p_max above 60 is refused (the log-gamma
    route keeps the tables finite only in the supported range, and nothing
    downstream is validated beyond it)."""
    if p_max > MAX_ORDER:
        raise OverflowError(f"p_max={p_max} exceeds supported maximum {MAX_ORDER}")
    if p_max < 0:
        raise ValueError("p_max must be nonnegative")
    ns = np.arange(p_max + 1)
    c = np.sqrt((2.0 * ns + 1.0) / (4.0 * pi))
    log_c = 0.5 * (np.log(2.0 * ns + 1.0) - log(4.0 * pi))
    log_abs_a = np.full((p_max + 1, p_max + 1), -np.inf)
    for n in range(p_max + 1):
        for m in range(n + 1):
            log_abs_a[n, m] = log_c[n] - 0.5 * (
                lgamma(n - m + 1.0) + lgamma(n + m + 1.0)
            )
    c_table = np.zeros((p_max + 1, 2 * p_max + 1), dtype=complex)
    for n in range(p_max + 1):
        for m in range(-n, n + 1):
            # C_n^m = i^{-m} A_n^m / c_n^2
            a_nm = (-1.0) ** n * np.exp(log_abs_a[n, abs(m)])
            c_table[n, m + p_max] = (1j) ** (-m) * a_nm / c[n] ** 2
    return HarmonicConstants(p_max, c, log_c, log_abs_a, c_table)


def cartesian_to_spherical(v):
    """(r, theta, phi) of a 3-vector, phi in [0, 2 pi); all zero at r = 0."""
    v = np.asarray(v, dtype=float)
    r = float(np.linalg.norm(v))
    if r == 0.0:
        return 0.0, 0.0, 0.0
    theta = float(np.arccos(np.clip(v[2] / r, -1.0, 1.0)))
    phi = float(np.arctan2(v[1], v[0]))
    if phi < 0.0:
        phi += 2.0 * pi
    return r, theta, phi


def spherical_to_cartesian(r, theta, phi):
    st = np.sin(theta)
    return np.array([r * st * np.cos(phi), r * st * np.sin(phi), r * np.cos(theta)])
