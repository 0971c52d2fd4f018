"""Exact combinatorics and scalar special functions.

Everything downstream (angular coupling, B functions, basis conversions and
the addition theorem) is built on the routines in this module:

- factorials, double factorials and Pochhammer symbols in exact integer or
  rational arithmetic,
- associated Legendre functions P_l^m (no Condon-Shortley phase; the phase
  lives in the spherical harmonic prefactor i^(m+|m|)),
- spherical harmonics Y_l^m and regular solid harmonics r^l Y_l^m,
- modified Bessel functions I_{k+1/2} via the 0F1 series,
- reduced Bessel functions k_{n-1/2}(z) = sqrt(2/pi) z^nu K_nu(z) for
  half-integer orders of either sign, and the Bessel polynomials Theta_n.

Functions that take points accept numpy arrays and broadcast over leading
axes; a point is the last axis of length 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "DomainError",
    "ConvergenceError",
    "TensorIndex",
    "Vector3",
    "SphericalCoords",
    "factorial",
    "double_factorial",
    "binomial",
    "pochhammer",
    "pochhammer_exact",
    "reciprocal_factorial",
    "assoc_legendre",
    "assoc_legendre_rodrigues",
    "spherical_harmonic",
    "spherical_harmonics_all",
    "solid_harmonic",
    "solid_harmonic_monomials",
    "solid_harmonics_all",
    "cartesian_to_spherical",
    "bessel_i_halfint",
    "bessel_i_over_power",
    "reduced_bessel",
    "theta_coefficients",
    "theta_polynomial",
]

FLOAT_FACTORIAL_LIMIT = 170

# 0F1 series controls
SERIES_TERM_BUDGET = 200
SERIES_REL_TOL = 1e-16


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(ArithmeticError):
    """A series did not reach its tolerance within the term budget."""


@dataclass(frozen=True)
class TensorIndex:
    """Orbital and magnetic quantum numbers (l, m) with |m| <= l."""

    ell: int
    m: int

    def __post_init__(self):
        if self.ell < 0 or abs(self.m) > self.ell:
            raise DomainError(f"invalid tensor index (l={self.ell}, m={self.m})")


@dataclass(frozen=True)
class Vector3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise DomainError("vector components must be finite")

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y, self.z], dtype=dtype or float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def to_spherical(self) -> "SphericalCoords":
        r, theta, phi = cartesian_to_spherical(np.array(self))
        return SphericalCoords(float(r), float(theta), float(phi))


@dataclass(frozen=True)
class SphericalCoords:
    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if self.r < 0:
            raise DomainError("radius must be non-negative")

    def to_cartesian(self) -> Vector3:
        st = math.sin(self.theta)
        return Vector3(
            self.r * st * math.cos(self.phi),
            self.r * st * math.sin(self.phi),
            self.r * math.cos(self.theta),
        )


def cartesian_to_spherical(v):
    """Return (r, theta, phi) arrays for points on the last axis of ``v``.

    phi is mapped into [0, 2 pi); on the z axis phi is 0.
    """
    v = np.asarray(v, dtype=float)
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    rho = np.hypot(x, y)
    r = np.hypot(rho, z)
    theta = np.arctan2(rho, z)
    phi = np.where(rho > 0, np.arctan2(y, x), 0.0)
    phi = np.where(phi < 0, phi + 2 * np.pi, phi)
    return r, theta, phi


# ---------------------------------------------------------------------------
# exact combinatorics


def factorial(n: int) -> int:
    """n! as an exact Python integer."""
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    return math.factorial(n)


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial undefined for {n}")
    result = 1
    for k in range(n, 1, -2):
        result *= k
    return result


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def pochhammer_exact(a, k: int) -> Fraction:
    """Rising factorial (a)_k in exact rational arithmetic.

    ``a`` may be an int, a Fraction, or a string such as ``"1/2"``.
    """
    if k < 0:
        raise DomainError("Pochhammer symbol needs k >= 0")
    a = Fraction(a)
    result = Fraction(1)
    for j in range(k):
        result *= a + j
    return result


def pochhammer(a: float, k: int) -> float:
    """Rising factorial a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0:
        raise DomainError("Pochhammer symbol needs k >= 0")
    if isinstance(a, (int, Fraction)):
        return float(pochhammer_exact(a, k))
    result = 1.0
    for j in range(k):
        result *= a + j
    return result


def reciprocal_factorial(n: int) -> Fraction:
    """1/n!, exactly zero for negative n (poles of the gamma function)."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, math.factorial(n))


# ---------------------------------------------------------------------------
# Legendre functions and spherical harmonics


def assoc_legendre(ell: int, m: int, x):
    """Ferrers function P_l^m(x) = (1-x^2)^(m/2) d^m/dx^m P_l(x).

    No (-1)^m phase is included. Computed by upward recurrence in l from the
    closed-form seed P_m^m = (2m-1)!! (1-x^2)^(m/2).
    """
    if not 0 <= m <= ell:
        raise DomainError(f"need 0 <= m <= l, got l={ell}, m={m}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("assoc_legendre needs |x| <= 1")
    return _legendre_upward(ell, m, x, np.sqrt((1.0 - x) * (1.0 + x)))


def _legendre_upward(ell: int, m: int, x, somx2):
    # somx2 = sqrt(1 - x^2), passed in so callers holding sin(theta) keep
    # full relative accuracy near the poles
    pmm = float(double_factorial(2 * m - 1)) * somx2**m
    if ell == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    for k in range(m + 2, ell + 1):
        pmm, pm1 = pm1, ((2 * k - 1) * x * pm1 - (k + m - 1) * pmm) / (k - m)
    return pm1


def assoc_legendre_rodrigues(ell: int, m: int, x: float) -> float:
    """Reference P_l^m from the Rodrigues form with the 2^l l! denominator.

    Exact polynomial differentiation; slow, only meant as a test oracle.
    """
    # (x^2 - 1)^l = sum_j C(l, j) (-1)^(l-j) x^(2j)
    coeffs = {2 * j: Fraction(binomial(ell, j) * (-1) ** (ell - j)) for j in range(ell + 1)}
    for _ in range(ell + m):
        coeffs = {p - 1: c * p for p, c in coeffs.items() if p > 0}
    poly = sum(float(c / (2**ell * math.factorial(ell))) * x**p for p, c in coeffs.items())
    return (1.0 - x * x) ** (m / 2) * poly


def _ylm_norm(ell: int, am: int) -> float:
    return math.sqrt(
        (2 * ell + 1) * math.factorial(ell - am) / (4 * math.pi * math.factorial(ell + am))
    )


def spherical_harmonic(ell: int, m: int, theta, phi):
    """Y_l^m(theta, phi) in the Condon-Shortley phase convention.

    Y_l^m = i^(m+|m|) sqrt[(2l+1)(l-|m|)! / (4 pi (l+|m|)!)] P_l^|m|(cos theta) e^(i m phi)
    """
    TensorIndex(ell, m)
    am = abs(m)
    phase = (-1) ** m if m > 0 else 1
    theta = np.asarray(theta, dtype=float)
    p = _legendre_upward(ell, am, np.cos(theta), np.abs(np.sin(theta)))
    return phase * _ylm_norm(ell, am) * p * np.exp(1j * m * np.asarray(phi, dtype=float))


def spherical_harmonics_all(lmax: int, theta, phi):
    """All Y_l^m for l <= lmax as an array indexed ``[..., l, m + lmax]``.

    Normalized recurrences (no factorial overflow); entries with |m| > l are 0.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    shape = np.broadcast(theta, phi).shape
    x = np.broadcast_to(np.cos(theta), shape)
    s = np.broadcast_to(np.abs(np.sin(theta)), shape)
    # normalized Legendre: Pbar_l^m = sqrt((2l+1)(l-m)!/(4 pi (l+m)!)) P_l^m
    pbar = np.zeros(shape + (lmax + 1, lmax + 1))
    pmm = np.full(shape, math.sqrt(1.0 / (4 * math.pi)))
    for m in range(lmax + 1):
        if m > 0:
            pmm = pmm * s * math.sqrt((2 * m + 1) / (2 * m))
        pbar[..., m, m] = pmm
        if m + 1 <= lmax:
            pbar[..., m + 1, m] = math.sqrt(2 * m + 3) * x * pmm
        for ell in range(m + 2, lmax + 1):
            a = math.sqrt((4 * ell * ell - 1) / (ell * ell - m * m))
            b = math.sqrt(((ell - 1) ** 2 - m * m) / (4 * (ell - 1) ** 2 - 1))
            pbar[..., ell, m] = a * (x * pbar[..., ell - 1, m] - b * pbar[..., ell - 2, m])
    out = np.zeros(shape + (lmax + 1, 2 * lmax + 1), dtype=complex)
    for m in range(lmax + 1):
        e = np.exp(1j * m * phi)[..., None]
        out[..., :, lmax + m] = (-1) ** m * pbar[..., :, m] * e
        if m > 0:
            out[..., :, lmax - m] = pbar[..., :, m] * np.conj(e)
    return out


@lru_cache(maxsize=None)
def _solid_terms(ell: int, m: int):
    """Exact rational weights of the homogeneous-polynomial sum for m >= 0."""
    terms = []
    k = 0
    while m + 2 * k <= ell:
        w = Fraction(
            1,
            2 ** (m + 2 * k) * math.factorial(m + k) * math.factorial(k) * math.factorial(ell - m - 2 * k),
        )
        terms.append((k, w))
        k += 1
    norm2 = Fraction((2 * ell + 1) * math.factorial(ell + m) * math.factorial(ell - m))
    return tuple(terms), norm2


def solid_harmonic(ell: int, m: int, v):
    """Regular solid harmonic r^l Y_l^m evaluated as a Cartesian polynomial.

    Uses the sum over (-x-iy)^(m+k) (x-iy)^k z^(l-m-2k) for m >= 0 and the
    conjugation rule Y_l^{-m} = (-1)^m conj(Y_l^m) for m < 0 (real ``v``).
    """
    TensorIndex(ell, m)
    v = np.asarray(v, dtype=float)
    if m < 0:
        return (-1) ** m * np.conj(solid_harmonic(ell, -m, v))
    x, y, z = v[..., 0], v[..., 1], v[..., 2]
    terms, norm2 = _solid_terms(ell, m)
    u = -x - 1j * y
    w = x - 1j * y
    total = np.zeros(np.shape(x), dtype=complex)
    for k, wt in terms:
        total = total + float(wt) * u ** (m + k) * w**k * z ** (ell - m - 2 * k)
    return math.sqrt(float(norm2) / (4 * math.pi)) * total


@lru_cache(maxsize=None)
def solid_harmonic_monomials(ell: int, m: int) -> dict:
    """Expand r^l Y_l^m into monomials: ``{(a, b, c): coeff}`` for x^a y^b z^c.

    Replacing x, y, z by partial derivatives gives the spherical tensor
    gradient operator.
    """
    TensorIndex(ell, m)
    am = abs(m)
    terms, norm2 = _solid_terms(ell, am)
    acc: dict = {}
    for k, wt in terms:
        # (-x - i y)^(am+k) (x - i y)^k z^(l-am-2k)
        for j1 in range(am + k + 1):
            c1 = binomial(am + k, j1) * (-1) ** (am + k) * (1j) ** j1  # (-1)^(..)(x+iy)^..
            for j2 in range(k + 1):
                c2 = binomial(k, j2) * (-1j) ** j2
                key = (am + k - j1 + k - j2, j1 + j2, ell - am - 2 * k)
                acc[key] = acc.get(key, 0) + float(wt) * c1 * c2
    scale = math.sqrt(float(norm2) / (4 * math.pi))
    out = {}
    for key, c in acc.items():
        c = complex(c) * scale
        if m < 0:
            c = (-1) ** am * c.conjugate()
        if abs(c) > 0:
            out[key] = c
    return out


def solid_harmonics_all(lmax: int, v):
    """All r^l Y_l^m for l <= lmax, indexed ``[..., l, m + lmax]``."""
    r, theta, phi = cartesian_to_spherical(v)
    y = spherical_harmonics_all(lmax, theta, phi)
    powers = np.asarray(r)[..., None] ** np.arange(lmax + 1)
    return y * powers[..., None]


# ---------------------------------------------------------------------------
# Bessel functions


def _check_half_integer(mu) -> int:
    twice = 2 * Fraction(mu).limit_denominator(4)
    if twice.denominator != 1 or twice.numerator % 2 == 0:
        raise DomainError(f"order {mu} is not a half-integer")
    return int(twice.numerator)


def bessel_i_over_power(mu, z, *, max_terms: int = SERIES_TERM_BUDGET, rel_tol: float = SERIES_REL_TOL):
    """z^(-mu) I_mu(z) for mu = k + 1/2, from the 0F1 series.

    0F1(mu+1; z^2/4) = Gamma(mu+1) (z/2)^(-mu) I_mu(z). The series has
    positive terms only, so it is summed until the relative increment drops
    below ``rel_tol``. The value at z = 0 is 2^(-mu)/Gamma(mu+1).
    """
    twice = _check_half_integer(mu)
    if twice < 1:
        raise DomainError("bessel_i_halfint needs mu >= 1/2")
    mu = twice / 2
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise DomainError("bessel_i_halfint needs z >= 0")
    q = z * z / 4.0
    term = np.full(z.shape, math.exp(-mu * math.log(2.0) - math.lgamma(mu + 1)))
    total = term.copy()
    for k in range(1, max_terms):
        term = term * q / (k * (mu + k))
        total = total + term
        if np.all(term <= rel_tol * total):
            return total
    raise ConvergenceError(
        f"0F1 series for I_{mu} did not converge in {max_terms} terms "
        f"(max z={float(np.max(z)):.6g}, last rel. term={float(np.max(term / total)):.3g})"
    )


def bessel_i_halfint(mu, z, *, scaled: bool = False, max_terms: int = SERIES_TERM_BUDGET,
                     rel_tol: float = SERIES_REL_TOL):
    """Modified Bessel function I_mu(z) for half-integer mu >= 1/2.

    With ``scaled=True`` returns exp(-z) I_mu(z), computed in the log domain
    so that large arguments do not overflow.
    """
    twice = _check_half_integer(mu)
    mu_f = twice / 2
    z = np.asarray(z, dtype=float)
    ratio = bessel_i_over_power(mu_f, z, max_terms=max_terms, rel_tol=rel_tol)
    with np.errstate(divide="ignore"):
        logpow = np.where(z > 0, mu_f * np.log(np.where(z > 0, z, 1.0)), -np.inf)
    if scaled:
        return ratio * np.exp(logpow - z)
    return ratio * np.exp(logpow)


@lru_cache(maxsize=None)
def theta_coefficients(n: int) -> tuple:
    """Exact coefficients c_j of Theta_n(z) = sum_j c_j z^j.

    From k_{n+1/2}(z) = 2^n (1/2)_n e^(-z) 1F1(-n; -2n; 2z) expanded term by term:
    c_j = 2^n (1/2)_n (-n)_j / (-2n)_j 2^j / j!.
    """
    if n < 0:
        raise DomainError("Bessel polynomial order must be non-negative")
    pref = 2**n * pochhammer_exact(Fraction(1, 2), n)
    coeffs = []
    for j in range(n + 1):
        c = pref * pochhammer_exact(-n, j) / pochhammer_exact(-2 * n, j) * Fraction(2**j, math.factorial(j))
        assert c.denominator == 1
        coeffs.append(int(c))
    return tuple(coeffs)


def theta_polynomial(n: int, z):
    """Bessel polynomial Theta_n(z) = e^z k_{n+1/2}(z) (Horner evaluation)."""
    coeffs = theta_coefficients(n)
    z = np.asarray(z, dtype=float)
    total = np.zeros(z.shape)
    for c in reversed(coeffs):
        total = total * z + float(c)
    return total


def reduced_bessel(nu, z):
    """Reduced Bessel function k_nu(z) = sqrt(2/pi) z^nu K_nu(z), half-integer nu.

    Positive orders nu = n + 1/2 use e^(-z) Theta_n(z); negative orders use
    k_{-nu}(z) = z^(-2 nu) k_nu(z).
    """
    twice = _check_half_integer(nu)
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("reduced_bessel needs z > 0")
    if twice > 0:
        return np.exp(-z) * theta_polynomial((twice - 1) // 2, z)
    # nu < 0: k_nu = z^(2 nu) k_{-nu}
    pos = -twice
    return z ** float(twice) * np.exp(-z) * theta_polynomial((pos - 1) // 2, z)
