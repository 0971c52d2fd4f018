"""Angular-momentum coupling: 3jm symbols, Gaunt coefficients, sum limits.

The Gaunt coefficient <l3 m3|l2 m2|l1 m1> is the integral over the unit
sphere of conj(Y_l3^m3) Y_l2^m2 Y_l1^m1. It is evaluated from two 3jm
symbols, each obtained from Racah's single-sum formula in exact rational
arithmetic; only the final square root is taken in floating point.
"""

from __future__ import annotations

import math
import struct
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .special_core import DomainError, spherical_harmonic

__all__ = [
    "GauntKey",
    "CouplingRange",
    "DeltaQuantities",
    "wigner_3jm",
    "gaunt",
    "gaunt_uncached",
    "GauntCache",
    "default_cache",
    "coupling_range",
    "delta_quantities",
    "sphere_quadrature",
    "sphere_grid",
    "gaunt_quadrature",
]


@dataclass(frozen=True)
class GauntKey:
    """Indices of <l3 m3 | l2 m2 | l1 m1>."""

    ell1: int
    m1: int
    ell2: int
    m2: int
    ell3: int
    m3: int

    def __post_init__(self):
        for ell, m in ((self.ell1, self.m1), (self.ell2, self.m2), (self.ell3, self.m3)):
            if ell < 0 or abs(m) > ell:
                raise DomainError(f"invalid (l, m) = ({ell}, {m}) in Gaunt key")

    def canonical(self) -> tuple:
        # the two unconjugated factors commute
        a, b = sorted([(self.ell1, self.m1), (self.ell2, self.m2)])
        return (*a, *b, self.ell3, self.m3)


@dataclass(frozen=True)
class CouplingRange:
    ell_min: int
    ell_max: int
    step: int = 2

    def __iter__(self):
        return iter(range(self.ell_min, self.ell_max + 1, self.step))

    def __contains__(self, ell) -> bool:
        return self.ell_min <= ell <= self.ell_max and (ell - self.ell_min) % 2 == 0

    def __len__(self) -> int:
        return max(0, (self.ell_max - self.ell_min) // 2 + 1)


@dataclass(frozen=True)
class DeltaQuantities:
    d_ell: int
    d_ell1: int
    d_ell2: int
    sigma: int


def _fact(n: int) -> int:
    return math.factorial(n)


def wigner_3jm(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3jm symbol for integer angular momenta (Racah formula).

    Returns 0 when m1+m2+m3 != 0, the triangle condition fails, or |mi| > ji.
    """
    if min(j1, j2, j3) < 0:
        raise DomainError("3jm symbol needs non-negative j")
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if j3 > j1 + j2 or j3 < abs(j1 - j2):
        return 0.0
    if m1 == m2 == m3 == 0 and (j1 + j2 + j3) % 2:
        return 0.0

    t1 = j2 - m1 - j3
    t2 = j1 + m2 - j3
    t3 = j1 + j2 - j3
    t4 = j1 - m1
    t5 = j2 + m2
    kmin = max(0, t1, t2)
    kmax = min(t3, t4, t5)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = _fact(k) * _fact(k - t1) * _fact(k - t2) * _fact(t3 - k) * _fact(t4 - k) * _fact(t5 - k)
        s += Fraction((-1) ** k, den)
    if s == 0:
        return 0.0
    radicand = Fraction(
        _fact(j1 + j2 - j3) * _fact(j1 - j2 + j3) * _fact(-j1 + j2 + j3)
        * _fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2)
        * _fact(j3 + m3) * _fact(j3 - m3),
        _fact(j1 + j2 + j3 + 1),
    )
    sign = (-1) ** (j1 - j2 - m3) * (1 if s > 0 else -1)
    return sign * math.sqrt(radicand * s * s)


def gaunt_uncached(key: GauntKey) -> float:
    l1, m1, l2, m2, l3, m3 = key.ell1, key.m1, key.ell2, key.m2, key.ell3, key.m3
    if m3 != m1 + m2 or (l1 + l2 + l3) % 2 or not abs(l1 - l2) <= l3 <= l1 + l2:
        return 0.0
    pref = (-1) ** m3 * math.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) / (4 * math.pi))
    return pref * wigner_3jm(l1, l2, l3, 0, 0, 0) * wigner_3jm(l1, l2, l3, m1, m2, -m3)


class GauntCache:
    """Memo table for Gaunt coefficients keyed on the symmetry-reduced key.

    Reads are lock-free; insertions take a lock. Two threads may compute the
    same entry concurrently, which is harmless because the value is the same.
    Snapshots use the binary "BFGT" format (see :meth:`save`).
    """

    MAGIC = b"BFGT"
    VERSION = 1
    _ENTRY = struct.Struct("<6id")

    def __init__(self):
        self._table: dict = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, key) -> bool:
        return key in self._table

    def get(self, key: GauntKey) -> float:
        ck = key.canonical()
        try:
            return self._table[ck]
        except KeyError:
            pass
        value = gaunt_uncached(key)
        with self._lock:
            self._table.setdefault(ck, value)
        return value

    def clear(self):
        with self._lock:
            self._table.clear()

    def poison(self, key: GauntKey, value: float):
        """Overwrite one entry; a test hook for negative controls."""
        with self._lock:
            self._table[key.canonical()] = value

    def save(self, path) -> None:
        """Write the table: magic, u32 version, u32 count, then (6 x i32, f64) records."""
        with self._lock:
            items = sorted(self._table.items())
        with open(path, "wb") as fh:
            fh.write(self.MAGIC)
            fh.write(struct.pack("<II", self.VERSION, len(items)))
            for k, v in items:
                fh.write(self._ENTRY.pack(*k, v))

    def load(self, path) -> int:
        data = Path(path).read_bytes()
        if data[:4] != self.MAGIC:
            raise ValueError(f"{path}: not a Gaunt table snapshot")
        version, count = struct.unpack_from("<II", data, 4)
        if version != self.VERSION:
            raise ValueError(f"{path}: unsupported snapshot version {version}")
        off = 12
        entries = {}
        for _ in range(count):
            *k, v = self._ENTRY.unpack_from(data, off)
            off += self._ENTRY.size
            entries[tuple(k)] = v
        with self._lock:
            self._table.update(entries)
        return count


default_cache = GauntCache()


def gaunt(key: GauntKey, cache: GauntCache | None = default_cache) -> float:
    """Gaunt coefficient <l3 m3|l2 m2|l1 m1>, memoized in ``cache``."""
    if cache is None:
        return gaunt_uncached(key)
    return cache.get(key)


def coupling_range(ell1: int, m1: int, ell2: int, m2: int) -> CouplingRange:
    """Values of l reached by Y_l1^m1 Y_l2^m2, in steps of two.

    l_min uses max(|l1-l2|, |m1+m2|), raised by one if l_max + lambda_min is odd.
    """
    if abs(m1) > ell1 or abs(m2) > ell2:
        raise DomainError("invalid magnetic quantum numbers")
    lmax = ell1 + ell2
    lam = max(abs(ell1 - ell2), abs(m1 + m2))
    lmin = lam if (lmax + lam) % 2 == 0 else lam + 1
    return CouplingRange(lmin, lmax)


def delta_quantities(ell1: int, ell2: int, ell: int) -> DeltaQuantities:
    twice = (ell1 + ell2 - ell, ell - ell1 + ell2, ell + ell1 - ell2, ell1 + ell2 + ell)
    if twice[0] % 2:
        raise DomainError(f"parity violation: l1+l2-l = {twice[0]} is odd")
    d = [t // 2 for t in twice]
    if min(d[:3]) < 0:
        raise DomainError(f"({ell1}, {ell2}, {ell}) violates the triangle condition")
    return DeltaQuantities(*d)


def sphere_grid(n_theta: int = 64, n_phi: int = 128):
    """Gauss-Legendre nodes in cos(theta) times uniform nodes in phi.

    Returns (theta, phi, weights) as 2-D arrays of shape (n_theta, n_phi).
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(x)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    w = np.outer(wx, np.full(n_phi, 2 * np.pi / n_phi))
    return th, ph, w


def sphere_quadrature(f, n_theta: int = 64, n_phi: int = 128) -> complex:
    """Integral of ``f(theta, phi)`` over the unit sphere.

    ``f`` must accept broadcastable arrays. Exact for band-limited integrands
    of degree < 2 n_theta in cos(theta) and |m| < n_phi.
    """
    th, ph, w = sphere_grid(n_theta, n_phi)
    return complex(np.sum(w * f(th, ph)))


def gaunt_quadrature(key: GauntKey, n_theta: int = 64, n_phi: int = 128) -> complex:
    """Gaunt coefficient by direct numerical integration (test oracle)."""
    def integrand(th, ph):
        return (
            np.conj(spherical_harmonic(key.ell3, key.m3, th, ph))
            * spherical_harmonic(key.ell2, key.m2, th, ph)
            * spherical_harmonic(key.ell1, key.m1, th, ph)
        )
    return sphere_quadrature(integrand, n_theta, n_phi)
