"""B functions and their operator algebra.

    B_{n,l}^m(alpha, r) = k_{n-1/2}(alpha r) Y_l^m(alpha r) / (2^(n+l) (n+l)!)

with k the reduced Bessel function and Y_l^m(.) the regular solid harmonic.
For n + l < 0 the function vanishes away from the origin; such indices are
kept in expansions (they appear naturally in the operator algebra) but must
never be evaluated at r = 0.

The operators act at the index level and return :class:`BExpansion` objects:

* ``ladder_down``     (1 - laplacian/alpha^2) B_n   = B_{n-1}
* ``laplacian_power`` alpha^(-2nu) laplacian^nu B_n = sum_t (-1)^t C(nu,t) B_{n-t}
* ``stgo_on_b``       Y_l1^m1(grad) B_{n2,l2}^m2, a Gaunt-weighted finite sum
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angular import GauntKey, coupling_range, delta_quantities, gaunt
from .special_core import (
    DomainError,
    TensorIndex,
    binomial,
    cartesian_to_spherical,
    reduced_bessel,
    solid_harmonic,
    theta_polynomial,
)

__all__ = [
    "BIndex",
    "BExpansion",
    "b_eval",
    "b_fourier",
    "ladder_down",
    "laplacian_power",
    "stgo_on_b",
    "scalar_reduction",
    "expansion_eval",
]

DROP_BELOW = 1e-300


@dataclass(frozen=True)
class BIndex:
    n: int
    ell: int
    m: int
    alpha: float = 1.0

    def __post_init__(self):
        TensorIndex(self.ell, self.m)
        if not self.alpha > 0:
            raise DomainError("B function scale alpha must be positive")

    @property
    def classical(self) -> bool:
        return self.n + self.ell >= 0


class BExpansion:
    """Finite linear combination of B functions with one common scale.

    Terms are ``(coeff, n, l, m)``. Like terms are merged, negligible
    coefficients dropped and the order is canonical: sorted by (l, m, -n).
    """

    __slots__ = ("alpha", "terms")

    def __init__(self, alpha: float, terms=()):
        if not alpha > 0:
            raise DomainError("B function scale alpha must be positive")
        merged: dict = {}
        for c, n, ell, m in terms:
            TensorIndex(ell, m)
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError("non-finite expansion coefficient")
            key = (n, ell, m)
            merged[key] = merged.get(key, 0j) + c
        items = [(c, *k) for k, c in merged.items() if abs(c) >= DROP_BELOW]
        items.sort(key=lambda t: (t[2], t[3], -t[1]))
        object.__setattr__(self, "alpha", float(alpha))
        object.__setattr__(self, "terms", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("BExpansion is immutable")

    @classmethod
    def single(cls, idx: BIndex, coeff=1.0) -> "BExpansion":
        return cls(idx.alpha, [(coeff, idx.n, idx.ell, idx.m)])

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        body = " + ".join(f"({c:.6g})B[{n},{l},{m}]" for c, n, l, m in self.terms) or "0"
        return f"BExpansion(alpha={self.alpha:g}: {body})"

    def _check(self, other):
        if not isinstance(other, BExpansion):
            return NotImplemented
        if other.alpha != self.alpha and self.terms and other.terms:
            raise DomainError("cannot combine B expansions with different alpha")
        return None

    def __add__(self, other):
        bad = self._check(other)
        if bad is not None:
            return bad
        alpha = self.alpha if self.terms else other.alpha
        return BExpansion(alpha, self.terms + other.terms)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        return BExpansion(self.alpha, [(scalar * c, n, l, m) for c, n, l, m in self.terms])

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def isclose(self, other: "BExpansion", rel: float = 1e-14, abs_: float = 1e-300) -> bool:
        """Term-by-term comparison of two expansions."""
        if self.alpha != other.alpha and self.terms and other.terms:
            return False
        a = {(n, l, m): c for c, n, l, m in self.terms}
        b = {(n, l, m): c for c, n, l, m in other.terms}
        for key in a.keys() | b.keys():
            x, y = a.get(key, 0j), b.get(key, 0j)
            if abs(x - y) > max(rel * max(abs(x), abs(y)), abs_):
                return False
        return True

    def is_classical(self) -> bool:
        return all(n + ell >= 0 for _, n, ell, _ in self.terms)


def _b_radial_at_origin(n: int, ell: int) -> float | None:
    """Value of k_{n-1/2}(z) z^l / (2^(n+l)(n+l)!) at z -> 0, or None if singular.

    Returns 0.0 for vanishing limits. For l > 0 with a finite nonzero limit
    the angular dependence survives, so that case is also reported singular.
    """
    if n >= 1:
        if ell > 0:
            return 0.0
        # k_{n-1/2}(0) = Theta_{n-1}(0) = (2n-3)!!
        return float(theta_polynomial(n - 1, 0.0)) / (2**n * math.factorial(n))
    # n <= 0: k_{n-1/2}(z) ~ const * z^(2n-1), so B ~ z^(2n-1+l)
    power = 2 * n - 1 + ell
    if power > 0:
        return 0.0
    return None


def b_eval(idx: BIndex, r):
    """Evaluate B_{n,l}^m(alpha, r) at points ``r`` (last axis of length 3).

    Non-classical indices (n + l < 0) give 0 for r != 0. At r = 0 the
    analytic limit is used; a :class:`DomainError` is raised where the
    function is distributional or singular there.
    """
    r = np.asarray(r, dtype=float)
    n, ell, m, alpha = idx.n, idx.ell, idx.m, idx.alpha
    rad, _, _ = cartesian_to_spherical(r)
    at_origin = rad == 0
    if np.any(at_origin):
        if n + ell < 0:
            raise DomainError(
                f"B_{{{n},{ell}}} with n+l<0 is a distribution; undefined at r = 0"
            )
        limit = _b_radial_at_origin(n, ell)
        if limit is None:
            raise DomainError(f"B_{{{n},{ell}}} has no finite limit at r = 0")
    if n + ell < 0:
        return np.zeros(rad.shape, dtype=complex)
    z = alpha * rad
    safe_z = np.where(at_origin, 1.0, z)
    k = reduced_bessel(n - 0.5, safe_z)
    y = solid_harmonic(ell, m, alpha * r)
    val = k * y / (2.0 ** (n + ell) * math.factorial(n + ell))
    if np.any(at_origin):
        y0 = solid_harmonic(ell, m, np.zeros(3))
        val = np.where(at_origin, limit * (y0 if ell == 0 else 0.0), val)
    return val


def b_fourier(idx: BIndex, p):
    """Momentum-space B function, (2 pi)^(-3/2) times the Fourier integral.

    sqrt(2/pi) alpha^(2n+l-1) / (alpha^2 + p^2)^(n+l+1) * Y_l^m(-i p), where
    Y_l^m(-i p) = (-i)^l Y_l^m(p) by homogeneity.
    """
    if not idx.classical:
        raise DomainError("Fourier transform only for classical indices (n + l >= 0)")
    p = np.asarray(p, dtype=float)
    n, ell, alpha = idx.n, idx.ell, idx.alpha
    p2 = np.sum(p * p, axis=-1)
    radial = math.sqrt(2 / math.pi) * alpha ** (2 * n + ell - 1) / (alpha**2 + p2) ** (n + ell + 1)
    return radial * (-1j) ** ell * solid_harmonic(ell, idx.m, p)


def ladder_down(e: BExpansion) -> BExpansion:
    """Apply (1 - laplacian/alpha^2): every B_n becomes B_{n-1}."""
    return BExpansion(e.alpha, [(c, n - 1, ell, m) for c, n, ell, m in e.terms])


def laplacian_power(nu: int, idx: BIndex) -> BExpansion:
    """alpha^(-2 nu) laplacian^nu B_{n,l}^m as a binomial sum of lowered orders."""
    if nu < 0:
        raise DomainError("Laplacian power must be non-negative")
    return BExpansion(
        idx.alpha,
        [((-1) ** t * binomial(nu, t), idx.n - t, idx.ell, idx.m) for t in range(nu + 1)],
    )


def stgo_on_b(op: TensorIndex, idx: BIndex, cache="default") -> BExpansion:
    """Spherical tensor gradient operator Y_l1^m1(grad) applied to B_{n2,l2}^m2.

    (-alpha)^l1 sum_l <l m1+m2|l1 m1|l2 m2> sum_t (-1)^t C(dl, t) B_{n2+l2-l-t, l}^{m1+m2}
    with l over the coupling range in steps of two and dl = (l1 + l2 - l)/2.
    """
    l1, m1 = op.ell, op.m
    n2, l2, m2 = idx.n, idx.ell, idx.m
    kw = {} if cache == "default" else {"cache": cache}
    pref = (-idx.alpha) ** l1
    terms = []
    for ell in coupling_range(l1, m1, l2, m2):
        g = gaunt(GauntKey(l1, m1, l2, m2, ell, m1 + m2), **kw)
        if g == 0.0:
            continue
        dl = delta_quantities(l1, l2, ell).d_ell
        for t in range(dl + 1):
            terms.append((pref * g * (-1) ** t * binomial(dl, t), n2 + l2 - ell - t, ell, m1 + m2))
    return BExpansion(idx.alpha, terms)


def scalar_reduction(idx: BIndex):
    """Write B_{n,l}^m as prefactor * Y_l^m(grad) B_{n+l,0}^0.

    Returns ``(TensorIndex(l, m), BIndex(n+l, 0, 0, alpha), prefactor)`` with
    prefactor = sqrt(4 pi) / (-alpha)^l.
    """
    if not idx.classical:
        raise DomainError("scalar reduction needs a classical index")
    pref = math.sqrt(4 * math.pi) / (-idx.alpha) ** idx.ell
    return TensorIndex(idx.ell, idx.m), BIndex(idx.n + idx.ell, 0, 0, idx.alpha), pref


def expansion_eval(e: BExpansion, r):
    """Sum of coeff * B(r) over the terms of ``e``."""
    r = np.asarray(r, dtype=float)
    total = np.zeros(r.shape[:-1], dtype=complex)
    for c, n, ell, m in e.terms:
        total = total + c * b_eval(BIndex(n, ell, m, e.alpha), r)
    return total
