"""Laguerre-type exponential bases and their finite B-function expansions.

Four kinds are supported, each with a direct evaluator and an exact
conversion to a :class:`~bfun.bfunctions.BExpansion`:

``slater``      chi_{n,l}^m(a, r) = (a r)^(n-1) e^(-a r) Y_l^m(theta, phi)   (unnormalized)
``hydrogenic``  W_{n,l}^m(Z, r)  bound hydrogenlike eigenfunction, scale Z/n
``lambda``      Lambda_{n,l}^m(a, r), L2-orthonormal Laguerre functions
``sturmian``    Psi_{n,l}^m(a, r), Coulomb Sturmians; Psi(Z/n) == W(Z)

Normalization constants (checked by quadrature and by the r-independence of
direct / expansion ratios):

    W:      (2Z/n)^(3/2) [(n-l-1)! / (2n (n+l)!)]^(1/2)
    Psi:    (2a)^(3/2)   [(n-l-1)! / (2n (n+l)!)]^(1/2)
    Lambda: (2a)^(3/2)   [(n-l-1)! / (n+l+1)!]^(1/2)

The literature commonly prints the first two brackets with a 3/2 exponent
and the Lambda constant without the square root; those variants are not
normalized and do not agree with the B-function sums, so they are not used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bfunctions import BExpansion
from .special_core import (
    DomainError,
    cartesian_to_spherical,
    double_factorial,
    pochhammer_exact,
    reciprocal_factorial,
    spherical_harmonic,
)

__all__ = [
    "KINDS",
    "RadialBasisSpec",
    "genlaguerre",
    "radial_direct",
    "eval_direct",
    "sto_to_b",
    "hydrogenic_to_b",
    "lambda_to_b",
    "sturmian_to_b",
    "to_b",
]

KINDS = ("slater", "hydrogenic", "lambda", "sturmian")


@dataclass(frozen=True)
class RadialBasisSpec:
    """One basis function; ``scale`` is alpha, or the nuclear charge Z for hydrogenic."""

    kind: str
    n: int
    ell: int
    m: int
    scale: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown basis kind {self.kind!r}; expected one of {KINDS}")
        if self.ell < 0 or abs(self.m) > self.ell:
            raise DomainError(f"invalid (l, m) = ({self.ell}, {self.m})")
        if self.n < self.ell + 1:
            raise DomainError(f"{self.kind} functions need n >= l + 1 (n={self.n}, l={self.ell})")
        if not self.scale > 0:
            raise DomainError("scale must be positive")

    @property
    def alpha(self) -> float:
        """Exponent of e^(-alpha r)."""
        if self.kind == "hydrogenic":
            return self.scale / self.n
        return self.scale


def genlaguerre(k: int, a: float, x):
    """Generalized Laguerre polynomial L_k^(a)(x) by upward recurrence in k."""
    x = np.asarray(x, dtype=float)
    if k < 0:
        raise DomainError("Laguerre degree must be non-negative")
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + a - x
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1 + a - x) * cur - (j + a) * prev) / (j + 1)
    return cur


def _sqrt_ratio(num: int, den: int) -> float:
    return math.sqrt(Fraction(num, den))


def radial_direct(spec: RadialBasisSpec, r):
    """Radial factor f(r) such that the function equals f(r) Y_l^m(theta, phi)."""
    r = np.asarray(r, dtype=float)
    n, ell = spec.n, spec.ell
    a = spec.alpha
    x = 2 * a * r
    if spec.kind == "slater":
        return (a * r) ** (n - 1) * np.exp(-a * r)
    if spec.kind in ("hydrogenic", "sturmian"):
        c = (2 * a) ** 1.5 * _sqrt_ratio(math.factorial(n - ell - 1), 2 * n * math.factorial(n + ell))
        return c * np.exp(-a * r) * genlaguerre(n - ell - 1, 2 * ell + 1, x) * x**ell
    c = (2 * a) ** 1.5 * _sqrt_ratio(math.factorial(n - ell - 1), math.factorial(n + ell + 1))
    return c * np.exp(-a * r) * genlaguerre(n - ell - 1, 2 * ell + 2, x) * x**ell


def eval_direct(spec: RadialBasisSpec, r):
    """Evaluate the basis function at points ``r`` (last axis of length 3)."""
    rad, theta, phi = cartesian_to_spherical(r)
    return radial_direct(spec, rad) * spherical_harmonic(spec.ell, spec.m, theta, phi)


def _require(spec: RadialBasisSpec, kind: str):
    if spec.kind != kind:
        raise DomainError(f"expected a {kind} spec, got {spec.kind!r}")


def sto_to_b(spec: RadialBasisSpec) -> BExpansion:
    """Slater-type function as a finite sum of B_{p,l}^m(alpha), p_min = floor((n-l)/2)."""
    _require(spec, "slater")
    n, ell, m = spec.n, spec.ell, spec.m
    terms = []
    for p in range((n - ell) // 2, n - ell + 1):
        c = (
            Fraction((-1) ** (n - ell - p) * math.factorial(n - ell) * 2 ** (ell + p) * math.factorial(ell + p))
            * reciprocal_factorial(2 * p - n + ell)
            / double_factorial(2 * n - 2 * ell - 2 * p)
        )
        if c:
            terms.append((float(c), p, ell, m))
    return BExpansion(spec.alpha, terms)


def _laguerre_b_terms(n: int, ell: int, m: int, shift: int):
    """Exact weights of sum_t (-n+l+1)_t (n+l+1+shift)_t / (t! (l+3/2+shift)_t) B_{t+1,l}^m."""
    terms = []
    for t in range(n - ell):
        c = (
            pochhammer_exact(-n + ell + 1, t)
            * pochhammer_exact(n + ell + 1 + shift, t)
            / (math.factorial(t) * pochhammer_exact(Fraction(2 * ell + 3 + 2 * shift, 2), t))
        )
        terms.append((c, t + 1, ell, m))
    return terms


def _coulomb_lead(n: int, ell: int, a: float) -> float:
    # (2a)^(3/2) 2^(l+1)/(2l+1)!! [n (n+l)! / (2 (n-l-1)!)]^(1/2)
    return (
        (2 * a) ** 1.5
        * 2 ** (ell + 1)
        / double_factorial(2 * ell + 1)
        * _sqrt_ratio(n * math.factorial(n + ell), 2 * math.factorial(n - ell - 1))
    )


def hydrogenic_to_b(spec: RadialBasisSpec) -> BExpansion:
    """Hydrogenic eigenfunction W_{n,l}^m(Z) as B functions of scale Z/n."""
    _require(spec, "hydrogenic")
    n, ell, m, a = spec.n, spec.ell, spec.m, spec.alpha
    lead = _coulomb_lead(n, ell, a)
    return BExpansion(a, [(lead * float(c), *rest) for c, *rest in _laguerre_b_terms(n, ell, m, 0)])


def sturmian_to_b(spec: RadialBasisSpec) -> BExpansion:
    """Coulomb Sturmian: same coefficients as the hydrogenic case with Z/n -> alpha."""
    _require(spec, "sturmian")
    n, ell, m, a = spec.n, spec.ell, spec.m, spec.alpha
    lead = _coulomb_lead(n, ell, a)
    return BExpansion(a, [(lead * float(c), *rest) for c, *rest in _laguerre_b_terms(n, ell, m, 0)])


def lambda_to_b(spec: RadialBasisSpec) -> BExpansion:
    _require(spec, "lambda")
    n, ell, m, a = spec.n, spec.ell, spec.m, spec.alpha
    lead = (
        (2 * a) ** 1.5
        * 2**ell
        * (2 * n + 1)
        / double_factorial(2 * ell + 3)
        * _sqrt_ratio(math.factorial(n + ell + 1), math.factorial(n - ell - 1))
    )
    return BExpansion(a, [(lead * float(c), *rest) for c, *rest in _laguerre_b_terms(n, ell, m, 1)])


_CONVERTERS = {
    "slater": sto_to_b,
    "hydrogenic": hydrogenic_to_b,
    "lambda": lambda_to_b,
    "sturmian": sturmian_to_b,
}


def to_b(spec: RadialBasisSpec) -> BExpansion:
    """Dispatch to the converter for ``spec.kind``."""
    return _CONVERTERS[spec.kind](spec)
