"""Spherical-form translation operator and the two-range B-function addition theorem.

The plane-wave factor e^(a.b) is expanded in solid harmonics and even powers
of |a| |b| (:func:`exp_dot_spherical`) or in Legendre polynomials and modified
Bessel functions (:func:`exp_dot_legendre`). Substituting a = r_<, b = grad
and acting on a B function gives the addition theorem evaluated by
:func:`b_addition`:

    B_{n,l}^m(alpha, r_< + r_>) = (2 pi)^(3/2) / (-2)^N
        sum_{l1, m1} (-1)^l1 conj(Y_l1^m1(alpha r_<))
        sum_{q=0}^{N} (-2)^q / (N-q)! x^(N-l1-q-1/2) I_{N+l1-q+1/2}(x)
        sum_{l2} <l2 m+m1|l1 m1|l m>
        sum_{s=0}^{min(q, dl2)} (-1)^s C(dl2, s) B_{q-l2-s, l2}^{m+m1}(alpha, r_>)

with N = n + l, x = alpha |r_<| and dl2 = (l + l1 - l2)/2. Only the l1 sum
is infinite; it converges geometrically in |r_<| / |r_>| < 1.

Note the solid harmonic of the *scaled* vector alpha r_<: the gradient
acting on B(alpha, .) brings out alpha^l1 for each rank-l1 operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .angular import GauntKey, coupling_range, gaunt
from .bfunctions import BIndex, b_eval, expansion_eval, stgo_on_b
from .special_core import (
    DomainError,
    TensorIndex,
    bessel_i_halfint,
    bessel_i_over_power,
    binomial,
    reduced_bessel,
    solid_harmonics_all,
)

__all__ = [
    "TruncationMode",
    "TruncationSpec",
    "ConvergenceReport",
    "ConvergenceRow",
    "exp_dot_spherical",
    "exp_dot_legendre",
    "b_addition",
    "b_addition_midform",
    "convergence_table",
]

ERROR_FLOOR = 1e-300


class TruncationMode(str, Enum):
    FIXED_ORDER = "fixed_order"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class TruncationSpec:
    """Controls for the outer l1 sum.

    In adaptive mode the sum stops once two consecutive l1 shells each change
    the partial sum by less than ``rel_tol`` times its magnitude; ``ell1_max``
    is always a hard cap.
    """

    ell1_max: int = 30
    rel_tol: float = 1e-14
    mode: TruncationMode = TruncationMode.FIXED_ORDER

    def __post_init__(self):
        if self.ell1_max < 0:
            raise DomainError("ell1_max must be non-negative")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        object.__setattr__(self, "mode", TruncationMode(self.mode))


@dataclass
class ConvergenceReport:
    partial_values: list = field(default_factory=list)
    reference: complex | None = None
    errors: list = field(default_factory=list)
    converged_at: int | None = None
    slow_convergence: bool = False

    def attach_reference(self, reference: complex, floor: float = ERROR_FLOOR):
        self.reference = complex(reference)
        scale = max(abs(self.reference), floor)
        self.errors = [abs(v - self.reference) / scale for v in self.partial_values]
        return self


def exp_dot_spherical(a, b, L: int, K: int) -> float:
    """Truncated solid-harmonic expansion of exp(a . b).

    2 pi sum_{l<=L} sum_m conj(Y_l^m(a)) Y_l^m(b) sum_{k<=K} (a^2 b^2)^k / (2^(l+2k) k! (1/2)_{l+k+1})
    """
    if L < 0 or K < 0:
        raise DomainError("truncation orders must be non-negative")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ya, yb = solid_harmonics_all(L, np.stack([a, b]))
    angular = np.sum(np.conj(ya) * yb, axis=-1).real  # one value per l
    ab2 = float(a @ a) * float(b @ b)
    total = 0.0
    for ell in range(L + 1):
        # 1 / (2^l (1/2)_{l+1}), then the k-recursion
        term = 1.0 / (2.0**ell * math.gamma(ell + 1.5) / math.gamma(0.5))
        radial = term
        for k in range(1, K + 1):
            term *= ab2 / (4.0 * k * (ell + k + 0.5))
            radial += term
        total += angular[ell] * radial
    return 2 * math.pi * total


def exp_dot_legendre(a, b, L: int) -> float:
    """Truncated Legendre-Bessel expansion of exp(a . b)."""
    if L < 0:
        raise DomainError("truncation order must be non-negative")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0 or nb == 0:
        raise DomainError("exp_dot_legendre needs non-zero vectors")
    x = na * nb
    cos = min(1.0, max(-1.0, float(a @ b) / x))
    total = 0.0
    p_prev, p_cur = 0.0, 1.0  # P_{l-1}, P_l
    for ell in range(L + 1):
        total += (2 * ell + 1) * float(bessel_i_halfint(ell + 0.5, x)) * p_cur
        p_prev, p_cur = p_cur, ((2 * ell + 1) * cos * p_cur - ell * p_prev) / (ell + 1)
    return math.sqrt(math.pi / (2 * x)) * total


# ---------------------------------------------------------------------------
# addition theorem


def _check_geometry(idx: BIndex, r_small, r_large):
    r_small = np.asarray(r_small, dtype=float)
    r_large = np.asarray(r_large, dtype=float)
    if r_small.shape != (3,) or r_large.shape != (3,):
        raise DomainError("r_small and r_large must be 3-vectors")
    if not idx.classical:
        raise DomainError("addition theorem needs a classical index (n + l >= 0)")
    if not np.linalg.norm(r_small) < np.linalg.norm(r_large):
        raise DomainError(
            "two-range condition violated: need |r_small| < |r_large| strictly "
            f"(got {np.linalg.norm(r_small):.17g} >= {np.linalg.norm(r_large):.17g})"
        )
    return r_small, r_large


class _BTable:
    """B_{N,l2}^{M}(alpha, r_>) for fixed r_>, with lazily filled radial factors."""

    def __init__(self, alpha: float, r_large, lmax: int):
        self.z = alpha * float(np.linalg.norm(r_large))
        self.lmax = lmax
        self.ylm = solid_harmonics_all(lmax, alpha * np.asarray(r_large))
        self._k: dict = {}

    def _khat(self, twice_nu: int) -> float:
        try:
            return self._k[twice_nu]
        except KeyError:
            v = float(reduced_bessel(twice_nu / 2, self.z))
            self._k[twice_nu] = v
            return v

    def __call__(self, n: int, l2: int, m2: int) -> complex:
        j = n + l2
        if j < 0:
            return 0j
        return self._khat(2 * n - 1) * self.ylm[l2, self.lmax + m2] / (2.0**j * math.factorial(j))


def _radial_weights(N: int, ell1: int, x: float):
    """w_q = (-2)^q/(N-q)! x^(N-l1-q-1/2) I_{N+l1-q+1/2}(x), q = 0..N.

    Uses x^(t-l1-1/2) I_{l1+t+1/2}(x) = x^(2t) [x^(-nu) I_nu(x)] with t = N - q,
    so only integer powers of x appear and x = 0 is exact.
    """
    w = []
    for q in range(N + 1):
        t = N - q
        ratio = float(bessel_i_over_power(ell1 + t + 0.5, x))
        w.append((-2.0) ** q / math.factorial(t) * x ** (2 * t) * ratio)
    return w


def _shell_terms(idx: BIndex, ell1: int, ysmall, x: float, table: _BTable, lmax_table: int,
                 guard: bool, cache) -> complex:
    n, ell, m = idx.n, idx.ell, idx.m
    N = n + ell
    w = _radial_weights(N, ell1, x)
    kw = {} if cache == "default" else {"cache": cache}
    shell = 0j
    for m1 in range(-ell1, ell1 + 1):
        ys = ysmall[ell1, lmax_table + m1]
        if ys == 0:
            continue
        inner = 0j
        for l2 in coupling_range(ell1, m1, ell, m):
            g = gaunt(GauntKey(ell1, m1, ell, m, l2, m + m1), **kw)
            if g == 0.0:
                continue
            dl2 = (ell + ell1 - l2) // 2
            acc = 0j
            for q in range(N + 1):
                smax = min(q, dl2) if guard else dl2
                bsum = 0j
                for s in range(smax + 1):
                    bsum += (-1) ** s * binomial(dl2, s) * table(q - l2 - s, l2, m + m1)
                acc += w[q] * bsum
            inner += g * acc
        shell += np.conj(ys) * inner
    return (-1) ** ell1 * shell


def b_addition(idx: BIndex, r_small, r_large, trunc: TruncationSpec = TruncationSpec(),
               *, guard: bool = True, cache="default", reference: bool = True):
    """Evaluate B_{n,l}^m(alpha, r_small + r_large) through the addition theorem.

    Returns ``(value, report)``; ``report.partial_values[L]`` is the sum over
    l1 <= L. With ``reference=True`` the report also carries the relative
    error of each partial sum against direct evaluation. ``guard=False``
    drops the min(q, dl2) cutoff of the innermost sum and relies on the
    vanishing of non-classical B functions instead (same result).
    """
    r_small, r_large = _check_geometry(idx, r_small, r_large)
    alpha = idx.alpha
    N = idx.n + idx.ell
    L = trunc.ell1_max
    lmax_table = L + idx.ell
    x = alpha * float(np.linalg.norm(r_small))
    ysmall = solid_harmonics_all(lmax_table, alpha * r_small)
    table = _BTable(alpha, r_large, lmax_table)
    pref = (2 * math.pi) ** 1.5 / (-2.0) ** N

    report = ConvergenceReport()
    total = 0j
    quiet = 0
    for ell1 in range(L + 1):
        shell = pref * _shell_terms(idx, ell1, ysmall, x, table, lmax_table, guard, cache)
        total += shell
        report.partial_values.append(complex(total))
        if trunc.mode is TruncationMode.ADAPTIVE:
            quiet = quiet + 1 if abs(shell) <= trunc.rel_tol * abs(total) else 0
            if quiet >= 2:
                report.converged_at = ell1
                break
    if trunc.mode is TruncationMode.ADAPTIVE and report.converged_at is None:
        report.slow_convergence = True
    if reference:
        report.attach_reference(complex(b_eval(idx, r_small + r_large)))
    return complex(total), report


def b_addition_midform(idx: BIndex, r_small, r_large, trunc: TruncationSpec = TruncationSpec(),
                       *, cache="default", shells: bool = False):
    """Pre-resummation form of the addition theorem (cross-check path).

    (2 pi)^(3/2) sum_{l1,m1} conj(Y_l1^m1(r_<)) sum_{t=0}^{N} (-1)^t/(2^t t!)
        x^(t-l1-1/2) I_{l1+t+1/2}(x) [Y_l1^m1(grad) B_{n-t,l}^m](r_>)

    where the gradient operator is applied through :func:`stgo_on_b` and the
    resulting expansion evaluated with :func:`expansion_eval`. Returns the
    value, or the list of partial sums per l1 when ``shells=True``.
    """
    r_small, r_large = _check_geometry(idx, r_small, r_large)
    alpha = idx.alpha
    n, ell, m = idx.n, idx.ell, idx.m
    N = n + ell
    rs = float(np.linalg.norm(r_small))
    x = alpha * rs
    ysmall = solid_harmonics_all(trunc.ell1_max, r_small)
    kw = {} if cache == "default" else {"cache": cache}
    partials = []
    total = 0j
    for ell1 in range(trunc.ell1_max + 1):
        shell = 0j
        for t in range(N + 1):
            # x^(t-l1-1/2) I_{l1+t+1/2}(x), written without half-integer powers
            if x > 0:
                rad = x ** (t - ell1 - 0.5) * float(bessel_i_halfint(ell1 + t + 0.5, x))
            else:
                rad = float(bessel_i_over_power(ell1 + t + 0.5, 0.0)) if t == 0 and ell1 == 0 else 0.0
            rad *= (-1) ** t / (2.0**t * math.factorial(t))
            for m1 in range(-ell1, ell1 + 1):
                ys = ysmall[ell1, trunc.ell1_max + m1]
                if ys == 0:
                    continue
                e = stgo_on_b(TensorIndex(ell1, m1), BIndex(n - t, ell, m, alpha), **kw)
                shell += np.conj(ys) * rad * complex(expansion_eval(e, r_large))
        total += (2 * math.pi) ** 1.5 * shell
        partials.append(complex(total))
    return partials if shells else complex(total)


@dataclass(frozen=True)
class ConvergenceRow:
    geometry: int
    ratio: float
    cutoff: int
    value: complex
    reference: complex
    rel_error: float


def convergence_table(idx: BIndex, geometries, cutoffs) -> list:
    """Relative error of the addition theorem per geometry and l1 cutoff.

    ``geometries`` is a sequence of (r_small, r_large) pairs. Rows come out in
    input order: geometry first, then cutoff as given.
    """
    cutoffs = list(cutoffs)
    rows = []
    if not cutoffs:
        return rows
    for gi, (rs, rl) in enumerate(geometries):
        rs = np.asarray(rs, dtype=float)
        rl = np.asarray(rl, dtype=float)
        _, rep = b_addition(idx, rs, rl, TruncationSpec(ell1_max=max(cutoffs)))
        ratio = float(np.linalg.norm(rs) / np.linalg.norm(rl))
        for c in cutoffs:
            rows.append(ConvergenceRow(gi, ratio, c, rep.partial_values[c], rep.reference, rep.errors[c]))
    return rows
