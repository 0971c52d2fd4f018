import math

import numpy as np
import pytest

from bfun.angular import GauntCache
from bfun.bfunctions import (
    BExpansion,
    BIndex,
    b_eval,
    b_fourier,
    expansion_eval,
    ladder_down,
    laplacian_power,
    scalar_reduction,
    stgo_on_b,
)
from bfun.special_core import DomainError, TensorIndex, reduced_bessel, solid_harmonic, solid_harmonic_monomials
from oracles import fourier_by_radial_quadrature, laplacian_fd, polynomial_operator_fd, random_points, step_ratios

Y00 = 1 / math.sqrt(4 * math.pi)
STEPS = (1e-2, 5e-3, 2.5e-3)


def test_b_eval_values():
    assert b_eval(BIndex(1, 0, 0, 1.0), [0, 0, 1]) == pytest.approx(0.5 * math.exp(-1) * Y00, rel=1e-15)
    assert b_eval(BIndex(1, 0, 0, 1.0), [0, 0, 1]) == pytest.approx(0.05188843717757434, rel=1e-15)
    assert b_eval(BIndex(0, 0, 0, 1.0), [0, 0, 2]) == pytest.approx(math.exp(-2) / 2 * Y00, rel=1e-15)
    assert b_eval(BIndex(-2, 1, 0, 1.0), [0.3, 0.2, 1.0]) == 0.0


def test_b_eval_matches_definition(rng):
    pts = random_points(rng, 20, 0.1, 6.0)
    for n, ell, m, alpha in [(1, 0, 0, 1.0), (2, 1, -1, 0.7), (0, 2, 2, 1.3), (-1, 3, 1, 0.9), (4, 3, -2, 2.0)]:
        r = np.linalg.norm(pts, axis=1)
        ref = (reduced_bessel(n - 0.5, alpha * r) * solid_harmonic(ell, m, alpha * pts)
               / (2.0 ** (n + ell) * math.factorial(n + ell)))
        np.testing.assert_allclose(b_eval(BIndex(n, ell, m, alpha), pts), ref, rtol=1e-14)


def test_b_eval_origin():
    origin = np.zeros(3)
    for n in (1, 2, 4):
        limit = b_eval(BIndex(n, 0, 0, 1.0), origin)
        near = b_eval(BIndex(n, 0, 0, 1.0), [0, 0, 1e-9])
        assert limit == pytest.approx(near, rel=1e-8)
    assert b_eval(BIndex(2, 1, 0, 1.0), origin) == 0.0
    assert b_eval(BIndex(0, 2, 1, 1.0), origin) == 0.0
    with pytest.raises(DomainError):
        b_eval(BIndex(0, 0, 0, 1.0), origin)
    with pytest.raises(DomainError):
        b_eval(BIndex(-2, 1, 0, 1.0), origin)


def test_fourier_values():
    assert b_fourier(BIndex(1, 0, 0, 1.0), [0, 0, 0]) == pytest.approx(math.sqrt(2 / math.pi) * Y00, rel=1e-15)
    val = b_fourier(BIndex(1, 1, 0, 1.0), [0, 0, 1])
    assert val.real == 0.0
    assert abs(val) == pytest.approx(math.sqrt(2 / math.pi) / 8 * math.sqrt(3 / (4 * math.pi)), rel=1e-15)
    with pytest.raises(DomainError):
        b_fourier(BIndex(-2, 1, 0, 1.0), [0, 0, 1])


@pytest.mark.parametrize("n,ell", [(1, 0), (2, 1), (3, 2)])
def test_fourier_power_law_decay(n, ell):
    idx = BIndex(n, ell, 0, 1.0)
    a, b = abs(b_fourier(idx, [0, 0, 1e3])), abs(b_fourier(idx, [0, 0, 2e3]))
    assert math.log2(a / b) == pytest.approx(2 * (n + ell + 1) - ell, abs=1e-3)


@pytest.mark.parametrize("n,ell", [(1, 0), (2, 1)])
@pytest.mark.parametrize("pz", [0.3, 1.0, 2.0])
def test_fourier_matches_quadrature(n, ell, pz):
    idx = BIndex(n, ell, 0, 1.0)
    p = np.array([0.0, 0.0, pz])
    ref = fourier_by_radial_quadrature(idx, p)
    assert abs(b_fourier(idx, p) - ref) <= 1e-6 * abs(ref)


# ---------------------------------------------------------------- BExpansion


def test_expansion_normalization():
    e = BExpansion(1.0, [(1.0, 2, 0, 0), (2.0, 1, 1, 1), (0.5, 2, 0, 0), (1e-320, 3, 0, 0)])
    assert e.terms == ((1.5, 2, 0, 0), (2.0, 1, 1, 1))
    assert (e - e).terms == ()
    assert (2 * e).isclose(e + e)
    with pytest.raises(AttributeError):
        e.alpha = 2.0
    with pytest.raises(DomainError):
        e + BExpansion(2.0, [(1.0, 1, 0, 0)])


def test_ladder_values():
    assert ladder_down(BExpansion.single(BIndex(2, 0, 0))).isclose(BExpansion.single(BIndex(1, 0, 0)))
    assert ladder_down(BExpansion(1.0)).terms == ()
    e = BExpansion(1.0, [(2, 1, 1, 1), (3, 0, 1, 1)])
    assert ladder_down(e).isclose(BExpansion(1.0, [(2, 0, 1, 1), (3, -1, 1, 1)]))


def test_laplacian_power_values():
    idx = BIndex(3, 0, 0)
    assert laplacian_power(0, idx).isclose(BExpansion.single(idx))
    assert laplacian_power(1, idx).isclose(BExpansion(1.0, [(1, 3, 0, 0), (-1, 2, 0, 0)]))
    assert laplacian_power(2, idx).isclose(BExpansion(1.0, [(1, 3, 0, 0), (-2, 2, 0, 0), (1, 1, 0, 0)]))


def test_stgo_values():
    idx = BIndex(2, 1, 1, 1.3)
    assert stgo_on_b(TensorIndex(0, 0), idx).isclose(BExpansion.single(idx, Y00), rel=0)
    e = stgo_on_b(TensorIndex(1, 0), BIndex(2, 0, 0, 1.0))
    assert e.isclose(BExpansion(1.0, [(-Y00, 1, 1, 0)]), rel=1e-15)
    e = stgo_on_b(TensorIndex(1, 0), BIndex(2, 1, 0, 1.0))
    assert sorted({ell for _, _, ell, _ in e.terms}) == [0, 2]
    # the l = 0 channel carries dl = 1, so two orders; the l = 2 channel one
    assert len([t for t in e.terms if t[2] == 0]) == 2
    assert len([t for t in e.terms if t[2] == 2]) == 1
    assert stgo_on_b(TensorIndex(1, 0), BIndex(2, 1, 0, 1.0), cache=GauntCache()).isclose(e, rel=0)


def test_scalar_reduction(rng):
    op, scalar, pref = scalar_reduction(BIndex(0, 1, 0, 2.0))
    assert (op, scalar) == (TensorIndex(1, 0), BIndex(1, 0, 0, 2.0))
    assert pref == pytest.approx(-math.sqrt(4 * math.pi) / 2.0)
    idx = BIndex(1, 2, 1, 0.9)
    op, scalar, pref = scalar_reduction(idx)
    pts = random_points(rng, 20, 0.3, 4.0)
    lhs = pref * expansion_eval(stgo_on_b(op, scalar), pts)
    np.testing.assert_allclose(lhs, b_eval(idx, pts), rtol=1e-10)


def test_expansion_eval_values():
    assert expansion_eval(BExpansion(1.0), np.array([0.0, 0.0, 1.0])) == 0.0
    e = BExpansion.single(BIndex(1, 0, 0, 1.0))
    assert expansion_eval(e, np.array([0.0, 0.0, 1.0])) == pytest.approx(0.05188843717757434, rel=1e-15)


# ---------------------------------------------------------------- finite-difference oracles


def max_error(exact, approx):
    return float(np.max(np.abs(approx - exact)))


@pytest.mark.parametrize("n,ell,m", [(2, 0, 0), (2, 1, 1), (3, 2, -1)])
@pytest.mark.parametrize("alpha", [0.7, 1.3])
def test_ladder_by_finite_differences(rng, n, ell, m, alpha):
    pts = random_points(rng, 30, 0.5, 3.0)
    idx = BIndex(n, ell, m, alpha)
    f = lambda r: b_eval(idx, r)
    exact = expansion_eval(ladder_down(BExpansion.single(idx)), pts)
    errs = [max_error(exact, f(pts) - laplacian_fd(f, pts, h) / alpha**2) for h in STEPS]
    assert all(3.5 <= q <= 4.5 for q in step_ratios(errs)), errs


def test_laplacian_power_by_finite_differences(rng):
    pts = random_points(rng, 30, 0.5, 3.0)
    idx = BIndex(3, 0, 0, 1.0)
    f = lambda r: b_eval(idx, r)
    exact = expansion_eval(laplacian_power(2, idx), pts)
    errs = []
    for h in (2e-2, 1e-2, 5e-3):
        lap = lambda r: laplacian_fd(f, r, h)
        errs.append(max_error(exact, laplacian_fd(lap, pts, h)))
    assert all(3.5 <= q <= 4.5 for q in step_ratios(errs)), errs


@pytest.mark.parametrize("l1", [1, 2])
@pytest.mark.parametrize("n,ell,m", [(2, 0, 0), (2, 1, -1), (3, 2, 1)])
def test_stgo_by_finite_differences(rng, l1, n, ell, m):
    pts = random_points(rng, 30, 0.5, 3.0)
    idx = BIndex(n, ell, m, 1.1)
    f = lambda r: b_eval(idx, r)
    for m1 in range(-l1, l1 + 1):
        exact = expansion_eval(stgo_on_b(TensorIndex(l1, m1), idx), pts)
        poly = solid_harmonic_monomials(l1, m1)
        errs = [max_error(exact, polynomial_operator_fd(poly, f, pts, h)) for h in STEPS]
        assert all(3.5 <= q <= 4.5 for q in step_ratios(errs)), (m1, errs)
