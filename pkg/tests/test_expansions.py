import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre

from bfun.bfunctions import BExpansion, expansion_eval
from bfun.expansions import (
    KINDS,
    RadialBasisSpec,
    eval_direct,
    genlaguerre,
    hydrogenic_to_b,
    lambda_to_b,
    sto_to_b,
    sturmian_to_b,
    to_b,
)
from bfun.special_core import DomainError
from oracles import radial_overlap

Y00 = 1 / math.sqrt(4 * math.pi)


def conversion_grid(rng):
    radii = np.linspace(0.05, 10.0, 25)
    dirs = rng.normal(size=(5, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, 3)


def laguerre_series(k, a, x):
    """Explicit sum_j (-1)^j C(k+a, k-j) x^j / j! for integer a."""
    return sum((-1) ** j * math.comb(k + a, k - j) * x**j / math.factorial(j) for j in range(k + 1))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 12), st.integers(0, 10), st.floats(0, 30))
def test_genlaguerre_against_series(k, a, x):
    ref = laguerre_series(k, a, x)
    scale = sum(math.comb(k + a, k - j) * x**j / math.factorial(j) for j in range(k + 1))
    assert abs(float(genlaguerre(k, a, x)) - ref) <= 1e-12 * scale
    assert float(genlaguerre(k, a, x)) == pytest.approx(float(eval_genlaguerre(k, a, x)), rel=1e-9, abs=1e-9 * scale)


def test_direct_values():
    slater = RadialBasisSpec("slater", 1, 0, 0, 1.0)
    assert eval_direct(slater, np.array([0.0, 0.0, 1.0])) == pytest.approx(math.exp(-1) * Y00, rel=1e-15)
    hyd = RadialBasisSpec("hydrogenic", 1, 0, 0, 1.0)
    assert eval_direct(hyd, np.zeros(3)) == pytest.approx(2 * Y00, rel=1e-15)
    assert eval_direct(hyd, np.zeros(3)) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)


def test_sturmian_equals_hydrogenic(rng):
    pts = conversion_grid(rng)
    for n in range(1, 5):
        for ell in range(n):
            for m in range(-ell, ell + 1):
                w = RadialBasisSpec("hydrogenic", n, ell, m, 2.0)
                s = RadialBasisSpec("sturmian", n, ell, m, 2.0 / n)
                np.testing.assert_allclose(eval_direct(s, pts), eval_direct(w, pts), rtol=1e-13, atol=1e-300)
                assert sturmian_to_b(s).isclose(hydrogenic_to_b(w), rel=1e-14)


def test_sto_coefficients():
    assert sto_to_b(RadialBasisSpec("slater", 1, 0, 0, 1.0)).isclose(BExpansion(1.0, [(2.0, 1, 0, 0)]), rel=0)
    assert sto_to_b(RadialBasisSpec("slater", 2, 1, 0, 1.0)).isclose(BExpansion(1.0, [(8.0, 1, 1, 0)]), rel=0)
    e = sto_to_b(RadialBasisSpec("slater", 3, 0, 0, 0.9))
    assert e.isclose(BExpansion(0.9, [(48.0, 3, 0, 0), (-24.0, 2, 0, 0)]), rel=0)
    r = np.array([0.0, 0.0, 1.7])
    assert expansion_eval(e, r) == pytest.approx(eval_direct(RadialBasisSpec("slater", 3, 0, 0, 0.9), r), rel=1e-12)


def test_term_structure():
    assert len(hydrogenic_to_b(RadialBasisSpec("hydrogenic", 1, 0, 0, 1.0))) == 1
    e = hydrogenic_to_b(RadialBasisSpec("hydrogenic", 2, 1, 0, 1.0))
    assert len(e) == 1 and e.alpha == 0.5
    assert len(hydrogenic_to_b(RadialBasisSpec("hydrogenic", 3, 0, 0, 2.0))) == 3
    assert len(lambda_to_b(RadialBasisSpec("lambda", 1, 0, 0, 1.0))) == 1
    assert len(lambda_to_b(RadialBasisSpec("lambda", 2, 0, 0, 1.0))) == 2
    assert len(sturmian_to_b(RadialBasisSpec("sturmian", 1, 0, 0, 0.7))) == 1
    assert len(sturmian_to_b(RadialBasisSpec("sturmian", 3, 0, 0, 1.0))) == 3


@pytest.mark.parametrize("kind", KINDS)
def test_conversions_pointwise(rng, kind):
    pts = conversion_grid(rng)
    for n in range(1, 6):
        for ell in range(n):
            for m in sorted({-ell, 0, ell}):
                spec = RadialBasisSpec(kind, n, ell, m, 0.9)
                e = to_b(spec)
                assert e.is_classical() and all(nb >= 1 for _, nb, _, _ in e.terms)
                d = eval_direct(spec, pts)
                x = expansion_eval(e, pts)
                assert np.all(np.abs(x - d) <= np.maximum(1e-12 * np.abs(d), 1e-14)), (kind, n, ell, m)


def test_sturmian_example(rng):
    pts = conversion_grid(rng)
    spec = RadialBasisSpec("sturmian", 4, 2, 1, 0.5)
    np.testing.assert_allclose(expansion_eval(to_b(spec), pts), eval_direct(spec, pts), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("kind,scale", [("hydrogenic", 1.0), ("hydrogenic", 2.5), ("lambda", 0.8), ("lambda", 1.7)])
def test_orthonormality(kind, scale):
    for ell in range(4):
        ns = range(ell + 1, 5)
        for n1 in ns:
            for n2 in ns:
                val = radial_overlap(RadialBasisSpec(kind, n1, ell, 0, scale), RadialBasisSpec(kind, n2, ell, 0, scale))
                assert abs(val - (n1 == n2)) <= 1e-8


def test_sturmians_share_scale_but_not_l2_orthogonality():
    # each one is a normalized hydrogenic function with Z = n alpha; at a common
    # alpha they are orthogonal only with the 1/r weight
    s1 = RadialBasisSpec("sturmian", 1, 0, 0, 1.0)
    s2 = RadialBasisSpec("sturmian", 2, 0, 0, 1.0)
    assert radial_overlap(s2, s2) == pytest.approx(1.0, abs=1e-12)
    assert abs(radial_overlap(s1, s2)) > 1e-3


def test_spec_validation():
    with pytest.raises(DomainError):
        RadialBasisSpec("gaussian", 1, 0, 0, 1.0)
    with pytest.raises(DomainError):
        RadialBasisSpec("slater", 1, 1, 0, 1.0)
    with pytest.raises(DomainError):
        RadialBasisSpec("lambda", 3, 1, 2, 1.0)
    with pytest.raises(DomainError):
        RadialBasisSpec("hydrogenic", 1, 0, 0, 0.0)
    with pytest.raises(DomainError):
        sto_to_b(RadialBasisSpec("lambda", 1, 0, 0, 1.0))
