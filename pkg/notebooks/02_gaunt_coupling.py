"""
Linearizing products of spherical harmonics
===========================================

A product Y_l1^m1 Y_l2^m2 is a short sum of single harmonics weighted by
Gaunt coefficients. Only every second l between the coupling limits appears.
"""

# %%
import numpy as np

from bfun import GauntKey, coupling_range, gaunt, spherical_harmonic

l1, m1, l2, m2 = 3, 1, 2, -1
rng = coupling_range(l1, m1, l2, m2)
print("l runs over", list(rng))
for ell in rng:
    print(ell, gaunt(GauntKey(l1, m1, l2, m2, ell, m1 + m2)))

# %%
# Check the expansion at a handful of random directions.

gen = np.random.default_rng(0)
th = gen.uniform(0, np.pi, 5)
ph = gen.uniform(0, 2 * np.pi, 5)
lhs = spherical_harmonic(l1, m1, th, ph) * spherical_harmonic(l2, m2, th, ph)
rhs = sum(gaunt(GauntKey(l1, m1, l2, m2, ell, m1 + m2)) * spherical_harmonic(ell, m1 + m2, th, ph) for ell in rng)
print("max deviation:", np.max(np.abs(lhs - rhs)))

# %%
# Quadrature as an independent check
# ----------------------------------
# The coefficient is an integral over the sphere, so a product Gauss rule
# reproduces it to rounding error.

from bfun import gaunt_quadrature

key = GauntKey(1, 0, 1, 0, 2, 0)
print(gaunt(key), gaunt_quadrature(key).real)

# %%
# Coefficients are memoized. A table can be written to disk and reloaded,
# which the command-line tool does with ``--cache-dir``.

from bfun import default_cache

print(len(default_cache), "entries cached so far")
