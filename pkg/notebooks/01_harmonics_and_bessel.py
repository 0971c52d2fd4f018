"""
Spherical harmonics, solid harmonics and reduced Bessel functions
=================================================================

The building blocks: Condon-Shortley spherical harmonics, their polynomial
form r^l Y_l^m, and the reduced Bessel functions k_(n+1/2)(z) = e^(-z) Theta_n(z).
"""

# %%
# Two routes to the same harmonic
# -------------------------------
# ``spherical_harmonic`` works on angles, ``solid_harmonic`` on Cartesian
# points through a homogeneous polynomial. They agree up to the factor r^l.

import numpy as np

from bfun import cartesian_to_spherical, solid_harmonic, spherical_harmonic

v = np.array([0.4, -1.1, 0.7])
r, theta, phi = cartesian_to_spherical(v)
for ell, m in [(1, 0), (2, 1), (3, -2), (4, 4)]:
    a = solid_harmonic(ell, m, v)
    b = r**ell * spherical_harmonic(ell, m, theta, phi)
    print(f"l={ell} m={m:+d}  polynomial {a:.12f}  angular {b:.12f}")

# %%
# The polynomial can also be read off monomial by monomial. Swapping x, y, z
# for partial derivatives turns it into a gradient operator.

from bfun import solid_harmonic_monomials

for (a, b, c), coeff in sorted(solid_harmonic_monomials(2, 1).items()):
    print(f"x^{a} y^{b} z^{c}: {coeff:.6f}")

# %%
# Bessel polynomials
# ------------------
# The coefficients of Theta_n are integers; the first few rows:

from bfun import reduced_bessel, theta_coefficients

for n in range(5):
    print(n, theta_coefficients(n))

# %%
# Negative orders follow from k_(-nu)(z) = z^(-2 nu) k_nu(z); the three-term
# recurrence k_(nu+1) = 2 nu k_nu + z^2 k_(nu-1) ties the orders together.

z = 1.7
for nu in (0.5, 1.5, 2.5):
    lhs = reduced_bessel(nu + 1, z)
    rhs = 2 * nu * reduced_bessel(nu, z) + z * z * reduced_bessel(nu - 1, z)
    print(f"nu={nu}: {lhs:.15f} vs {rhs:.15f}")
