"""
Exponential basis sets as finite B-function sums
================================================

Slater-type functions, hydrogenic eigenfunctions, Lambda functions and
Coulomb Sturmians are each a finite combination of B functions with the
same exponent.
"""

# %%
import numpy as np

from bfun import RadialBasisSpec, eval_direct, expansion_eval, to_b

for kind in ("slater", "hydrogenic", "lambda", "sturmian"):
    spec = RadialBasisSpec(kind, 3, 1, 0, 1.0)
    print(f"{kind:10s}", to_b(spec))

# %%
# Pointwise agreement with direct evaluation over a radial sweep.

radii = np.linspace(0.05, 10, 25)
pts = radii[:, None] * np.array([0.48, 0.6, 0.64])
for kind in ("slater", "hydrogenic", "lambda", "sturmian"):
    spec = RadialBasisSpec(kind, 4, 2, 1, 0.9)
    d = eval_direct(spec, pts)
    x = expansion_eval(to_b(spec), pts)
    print(f"{kind:10s} max relative deviation {np.max(np.abs(x - d) / np.abs(d)):.2e}")

# %%
# Normalization
# -------------
# Hydrogenic functions with the same l are orthonormal. Gauss-Laguerre
# quadrature is exact here because every integrand is a polynomial times
# an exponential.

from bfun import radial_direct

x, w = np.polynomial.laguerre.laggauss(60)
gram = np.zeros((3, 3))
for i, n1 in enumerate(range(2, 5)):
    for j, n2 in enumerate(range(2, 5)):
        a = RadialBasisSpec("hydrogenic", n1, 1, 0, 1.0)
        b = RadialBasisSpec("hydrogenic", n2, 1, 0, 1.0)
        s = a.alpha + b.alpha
        r = x / s
        gram[i, j] = np.sum(w * np.exp(x) * radial_direct(a, r) * radial_direct(b, r) * r * r) / s
print(np.round(gram, 12))
