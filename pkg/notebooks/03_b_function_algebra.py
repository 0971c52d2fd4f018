"""
B functions and their operators
===============================

B_{n,l}^m(alpha, r) combines a reduced Bessel function with a solid harmonic.
Derivative operators act on them by shifting indices, which is what makes
them convenient in multicenter work.
"""

# %%
import numpy as np

from bfun import BExpansion, BIndex, b_eval, b_fourier, expansion_eval, ladder_down, laplacian_power

idx = BIndex(2, 1, 0, alpha=1.3)
pts = np.array([[0.2, 0.1, 0.9], [1.0, -0.5, 0.3], [0.0, 0.0, 2.5]])
print(b_eval(idx, pts))

# %%
# The ladder operator (1 - laplacian/alpha^2) lowers n by one. A seven-point
# finite-difference Laplacian confirms it.

def laplacian(f, r, h=1e-3):
    out = -6 * f(r)
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = h
        out = out + f(r + e) + f(r - e)
    return out / h**2

f = lambda r: b_eval(idx, r)
lowered = expansion_eval(ladder_down(BExpansion.single(idx)), pts)
numeric = f(pts) - laplacian(f, pts) / idx.alpha**2
print(np.abs(lowered - numeric))

# %%
# Powers of the Laplacian are binomial sums over lowered orders.

print(laplacian_power(3, BIndex(4, 0, 0)))

# %%
# Spherical tensor gradient operator
# ----------------------------------
# Y_l1^m1(grad) applied to a B function gives a Gaunt-weighted sum of B
# functions. Some terms may have n + l < 0; those vanish away from the origin.

from bfun import TensorIndex, stgo_on_b

print(stgo_on_b(TensorIndex(2, 1), BIndex(1, 1, -1, 1.0)))

# %%
# Momentum space
# --------------
# The Fourier transform is a rational function times a solid harmonic.

for pz in (0.0, 0.5, 1.0, 4.0):
    print(pz, b_fourier(BIndex(1, 1, 0), [0.0, 0.0, pz]))
