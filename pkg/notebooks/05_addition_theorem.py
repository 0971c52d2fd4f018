"""
Two-range addition theorem for B functions
==========================================

B(r_small + r_large) is written as a series in l1 whose terms separate the
two vectors. The series converges geometrically in |r_small| / |r_large|.
"""

# %%
import numpy as np

from bfun import BIndex, TruncationSpec, b_addition, b_eval

idx = BIndex(2, 1, 1, alpha=0.8)
r_large = np.array([0.6, 0.9, -1.1])
r_small = np.array([0.2, -0.1, 0.3])
value, report = b_addition(idx, r_small, r_large, TruncationSpec(ell1_max=20))
print("series:", value)
print("direct:", complex(b_eval(idx, r_small + r_large)))
for cutoff in (0, 2, 4, 8, 12, 16, 20):
    print(f"l1 <= {cutoff:2d}: relative error {report.errors[cutoff]:.2e}")

# %%
# Convergence slows as the two radii approach each other.

from bfun import convergence_table

unit = r_large / np.linalg.norm(r_large)
side = np.array([0.3, 0.9, 0.2])
side /= np.linalg.norm(side)
geometries = [(rho * np.linalg.norm(r_large) * side, r_large) for rho in (0.1, 0.3, 0.5, 0.7)]
for row in convergence_table(idx, geometries, [4, 8, 16]):
    print(f"ratio {row.ratio:.1f}  l1 <= {row.cutoff:2d}  error {row.rel_error:.2e}")

# %%
# Adaptive truncation
# -------------------
# Stop once two consecutive shells change the sum by less than the tolerance.

trunc = TruncationSpec(ell1_max=60, rel_tol=1e-14, mode="adaptive")
_, rep = b_addition(idx, r_small, r_large, trunc)
print("stopped after l1 =", rep.converged_at, "with error", rep.errors[-1])

# %%
# The operator form
# -----------------
# Before the inner sums are rearranged the theorem applies Y_l1^m1(grad) to
# B functions at r_large. Summing that form gives the same partial sums.

from bfun import b_addition_midform

mid = b_addition_midform(idx, r_small, r_large, TruncationSpec(ell1_max=8), shells=True)
print(max(abs(a - b) for a, b in zip(mid, report.partial_values[:9])))
