"""Regenerate addition_cutoffs.json, the per-case l1 cutoffs L* for the
addition-theorem convergence check.

For each case the geometry is drawn from a seeded generator and the series
is summed up to l1 = 60; L* is the first cutoff whose relative error against
direct evaluation is at most 1e-8. Run from the repository root:

    python tests/fixtures/make_addition_cutoffs.py
"""

import itertools
import json
from pathlib import Path

import numpy as np

from bfun import BIndex, TruncationSpec, b_addition

TARGET = 1e-8
LMAX = 60
SEED = 4242


def unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def main():
    rng = np.random.default_rng(SEED)
    cases = []
    for (n, ell), alpha, rho in itertools.product(((1, 0), (2, 1), (3, 2)), (0.8, 1.0), (0.1, 0.3, 0.5)):
        for rep in range(3):
            m = int(rng.integers(-ell, ell + 1))
            r_large = rng.uniform(1.0, 3.0) * unit(rng)
            r_small = rho * np.linalg.norm(r_large) * unit(rng)
            _, report = b_addition(BIndex(n, ell, m, alpha), r_small, r_large, TruncationSpec(ell1_max=LMAX))
            hits = [c for c, e in enumerate(report.errors) if e <= TARGET]
            if not hits:
                raise SystemExit(f"case {(n, ell, m, alpha, rho, rep)} never reached {TARGET}")
            cases.append({
                "n": n, "l": ell, "m": m, "alpha": alpha, "rho": rho, "rep": rep,
                "r_small": r_small.tolist(), "r_large": r_large.tolist(),
                "l_star": hits[0], "error_at_l_star": report.errors[hits[0]],
            })
    out = Path(__file__).with_name("addition_cutoffs.json")
    out.write_text(json.dumps({"target": TARGET, "seed": SEED, "cases": cases}, indent=1) + "\n")
    print(f"wrote {len(cases)} cases to {out}")


if __name__ == "__main__":
    main()
