"""Dimension-free behavior of the maximal truncated operators.

Sweeps the four maximal-operator norm ratios across dimensions at
roughly constant total grid size:

    r1: maximal factorization multiplier sup_t |M^t f|
    r2: maximal truncated Riesz transform sup_t |R_1^t f|
    r3: vector maximal transform sup_t (sum_j |R_j^t f|^2)^(1/2)
    r4: maximal conjugate Poisson operator

All four stay O(1) as the dimension grows -- the point of the
construction.  This demo uses a reduced truncation grid and small grids
to finish in seconds; the acceptance suite runs the full configuration.
"""

import numpy as np

from rieszmax import TruncationGrid, norm_ratio_sweep


def main():
    grid = TruncationGrid(-6, 3, depth=2)
    rep = norm_ratio_sweep([2, 4, 6, 8], {2: 32, 4: 8, 6: 6, 8: 4},
                           grid, 2.0, trials=3, seed=42)
    print("median norm ratios over 3 trials (reduced truncation grid):")
    print("   d      r1      r2      r3      r4")
    for d in (2, 4, 6, 8):
        meds = []
        for name in ("r1", "r2", "r3", "r4"):
            vals = [r["value"] for r in rep.rows
                    if r["quantity"] == name and r["d"] == d]
            meds.append(float(np.median(vals)))
        print(f"  {d:2d}  " + "  ".join(f"{v:6.3f}" for v in meds))


if __name__ == "__main__":
    main()
