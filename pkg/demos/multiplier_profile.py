"""Profile of the radial factorization multiplier m.

The truncated Riesz transform factors through the full Riesz transform as
R_j^t = M^t(R_j), where M^t is a radial Fourier multiplier with profile
m(t |xi|).  This script tabulates m across the transition region
x ~ sqrt(d) for several dimensions and shows the three quantitative
bounds the library checks: the small-argument bound |m(x) - 1| <=
20 x / sqrt(d), the large-argument decay |m(x)| <= 6e4 sqrt(d) / x, and
the derivative bound |x m'(x)| <= 1e4.
"""

import math

import numpy as np

from rieszmax import (check_derivative, check_large_arg, check_small_arg,
                      m_eval, m_prime)


def main():
    dims = (4, 8, 16)
    xs = [0.0, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 20.0, 100.0]

    header = "x".rjust(8) + "".join(f"m(x) d={d}".rjust(14) for d in dims)
    print("radial multiplier profile (x = t |xi|, scaled frequency)")
    print(header)
    for x in xs:
        row = f"{x:8.2f}"
        for d in dims:
            row += f"{m_eval(d, x).value:14.6f}"
        print(row)

    print("\nbound margins at x = sqrt(d) / 2, 2 sqrt(d):")
    for d in dims:
        sq = math.sqrt(d)
        small = check_small_arg(d, sq / 2)
        large = check_large_arg(d, 2 * sq)
        deriv = check_derivative(d, sq)
        print(f"  d={d:2d}: small-arg margin {small.margin:10.3e}  "
              f"large-arg margin {large.margin:10.3e}  "
              f"derivative margin {deriv.margin:10.3e}")

    print("\nderivative near the transition (d = 8):")
    for x in np.geomspace(0.5, 8.0, 5):
        print(f"  x={x:7.3f}  m'(x) = {m_prime(8, float(x)): .6f}  "
              f"|x m'(x)| = {abs(x * m_prime(8, float(x))):.6f}")


if __name__ == "__main__":
    main()
