#!/usr/bin/env python3
"""High-precision references for the concentration-inequality golden values.

Direct evaluation of the DKW half-width and the Hoeffding margin with mpmath
at 50 digits. Run to regenerate the constants frozen in the tests.
"""

from mpmath import mp, mpf, log, sqrt, e

mp.dps = 50


def dkw_epsilon(alpha, m):
    return sqrt(log(2 / mpf(alpha)) / (2 * mpf(m)))


def hoeffding_margin(alpha, m, width=1):
    return mpf(width) * sqrt(log(1 / mpf(alpha)) / (2 * mpf(m)))


if __name__ == "__main__":
    print("dkw(0.001, 100000)      =", dkw_epsilon("0.001", 100000))
    print("dkw(2*e^-2, 50)         =", dkw_epsilon(2 / e**2, 50))
    print("dkw(1-1e-12, 10)        =", dkw_epsilon(1 - mpf("1e-12"), 10))
    print("hoeffding(0.001, 100000)=", hoeffding_margin("0.001", 100000))
