#!/usr/bin/env python3
"""Independent high-precision references for the Gaussian CDF/quantile tests.

Uses mpmath at 50 digits; completely independent of the library's own
rational-approximation quantile. Run to regenerate the frozen constants in
tests/test_gauss.py and tests/test_certify.py.
"""

from mpmath import mp, mpf, erf, erfinv, sqrt

mp.dps = 50


def normal_cdf(x):
    return (1 + erf(mpf(x) / sqrt(2))) / 2


def normal_quantile(p):
    return sqrt(2) * erfinv(2 * mpf(p) - 1)


CASES_CDF = [-1, 1, -2.5, 0.1234]
CASES_QUANTILE = ["0.55", "0.99", "0.5441230120001192", "0.544", "0.546",
                  "0.75", "1e-8", "0.0061648"]

if __name__ == "__main__":
    for x in CASES_CDF:
        print(f"Phi({x}) = {normal_cdf(x)}")
    for p in CASES_QUANTILE:
        print(f"Phi^-1({p}) = {normal_quantile(p)}")
    print(f"Phi(Phi^-1(0.75) - 1) = {normal_cdf(normal_quantile('0.75') - 1)}")
