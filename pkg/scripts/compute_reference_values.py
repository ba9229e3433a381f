#!/usr/bin/env python3
"""Recompute the reference values frozen in tests/oracles.py.

Two independent routes for the pairwise double integral of monomials at
sigma = tau = 1, beta = 0.5:

* the rotation-invariant series expansion (tests/oracles.py), Richardson-
  extrapolated in the truncation length;
* brute-force tensor quadrature at 4x the default resolution.

Their agreement (about 1e-5 here, limited by the quadrature) is what
justifies pinning both numbers.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import pairwise_series_oracle, dirichlet_monomial_sq  # noqa: E402

from discop.norms import pairwise_difference_integral  # noqa: E402
from discop.series import TruncatedPowerSeries, eval_series  # noqa: E402


def main() -> int:
    sigma = tau = 1.0
    beta = 0.5
    q = 2.0 * (beta + 2.0)
    print(f"sigma = tau = {sigma}, beta = {beta} (p = 1, q = {q})\n")
    print(f"{'n':>2} {'series oracle':>20} {'quadrature 4x':>20} {'rel diff':>10} {'ratio':>12}")
    for n in range(1, 9):
        oracle = pairwise_series_oracle(n, sigma, tau, beta)
        series = TruncatedPowerSeries.monomial(n)
        quad = pairwise_difference_integral(
            lambda z: eval_series(series, z), sigma, tau, q, 128, 512
        )
        ratio = oracle / dirichlet_monomial_sq(n, 1.0)
        print(f"{n:>2} {oracle:>20.12e} {quad:>20.12e} {abs(quad-oracle)/oracle:>10.2e} {ratio:>12.8f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
