"""Tabulates the tightest (eps, delta)-DP statement of the Gaussian mechanism."""

import argparse

from renyi_dp import Gaussian, RdpCurve, optimal_eps_for_delta

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--sigma", type=float, nargs="+", default=[0.5, 1.0, 2.0, 5.0, 10.0])
parser.add_argument("--delta", type=float, default=1e-5)
args = parser.parse_args()

print("sigma,eps_grid,alpha_grid,eps_continuous,alpha_continuous")
for sigma in args.sigma:
    curve = RdpCurve.of(Gaussian(sigma))
    grid = optimal_eps_for_delta(curve, args.delta)
    cont = optimal_eps_for_delta(curve, args.delta, continuous=True)
    print(f"{sigma:g},{grid.eps:.6g},{grid.alpha:g},{cont.eps:.6g},{cont.alpha:.6g}")
