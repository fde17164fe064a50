"""Prints the probability intervals implied by a (10, 0.1) RDP guarantee."""

from renyi_dp import OrdersGrid, RdpCurve, TabulatedRdp, probability_interval

curve = RdpCurve.of(TabulatedRdp((10.0,), (0.1,)))
for q in (0.5, 1e-3, 1e-6):
    r = probability_interval(curve, q, OrdersGrid((10.0,)))
    print(f"q = {q:<8g} Pr[f(D') in S] in [{r.lower:.3g}, {r.upper:.3g}]")
