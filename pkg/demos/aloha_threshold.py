"""Sweep the ALOHA probability q and watch the optimal policy switch sides.

Against a single ALOHA node the model-aware node either transmits every slot
(q <= 0.5) or goes silent and leaves the channel to ALOHA (q > 0.5). The
optimal throughput is max(q, 1 - q): a V-shaped curve with its minimum 0.5 at
q = 0.5, which the simulation reproduces point by point.
"""
from uwmac import (AlohaRole, Delay, ModelAwareRole, NodeSpec, Scenario,
                   default_tolerance, sweep)

base = Scenario(
    nodes=(
        NodeSpec(0, Delay(1), ModelAwareRole()),
        NodeSpec(1, Delay(3), AlohaRole(0.5)),
    ),
    horizon=100_000,
    seed=2024,
)

grid = [("q", [round(0.1 * k, 1) for k in range(1, 10)])]
print(f"{'q':>4} {'empirical':>10} {'oracle':>8} {'branch':>9} {'dev':>9}")
for point in sweep(base, grid):
    report = point.report
    oracle = report.oracle
    tol = default_tolerance(oracle.optimal_throughput, report.measured_slots)
    flag = "" if report.deviation <= tol else "  <-- outside 4 sigma!"
    print(f"{point.params['q']:>4} {report.empirical_throughput:>10.5f} "
          f"{oracle.optimal_throughput:>8.3f} {oracle.chosen_branch.value:>9} "
          f"{report.deviation:>9.5f}{flag}")
