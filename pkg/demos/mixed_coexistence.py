"""TDMA and ALOHA at the same time.

With a TDMA node using a fraction p of the frame and ALOHA nodes with
probabilities q_i, the model-aware node always dodges the TDMA arrivals; in
the remaining slots it transmits when z >= 0 and stays silent otherwise.
The closed-form optimum is prod(1 - q_i) on the transmit branch and
p * prod(1 - q_i) + (1 - p) * sum_i q_i prod_{j != i} (1 - q_j) on the
silent branch. Both branches are exercised below.
"""
from uwmac import (AlohaRole, Delay, ModelAwareRole, NodeSpec, Scenario,
                   TdmaRole, TdmaSchedule, optimal_mixed, run)

print("closed-form optimum over a small (p, q) grid:")
for p in (0.0, 0.2, 0.5):
    for q in (0.2, 0.5, 0.8):
        result = optimal_mixed(p, [q])
        print(f"  p={p:.1f} q={q:.1f}: throughput={result.optimal_throughput:.3f} "
              f"({result.chosen_branch.value}, z={result.z_value:+.2f})")

cases = [
    # p = 0.2, q = 0.6: z < 0, the model-aware node stays silent
    Scenario((NodeSpec(0, Delay(1), ModelAwareRole()),
              NodeSpec(1, Delay(4), TdmaRole(TdmaSchedule(5, frozenset({0})))),
              NodeSpec(2, Delay(2), AlohaRole(0.6))), horizon=100_000, seed=31),
    # p = 0.25, q = 0.2: z > 0, it fills every non-TDMA slot
    Scenario((NodeSpec(0, Delay(1), ModelAwareRole()),
              NodeSpec(1, Delay(3), TdmaRole(TdmaSchedule(4, frozenset({0})))),
              NodeSpec(2, Delay(0), AlohaRole(0.2))), horizon=100_000, seed=32),
]
print("\nsimulation against the oracle:")
for scenario in cases:
    report = run(scenario)
    print(f"  p={scenario.tdma_frame_ratio:.2f} q={scenario.aloha_probs}: "
          f"empirical={report.empirical_throughput:.5f} "
          f"oracle={report.oracle.optimal_throughput:.3f} "
          f"({report.oracle.chosen_branch.value}) deviation={report.deviation:.5f}")
