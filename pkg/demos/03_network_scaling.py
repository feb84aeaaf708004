"""
Scaling the network: more nodes, lower floor, same dictionary budget.

Sweeps the crescent classification task over network sizes and prints the
converged MSE floor and the average final dictionary size per algorithm.
The floor falls as the network grows because every extra node contributes
an independently-noised view of the same decision boundary; the fixed-budget
variant tracks the quantized one while never exceeding its entry budget.
Desk-scale settings, a couple of seconds per size.
"""

from dklms import harness
from dklms.presets import get_preset

SIZES = [2, 4, 8]
MC_RUNS = 20
ROUNDS = 800

if __name__ == "__main__":
    cfg = get_preset("crescent-fig7")
    cfg["monte_carlo_runs"] = MC_RUNS
    cfg["stream"]["rounds"] = ROUNDS
    result = harness.sweep_network_size(cfg, SIZES)

    print(f"crescent task, sizes {SIZES}, {MC_RUNS} runs x {ROUNDS} rounds, "
          f"budget {cfg['hyper']['budget']}\n")
    print(f"{'algorithm':<10} {'nodes':>5} {'mse floor':>10} {'avg dict':>9}")
    for row in result.rows:
        print(f"{row['algorithm']:<10} {row['node_count']:>5} "
              f"{row['mse_floor']:>10.4f} {row['avg_final_dict_size']:>9.1f}")

    for alg in cfg["algorithms"]:
        floors = [r["mse_floor"] for r in result.rows if r["algorithm"] == alg]
        trend = "falls" if floors[-1] < floors[0] else "does NOT fall"
        print(f"\n{alg}: floor {trend} as the network grows "
              f"({floors[0]:.4f} -> {floors[-1]:.4f})")
