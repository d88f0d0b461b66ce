"""Enumerate every endpoint assignment and see which one the adversary picks.

Run:  python3 demos/04_brute_force_adversary.py
"""
from raysearch import ErrorModel, StrategySpec, brute_force_worst_ratio, doubling_ratio_chain
from raysearch.walk_sim import worst_case_bits

model = ErrorModel.percentual(0.25)
for j in (1, 2, 3):
    res = brute_force_worst_ratio(StrategySpec.doubling(), model, j)
    print(f"j={j}: {res.nodes} assignments, worst ratio {res.ratio:.8f}, "
          f"formula {doubling_ratio_chain(model, j, 0.0):.8f}")
    print("   chosen  :", "".join("+" if b else "-" for b in res.at_max))
    print("   rule    :", "".join("+" if b else "-" for b in worst_case_bits(res, res.segment_direction[-1])))
