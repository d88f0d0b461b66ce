"""Cyclic search on m rays, with and without errors.

Run:  python3 demos/03_mray_search.py
"""
from raysearch import (ErrorAssignment, ErrorModel, GoalSpec, MonotonicityError, StrategySpec,
                       competitive_ratio, delta_max, execute_mray_walk, mray_factor)

print(" m   delta_max   factor(0)   factor(0.1)")
for m in range(2, 7):
    print(f"{m:2d}   {delta_max(m):9.6f}   {mray_factor(ErrorModel.percentual(0), m).factor:9.4f}"
          f"   {mray_factor(ErrorModel.percentual(0.1), m).factor:9.4f}")

m, model = 3, ErrorModel.percentual(0.2)
s = StrategySpec.mray(m)
trace = execute_mray_walk(s, m, ErrorAssignment.mray_worst_case(), model, GoalSpec.beyond_step(40))
print(f"\nm=3 delta=0.2 simulated {competitive_ratio(trace):.6f} vs closed form {mray_factor(model, m).factor:.6f}")

# Above delta_max a later excursion on a ray may fall short of an earlier one.
try:
    execute_mray_walk(s, m, ErrorAssignment.mray_worst_case(), ErrorModel.percentual(0.6),
                      GoalSpec.beyond_step(40))
except MonotonicityError as exc:
    print("delta=0.6:", exc)
