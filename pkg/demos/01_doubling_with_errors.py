"""Doubling on a line when every move can be off by a fraction delta.

Run:  python3 demos/01_doubling_with_errors.py
"""
import numpy as np

from raysearch import (ErrorAssignment, ErrorModel, GoalSpec, StrategySpec,
                       competitive_ratio, doubling_factor, execute_line_walk)

# Without errors the classical 9 shows up as the goal creeps past a turning point.
s = StrategySpec.doubling()
model = ErrorModel.percentual(0.0)
for j in (2, 4, 8, 16):
    trace = execute_line_walk(s, ErrorAssignment.worst_case(s.direction(j)), model,
                              GoalSpec.beyond_step(j))
    print(f"just beyond step {j:2d}: ratio {competitive_ratio(trace):.6f}")

# With errors the adversary stretches moves away from the goal and shrinks
# those toward it.
print("\ndelta   closed form   simulated (j=40)")
for delta in np.linspace(0, 0.3, 7):
    model = ErrorModel.percentual(float(delta))
    trace = execute_line_walk(s, ErrorAssignment.worst_case(s.direction(40)), model,
                              GoalSpec.beyond_step(40))
    print(f"{delta:5.2f}   {doubling_factor(model).factor:11.6f}   {competitive_ratio(trace):.6f}")

# Past delta = 1/3 the walk loses ground every round: drift points the wrong way.
model = ErrorModel.percentual(0.4)
trace = execute_line_walk(s, ErrorAssignment.worst_case(1), model, GoalSpec.absolute(2.0), max_iter=40)
print("\ndelta=0.4 hit:", trace.hit)
print("positions after rounds 1..6:", np.round(trace.positions[:6], 3))
