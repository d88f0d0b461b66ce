"""The best geometric base under errors, and why nothing does better.

Run:  python3 demos/02_optimal_strategy_and_lower_bound.py
"""
from raysearch import (ErrorModel, StrategySpec, char_roots, critical_constant, g_supremum,
                       lower_bound_via_positivity, minimize_h, optimal_alpha, optimal_factor,
                       recurrence_sequence, total_factor)

model = ErrorModel.percentual(0.2)
alpha = optimal_alpha(model)
print(f"delta=0.2: best base {alpha:.6f}, factor {optimal_factor(model).factor:.6f}")

# Numerical minimization of the geometric cost agrees with the closed form.
arg, value = minimize_h(model)
print(f"golden section: argmin {arg:.10f}, min {value:.10f}")

# The cost functional of the best base never exceeds its limit.
sup = g_supremum(StrategySpec.optimal_line(model), model, 60)
print(f"sup G over 60 steps {float(sup.value):.12f} -> factor {total_factor(model, float(sup.value)):.6f}")

# Lower bound: for c below the critical level the equality recurrence
# eventually goes negative, so no strategy can keep all its costs at c.
c_star = critical_constant(model)
print(f"\ncritical c {c_star:.10f}, bisection {lower_bound_via_positivity(model):.10f}")
print("double root at critical level:", char_roots(c_star, model).lam)
for frac in (0.8, 0.95, 0.99):
    r = recurrence_sequence(frac * c_star, model, 1.0, alpha, 10_000)
    print(f"c = {frac:.2f} c*: stayed positive {r.stayed_positive}, first sign change at {r.first_nonpositive_index}")
