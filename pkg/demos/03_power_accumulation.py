"""Buying power: when does the AI stop, and when does it take everything?

The net haul from reaching power rank y is B(y) = (endowment mass below y)
minus the cost c(y).  A steep quadratic cost stops the AI halfway; a
quarter-strength cost satisfies both sufficient conditions for the
full-appropriation boundary y* = 1.  The dynamic bootstrap then checks the
path is actually walkable: each increment must be payable from resources
already reachable, which is impossible the moment c(0) > 0.
"""

import junglesim as js

uniform = js.constant(1.0)

for cost, label in (
    (js.quadratic(1.0), "c(s) = s^2   (steep)"),
    (js.quadratic(0.25), "c(s) = s^2/4 (cheap)"),
    (js.power(1.0, 3.0), "c(s) = s^3 with endowment f(s) = 2s"),
):
    endow = js.linear(2.0) if cost.family == "power" else uniform
    sol = js.optimize_power(endow, cost)
    print(f"{label}")
    print(f"  optimal rank y* = {sol.y_star:.6f}, net haul {sol.net_resources:.6f}, "
          f"sufficient condition: {sol.condition_verdict}")
    curve = {round(y, 2): b for y, b in sol.objective_curve}
    strip = " ".join(f"{curve[y]:+.2f}" for y in (0.0, 0.25, 0.5, 0.75, 1.0))
    print(f"  B(y) at 0, .25, .5, .75, 1:  {strip}")

print("\nbootstrap replay, cheap cost, step 0.01:")
path = js.simulate_accumulation_path(uniform, js.quadratic(0.25), 1.0, 0.01, 1.0)
print(f"  feasible to y = 1: {path.feasible} "
      f"({len(path.trajectory)} recorded steps)")

print("\nbootstrap with c(0) = 0.5:")
broken = js.simulate_accumulation_path(uniform, js.quadratic(1.0, 0.0, 0.5), 1.0, 0.01)
print(f"  feasible: {broken.feasible}, first failing step: {broken.first_failure}")
print("  the weakest appropriation must be free, or the ladder has no first rung")
