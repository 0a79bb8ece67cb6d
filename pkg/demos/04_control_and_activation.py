"""Why a production AI refuses to switch on a power specialist.

First the control-problem predicate: conflicting interests, an appetite
beyond the activator's reach, and superior power.  Then the activation
game: self-improvement only happens through specialist offspring, and a
power specialist would keep everything it grabs, so backward induction
activates the research specialist and never the power one, across any
nonnegative payoff parameterization.
"""

import numpy as np

import junglesim as js
from junglesim.control import RESEARCH, ROOT

scenario = js.Scenario(
    endowment=js.constant(1.0),
    human_utility=js.log(1.0),
    grid_n=101,
)

print("control-problem predicate, human activator of strength 0.5:")
ai = js.AISpec(utility=js.linear(1.0), strength=0.7)
report = js.check_control_problem(0.5, ai, scenario)
print(f"  interests differ: {report.cond_interests_differ}")
print(f"  appetite {report.ai_satiation} beyond reachable "
      f"{report.initial_agent_resources_below}: {report.cond_resources_exceed}")
print(f"  power exceeds activator: {report.cond_power_exceeds}")
print(f"  => control problem: {report.control_problem}")

print("\nsame AI but sharing the activator's utility: no conflict, no problem")
clone = js.AISpec(utility=js.log(1.0), strength=0.7)
print(f"  control problem: {js.check_control_problem(0.5, clone, scenario).control_problem}")

print("\nactivation game, research uplift 1.0 -> 1.5 paperclips:")
params = js.ActivationGameSpec(paperclips_base=1.0, paperclips_with_research=1.5)
game = js.build_activation_game(params, depth=2)
profile = js.solve_backward_induction(game)
print(f"  root plays {profile.actions[ROOT]!r}, research plays "
      f"{profile.actions[RESEARCH]!r}, root payoff {profile.payoffs[ROOT]}")
print(f"  power specialist on the path: {js.activates_power_on_path(game, profile)}")

print("\nsweeping 500 random payoff parameterizations:")
rng = np.random.default_rng(0)
sweep = [
    js.ActivationGameSpec(
        paperclips_base=float(rng.uniform(0, 3)),
        paperclips_with_research=float(rng.uniform(0, 3)),
        research_reward_with_resources=float(rng.uniform(0, 3)),
        research_reward_without=float(rng.uniform(0, 1)),
        power_payoff_scale=float(rng.uniform(0.01, 5)),
    )
    for _ in range(500)
]
result = js.verify_prop3(sweep)
print(f"  no power activation anywhere: {result.holds} "
      f"({len(result.counterexamples)} counterexamples)")
print("  the control problem binds the AI exactly as it binds the human,")
print("  so the AI self-regulates: research yes, power accumulation never")
