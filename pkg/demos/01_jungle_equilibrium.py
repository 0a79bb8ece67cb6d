"""The jungle: resources flow to the strong until marginal appetite dies.

Three humans with strengths 0.2 / 0.5 / 0.8 start with one resource unit
each but want different amounts (capped utilities at 2 / 0.5 / 1.5).  The
strongest tops itself up from the weakest and stops at its cap.  Adding an
AI that outranks everyone and never satiates empties the economy into it.
"""

import junglesim as js
from junglesim.equilibrium import AI_ID, FREE_POOL_ID


def show(result, label):
    print(f"\n--- {label}")
    for agent_id, holding in sorted(result.allocation.holdings.items()):
        name = {AI_ID: "AI", FREE_POOL_ID: "free pool"}.get(agent_id, f"human {agent_id}")
        print(f"  {name:<10} holds {holding:.4f}")
    for t in result.allocation.appropriations:
        victim = {AI_ID: "AI", FREE_POOL_ID: "free pool"}.get(t.victim, f"human {t.victim}")
        print(f"  transfer: {t.amount:.4f} seized from {victim} "
              f"(fraction {t.fraction:.2f}) by agent {t.taker}")
    print(f"  certified deviation-free: {result.certified}")


humans = (
    js.AgentSpec(0, 0.2, 1.0, js.capped_linear(2.0)),
    js.AgentSpec(1, 0.5, 1.0, js.capped_linear(0.5)),
    js.AgentSpec(2, 0.8, 1.0, js.capped_linear(1.5)),
)

show(js.solve_jungle_equilibrium(js.Scenario(agents=humans)), "humans only")

greedy_ai = js.AISpec(utility=js.linear(1.0), strength=2.0)
scenario = js.Scenario(agents=humans, ai=greedy_ai)
show(js.solve_jungle_equilibrium(scenario), "insatiable AI, strength 2")
report = js.check_prop1(scenario)
print(f"  full-appropriation premises hold: {report.premises_hold}, "
      f"conclusion holds: {report.conclusion_holds}")

modest_ai = js.AISpec(utility=js.capped_linear(1.0), strength=2.0)
show(js.solve_jungle_equilibrium(js.Scenario(agents=humans, ai=modest_ai)),
     "satiable AI (cap 1): humans keep a sub-equilibrium")
