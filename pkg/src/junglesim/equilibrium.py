"""Jungle equilibrium of a discretized scenario.

Resources move only through appropriation: a stronger agent may seize any
fraction of a weaker agent's holdings at no cost.  The solver runs a single
greedy pass in descending strength; each agent drains the free pool first and
then strictly weaker agents, weakest victim first, until its marginal utility
drops to the tolerance or nothing weaker is left.  The result is certified
against the deviation-based definition: no agent can still gain by taking any
positive fraction from a strictly weaker agent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    FunctionDescriptor,
    Scenario,
    ScenarioError,
    depletion_level,
    derivative,
    validate_scenario,
)

AI_ID = -1
FREE_POOL_ID = -2


@dataclass(frozen=True)
class Transfer:
    """One appropriation: ``fraction`` is the share of the victim's holding
    at the moment of seizure, in (0, 1]."""

    taker: int
    victim: int
    amount: float
    fraction: float


@dataclass
class Allocation:
    """Holdings per agent id.  The AI uses ``AI_ID`` and the unclaimed free
    pool sits under ``FREE_POOL_ID`` so feasibility can be checked by sum."""

    holdings: dict[int, float]
    appropriations: list[Transfer]

    def total(self) -> float:
        return float(sum(self.holdings.values()))


@dataclass
class EquilibriumResult:
    allocation: Allocation
    satiated: set[int]
    iterations: int
    certified: bool


@dataclass
class _Actor:
    id: int
    strength: float
    utility: FunctionDescriptor
    holding: float


def _roster(scenario: Scenario) -> list[_Actor]:
    actors = [
        _Actor(a.id, a.strength, a.utility, a.endowment)
        for a in scenario.human_agents()
    ]
    if scenario.ai is not None:
        if any(a.strength == scenario.ai.strength for a in actors):
            raise ScenarioError(
                [f"ai.strength: ties a human agent at {scenario.ai.strength}; "
                 "the power ordering must be strict"]
            )
        actors.append(_Actor(AI_ID, scenario.ai.strength, scenario.ai.utility, 0.0))
    actors.sort(key=lambda a: a.strength)
    return actors


def solve_jungle_equilibrium(scenario: Scenario) -> EquilibriumResult:
    """Greedy appropriation pass in descending strength, then certification."""
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError(violations)
    tol = scenario.tolerances.root_tol
    ascending = _roster(scenario)
    pool = scenario.free_pool
    transfers: list[Transfer] = []
    turns = 0

    # Victims are drained weakest-first, so zero holdings form a prefix of
    # the ascending order and stay zero for every later taker; a shared
    # cursor past that prefix keeps the pass near-linear.
    start = 0
    for taker in sorted(ascending, key=lambda a: -a.strength):
        turns += 1
        target = depletion_level(taker.utility, tol)
        need = target - taker.holding
        if need <= 0:
            continue
        if pool > 0:
            amount = min(need, pool)
            transfers.append(Transfer(taker.id, FREE_POOL_ID, amount, amount / pool))
            pool -= amount
            taker.holding += amount
            need -= amount
        while start < len(ascending) and ascending[start].holding <= 0:
            start += 1
        idx = start
        while need > 0 and idx < len(ascending):
            victim = ascending[idx]
            if victim.strength >= taker.strength:
                break
            if victim.holding > 0:
                amount = min(need, victim.holding)
                transfers.append(
                    Transfer(taker.id, victim.id, amount, amount / victim.holding)
                )
                victim.holding -= amount
                taker.holding += amount
                need -= amount
            idx += 1
        if need <= 0:
            # demand met: land exactly on the depletion level so the marginal
            # test cannot fire on accumulated rounding a few ulps below it
            taker.holding = target

    holdings = {a.id: a.holding for a in ascending}
    holdings[FREE_POOL_ID] = pool
    allocation = Allocation(holdings=holdings, appropriations=transfers)
    satiated = {
        a.id for a in ascending if derivative(a.utility, a.holding) <= tol
    }
    deviation = find_profitable_deviation(scenario, allocation)
    return EquilibriumResult(
        allocation=allocation,
        satiated=satiated,
        iterations=turns,
        certified=deviation is None,
    )


def find_profitable_deviation(
    scenario: Scenario, allocation: Allocation
) -> tuple[int, int] | None:
    """First agent (descending strength) that gains by seizing a positive
    fraction of some strictly weaker holding; the weakest victim is named."""
    tol = scenario.tolerances.root_tol
    actors = _roster(scenario)
    for a in actors:
        a.holding = allocation.holdings.get(a.id, 0.0)
    pool = allocation.holdings.get(FREE_POOL_ID, 0.0)
    for taker in sorted(actors, key=lambda a: -a.strength):
        if derivative(taker.utility, taker.holding) <= tol:
            continue
        if pool > tol:
            return (taker.id, FREE_POOL_ID)
        for victim in actors:
            if victim.strength >= taker.strength:
                break
            if victim.holding > tol:
                return (taker.id, victim.id)
    return None


@dataclass(frozen=True)
class Prop1Report:
    premises_hold: bool
    conclusion_holds: bool


def check_prop1(scenario: Scenario) -> Prop1Report:
    """Premises: the AI outranks every human and still values the marginal
    unit at the total stock X.  Conclusion: the solver hands the AI all of X.
    Both sides are reported so the implication itself is testable."""
    tol = scenario.tolerances.root_tol
    x_total = scenario.total_resources()
    humans = scenario.human_agents()
    premises = False
    if scenario.ai is not None:
        max_strength = max((a.strength for a in humans), default=0.0)
        premises = (
            scenario.ai.strength > max_strength
            and derivative(scenario.ai.utility, x_total) > tol
        )
    conclusion = False
    if scenario.ai is not None:
        result = solve_jungle_equilibrium(scenario)
        ai_holding = result.allocation.holdings.get(AI_ID, 0.0)
        conclusion = abs(ai_holding - x_total) <= 1e-9 * max(1.0, x_total)
    return Prop1Report(premises_hold=premises, conclusion_holds=conclusion)
