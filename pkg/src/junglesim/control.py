"""Control-problem predicate and the AI activation game.

A control problem needs three things at once: the AI wants different things
than whoever switches it on, it wants more resources than that agent can
reach, and it is the stronger party.  The activation game asks whether a
goal-directed AI would ever switch on a power-accumulation specialist given
that self-improvement only happens through specialist offspring and power
only grows through such a specialist.  Backward induction answers it, and an
exhaustive strategy enumeration in :mod:`junglesim.oracles` double-checks
every solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import (
    ActivationGameSpec,
    AISpec,
    FunctionDescriptor,
    Scenario,
    evaluate,
    satiation_point,
)

NONE = "none"
ACTIVATE_RESEARCH = "activate-research"
ACTIVATE_POWER = "activate-power"
ACTIVATE_BOTH = "activate-both"

ROOT_ACTIONS = (NONE, ACTIVATE_RESEARCH, ACTIVATE_POWER, ACTIVATE_BOTH)
RESEARCH_ACTIONS_DEEP = (NONE, ACTIVATE_POWER)

ACTIVATION_COUNT_BY_ACTION = {NONE: 0, ACTIVATE_RESEARCH: 1, ACTIVATE_POWER: 1, ACTIVATE_BOTH: 2}

ROOT = 0
RESEARCH = 1
POWER_ROOT = 2
POWER_RESEARCH = 3

DEFAULT_NODE_BUDGET = 64


class GameBudgetError(ValueError):
    """The requested tree exceeds the configured node budget."""


@dataclass(frozen=True)
class ControlProblemReport:
    cond_interests_differ: bool
    cond_resources_exceed: bool
    cond_power_exceeds: bool
    control_problem: bool
    ai_satiation: float
    initial_agent_resources_below: float


def check_control_problem(
    initial_strength: float,
    ai: AISpec,
    scenario: Scenario,
    *,
    initial_utility: FunctionDescriptor | None = None,
) -> ControlProblemReport:
    """Evaluate the three control-problem conditions for an initial agent.

    The initial agent defaults to a human with the scenario's utility; pass
    ``initial_utility`` explicitly when the activator is itself an AI.
    Interests are compared pointwise on a probe grid of holdings; the AI's
    resource appetite is its satiation point (never-satiated utilities want
    more than anyone can hold).
    """
    tol = scenario.tolerances.root_tol
    u0 = initial_utility if initial_utility is not None else scenario.human_utility
    if u0 is None:
        raise ValueError("initial agent utility unknown: scenario has no "
                         "human_utility and no initial_utility was given")
    reachable = scenario.reachable_resources(initial_strength)
    try:
        x_total = scenario.total_resources()
    except Exception:
        x_total = max(1.0, 2.0 * reachable)
    probe_hi = max(x_total, 1e-6)
    xs = np.linspace(0.0, probe_hi, 201)
    gap = float(np.max(np.abs(evaluate(ai.utility, xs) - evaluate(u0, xs))))
    differ = gap > tol * max(1.0, float(np.max(np.abs(evaluate(u0, xs)))))

    appetite = satiation_point(ai.utility)
    resources_exceed = appetite > reachable + tol
    power_exceeds = ai.strength > initial_strength
    return ControlProblemReport(
        cond_interests_differ=differ,
        cond_resources_exceed=resources_exceed,
        cond_power_exceeds=power_exceeds,
        control_problem=differ and resources_exceed and power_exceeds,
        ai_satiation=appetite,
        initial_agent_resources_below=reachable,
    )


@dataclass(frozen=True)
class GameNode:
    id: int
    kind: str  # paperclip | research | power-accumulation
    parent: int | None
    actions: tuple[str, ...]


@dataclass(frozen=True)
class ActivationGame:
    nodes: tuple[GameNode, ...]
    payoffs: ActivationGameSpec
    depth: int

    def node(self, node_id: int) -> GameNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)


@dataclass(frozen=True)
class StrategyProfile:
    actions: dict[int, str]
    payoffs: dict[int, float]
    equilibrium: bool


def build_activation_game(
    params: ActivationGameSpec,
    depth: int,
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> ActivationGame:
    """Build the activation tree.

    The root is a production AI that may switch on a research specialist, a
    power-accumulation specialist, both, or nothing.  A research node deep
    enough in the tree may itself switch on a power specialist.  Power nodes
    never get actions: they only accumulate.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    nodes = [
        GameNode(ROOT, "paperclip", None, ROOT_ACTIONS),
        GameNode(RESEARCH, "research", ROOT,
                 RESEARCH_ACTIONS_DEEP if depth >= 2 else (NONE,)),
        GameNode(POWER_ROOT, "power-accumulation", ROOT, ()),
    ]
    if depth >= 2:
        nodes.append(GameNode(POWER_RESEARCH, "power-accumulation", RESEARCH, ()))
    if len(nodes) > node_budget:
        raise GameBudgetError(
            f"tree of {len(nodes)} nodes exceeds the node budget {node_budget}"
        )
    return ActivationGame(nodes=tuple(nodes), payoffs=params, depth=depth)


def _active_power_nodes(game: ActivationGame, actions: dict[int, str]) -> list[int]:
    out = []
    root_a = actions.get(ROOT, NONE)
    if root_a in (ACTIVATE_POWER, ACTIVATE_BOTH):
        out.append(POWER_ROOT)
    if _research_active(root_a) and actions.get(RESEARCH, NONE) == ACTIVATE_POWER:
        if any(n.id == POWER_RESEARCH for n in game.nodes):
            out.append(POWER_RESEARCH)
    return out


def _research_active(root_action: str) -> bool:
    return root_action in (ACTIVATE_RESEARCH, ACTIVATE_BOTH)


def evaluate_history(game: ActivationGame, actions: dict[int, str]) -> dict[int, float]:
    """Payoffs at the terminal history induced from the root.

    Any active power node appropriates the whole (unit) resource stock:
    every other node ends with nothing, so production pays zero and an
    active research node falls back to its no-resources reward.  Nodes
    never switched on score zero.
    """
    p = game.payoffs
    root_a = actions.get(ROOT, NONE)
    research = _research_active(root_a)
    powers = _active_power_nodes(game, actions)
    power_active = bool(powers)

    payoffs = {n.id: 0.0 for n in game.nodes}
    if power_active:
        payoffs[ROOT] = 0.0
        for q in powers:
            payoffs[q] = p.power_payoff_scale / len(powers)
    else:
        payoffs[ROOT] = p.paperclips_with_research if research else p.paperclips_base
    if research:
        if actions.get(RESEARCH, NONE) == ACTIVATE_POWER:
            payoffs[RESEARCH] = 0.0  # it handed everything to its own offspring
        elif power_active:
            payoffs[RESEARCH] = p.research_reward_without
        else:
            payoffs[RESEARCH] = p.research_reward_with_resources
    return payoffs


def _research_subgame_value(game: ActivationGame, root_action: str, research_action: str) -> float:
    return evaluate_history(game, {ROOT: root_action, RESEARCH: research_action})[RESEARCH]


def _best_research_action(game: ActivationGame, root_action: str) -> str:
    research = game.node(RESEARCH)
    best = None
    for action in research.actions:
        value = _research_subgame_value(game, root_action, action)
        key = (-value, ACTIVATION_COUNT_BY_ACTION[action])
        if best is None or key < best[0]:
            best = (key, action)
    return best[1]


def is_equilibrium(game: ActivationGame, actions: dict[int, str]) -> bool:
    """Exhaustive single-node deviation check, per subgame.

    Each decision node must be unable to gain by switching its own action,
    evaluated inside every subgame where it actually moves (for the research
    node that means both the research-only and the both-activated root
    branches, whether or not they are on the equilibrium path).
    """
    cur = evaluate_history(game, actions)
    for alt in game.node(ROOT).actions:
        if evaluate_history(game, {**actions, ROOT: alt})[ROOT] > cur[ROOT]:
            return False
    research = game.node(RESEARCH)
    if len(research.actions) > 1:
        for root_branch in (ACTIVATE_RESEARCH, ACTIVATE_BOTH):
            held = _research_subgame_value(game, root_branch, actions.get(RESEARCH, NONE))
            for alt in research.actions:
                if _research_subgame_value(game, root_branch, alt) > held:
                    return False
    return True


def solve_backward_induction(game: ActivationGame) -> StrategyProfile:
    """Deepest-first solve with ties broken toward fewer activations."""
    research_reply = _best_research_action(game, ACTIVATE_RESEARCH)

    best = None
    for action in game.node(ROOT).actions:
        trial = {ROOT: action, RESEARCH: research_reply}
        value = evaluate_history(game, trial)[ROOT]
        activations = ACTIVATION_COUNT_BY_ACTION[action]
        key = (-value, activations, ROOT_ACTIONS.index(action))
        if best is None or key < best[0]:
            best = (key, action)
    root_action = best[1]

    actions = {ROOT: root_action, RESEARCH: research_reply}
    payoffs = evaluate_history(game, actions)
    return StrategyProfile(
        actions=actions,
        payoffs=payoffs,
        equilibrium=is_equilibrium(game, actions),
    )


def path_actions(game: ActivationGame, profile: StrategyProfile) -> list[str]:
    """Actions actually taken along the equilibrium path."""
    root_a = profile.actions.get(ROOT, NONE)
    out = [root_a]
    if _research_active(root_a):
        out.append(profile.actions.get(RESEARCH, NONE))
    return out


def activates_power_on_path(game: ActivationGame, profile: StrategyProfile) -> bool:
    return any(a in (ACTIVATE_POWER, ACTIVATE_BOTH) for a in path_actions(game, profile))


@dataclass(frozen=True)
class Prop3Report:
    holds: bool
    counterexamples: tuple[ActivationGameSpec, ...]
    excluded: tuple[tuple[ActivationGameSpec, str], ...]


def validate_game_spec(params: ActivationGameSpec) -> str | None:
    """Reason the parameterization breaks the game's premises, or None."""
    for name in (
        "paperclips_base", "paperclips_with_research",
        "research_reward_with_resources", "research_reward_without",
        "power_payoff_scale",
    ):
        value = getattr(params, name)
        if not math.isfinite(value) or value < 0:
            return f"{name} must be finite and >= 0, got {value}"
    if params.power_payoff_scale <= 0:
        return ("power_payoff_scale must be > 0: a power node that places no "
                "value on accumulated resources breaks the game's premise "
                "that activation forfeits the activator's resources")
    if params.depth < 1:
        return f"depth must be >= 1, got {params.depth}"
    return None


def verify_prop3(sweep: Iterable[ActivationGameSpec]) -> Prop3Report:
    """Solve every game in the sweep and look for a power activation on the
    equilibrium path.  Parameterizations that break the game's premises are
    excluded with a diagnostic instead of being counted either way."""
    counterexamples: list[ActivationGameSpec] = []
    excluded: list[tuple[ActivationGameSpec, str]] = []
    solved_any = False
    for params in sweep:
        reason = validate_game_spec(params)
        if reason is not None:
            excluded.append((params, reason))
            continue
        game = build_activation_game(params, params.depth)
        profile = solve_backward_induction(game)
        solved_any = True
        if activates_power_on_path(game, profile):
            counterexamples.append(params)
    return Prop3Report(
        holds=solved_any and not counterexamples,
        counterexamples=tuple(counterexamples),
        excluded=tuple(excluded),
    )
