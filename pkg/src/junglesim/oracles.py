"""Brute-force oracles, kept independent of the solvers they check.

Each solver in the package has a dumb counterpart here: dense-grid argmax
for the two investment problems, quadrature for integrals, and exhaustive
strategy enumeration for the activation game.  The test suite and the
``verify`` command compare solver output against these.
"""

from __future__ import annotations

import itertools

import numpy as np

from .control import (
    ACTIVATION_COUNT_BY_ACTION,
    ActivationGame,
    StrategyProfile,
    evaluate_history,
    is_equilibrium,
)
from .model import FunctionDescriptor, evaluate


def integral_by_simpson(fd: FunctionDescriptor, a: float, b: float, n: int = 4096) -> float:
    """Composite Simpson quadrature (n must be even)."""
    if b < a:
        raise ValueError("reversed range")
    if b == a:
        return 0.0
    xs = np.linspace(a, b, n + 1)
    ys = evaluate(fd, xs)
    h = (b - a) / n
    return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum()))


def power_grid_argmax(
    endowment: FunctionDescriptor,
    power_cost: FunctionDescriptor,
    points: int = 100001,
) -> tuple[float, float]:
    """Argmax of the net power haul by exhaustive evaluation."""
    ys = np.linspace(0.0, 1.0, points)
    mass = np.empty_like(ys)
    mass[0] = 0.0
    # cumulative trapezoid of the endowment: independent of the analytic path
    vals = evaluate(endowment, ys)
    mass[1:] = np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(ys))
    objective = mass - evaluate(power_cost, ys)
    i = int(np.argmax(objective))
    return float(ys[i]), float(objective[i])


def technology_grid_argmax(
    extraction: FunctionDescriptor,
    total_resources: float,
    hi: float = 10.0,
    step: float = 1e-4,
) -> tuple[float, float]:
    """Argmax of min(extraction, X) - investment by exhaustive evaluation."""
    lo, hi_dom = extraction.domain
    ts = np.arange(max(lo, 0.0), min(hi, hi_dom) + step / 2.0, step)
    net = np.minimum(evaluate(extraction, ts), total_resources) - ts
    i = int(np.argmax(net))
    return float(ts[i]), float(net[i])


def enumerate_strategy_profiles(game: ActivationGame):
    """Every pure assignment of actions to decision nodes."""
    deciders = [n for n in game.nodes if len(n.actions) >= 1 and n.actions != ()]
    ids = [n.id for n in deciders]
    for combo in itertools.product(*(n.actions for n in deciders)):
        yield dict(zip(ids, combo))


def best_profile_by_enumeration(game: ActivationGame) -> StrategyProfile:
    """Canonical equilibrium by exhaustive search.

    Scans the full profile table and selects, deepest node first, the action
    that is payoff-optimal in every subgame where that node moves, breaking
    ties toward fewer activations and then action order (indifference is
    resolved at the node that is indifferent, never globally).  The result
    must coincide with the solver's backward-induction output.
    """
    root = game.node(0)
    research = game.node(1)
    research_subgames = [a for a in ("activate-research", "activate-both")
                         if a in root.actions]

    def research_value(sub_root: str, action: str) -> float:
        return evaluate_history(game, {0: sub_root, 1: action})[1]

    canonical_research = None
    for action in research.actions:
        optimal_everywhere = all(
            research_value(sub, action)
            >= max(research_value(sub, alt) for alt in research.actions)
            for sub in research_subgames
        )
        if not optimal_everywhere:
            continue
        key = (ACTIVATION_COUNT_BY_ACTION[action], research.actions.index(action))
        if canonical_research is None or key < canonical_research[0]:
            canonical_research = (key, action)
    if canonical_research is None:
        raise RuntimeError("no research action is optimal across its subgames")
    research_action = canonical_research[1]

    best_root = None
    root_values = {
        a: evaluate_history(game, {0: a, 1: research_action})[0]
        for a in root.actions
    }
    top = max(root_values.values())
    for action in root.actions:
        if root_values[action] < top:
            continue
        key = (ACTIVATION_COUNT_BY_ACTION[action], root.actions.index(action))
        if best_root is None or key < best_root[0]:
            best_root = (key, action)
    actions = {0: best_root[1], 1: research_action}
    return StrategyProfile(
        actions=actions,
        payoffs=evaluate_history(game, actions),
        equilibrium=is_equilibrium(game, actions),
    )
