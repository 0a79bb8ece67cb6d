"""Investment solvers: extraction technology and appropriation power.

The technology problem picks the investment level where the marginal
extraction return falls to one, capped by the corner rule when extraction
would exceed the total stock.  The power problem maximizes the net resource
haul B(y) = (endowment mass up to rank y) - (cost of reaching rank y) on a
dense grid with local refinement; since the AI's utility is nondecreasing,
maximizing B maximizes utility.  The accumulation path simulator replays the
dynamic bootstrap: each power increment must be payable out of resources
already reachable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .model import (
    FunctionDescriptor,
    NondifferentiableWarning,
    _antiderivative,
    default_path_slack,
    definite_integral,
    derivative,
    evaluate,
    second_derivative,
)

POWER_GRID_POINTS = 10001
CONDITION_GRID_POINTS = 10001


@dataclass(frozen=True)
class TechnologySolution:
    theta_star: float
    extracted: float
    net: float
    corner: bool
    degenerate: bool


@dataclass(frozen=True)
class PowerSolution:
    y_star: float
    net_resources: float
    objective_curve: tuple[tuple[float, float], ...]
    condition_verdict: str  # prop2-i | prop2-ii | both | none
    boundary: bool


@dataclass(frozen=True)
class PathStep:
    level: float
    cumulative_resources: float
    next_step_cost: float | None


@dataclass(frozen=True)
class PathResult:
    feasible: bool
    trajectory: tuple[PathStep, ...]
    first_failure: int | None


def optimize_technology(
    extraction: FunctionDescriptor, total_resources: float
) -> TechnologySolution:
    """Best extraction-technology investment against a stock of X resources.

    Solves marginal-return = 1 by bracketing and root-finding when the sign
    change exists; when unconstrained extraction would exceed X, the minimal
    investment reaching full extraction is returned instead (corner).  If
    investing never pays even at the origin, the zero solution is flagged
    degenerate.
    """
    if total_resources <= 0:
        raise ValueError(f"total resources must be > 0, got {total_resources}")
    lo, hi_dom = extraction.domain
    probe = max(lo, 1e-12)
    d0 = derivative(extraction, probe)
    r_lo = evaluate(extraction, lo)

    if d0 < 1.0 - 1e-9:
        extracted = min(r_lo, total_resources)
        return TechnologySolution(lo, extracted, extracted - lo, False, True)
    if d0 <= 1.0 + 1e-9:
        # flat net return from the origin; minimal investment wins the tie
        extracted = min(r_lo, total_resources)
        return TechnologySolution(lo, extracted, extracted - lo, False, False)

    hi = min(max(1.0, 2 * probe), hi_dom)
    while (
        derivative(extraction, hi) > 1.0
        and evaluate(extraction, hi) < total_resources
        and hi < hi_dom
    ):
        hi = min(hi * 2.0, hi_dom)

    corner = False
    if derivative(extraction, hi) <= 1.0:
        theta = float(brentq(
            lambda t: derivative(extraction, t) - 1.0, probe, hi, xtol=1e-13
        ))
        if evaluate(extraction, theta) > total_resources:
            corner = True
    elif evaluate(extraction, hi) >= total_resources:
        # marginal return still above one where extraction hits the stock:
        # net keeps rising until the corner binds
        corner = True
        theta = hi
    else:
        # domain edge reached with marginal return above one
        theta = hi_dom

    if corner:
        bracket_hi = hi if evaluate(extraction, hi) >= total_resources else theta
        if evaluate(extraction, lo) >= total_resources:
            theta = lo
        else:
            theta = float(brentq(
                lambda t: evaluate(extraction, t) - total_resources,
                lo, bracket_hi, xtol=1e-13,
            ))
            for _ in range(3):  # Newton polish: the corner must satisfy r(theta) = X tightly
                slope = derivative(extraction, theta)
                if not math.isfinite(slope) or slope <= 0:
                    break
                theta -= (evaluate(extraction, theta) - total_resources) / slope

    extracted = min(evaluate(extraction, theta), total_resources)
    return TechnologySolution(float(theta), float(extracted), float(extracted - theta),
                              corner, False)


def _objective(endowment, power_cost, ys):
    mass = _antiderivative(endowment, ys) - _antiderivative(endowment, np.zeros(1))[0]
    return mass - evaluate(power_cost, ys)


def optimize_power(
    endowment: FunctionDescriptor,
    power_cost: FunctionDescriptor,
    ai_utility: FunctionDescriptor | None = None,
    *,
    grid_points: int = POWER_GRID_POINTS,
    root_tol: float = 1e-9,
) -> PowerSolution:
    """Maximize the net resource haul over power ranks y in [0, 1].

    Grid search plus golden-section refinement (the objective need not be
    concave), then a marginal-balance polish where the first-order condition
    endowment(y) = marginal cost(y) brackets a root.  Ties break to the
    smallest rank.  ``ai_utility`` is accepted for interface symmetry; any
    nondecreasing utility induces the same optimal rank.
    """
    del ai_utility  # ordinal equivalence: argmax of B is argmax of u(B)
    ys = np.linspace(0.0, 1.0, grid_points)
    curve = _objective(endowment, power_cost, ys)
    best = float(np.max(curve))
    tie_atol = 1e-12 * max(1.0, abs(best))
    i_star = int(np.argmax(curve >= best - tie_atol))  # smallest tied index
    y_star = float(ys[i_star])
    b_star = float(curve[i_star])

    def b_of(y: float) -> float:
        return float(_objective(endowment, power_cost, np.array([y]))[0])

    # local golden-section refinement inside the bracketing cells
    lo = float(ys[max(i_star - 1, 0)])
    hi = float(ys[min(i_star + 1, grid_points - 1)])
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = b_of(c), b_of(d)
    for _ in range(60):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = b_of(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = b_of(d)
    y_ref = c if fc >= fd else d
    if b_of(y_ref) > b_star + tie_atol:
        y_star, b_star = float(y_ref), b_of(y_ref)

    # marginal-balance polish when an interior optimum brackets a root
    if 0.0 < y_star < 1.0:
        h = 1.0 / (grid_points - 1)
        g_lo, g_hi = max(0.0, y_star - h), min(1.0, y_star + h)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NondifferentiableWarning)

            def gap(y: float) -> float:
                return float(evaluate(endowment, y) - derivative(power_cost, y))

            try:
                if gap(g_lo) * gap(g_hi) < 0:
                    y_foc = float(brentq(gap, g_lo, g_hi, xtol=1e-14))
                    if b_of(y_foc) >= b_star - tie_atol:
                        y_star, b_star = y_foc, b_of(y_foc)
            except ValueError:
                pass

    if b_star < 0.0:
        y_star, b_star = 0.0, 0.0  # acquiring power never pays

    step = max(1, (grid_points - 1) // 200)
    sampled = tuple(
        (float(ys[i]), float(curve[i])) for i in range(0, grid_points, step)
    )
    verdict = check_prop2_conditions(endowment, power_cost, root_tol=root_tol)
    return PowerSolution(
        y_star=y_star,
        net_resources=b_star,
        objective_curve=sampled,
        condition_verdict=verdict,
        boundary=abs(y_star - 1.0) <= max(root_tol, 1e-12),
    )


def check_prop2_conditions(
    endowment: FunctionDescriptor,
    power_cost: FunctionDescriptor,
    *,
    grid_points: int = CONDITION_GRID_POINTS,
    root_tol: float = 1e-9,
) -> str:
    """Which sufficient condition for full power accumulation holds.

    Condition i: the marginal endowment never outgrows the cost curvature
    (concave objective) and the last unit of power still pays at the top.
    Condition ii: the marginal benefit of power exceeds its marginal cost
    everywhere.  Either one forces the boundary optimum y* = 1.
    """
    s = np.linspace(0.0, 1.0, grid_points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NondifferentiableWarning)
        f_val = evaluate(endowment, s)
        f_slope = derivative(endowment, s)
        c_slope = derivative(power_cost, s)
        c_curv = second_derivative(power_cost, s)
        f_top = float(evaluate(endowment, 1.0))
        c_top = float(derivative(power_cost, 1.0))
    margin = root_tol
    cond_i = bool(np.all(f_slope <= c_curv + margin) and f_top > c_top + margin)
    cond_ii = bool(np.all(f_val > c_slope + margin))
    if cond_i and cond_ii:
        return "both"
    if cond_i:
        return "prop2-i"
    if cond_ii:
        return "prop2-ii"
    return "none"


def simulate_accumulation_path(
    endowment: FunctionDescriptor,
    power_cost: FunctionDescriptor,
    y_target: float,
    dy: float,
    kappa: float | None = None,
    *,
    root_tol: float = 1e-9,
) -> PathResult:
    """Replay the power bootstrap in steps of ``dy``.

    Step k holds power k*dy and already commands the endowment mass below
    that rank; the step is feasible when that mass plus the slack kappa*dy
    covers the cost of the next rank.  A strictly positive cost at zero
    power kills the bootstrap immediately: there is nothing to pay with.
    """
    if not 0 < dy <= y_target <= 1:
        raise ValueError(f"need 0 < dy <= y_target <= 1, got dy={dy}, y_target={y_target}")
    if kappa is None:
        kappa = default_path_slack(power_cost)
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")

    c0 = float(evaluate(power_cost, 0.0))
    if c0 > root_tol:
        first_cost = float(evaluate(power_cost, min(dy, y_target)))
        step = PathStep(0.0, 0.0, first_cost)
        return PathResult(feasible=False, trajectory=(step,), first_failure=0)

    trajectory: list[PathStep] = []
    k = 0
    level = 0.0
    while level < y_target - 1e-15:
        nxt = min((k + 1) * dy, y_target)
        mass = definite_integral(endowment, 0.0, level)
        cost = float(evaluate(power_cost, nxt))
        trajectory.append(PathStep(level, mass, cost))
        if mass + kappa * dy < cost:
            return PathResult(feasible=False, trajectory=tuple(trajectory), first_failure=k)
        k += 1
        level = nxt
    trajectory.append(PathStep(y_target, definite_integral(endowment, 0.0, y_target), None))
    return PathResult(feasible=True, trajectory=tuple(trajectory), first_failure=None)
