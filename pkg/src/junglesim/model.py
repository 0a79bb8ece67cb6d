"""Function families and scenario data shared by every solver.

A scenario bundles an endowment profile over agent strengths, a free resource
pool, utilities for humans and the AI, an extraction technology, and a power
cost schedule.  All of these are declared as parameterized scalar function
families so that scenarios stay serializable and expected values stay exact.

Everything here is immutable after construction and safe to share across
concurrent workers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

FAMILIES = (
    "constant",
    "linear",
    "power",
    "quadratic",
    "exponential",
    "log",
    "capped-linear",
    "piecewise-linear-table",
)

# (min params, max params) accepted per family
_ARITY = {
    "constant": (1, 1),
    "linear": (1, 2),
    "power": (2, 2),
    "quadratic": (1, 3),
    "exponential": (2, 2),
    "log": (1, 2),
    "capped-linear": (1, 2),
    "piecewise-linear-table": (4, None),
}


class DomainError(ValueError):
    """An argument fell outside a descriptor's domain, or an integration
    range was empty or reversed.  The message names the offending value."""


class ScenarioError(ValueError):
    """A scenario failed construction or validation.

    Carries the list of individual violations in ``violations``.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NondifferentiableWarning(UserWarning):
    """A derivative was requested at a kink of a piecewise table; the
    one-sided (right, or left at the final knot) slope is returned."""


@dataclass(frozen=True)
class FunctionDescriptor:
    """A scalar function drawn from a closed set of parameterized families.

    Families and their parameter conventions (x is the argument):

    ==========================  =========================================
    constant [c]                c
    linear [m] or [m, b]        m*x + b          (b defaults to 0)
    power [a, b]                a * x**b         (b >= 0, domain x >= 0)
    quadratic [a], [a,b],
              [a,b,c]           a*x**2 + b*x + c
    exponential [s, r]          s * (1 - exp(-r*x))   (saturating, r > 0)
    log [a] or [a, b]           a * log(1 + b*x)      (b defaults to 1)
    capped-linear [cap] or
                  [cap, m]      m * min(x, cap)       (m defaults to 1)
    piecewise-linear-table
      [x0, y0, x1, y1, ...]     linear interpolation between knots
    ==========================  =========================================

    ``domain`` is a closed interval; ``math.inf`` is allowed as the upper
    end.  Evaluation outside the domain raises :class:`DomainError`.
    """

    family: str
    params: tuple[float, ...]
    domain: tuple[float, float] = (0.0, INF)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown function family {self.family!r}")
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        lo, hi = (float(self.domain[0]), float(self.domain[1]))
        lo_req, hi_req = _ARITY[self.family]
        if len(params) < lo_req or (hi_req is not None and len(params) > hi_req):
            raise ValueError(
                f"{self.family}: expected between {lo_req} and {hi_req or 'any'} "
                f"params, got {len(params)}"
            )
        if not all(math.isfinite(p) for p in params):
            raise ValueError(f"{self.family}: params must be finite, got {params}")
        if self.family == "piecewise-linear-table":
            if len(params) % 2 != 0:
                raise ValueError("piecewise-linear-table: params must be (x, y) pairs")
            xs = params[0::2]
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise ValueError("piecewise-linear-table: knot x values must strictly increase")
            lo = max(lo, xs[0])
            hi = min(hi, xs[-1])
        if self.family == "power":
            if params[1] < 0:
                raise ValueError("power: exponent must be >= 0")
            lo = max(lo, 0.0)
        if self.family == "log":
            b = params[1] if len(params) > 1 else 1.0
            if b <= 0:
                raise ValueError("log: rate must be > 0")
            lo = max(lo, 0.0)
        if self.family == "exponential" and params[1] <= 0:
            raise ValueError("exponential: rate must be > 0")
        if self.family == "capped-linear" and params[0] < 0:
            raise ValueError("capped-linear: cap must be >= 0")
        if not lo < hi:
            raise ValueError(f"{self.family}: empty domain [{lo}, {hi}]")
        object.__setattr__(self, "domain", (lo, hi))

    def to_dict(self) -> dict:
        doc: dict = {"family": self.family, "params": list(self.params)}
        if self.domain != (0.0, INF):
            lo, hi = self.domain
            doc["domain"] = [lo, None if math.isinf(hi) else hi]
        return doc


def constant(c: float, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("constant", (c,), **kw)


def linear(slope: float, intercept: float = 0.0, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("linear", (slope, intercept), **kw)


def power(scale: float, exponent: float, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("power", (scale, exponent), **kw)


def quadratic(a: float, b: float = 0.0, c: float = 0.0, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("quadratic", (a, b, c), **kw)


def exponential(scale: float, rate: float, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("exponential", (scale, rate), **kw)


def log(scale: float, rate: float = 1.0, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("log", (scale, rate), **kw)


def capped_linear(cap: float, slope: float = 1.0, **kw) -> FunctionDescriptor:
    return FunctionDescriptor("capped-linear", (cap, slope), **kw)


def piecewise_table(knots: Iterable[tuple[float, float]], **kw) -> FunctionDescriptor:
    flat = tuple(v for knot in knots for v in knot)
    return FunctionDescriptor("piecewise-linear-table", flat, **kw)


def _lin_params(fd: FunctionDescriptor) -> tuple[float, float]:
    m = fd.params[0]
    b = fd.params[1] if len(fd.params) > 1 else 0.0
    return m, b


def _quad_params(fd: FunctionDescriptor) -> tuple[float, float, float]:
    p = fd.params + (0.0, 0.0)
    return p[0], p[1], p[2]


def _log_params(fd: FunctionDescriptor) -> tuple[float, float]:
    a = fd.params[0]
    b = fd.params[1] if len(fd.params) > 1 else 1.0
    return a, b


def _cap_params(fd: FunctionDescriptor) -> tuple[float, float]:
    cap = fd.params[0]
    m = fd.params[1] if len(fd.params) > 1 else 1.0
    return cap, m


def _knots(fd: FunctionDescriptor) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(fd.params[0::2], dtype=float)
    ys = np.asarray(fd.params[1::2], dtype=float)
    return xs, ys


def _check_domain(fd: FunctionDescriptor, x, what: str = "argument"):
    arr = np.asarray(x, dtype=float)
    lo, hi = fd.domain
    bad = (arr < lo - 1e-12) | (arr > hi + 1e-12) | ~np.isfinite(arr)
    if np.any(bad):
        offender = float(arr[bad][0]) if arr.ndim else float(arr)
        raise DomainError(
            f"{fd.family}: {what} {offender!r} outside domain [{lo}, {hi}]"
        )
    return arr


def evaluate(fd: FunctionDescriptor, x):
    """Evaluate ``fd`` at ``x`` (scalar or array). Exact for every family."""
    arr = _check_domain(fd, x)
    f = fd.family
    if f == "constant":
        out = np.full_like(arr, fd.params[0], dtype=float)
    elif f == "linear":
        m, b = _lin_params(fd)
        out = m * arr + b
    elif f == "power":
        a, b = fd.params
        with np.errstate(divide="ignore"):
            out = a * np.power(arr, b)
    elif f == "quadratic":
        a, b, c = _quad_params(fd)
        out = a * arr * arr + b * arr + c
    elif f == "exponential":
        s, r = fd.params
        out = s * (1.0 - np.exp(-r * arr))
    elif f == "log":
        a, b = _log_params(fd)
        out = a * np.log1p(b * arr)
    elif f == "capped-linear":
        cap, m = _cap_params(fd)
        out = m * np.minimum(arr, cap)
    else:
        xs, ys = _knots(fd)
        out = np.interp(np.clip(arr, xs[0], xs[-1]), xs, ys)
    return out if isinstance(x, np.ndarray) else float(out)


def derivative(fd: FunctionDescriptor, x):
    """First derivative of ``fd`` at ``x`` (scalar or array), analytic.

    At an interior knot of a piecewise table the right-hand slope is
    returned (left-hand at the final knot) and a
    :class:`NondifferentiableWarning` is emitted.
    """
    arr = _check_domain(fd, x)
    f = fd.family
    if f == "constant":
        out = np.zeros_like(arr, dtype=float)
    elif f == "linear":
        out = np.full_like(arr, fd.params[0], dtype=float)
    elif f == "power":
        a, b = fd.params
        if b == 0:
            out = np.zeros_like(arr, dtype=float)
        else:
            with np.errstate(divide="ignore"):
                out = a * b * np.power(arr, b - 1.0)
    elif f == "quadratic":
        a, b, _ = _quad_params(fd)
        out = 2.0 * a * arr + b
    elif f == "exponential":
        s, r = fd.params
        out = s * r * np.exp(-r * arr)
    elif f == "log":
        a, b = _log_params(fd)
        out = a * b / (1.0 + b * arr)
    elif f == "capped-linear":
        cap, m = _cap_params(fd)
        # right derivative at the cap: an extra unit adds nothing
        out = np.where(arr < cap, m, 0.0)
    else:
        xs, ys = _knots(fd)
        slopes = np.diff(ys) / np.diff(xs)
        idx = np.clip(np.searchsorted(xs, arr, side="right") - 1, 0, len(slopes) - 1)
        out = slopes[idx]
        interior = xs[1:-1]
        if interior.size and np.any(np.isin(arr, interior)):
            warnings.warn(
                f"{fd.family}: derivative at an interior knot; one-sided slope used",
                NondifferentiableWarning,
                stacklevel=2,
            )
    return out if isinstance(x, np.ndarray) else float(out)


def second_derivative(fd: FunctionDescriptor, x):
    """Second derivative, analytic; zero within piecewise-linear segments."""
    arr = _check_domain(fd, x)
    f = fd.family
    if f == "power":
        a, b = fd.params
        if b in (0.0, 1.0):
            out = np.zeros_like(arr, dtype=float)
        else:
            with np.errstate(divide="ignore"):
                out = a * b * (b - 1.0) * np.power(arr, b - 2.0)
    elif f == "quadratic":
        a, _, _ = _quad_params(fd)
        out = np.full_like(arr, 2.0 * a, dtype=float)
    elif f == "exponential":
        s, r = fd.params
        out = -s * r * r * np.exp(-r * arr)
    elif f == "log":
        a, b = _log_params(fd)
        out = -a * b * b / (1.0 + b * arr) ** 2
    else:
        # constant, linear, capped-linear, piecewise tables: zero a.e.
        out = np.zeros_like(arr, dtype=float)
    return out if isinstance(x, np.ndarray) else float(out)


def _antiderivative(fd: FunctionDescriptor, x):
    """An antiderivative evaluated at x (constant of integration arbitrary)."""
    arr = np.asarray(x, dtype=float)
    f = fd.family
    if f == "constant":
        out = fd.params[0] * arr
    elif f == "linear":
        m, b = _lin_params(fd)
        out = 0.5 * m * arr * arr + b * arr
    elif f == "power":
        a, b = fd.params
        out = a * np.power(arr, b + 1.0) / (b + 1.0)
    elif f == "quadratic":
        a, b, c = _quad_params(fd)
        out = a * arr**3 / 3.0 + 0.5 * b * arr * arr + c * arr
    elif f == "exponential":
        s, r = fd.params
        out = s * (arr + np.exp(-r * arr) / r)
    elif f == "log":
        a, b = _log_params(fd)
        u = 1.0 + b * arr
        out = a * (u * np.log(u) / b - arr)
    elif f == "capped-linear":
        cap, m = _cap_params(fd)
        below = 0.5 * m * np.minimum(arr, cap) ** 2
        above = m * cap * np.maximum(arr - cap, 0.0)
        out = below + above
    else:
        xs, ys = _knots(fd)
        # cumulative trapezoid areas up to each knot, then a partial segment
        seg_area = 0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)
        cum = np.concatenate([[0.0], np.cumsum(seg_area)])
        clipped = np.clip(arr, xs[0], xs[-1])
        idx = np.clip(np.searchsorted(xs, clipped, side="right") - 1, 0, len(xs) - 2)
        x0, y0 = xs[idx], ys[idx]
        slope = (ys[idx + 1] - y0) / (xs[idx + 1] - x0)
        dx = clipped - x0
        out = cum[idx] + y0 * dx + 0.5 * slope * dx * dx
    return out


def definite_integral(fd: FunctionDescriptor, a: float, b: float) -> float:
    """Exact integral of ``fd`` over [a, b] via the analytic antiderivative."""
    if b < a:
        raise DomainError(f"integration range reversed: a={a} > b={b}")
    _check_domain(fd, a, "integration bound")
    _check_domain(fd, b, "integration bound")
    return float(_antiderivative(fd, b) - _antiderivative(fd, a))


def satiation_point(fd: FunctionDescriptor) -> float:
    """Smallest argument beyond which the derivative vanishes.

    Strictly increasing families (positive derivative everywhere on the
    domain) never satiate and return ``math.inf``.  For a capped-linear
    function this is exactly the cap.
    """
    lo, hi = fd.domain
    f = fd.family
    if f == "constant":
        return lo
    if f == "linear":
        return INF if fd.params[0] > 0 else lo
    if f == "power":
        a, b = fd.params
        return INF if (a > 0 and b > 0) else lo
    if f == "quadratic":
        a, b, _ = _quad_params(fd)
        if a == 0:
            return INF if b > 0 else lo
        if a > 0:
            return INF if (b >= 0 or -b / (2 * a) < hi) else lo
        vertex = -b / (2.0 * a)
        if vertex <= lo:
            return lo
        return vertex if vertex <= hi else INF
    if f == "exponential":
        return INF if fd.params[0] > 0 else lo
    if f == "log":
        return INF if fd.params[0] > 0 else lo
    if f == "capped-linear":
        cap, m = _cap_params(fd)
        return min(cap, hi) if m > 0 else lo
    xs, ys = _knots(fd)
    slopes = np.diff(ys) / np.diff(xs)
    if slopes[-1] > 0:
        return INF
    k = len(slopes)
    while k > 0 and slopes[k - 1] <= 0:
        k -= 1
    return float(xs[k])


def depletion_level(fd: FunctionDescriptor, tol: float) -> float:
    """Smallest holding beyond which the marginal value stays <= ``tol``.

    This is the level to which an appropriating agent accumulates before
    extra resources stop being worth taking.  ``math.inf`` means the agent
    is never sated within the domain (take everything available).  The
    returned level always satisfies ``derivative(fd, level) <= tol`` in
    floating point, so a marginal-utility test at the level cannot fire.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    lo, hi = fd.domain
    f = fd.family

    def _solve_decreasing(d_lo: float, x_at_tol: float) -> float:
        # derivative is nonincreasing: level is where it first crosses tol;
        # analytic inversion can land an ulp on the wrong side, so nudge up
        if d_lo <= tol:
            return lo
        if not math.isfinite(x_at_tol) or x_at_tol > hi:
            return INF
        level = max(lo, x_at_tol)
        step = 4e-16  # doubling covers any inversion error within 64 rounds
        for _ in range(64):
            if derivative(fd, min(level, hi)) <= tol:
                break
            level *= 1.0 + step
            step *= 2.0
        return level

    if f == "constant":
        return lo
    if f == "linear":
        return lo if fd.params[0] <= tol else INF
    if f == "power":
        a, b = fd.params
        if b == 0:
            return lo
        if b == 1.0:
            return lo if a <= tol else INF
        if b > 1.0:
            # increasing marginal: only depleted if it never exceeds tol
            d_hi = derivative(fd, hi) if math.isfinite(hi) else INF
            return lo if d_hi <= tol else INF
        if a <= 0:
            return lo
        if tol == 0:
            return INF
        # log space: the closed form overflows for exponents just under one
        log_x = math.log(a * b / tol) / (1.0 - b)
        x_at = math.exp(log_x) if log_x < 709.0 else INF
        return _solve_decreasing(derivative(fd, max(lo, 1e-300)), x_at)
    if f == "quadratic":
        a, b, _ = _quad_params(fd)
        if a == 0:
            return lo if b <= tol else INF
        if a > 0:
            d_hi = 2 * a * hi + b if math.isfinite(hi) else INF
            return lo if d_hi <= tol else INF
        x_at = (tol - b) / (2.0 * a)
        return _solve_decreasing(2 * a * lo + b, x_at)
    if f == "exponential":
        s, r = fd.params
        if s <= 0:
            return lo
        if tol == 0:
            return INF
        x_at = math.log(s * r / tol) / r if s * r > tol else lo
        return _solve_decreasing(s * r * math.exp(-r * lo), x_at)
    if f == "log":
        a, b = _log_params(fd)
        if a <= 0:
            return lo
        if tol == 0:
            return INF
        x_at = (a * b / tol - 1.0) / b
        return _solve_decreasing(a * b / (1 + b * lo), x_at)
    if f == "capped-linear":
        cap, m = _cap_params(fd)
        return lo if m <= tol else min(cap, hi)
    xs, ys = _knots(fd)
    slopes = np.diff(ys) / np.diff(xs)
    if slopes[-1] > tol:
        return INF
    k = len(slopes)
    while k > 0 and slopes[k - 1] <= tol:
        k -= 1
    return float(xs[k])


# ---------------------------------------------------------------------------
# scenario data


@dataclass(frozen=True)
class AgentSpec:
    """One human agent: a power rank, an initial holding, and a utility."""

    id: int
    strength: float
    endowment: float
    utility: FunctionDescriptor


AI_KINDS = ("paperclip", "research", "power-accumulation")


@dataclass(frozen=True)
class AISpec:
    """The AI agent.  ``strength`` is 0 at the moment of activation; a
    positive value models power already accumulated."""

    utility: FunctionDescriptor
    strength: float = 0.0
    theta: float = 0.0
    kind: str = "paperclip"


@dataclass(frozen=True)
class Tolerances:
    """Solver knobs: path step ``dy``, root/marginal tolerance, and the
    path bootstrap slack (None means auto: the largest marginal power
    cost seen on a dense grid)."""

    dy: float = 0.01
    root_tol: float = 1e-9
    feas_slack: float | None = None


@dataclass(frozen=True)
class ActivationGameSpec:
    """Payoff parameterization (plus tree depth) for the activation game."""

    paperclips_base: float = 1.0
    paperclips_with_research: float = 1.5
    research_reward_with_resources: float = 1.0
    research_reward_without: float = 0.0
    power_payoff_scale: float = 1.0
    depth: int = 2


@dataclass(frozen=True)
class Scenario:
    """A full economy instance.

    Agents are either generated (``grid_n`` agents at midpoint strengths
    with endowments equal to the exact cell mass of the endowment profile,
    so that discrete holdings sum to the continuum total) or supplied
    explicitly via ``agents``, in which case the explicit list wins.
    """

    grid_n: int = 1001
    endowment: FunctionDescriptor | None = None
    free_pool: float = 0.0
    human_utility: FunctionDescriptor | None = None
    ai: AISpec | None = None
    technology: FunctionDescriptor | None = None
    power_cost: FunctionDescriptor | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    agents: tuple[AgentSpec, ...] | None = None
    path_analysis: bool = False
    initial_agent_strength: float | None = None
    activation_game: ActivationGameSpec | None = None
    integrated_ai: bool = False

    def total_resources(self) -> float:
        """X: the free pool plus everything held by human agents."""
        if self.agents is not None:
            held = sum(a.endowment for a in self.agents)
        elif self.endowment is not None:
            held = definite_integral(self.endowment, 0.0, 1.0)
        else:
            raise ScenarioError(["endowment: missing (no agents and no profile)"])
        return self.free_pool + held

    def human_agents(self) -> tuple[AgentSpec, ...]:
        """Explicit agents, or the midpoint discretization of the profile."""
        if self.agents is not None:
            return self.agents
        if self.endowment is None or self.human_utility is None:
            raise ScenarioError(
                ["agents: cannot generate without endowment and human_utility"]
            )
        n = self.grid_n
        edges = np.linspace(0.0, 1.0, n + 1)
        masses = np.diff(_antiderivative(self.endowment, edges))
        mid = 0.5 * (edges[:-1] + edges[1:])
        return tuple(
            AgentSpec(id=i, strength=float(mid[i]), endowment=float(masses[i]),
                      utility=self.human_utility)
            for i in range(n)
        )

    def reachable_resources(self, strength: float) -> float:
        """Resources held by agents at or below ``strength``."""
        if self.agents is not None:
            return float(sum(a.endowment for a in self.agents if a.strength <= strength))
        if self.endowment is None:
            raise ScenarioError(["endowment: missing"])
        return definite_integral(self.endowment, 0.0, min(max(strength, 0.0), 1.0))


def _shape_violations(
    fd: FunctionDescriptor,
    label: str,
    lo: float,
    hi: float,
    *,
    nondecreasing: bool = False,
    nonnegative: bool = False,
    convex: bool = False,
    concave: bool = False,
    zero_at_origin: bool = False,
    grid: int = 2001,
    tol: float = 1e-9,
) -> list[str]:
    """Check shape constraints on a dense grid of function values."""
    out: list[str] = []
    lo = max(lo, fd.domain[0])
    hi = min(hi, fd.domain[1])
    if not lo < hi:
        return [f"{label}: domain does not cover [{lo}, {hi}]"]
    xs = np.linspace(lo, hi, grid)
    v = evaluate(fd, xs)
    scale = max(1.0, float(np.max(np.abs(v))))
    atol = tol * scale
    if nonnegative and np.any(v < -atol):
        i = int(np.argmax(v < -atol))
        out.append(f"{label}: negative value {v[i]:.6g} at x={xs[i]:.6g}")
    d1 = np.diff(v)
    if nondecreasing and np.any(d1 < -atol):
        i = int(np.argmax(d1 < -atol))
        out.append(f"{label}: not nondecreasing near x={xs[i]:.6g}")
    d2 = np.diff(v, 2)
    if convex and np.any(d2 < -atol):
        i = int(np.argmax(d2 < -atol))
        out.append(f"{label}: not convex near x={xs[i + 1]:.6g}")
    if concave and np.any(d2 > atol):
        i = int(np.argmax(d2 > atol))
        out.append(f"{label}: not concave near x={xs[i + 1]:.6g}")
    if zero_at_origin and abs(float(evaluate(fd, lo))) > tol:
        out.append(f"{label}: value at {lo:.6g} is {float(evaluate(fd, lo)):.6g}, expected 0")
    return out


def validate_scenario(scenario: Scenario) -> list[str]:
    """Collect every shape and consistency violation; never raises."""
    v: list[str] = []
    t = scenario.tolerances
    if scenario.grid_n < 2:
        v.append(f"grid_n: must be >= 2, got {scenario.grid_n}")
    if not t.dy > 0:
        v.append(f"tolerances.dy: must be > 0, got {t.dy}")
    if not t.root_tol > 0:
        v.append(f"tolerances.root_tol: must be > 0, got {t.root_tol}")
    if t.feas_slack is not None and t.feas_slack < 0:
        v.append(f"tolerances.feas_slack: must be >= 0, got {t.feas_slack}")
    if scenario.agents is None and scenario.grid_n >= 2 and t.dy > 0:
        if t.dy < 1.0 / scenario.grid_n - 1e-12:
            v.append(
                f"tolerances.dy: step {t.dy} finer than the agent grid cell "
                f"{1.0 / scenario.grid_n:.6g}"
            )
    if scenario.free_pool < 0:
        v.append(f"free_pool: must be >= 0, got {scenario.free_pool}")

    try:
        x_total = scenario.total_resources()
    except ScenarioError:
        x_total = None
    else:
        if not math.isfinite(x_total) or x_total <= 0:
            v.append(f"total resources: must be finite and > 0, got {x_total}")
            x_total = None
    probe_hi = x_total if x_total else 10.0

    if scenario.endowment is not None:
        v += _shape_violations(
            scenario.endowment, "endowment", 0.0, 1.0,
            nonnegative=True, tol=t.root_tol,
        )
    if scenario.power_cost is not None:
        v += _shape_violations(
            scenario.power_cost, "power_cost", 0.0, 1.0,
            nondecreasing=True, convex=True,
            zero_at_origin=scenario.path_analysis, tol=t.root_tol,
        )
    if scenario.technology is not None:
        lo, hi = scenario.technology.domain
        v += _shape_violations(
            scenario.technology, "technology", lo, min(hi, max(probe_hi, 10.0)),
            nondecreasing=True, concave=True, tol=t.root_tol,
        )

    def _check_utility(fd: FunctionDescriptor, label: str):
        if x_total is not None and fd.domain[1] < x_total:
            v.append(
                f"{label}: domain tops out at {fd.domain[1]:.6g}, below the "
                f"total stock {x_total:.6g} an agent could end up holding"
            )
        v.extend(
            _shape_violations(
                fd, label, 0.0, probe_hi,
                nondecreasing=True, zero_at_origin=True, tol=max(t.root_tol, 1e-9),
            )
        )

    if scenario.human_utility is not None:
        _check_utility(scenario.human_utility, "human_utility")
    if scenario.ai is not None:
        _check_utility(scenario.ai.utility, "ai.utility")
        if scenario.ai.strength < 0:
            v.append(f"ai.strength: must be >= 0, got {scenario.ai.strength}")
        if scenario.ai.theta < 0:
            v.append(f"ai.theta: must be >= 0, got {scenario.ai.theta}")
        if scenario.ai.kind not in AI_KINDS:
            v.append(f"ai.kind: unknown tag {scenario.ai.kind!r}")

    if scenario.agents is not None:
        seen_ids: set[int] = set()
        prev = -INF
        for k, a in enumerate(scenario.agents):
            if a.id in seen_ids or a.id < 0:
                v.append(f"agents[{k}].id: must be unique and >= 0, got {a.id}")
            seen_ids.add(a.id)
            if not 0.0 <= a.strength <= 1.0:
                v.append(f"agents[{k}].strength: must lie in [0, 1], got {a.strength}")
            if a.strength <= prev:
                v.append(f"agents[{k}].strength: must strictly increase, got {a.strength}")
            prev = a.strength
            if a.endowment < 0 or not math.isfinite(a.endowment):
                v.append(f"agents[{k}].endowment: must be finite and >= 0, got {a.endowment}")
            _check_utility(a.utility, f"agents[{k}].utility")

    if scenario.initial_agent_strength is not None:
        s0 = scenario.initial_agent_strength
        if not 0.0 <= s0 <= 1.0:
            v.append(f"initial_agent_strength: must lie in [0, 1], got {s0}")

    if scenario.activation_game is not None:
        g = scenario.activation_game
        for name in (
            "paperclips_base", "paperclips_with_research",
            "research_reward_with_resources", "research_reward_without",
            "power_payoff_scale",
        ):
            val = getattr(g, name)
            if val < 0 or not math.isfinite(val):
                v.append(f"activation_game.{name}: must be finite and >= 0, got {val}")
        if g.depth < 1:
            v.append(f"activation_game.depth: must be >= 1, got {g.depth}")

    return v


def default_path_slack(power_cost: FunctionDescriptor, grid: int = 2001) -> float:
    """Auto slack for the accumulation path: the steepest marginal cost."""
    lo, hi = power_cost.domain
    xs = np.linspace(max(lo, 0.0), min(hi, 1.0), grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NondifferentiableWarning)
        d = derivative(power_cost, xs)
    return float(np.max(d)) if np.all(np.isfinite(d)) else float(np.nanmax(d[np.isfinite(d)]))
