"""Command-line front end.

One subcommand per solver plus a sweep driver and a ``verify`` command that
replays every solver against its brute-force oracle on the shipped scenario
corpus.  Exit codes: 0 success, 1 solver-reported infeasibility or violation,
2 input error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import control, equilibrium, optimize, oracles
from .model import (
    ActivationGameSpec,
    Scenario,
    ScenarioError,
    validate_scenario,
)
from .scenario_io import (
    RunRecord,
    ScenarioLoadError,
    SweepBudgetError,
    draw_descriptor,
    expand_sweep_documents,
    format_float,
    load_scenario_document,
    scenario_digest,
    scenario_from_json,
    sweep_spec_from_json,
    write_results,
    TOOL_VERSION,
)

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_INPUT = 2

_KNOWN_TOP_KEYS = {
    "schema_version", "grid_n", "endowment", "free_pool", "human_utility",
    "ai", "technology", "power_cost", "tolerances", "agents", "path_analysis",
    "initial_agent_strength", "activation_game", "integrated_ai",
}


class MissingFieldError(ValueError):
    def __init__(self, field: str, command: str):
        super().__init__(f"scenario is missing field {field!r} required by {command!r}")


def _parse_set_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def _apply_overrides(doc: dict, args) -> dict:
    doc = copy.deepcopy(doc)
    for item in args.set or []:
        if "=" not in item:
            raise ScenarioLoadError(f"--set expects path=value, got {item!r}")
        path, raw = item.split("=", 1)
        head = path.split(".", 1)[0]
        if head not in _KNOWN_TOP_KEYS:
            raise ScenarioLoadError(f"--set {path}: unknown scenario field {head!r}")
        node = doc
        parts = path.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ScenarioLoadError(f"--set {path}: {part!r} is not an object")
        node[parts[-1]] = _parse_set_value(raw)
    if getattr(args, "grid_n", None) is not None:
        doc["grid_n"] = args.grid_n
    if getattr(args, "dy", None) is not None:
        doc.setdefault("tolerances", {})["dy"] = args.dy
    return doc


def _load(args, *, validate: bool = True) -> tuple[dict, Scenario]:
    if not args.scenario:
        raise ScenarioLoadError("--scenario is required for this command")
    doc = _apply_overrides(load_scenario_document(args.scenario), args)
    scenario = scenario_from_json(doc)
    if validate:
        violations = validate_scenario(scenario)
        if violations:
            raise ScenarioError(violations)
    return doc, scenario


def _require(value, field: str, command: str):
    if value is None:
        raise MissingFieldError(field, command)
    return value


# ---------------------------------------------------------------------------
# per-command runners: each returns (payload, certification, exit_code)


def _run_equilibrium(scenario: Scenario):
    result = equilibrium.solve_jungle_equilibrium(scenario)
    report = equilibrium.check_prop1(scenario)
    x_total = scenario.total_resources()
    payload = {
        "ai_holding": result.allocation.holdings.get(equilibrium.AI_ID),
        "total_resources": x_total,
        "iterations": result.iterations,
        "satiated_count": len(result.satiated),
        "transfers": len(result.allocation.appropriations),
        "holdings": {str(k): v for k, v in sorted(result.allocation.holdings.items())},
        "prop1_premises": report.premises_hold,
        "prop1_conclusion": report.conclusion_holds,
        "certified": result.certified,
    }
    cert = {"certified": result.certified}
    code = EXIT_OK if result.certified else EXIT_SOLVER
    if report.premises_hold and not report.conclusion_holds:
        code = EXIT_SOLVER
    return payload, cert, code


def _run_tech(scenario: Scenario):
    tech = _require(scenario.technology, "technology", "tech")
    x_total = scenario.total_resources()
    sol = optimize.optimize_technology(tech, x_total)
    payload = {
        "theta_star": sol.theta_star,
        "extracted": sol.extracted,
        "tech_net": sol.net,
        "degenerate": sol.degenerate,
        "corner": sol.corner,
        "total_resources": x_total,
    }
    return payload, {}, EXIT_OK


def _run_power(scenario: Scenario):
    endow = _require(scenario.endowment, "endowment", "power")
    cost = _require(scenario.power_cost, "power_cost", "power")
    ai_utility = scenario.ai.utility if scenario.ai is not None else None
    sol = optimize.optimize_power(endow, cost, ai_utility,
                                  root_tol=scenario.tolerances.root_tol)
    payload = {
        "y_star": sol.y_star,
        "net_resources": sol.net_resources,
        "condition_verdict": sol.condition_verdict,
        "boundary": sol.boundary,
    }
    return payload, {}, EXIT_OK


def _run_path(scenario: Scenario):
    endow = _require(scenario.endowment, "endowment", "path")
    cost = _require(scenario.power_cost, "power_cost", "path")
    result = optimize.simulate_accumulation_path(
        endow, cost, y_target=1.0, dy=scenario.tolerances.dy,
        kappa=scenario.tolerances.feas_slack,
        root_tol=scenario.tolerances.root_tol,
    )
    payload = {
        "path_feasible": result.feasible,
        "first_failure": result.first_failure,
        "steps": len(result.trajectory),
    }
    return payload, {}, EXIT_OK if result.feasible else EXIT_SOLVER


def _run_control(scenario: Scenario):
    ai = _require(scenario.ai, "ai", "control")
    s0 = _require(scenario.initial_agent_strength, "initial_agent_strength", "control")
    report = control.check_control_problem(s0, ai, scenario)
    payload = {
        "control_problem": report.control_problem,
        "cond_interests_differ": report.cond_interests_differ,
        "cond_resources_exceed": report.cond_resources_exceed,
        "cond_power_exceeds": report.cond_power_exceeds,
        "ai_satiation": (None if math.isinf(report.ai_satiation)
                         else report.ai_satiation),
        "ai_satiation_infinite": math.isinf(report.ai_satiation),
        "initial_agent_resources_below": report.initial_agent_resources_below,
    }
    return payload, {}, EXIT_OK


def _run_game(scenario: Scenario):
    if scenario.integrated_ai:
        # integrated self-improvement: no offspring to refuse, so the risk
        # reverts to the power-investment problem
        payload, cert, code = _run_power(scenario)
        payload["integrated_ai"] = True
        return payload, cert, code
    params = _require(scenario.activation_game, "activation_game", "game")
    game = control.build_activation_game(params, params.depth)
    profile = control.solve_backward_induction(game)
    report = control.verify_prop3([params])
    oracle = oracles.best_profile_by_enumeration(game)
    matches = oracle.actions == profile.actions
    payload = {
        "root_action": profile.actions[control.ROOT],
        "root_payoff": profile.payoffs[control.ROOT],
        "research_action": profile.actions.get(control.RESEARCH),
        "power_on_path": control.activates_power_on_path(game, profile),
        "prop3_holds": report.holds,
        "equilibrium": profile.equilibrium,
    }
    cert = {"certified": profile.equilibrium and matches}
    code = EXIT_OK if (report.holds and profile.equilibrium and matches) else EXIT_SOLVER
    return payload, cert, code


_RUNNERS = {
    "equilibrium": _run_equilibrium,
    "tech": _run_tech,
    "power": _run_power,
    "path": _run_path,
    "control": _run_control,
    "game": _run_game,
}


def _run_document(doc: dict, command: str) -> tuple[RunRecord, int]:
    scenario = scenario_from_json(doc)
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError(violations)
    payload, cert, code = _RUNNERS[command](scenario)
    record = RunRecord(
        scenario_digest=scenario_digest(doc),
        command=command,
        payload=payload,
        certification=cert,
    )
    return record, code


def _sweep_worker(packed: tuple[str, str]) -> tuple[str, int]:
    doc_text, command = packed
    record, code = _run_document(json.loads(doc_text), command)
    return json.dumps({
        "digest": record.scenario_digest,
        "command": record.command,
        "payload": record.payload,
        "certification": record.certification,
    }, sort_keys=True), code


def _print_payload(command: str, payload: dict):
    skip = {"holdings"}
    parts = []
    for key, value in payload.items():
        if key in skip:
            continue
        if isinstance(value, float):
            value = format_float(value)
        parts.append(f"{key}={value}")
    print(f"{command}: " + " ".join(parts))


# ---------------------------------------------------------------------------
# verify


def _verify_checks(seed: int):
    """Yield (name, passed, detail) pairs for the oracle verification run."""
    def golden(name: str) -> dict:
        with resources.files("junglesim.golden").joinpath(name).open("r") as fh:
            return json.load(fh)

    # worked example: the strongest human takes from the weakest and satiates
    doc = golden("three_humans_capped.json")
    scenario = scenario_from_json(doc)
    res = equilibrium.solve_jungle_equilibrium(scenario)
    by_id = res.allocation.holdings
    ok = (
        abs(by_id[0] - 0.5) < 1e-12 and abs(by_id[1] - 1.0) < 1e-12
        and abs(by_id[2] - 1.5) < 1e-12 and res.certified
    )
    yield "equilibrium worked example (0.5 / 1 / 1.5)", ok, str(by_id)

    # every golden scenario that can run the equilibrium is deviation-free
    for name in sorted(_golden_names()):
        doc = golden(name)
        scenario = scenario_from_json(doc)
        try:
            scenario.human_agents()
        except ScenarioError:
            continue
        res = equilibrium.solve_jungle_equilibrium(scenario)
        dev = equilibrium.find_profitable_deviation(scenario, res.allocation)
        yield f"no profitable deviation ({name})", dev is None, str(dev)

    # technology FOC and corner against the dense grid oracle
    for name, x_total, expected in (
        ("uniform_quadcost.json", 10.0, 1.0),
        ("tech_sqrt_scarce.json", 1.5, 0.5625),
    ):
        scenario = scenario_from_json(golden(name))
        sol = optimize.optimize_technology(scenario.technology, scenario.total_resources())
        t_oracle, _ = oracles.technology_grid_argmax(
            scenario.technology, scenario.total_resources())
        ok = abs(sol.theta_star - expected) < 1e-6 and abs(sol.theta_star - t_oracle) <= 1e-4
        yield f"technology optimum ({name})", ok, f"theta*={sol.theta_star}"

    # power optimum against the brute-force grid
    for name, y_expected, net_expected in (
        ("uniform_quadcost.json", 0.5, 0.25),
        ("uniform_quartercost.json", 1.0, 0.75),
        ("rising_endow_cubiccost.json", 2.0 / 3.0, 4.0 / 27.0),
    ):
        scenario = scenario_from_json(golden(name))
        sol = optimize.optimize_power(scenario.endowment, scenario.power_cost)
        y_oracle, net_oracle = oracles.power_grid_argmax(
            scenario.endowment, scenario.power_cost)
        ok = (
            abs(sol.y_star - y_expected) < 1e-3
            and abs(sol.net_resources - net_expected) < 1e-3
            and abs(sol.y_star - y_oracle) <= 1.1e-4
            and abs(sol.net_resources - net_oracle) < 1e-6
        )
        yield f"power optimum ({name})", ok, f"y*={sol.y_star} net={sol.net_resources}"

    # sufficient conditions imply the boundary optimum
    rng = np.random.default_rng(seed)
    bad = 0
    checked = 0
    from .scenario_io import descriptor_from_json as _dfj
    for _ in range(200):
        f = _dfj(draw_descriptor("endowment", rng), "draw")
        c = _dfj(draw_descriptor("power-cost", rng), "draw")
        verdict = optimize.check_prop2_conditions(f, c)
        if verdict == "none":
            continue
        checked += 1
        sol = optimize.optimize_power(f, c)
        if abs(sol.y_star - 1.0) > 1e-4:
            bad += 1
    yield (f"full-power conditions imply y*=1 ({checked} hits)", bad == 0,
           f"{bad} counterexamples")

    # full-appropriation premises imply the AI takes everything
    bad = 0
    checked = 0
    for _ in range(100):
        scen = _random_prop1_scenario(rng)
        rep = equilibrium.check_prop1(scen)
        if rep.premises_hold:
            checked += 1
            if not rep.conclusion_holds:
                bad += 1
    yield (f"superior strength + appetite imply full appropriation ({checked} hits)",
           bad == 0, f"{bad} counterexamples")

    # accumulation path fixtures
    scenario = scenario_from_json(golden("uniform_quartercost.json"))
    path = optimize.simulate_accumulation_path(
        scenario.endowment, scenario.power_cost, 1.0, 0.01, 1.0)
    yield "path feasible to full power (quarter cost)", path.feasible, str(path.first_failure)
    scenario = scenario_from_json(golden("c_positive_at_zero.json"))
    path = optimize.simulate_accumulation_path(
        scenario.endowment, scenario.power_cost, 1.0, 0.01, 1.0)
    ok = (not path.feasible) and path.first_failure == 0
    yield "positive cost at zero power kills the bootstrap", ok, str(path.first_failure)

    # backward induction equals exhaustive enumeration; no power on path
    bad = 0
    mismatch = 0
    for _ in range(300):
        params = ActivationGameSpec(
            paperclips_base=float(rng.uniform(0, 3)),
            paperclips_with_research=float(rng.uniform(0, 3)),
            research_reward_with_resources=float(rng.uniform(0, 3)),
            research_reward_without=float(rng.uniform(0, 1)),
            power_payoff_scale=float(rng.uniform(0.01, 5)),
            depth=int(rng.integers(1, 3)),
        )
        game = control.build_activation_game(params, params.depth)
        profile = control.solve_backward_induction(game)
        oracle = oracles.best_profile_by_enumeration(game)
        if profile.actions != oracle.actions:
            mismatch += 1
        if control.activates_power_on_path(game, profile):
            bad += 1
    yield "backward induction matches exhaustive enumeration", mismatch == 0, f"{mismatch} mismatches"
    yield "no power-accumulation AI activated on any path", bad == 0, f"{bad} violations"


def _golden_names() -> list[str]:
    return [
        entry.name
        for entry in resources.files("junglesim.golden").iterdir()
        if entry.name.endswith(".json")
    ]


def _random_prop1_scenario(rng: np.random.Generator) -> Scenario:
    from .scenario_io import descriptor_from_json as _dfj
    from .model import AISpec

    f = _dfj(draw_descriptor("endowment", rng), "draw")
    pick = rng.integers(0, 3)
    if pick == 0:
        ai_doc = {"family": "linear", "params": [float(rng.uniform(0.2, 2.0))]}
    elif pick == 1:
        ai_doc = {"family": "log", "params": [float(rng.uniform(0.2, 2.0)), 1.0]}
    else:
        ai_doc = {"family": "power", "params": [float(rng.uniform(0.2, 2.0)),
                                                float(rng.uniform(0.4, 0.9))]}
    return Scenario(
        grid_n=int(rng.integers(5, 40)),
        endowment=f,
        free_pool=float(rng.uniform(0.0, 3.0)),
        human_utility=_dfj({"family": "capped-linear",
                            "params": [float(rng.uniform(0.1, 2.0))]}, "draw"),
        ai=AISpec(utility=_dfj(ai_doc, "draw"), strength=float(rng.uniform(1.01, 3.0))),
        tolerances=_default_sweep_tolerances(),
    )


def _default_sweep_tolerances():
    from .model import Tolerances
    return Tolerances(dy=0.25, root_tol=1e-9)


def _run_verify(args) -> int:
    failures = 0
    for name, ok, detail in _verify_checks(args.seed if args.seed is not None else 0):
        status = "PASS" if ok else "FAIL"
        line = f"{status}  {name}"
        if not ok:
            line += f"  [{detail}]"
        print(line)
        failures += 0 if ok else 1
    print(f"verify: {'all checks passed' if failures == 0 else f'{failures} check(s) failed'}")
    return EXIT_OK if failures == 0 else EXIT_SOLVER


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_common(parser: argparse.ArgumentParser, *, scenario_required: bool = True):
    parser.add_argument("--scenario", required=scenario_required,
                        help="path to the scenario JSON document")
    parser.add_argument("--out", default=os.environ.get("JUNGLESIM_OUT"),
                        help="output directory for run records "
                             "(default: $JUNGLESIM_OUT)")
    parser.add_argument("--format", choices=("csv", "json"), default="json",
                        help="record file format (default json)")
    parser.add_argument("--set", action="append", metavar="PATH=VALUE",
                        help="override a scenario field (dotted path), repeatable")
    parser.add_argument("--grid-n", type=int, dest="grid_n",
                        help="override the agent grid size")
    parser.add_argument("--dy", type=float, help="override the power path step")
    parser.add_argument("--seed", type=int, help="seed for randomized draws")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for sweeps (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="junglesim",
        description="Solvers for a power-ordered (jungle) economy with a "
                    "goal-directed AI.",
    )
    parser.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = parser.add_subparsers(dest="command")

    descriptions = {
        "equilibrium": "solve the jungle equilibrium by power order and check "
                       "the full-appropriation (superior strength + marginal "
                       "appetite) premises and conclusion",
        "tech": "optimal extraction-technology investment: marginal return "
                "equals one, or the minimal investment that extracts the "
                "whole stock",
        "power": "optimal power investment: maximize the net resource haul "
                 "over power ranks and report which full-accumulation "
                 "condition holds",
        "path": "dynamic power accumulation path: each increment must be "
                "payable from resources already reachable",
        "control": "evaluate the three-condition control-problem predicate "
                   "for an initial agent switching on the AI",
        "game": "build and solve the AI activation game by backward "
                "induction; verify no power-accumulation AI is activated",
        "sweep": "expand a parameter sweep and run a named subcommand on "
                 "every scenario",
        "verify": "run every solver against its brute-force oracle on the "
                  "shipped scenario corpus",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc, description=desc)
        if name == "verify":
            p.add_argument("--seed", type=int, default=0)
        else:
            _add_common(p, scenario_required=(name != "verify"))
    return parser


def _dispatch_single(args) -> int:
    doc, scenario = _load(args)
    command = args.command
    payload, cert, code = _RUNNERS[command](scenario)
    record = RunRecord(
        scenario_digest=scenario_digest(doc),
        command=command,
        payload=payload,
        certification=cert,
    )
    _print_payload(command, payload)
    if args.out:
        manifest = write_results([record], args.out, args.format)
        print(f"wrote {manifest}")
    return code


def _dispatch_sweep(args) -> int:
    raw = load_scenario_document(args.scenario)
    spec = sweep_spec_from_json(raw, base_dir=Path(args.scenario).parent)
    if args.seed is not None:
        spec = type(spec)(base=spec.base, axes=spec.axes, seed=args.seed,
                          command=spec.command)
    command = spec.command
    if command not in _RUNNERS:
        raise ScenarioLoadError(
            f"sweep command must be one of {sorted(_RUNNERS)}, got {command!r}")
    if not args.out:
        raise ScenarioLoadError("sweep needs an output directory: pass --out "
                                "or set JUNGLESIM_OUT")
    docs = expand_sweep_documents(spec)
    docs = [_apply_overrides(doc, args) for doc in docs]

    worst = EXIT_OK
    records: list[RunRecord] = []
    if args.jobs and args.jobs > 1:
        packed = [(json.dumps(doc, sort_keys=True), command) for doc in docs]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for blob, code in pool.map(_sweep_worker, packed):
                data = json.loads(blob)
                records.append(RunRecord(
                    scenario_digest=data["digest"], command=data["command"],
                    payload=data["payload"], certification=data["certification"],
                ))
                worst = max(worst, code)
    else:
        for doc in docs:
            record, code = _run_document(doc, command)
            records.append(record)
            worst = max(worst, code)
    manifest = write_results(records, args.out, args.format)
    print(f"sweep: {len(records)} scenario(s) -> {manifest.parent}")
    return worst


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return EXIT_OK if not exc.code else EXIT_INPUT
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "sweep":
            return _dispatch_sweep(args)
        return _dispatch_single(args)
    except (ScenarioLoadError, ScenarioError, MissingFieldError,
            SweepBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
