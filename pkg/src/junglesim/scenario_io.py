"""Scenario documents, parameter sweeps, and result persistence.

Scenarios travel as JSON (schema below); results land as one file per run
record under ``runs/`` plus a manifest.  Record digests are content hashes of
the canonicalized scenario document, so identical inputs collide on purpose
and reruns are detectable.

Scenario JSON schema (version 1)::

    {
      "schema_version": 1,
      "grid_n": 1001,                  // optional, default 1001
      "free_pool": 0.0,
      "endowment":      {"family": "...", "params": [...], "domain": [lo, hi|null]},
      "human_utility":  {...},
      "ai": {"strength": 0.0, "theta": 0.0, "kind": "paperclip", "utility": {...}},
      "technology": {...},             // optional
      "power_cost": {...},             // optional
      "tolerances": {"dy": 0.01, "root_tol": 1e-9, "feas_slack": null},
      "agents": [{"id": 0, "strength": 0.2, "endowment": 1.0, "utility": {...}}],
      "path_analysis": false,
      "initial_agent_strength": 0.5,   // optional
      "activation_game": {"paperclips_base": 1.0, ..., "depth": 2},
      "integrated_ai": false
    }

Sweep JSON schema::

    {
      "base": { ... scenario document ... } | "path/to/scenario.json",
      "command": "power",              // used by the CLI sweep driver
      "seed": 0,
      "axes": [
        {"path": "free_pool", "values": [0.0, 1.0]},
        {"path": "tolerances.dy", "range": [0.01, 0.05, 0.01]},
        {"path": "power_cost", "draw": "power-cost", "count": 8}
      ]
    }
"""

from __future__ import annotations

import copy
import hashlib
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .model import (
    INF,
    ActivationGameSpec,
    AgentSpec,
    AISpec,
    FunctionDescriptor,
    Scenario,
    ScenarioError,
    Tolerances,
    validate_scenario,
)

SCHEMA_VERSION = 1
TOOL_VERSION = "junglesim 0.1.0"

# fixed CSV column contract for run records
CSV_COLUMNS = (
    "scenario_digest",
    "command",
    "tool_version",
    "y_star",
    "net_resources",
    "condition_verdict",
    "boundary",
    "theta_star",
    "extracted",
    "tech_net",
    "degenerate",
    "path_feasible",
    "first_failure",
    "control_problem",
    "cond_interests_differ",
    "cond_resources_exceed",
    "cond_power_exceeds",
    "prop1_premises",
    "prop1_conclusion",
    "ai_holding",
    "total_resources",
    "certified",
    "prop3_holds",
    "root_action",
    "root_payoff",
)


class ScenarioLoadError(ValueError):
    """Parse or schema failure, annotated with a position or field path."""


def _fail(path: str, message: str):
    raise ScenarioLoadError(f"{path}: {message}")


def _expect(doc: dict, key: str, kind, path: str, default=None, required=False):
    if key not in doc:
        if required:
            _fail(f"{path}{key}", "missing required field")
        return default
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            _fail(f"{path}{key}", f"expected a number, got {type(value).__name__}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(f"{path}{key}", f"expected an integer, got {type(value).__name__}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            _fail(f"{path}{key}", f"expected a boolean, got {type(value).__name__}")
        return value
    if kind is str:
        if not isinstance(value, str):
            _fail(f"{path}{key}", f"expected a string, got {type(value).__name__}")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            _fail(f"{path}{key}", f"expected an object, got {type(value).__name__}")
        return value
    if kind is list:
        if not isinstance(value, list):
            _fail(f"{path}{key}", f"expected a list, got {type(value).__name__}")
        return value
    raise AssertionError(kind)


def descriptor_from_json(doc, path: str) -> FunctionDescriptor:
    if not isinstance(doc, dict):
        _fail(path, f"expected an object, got {type(doc).__name__}")
    family = _expect(doc, "family", str, path + ".", required=True)
    params = _expect(doc, "params", list, path + ".", required=True)
    if not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in params):
        _fail(f"{path}.params", "expected a list of numbers")
    kwargs = {}
    raw_domain = doc.get("domain")
    if raw_domain is not None:
        if (not isinstance(raw_domain, list)) or len(raw_domain) != 2:
            _fail(f"{path}.domain", "expected [lo, hi] with hi possibly null")
        lo = float(raw_domain[0])
        hi = INF if raw_domain[1] is None else float(raw_domain[1])
        kwargs["domain"] = (lo, hi)
    try:
        return FunctionDescriptor(family, tuple(float(p) for p in params), **kwargs)
    except ValueError as exc:
        _fail(path, str(exc))


def descriptor_to_json(fd: FunctionDescriptor) -> dict:
    return fd.to_dict()


def scenario_from_json(doc: dict) -> Scenario:
    """Build a scenario from a JSON-level document (defaults filled)."""
    if not isinstance(doc, dict):
        raise ScenarioLoadError("document root: expected an object")
    version = _expect(doc, "schema_version", int, "", default=SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"unsupported version {version}")

    tol_doc = _expect(doc, "tolerances", dict, "", default={})
    feas = tol_doc.get("feas_slack")
    if feas is not None and (isinstance(feas, bool) or not isinstance(feas, (int, float))):
        _fail("tolerances.feas_slack", "expected a number or null")
    tolerances = Tolerances(
        dy=_expect(tol_doc, "dy", float, "tolerances.", default=0.01),
        root_tol=_expect(tol_doc, "root_tol", float, "tolerances.", default=1e-9),
        feas_slack=None if feas is None else float(feas),
    )

    def fd_field(key: str) -> FunctionDescriptor | None:
        return descriptor_from_json(doc[key], key) if key in doc and doc[key] is not None else None

    ai = None
    if doc.get("ai") is not None:
        ai_doc = _expect(doc, "ai", dict, "")
        kind = _expect(ai_doc, "kind", str, "ai.", default="paperclip")
        ai = AISpec(
            utility=descriptor_from_json(
                ai_doc.get("utility") or _fail("ai.utility", "missing required field"),
                "ai.utility",
            ),
            strength=_expect(ai_doc, "strength", float, "ai.", default=0.0),
            theta=_expect(ai_doc, "theta", float, "ai.", default=0.0),
            kind=kind,
        )

    agents = None
    if doc.get("agents") is not None:
        raw = _expect(doc, "agents", list, "")
        built = []
        for k, a in enumerate(raw):
            where = f"agents[{k}]"
            if not isinstance(a, dict):
                _fail(where, "expected an object")
            built.append(AgentSpec(
                id=_expect(a, "id", int, where + ".", default=k),
                strength=_expect(a, "strength", float, where + ".", required=True),
                endowment=_expect(a, "endowment", float, where + ".", required=True),
                utility=descriptor_from_json(
                    a.get("utility") or _fail(where + ".utility", "missing required field"),
                    where + ".utility",
                ),
            ))
        agents = tuple(built)

    game = None
    if doc.get("activation_game") is not None:
        g = _expect(doc, "activation_game", dict, "")
        game = ActivationGameSpec(
            paperclips_base=_expect(g, "paperclips_base", float, "activation_game.", default=1.0),
            paperclips_with_research=_expect(
                g, "paperclips_with_research", float, "activation_game.", default=1.5),
            research_reward_with_resources=_expect(
                g, "research_reward_with_resources", float, "activation_game.", default=1.0),
            research_reward_without=_expect(
                g, "research_reward_without", float, "activation_game.", default=0.0),
            power_payoff_scale=_expect(
                g, "power_payoff_scale", float, "activation_game.", default=1.0),
            depth=_expect(g, "depth", int, "activation_game.", default=2),
        )

    init_strength = doc.get("initial_agent_strength")
    if init_strength is not None:
        init_strength = _expect(doc, "initial_agent_strength", float, "")

    return Scenario(
        grid_n=_expect(doc, "grid_n", int, "", default=1001),
        endowment=fd_field("endowment"),
        free_pool=_expect(doc, "free_pool", float, "", default=0.0),
        human_utility=fd_field("human_utility"),
        ai=ai,
        technology=fd_field("technology"),
        power_cost=fd_field("power_cost"),
        tolerances=tolerances,
        agents=agents,
        path_analysis=_expect(doc, "path_analysis", bool, "", default=False),
        initial_agent_strength=init_strength,
        activation_game=game,
        integrated_ai=_expect(doc, "integrated_ai", bool, "", default=False),
    )


def scenario_to_json(scenario: Scenario) -> dict:
    doc: dict = {"schema_version": SCHEMA_VERSION, "grid_n": scenario.grid_n}
    doc["free_pool"] = scenario.free_pool
    if scenario.endowment is not None:
        doc["endowment"] = descriptor_to_json(scenario.endowment)
    if scenario.human_utility is not None:
        doc["human_utility"] = descriptor_to_json(scenario.human_utility)
    if scenario.ai is not None:
        doc["ai"] = {
            "strength": scenario.ai.strength,
            "theta": scenario.ai.theta,
            "kind": scenario.ai.kind,
            "utility": descriptor_to_json(scenario.ai.utility),
        }
    if scenario.technology is not None:
        doc["technology"] = descriptor_to_json(scenario.technology)
    if scenario.power_cost is not None:
        doc["power_cost"] = descriptor_to_json(scenario.power_cost)
    doc["tolerances"] = {
        "dy": scenario.tolerances.dy,
        "root_tol": scenario.tolerances.root_tol,
        "feas_slack": scenario.tolerances.feas_slack,
    }
    if scenario.agents is not None:
        doc["agents"] = [
            {"id": a.id, "strength": a.strength, "endowment": a.endowment,
             "utility": descriptor_to_json(a.utility)}
            for a in scenario.agents
        ]
    if scenario.path_analysis:
        doc["path_analysis"] = True
    if scenario.initial_agent_strength is not None:
        doc["initial_agent_strength"] = scenario.initial_agent_strength
    if scenario.activation_game is not None:
        g = scenario.activation_game
        doc["activation_game"] = {
            "paperclips_base": g.paperclips_base,
            "paperclips_with_research": g.paperclips_with_research,
            "research_reward_with_resources": g.research_reward_with_resources,
            "research_reward_without": g.research_reward_without,
            "power_payoff_scale": g.power_payoff_scale,
            "depth": g.depth,
        }
    if scenario.integrated_ai:
        doc["integrated_ai"] = True
    return doc


def load_scenario_document(path: str | Path) -> dict:
    """Parse the raw JSON document, annotating parse failures by position."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioLoadError(f"{p}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioLoadError(
            f"{p}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def load_scenario(path: str | Path) -> Scenario:
    """Load, schema-check, and shape-validate a scenario file."""
    scenario = scenario_from_json(load_scenario_document(path))
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError(violations)
    return scenario


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def scenario_digest(doc: dict) -> str:
    """Content hash of a canonicalized document; key order never matters."""
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepAxis:
    path: str
    values: tuple = ()
    draw: str | None = None
    count: int = 0


@dataclass(frozen=True)
class SweepSpec:
    base: dict
    axes: tuple[SweepAxis, ...] = ()
    seed: int = 0
    command: str | None = None


class SweepBudgetError(ValueError):
    def __init__(self, size: int, budget: int):
        self.size = size
        self.budget = budget
        super().__init__(f"sweep expands to {size} scenarios, over the budget of {budget}")


DRAW_KINDS = ("endowment", "power-cost", "technology", "utility")


def draw_descriptor(kind: str, rng: np.random.Generator) -> dict:
    """A random well-shaped family for the given role, as a JSON descriptor."""
    if kind == "endowment":
        pick = rng.integers(0, 4)
        if pick == 0:
            return {"family": "constant", "params": [float(rng.uniform(0.2, 3.0))]}
        if pick == 1:
            return {"family": "linear",
                    "params": [float(rng.uniform(0.0, 3.0)), float(rng.uniform(0.0, 1.0))]}
        if pick == 2:
            return {"family": "power",
                    "params": [float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.3, 2.0))]}
        return {"family": "quadratic",
                "params": [float(rng.uniform(0.0, 2.0)), float(rng.uniform(0.0, 2.0)),
                           float(rng.uniform(0.0, 1.0))]}
    if kind == "power-cost":
        pick = rng.integers(0, 3)
        if pick == 0:
            return {"family": "quadratic", "params": [float(rng.uniform(0.05, 2.0))]}
        if pick == 1:
            return {"family": "power",
                    "params": [float(rng.uniform(0.05, 2.0)), float(rng.uniform(1.0, 3.0))]}
        return {"family": "linear", "params": [float(rng.uniform(0.0, 2.0))]}
    if kind == "technology":
        pick = rng.integers(0, 2)
        if pick == 0:
            return {"family": "power",
                    "params": [float(rng.uniform(0.5, 4.0)), float(rng.uniform(0.2, 0.9))]}
        return {"family": "log",
                "params": [float(rng.uniform(0.5, 4.0)), float(rng.uniform(0.5, 3.0))]}
    if kind == "utility":
        pick = rng.integers(0, 4)
        if pick == 0:
            return {"family": "linear", "params": [float(rng.uniform(0.2, 2.0))]}
        if pick == 1:
            return {"family": "log",
                    "params": [float(rng.uniform(0.2, 2.0)), float(rng.uniform(0.5, 2.0))]}
        if pick == 2:
            return {"family": "capped-linear",
                    "params": [float(rng.uniform(0.2, 4.0)), float(rng.uniform(0.2, 2.0))]}
        return {"family": "power",
                "params": [float(rng.uniform(0.2, 2.0)), float(rng.uniform(0.3, 0.95))]}
    raise ValueError(f"unknown draw kind {kind!r}; expected one of {DRAW_KINDS}")


def sweep_spec_from_json(doc: dict, base_dir: Path | None = None) -> SweepSpec:
    if not isinstance(doc, dict):
        raise ScenarioLoadError("sweep root: expected an object")
    base = doc.get("base")
    if isinstance(base, str):
        base_path = Path(base)
        if base_dir is not None and not base_path.is_absolute():
            base_path = base_dir / base_path
        base = load_scenario_document(base_path)
    if not isinstance(base, dict):
        raise ScenarioLoadError("base: expected a scenario object or a file path")
    axes = []
    for k, ax in enumerate(doc.get("axes", [])):
        where = f"axes[{k}]"
        if not isinstance(ax, dict) or "path" not in ax:
            raise ScenarioLoadError(f"{where}: expected an object with a 'path'")
        path = ax["path"]
        if "values" in ax:
            axes.append(SweepAxis(path=path, values=tuple(ax["values"])))
        elif "range" in ax:
            rng_spec = ax["range"]
            if not (isinstance(rng_spec, list) and len(rng_spec) == 3):
                raise ScenarioLoadError(f"{where}.range: expected [start, stop, step]")
            start, stop, step = (float(v) for v in rng_spec)
            if step <= 0:
                raise ScenarioLoadError(f"{where}.range: step must be > 0")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            axes.append(SweepAxis(path=path, values=tuple(start + i * step for i in range(count))))
        elif "draw" in ax:
            axes.append(SweepAxis(path=path, draw=str(ax["draw"]), count=int(ax.get("count", 1))))
        else:
            raise ScenarioLoadError(f"{where}: needs 'values', 'range', or 'draw'")
    return SweepSpec(
        base=base,
        axes=tuple(axes),
        seed=int(doc.get("seed", 0)),
        command=doc.get("command"),
    )


def _resolve_parent(doc: dict, path: str):
    parts = path.split(".")
    node = doc
    for part in parts[:-1]:
        if not isinstance(node, dict) or part not in node:
            raise ScenarioLoadError(f"axis path {path!r} does not resolve in the base scenario")
        node = node[part]
    if not isinstance(node, dict):
        raise ScenarioLoadError(f"axis path {path!r} does not resolve in the base scenario")
    return node, parts[-1]


def expand_sweep_documents(spec: SweepSpec, budget: int = 4096) -> list[dict]:
    """Cartesian product of the axes over the base document.

    Returns scenario documents (JSON level) in lexicographic axis order so
    that digests can be computed before any solver runs.  Randomized family
    draws are reproducible from the seed alone.
    """
    value_lists: list[tuple] = []
    for index, axis in enumerate(spec.axes):
        _resolve_parent(spec.base, axis.path)  # fail early on bad paths
        if axis.draw is not None:
            rng = np.random.default_rng([spec.seed, index])
            value_lists.append(tuple(draw_descriptor(axis.draw, rng) for _ in range(axis.count)))
        else:
            value_lists.append(axis.values)
    size = 1
    for values in value_lists:
        size *= max(len(values), 1)
    if size > budget:
        raise SweepBudgetError(size, budget)
    out: list[dict] = []
    for combo in itertools.product(*value_lists) if value_lists else [()]:
        doc = copy.deepcopy(spec.base)
        for axis, value in zip(spec.axes, combo):
            parent, leaf = _resolve_parent(doc, axis.path)
            parent[leaf] = copy.deepcopy(value)
        out.append(doc)
    return out


def expand_sweep(spec: SweepSpec, budget: int = 4096) -> list[Scenario]:
    """The expanded sweep as constructed scenarios, same deterministic order."""
    return [scenario_from_json(doc) for doc in expand_sweep_documents(spec, budget)]


# ---------------------------------------------------------------------------
# run records


@dataclass
class RunRecord:
    scenario_digest: str
    command: str
    tool_version: str = TOOL_VERSION
    timestamp: str = ""
    payload: dict = field(default_factory=dict)
    certification: dict = field(default_factory=dict)


def format_float(value: float) -> str:
    return f"{value:.17g}"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def record_to_row(record: RunRecord) -> dict[str, str]:
    row = {col: "" for col in CSV_COLUMNS}
    row["scenario_digest"] = record.scenario_digest
    row["command"] = record.command
    row["tool_version"] = record.tool_version
    for key, value in record.payload.items():
        if key in row:
            row[key] = _csv_cell(value)
    for key, value in record.certification.items():
        if key in row:
            row[key] = _csv_cell(value)
    return row


def _record_document(record: RunRecord) -> dict:
    # timestamps live only in the manifest so payload files are rerun-stable
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario_digest": record.scenario_digest,
        "command": record.command,
        "tool_version": record.tool_version,
        "payload": record.payload,
        "certification": record.certification,
    }


def _record_csv_text(record: RunRecord) -> str:
    row = record_to_row(record)
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    buf.write(",".join(row[col] for col in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def write_results(
    records: list[RunRecord],
    out_dir: str | Path,
    fmt: str = "json",
) -> Path:
    """Write one file per record plus ``manifest.json``; returns the manifest path.

    Layout: ``<out_dir>/manifest.json`` and ``<out_dir>/runs/<digest>.<ext>``.
    A record whose digest was already written is not rewritten; the manifest
    entry points at the original file and is marked as a duplicate.
    """
    if fmt not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {fmt!r}")
    out = Path(out_dir)
    runs = out / "runs"
    runs.mkdir(parents=True, exist_ok=True)
    ext = fmt
    entries = []
    seen: dict[str, str] = {}
    for record in records:
        name = f"{record.scenario_digest}.{ext}"
        target = runs / name
        entry = {
            "digest": record.scenario_digest,
            "command": record.command,
            "file": f"runs/{name}",
            "timestamp": record.timestamp,
        }
        if record.scenario_digest in seen or target.exists():
            entry["duplicate_of"] = f"runs/{name}"
        else:
            if fmt == "json":
                # allow_nan=False: a non-finite value in a payload is a bug,
                # not something to smuggle past the JSON grammar
                target.write_text(
                    json.dumps(_record_document(record), sort_keys=True, indent=2,
                               allow_nan=False) + "\n",
                    encoding="utf-8",
                )
            else:
                target.write_text(_record_csv_text(record), encoding="utf-8")
            seen[record.scenario_digest] = name
        entries.append(entry)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "format": fmt,
        "records": entries,
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path


def read_records(out_dir: str | Path) -> list[RunRecord]:
    """Load records back from a result directory (JSON format only)."""
    out = Path(out_dir)
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    records = []
    for entry in manifest["records"]:
        doc = json.loads((out / entry["file"]).read_text(encoding="utf-8"))
        records.append(RunRecord(
            scenario_digest=doc["scenario_digest"],
            command=doc["command"],
            tool_version=doc["tool_version"],
            timestamp=entry.get("timestamp", ""),
            payload=doc["payload"],
            certification=doc["certification"],
        ))
    return records
