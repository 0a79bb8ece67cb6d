"""Deterministic solvers for a power-ordered (jungle) economy with a
goal-directed AI: equilibria, technology and power investment, the
control-problem predicate, and the AI activation game."""

from .model import (
    ActivationGameSpec,
    AgentSpec,
    AISpec,
    DomainError,
    FunctionDescriptor,
    NondifferentiableWarning,
    Scenario,
    ScenarioError,
    Tolerances,
    capped_linear,
    constant,
    default_path_slack,
    definite_integral,
    depletion_level,
    derivative,
    evaluate,
    exponential,
    linear,
    log,
    piecewise_table,
    power,
    quadratic,
    satiation_point,
    second_derivative,
    validate_scenario,
)
from .equilibrium import (
    AI_ID,
    FREE_POOL_ID,
    Allocation,
    EquilibriumResult,
    Prop1Report,
    Transfer,
    check_prop1,
    find_profitable_deviation,
    solve_jungle_equilibrium,
)
from .optimize import (
    PathResult,
    PathStep,
    PowerSolution,
    TechnologySolution,
    check_prop2_conditions,
    optimize_power,
    optimize_technology,
    simulate_accumulation_path,
)
from .control import (
    ActivationGame,
    ControlProblemReport,
    GameNode,
    Prop3Report,
    StrategyProfile,
    activates_power_on_path,
    build_activation_game,
    check_control_problem,
    is_equilibrium,
    solve_backward_induction,
    verify_prop3,
)
from .scenario_io import (
    RunRecord,
    ScenarioLoadError,
    SweepAxis,
    SweepBudgetError,
    SweepSpec,
    expand_sweep,
    expand_sweep_documents,
    load_scenario,
    read_records,
    scenario_digest,
    scenario_from_json,
    scenario_to_json,
    sweep_spec_from_json,
    write_results,
)

__version__ = "0.1.0"
