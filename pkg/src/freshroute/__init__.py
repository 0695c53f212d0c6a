"""Soft-time-window vehicle routing: cost model, GA solver, exact oracle."""

from .evaluator import (
    RouteTimeline,
    Stop,
    check_constraints,
    evaluate,
    penalty_cost,
    propagate_times,
    transport_cost,
)
from .ga import Chromosome, GaConfig, SolveReport, decode, encode, solve
from .instance_io import emit_instance, paper_instance, parse_instance, parse_plan
from .model import (
    CostBreakdown,
    CostCoefficients,
    Fleet,
    Instance,
    RoutePlan,
    Store,
    Violation,
    travel_time,
    validate_instance,
)
from .oracle import OracleResult, enumerate_optimum

__version__ = "0.1.0"

BEFORE_PLAN = RoutePlan.of([8, 3, 2, 1], [4, 6, 7, 5])
AFTER_PLAN = RoutePlan.of([4, 1, 2, 3, 8], [5, 7, 6])
