"""freshroute <solve|evaluate|compare|oracle|gen> [flags]

Exit codes: 0 success (best plan feasible), 1 input or usage error,
2 finished but the plan is infeasible.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from . import __version__
from .evaluator import check_constraints, evaluate
from .ga import GaConfig, InstanceError, best_of, solve_restarts
from .generate import random_instance
from .instance_io import (
    FormatError,
    InvalidInstance,
    emit_instance,
    emit_plan,
    load_instance,
    paper_instance,
    parse_plan,
)
from .model import Instance, RoutePlan
from .oracle import DEFAULT_LIMIT, EnumerationTooLarge, enumerate_optimum
from .report import export_route_geometry, render_comparison, summary_text, trace_csv

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2

PAPER = "paper"
PAPER_PLANS = {
    "paper:before": "1 8 3 2 1\n2 4 6 7 5\n",
    "paper:after": "1 4 1 2 3 8\n2 5 7 6\n",
}

log = logging.getLogger("freshroute")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _instance(path: str) -> Instance:
    if path == PAPER:
        return paper_instance()
    return load_instance(path)


def _plan(path: str, instance: Instance) -> RoutePlan:
    if path in PAPER_PLANS:
        text = PAPER_PLANS[path]
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_plan(text, instance.fleet.vehicle_count)


def _write(out: Optional[Path], name: str, text: str) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8", newline="\n")


def _structural(instance: Instance, plan: RoutePlan) -> List[str]:
    return [v.message for v in check_constraints(instance, plan) if v.structural]


def cmd_solve(args) -> int:
    inst = _instance(args.instance)
    config = GaConfig(
        population_size=args.population,
        crossover_rate=args.pc,
        mutation_rate=args.pm,
        inversion_rate=args.inversion,
        max_generations=args.generations,
        stall_generations=args.stall,
        rng_seed=args.seed,
        elitism_count=args.elitism,
    )
    reports = solve_restarts(inst, config, args.restarts, workers=args.workers)
    rep = best_of(reports)
    cb = rep.best_cost
    header = (f"best of {len(reports)} run(s), seed {rep.seed}: {rep.generations_run} generations,"
              f" last improvement at {rep.converged_at}")
    report = header + "\n" + summary_text(inst, rep.best_plan, cb)
    sys.stdout.write(report)

    out = Path(args.out) if args.out else None
    _write(out, "best_plan.txt", emit_plan(rep.best_plan, f"{inst.name} seed {rep.seed} total {cb.total!r}"))
    _write(out, "trace.csv", trace_csv(rep.trace))
    _write(out, "report.txt", report)
    svg, stops = export_route_geometry(inst, rep.best_plan, title=f"{inst.name} seed {rep.seed}")
    _write(out, "stops.csv", stops)
    if svg is not None:
        _write(out, "routes.svg", svg)
    return EXIT_OK if cb.feasible else EXIT_INFEASIBLE


def cmd_evaluate(args) -> int:
    inst = _instance(args.instance)
    plan = _plan(args.plan, inst)
    bad = _structural(inst, plan)
    if bad:
        for msg in bad:
            print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    cb = evaluate(inst, plan)
    sys.stdout.write(summary_text(inst, plan, cb))
    if args.out:
        svg, stops = export_route_geometry(inst, plan)
        _write(Path(args.out), "stops.csv", stops)
        if svg is not None:
            _write(Path(args.out), "routes.svg", svg)
    return EXIT_OK if cb.feasible else EXIT_INFEASIBLE


def cmd_compare(args) -> int:
    inst = _instance(args.instance)
    plans = [_plan(p, inst) for p in (args.plan_a, args.plan_b)]
    for p in plans:
        bad = _structural(inst, p)
        if bad:
            for msg in bad:
                print(f"error: {msg}", file=sys.stderr)
            return EXIT_INPUT
    labels = tuple(args.labels.split(",", 1)) if args.labels else ("A", "B")
    if len(labels) != 2:
        raise UsageError("--labels needs two comma-separated names")
    sys.stdout.write(render_comparison(inst, plans[0], plans[1], labels, fmt=args.format))
    if args.csv:
        Path(args.csv).write_text(render_comparison(inst, plans[0], plans[1], labels, fmt="csv"),
                                  encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _instance(args.instance)
    try:
        res = enumerate_optimum(inst, limit=args.limit)
    except EnumerationTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(f"plans enumerated: {res.plans_enumerated}")
    sys.stdout.write(summary_text(inst, res.optimum_plan, res.optimum_cost))
    if args.out_plan:
        Path(args.out_plan).write_text(
            emit_plan(res.optimum_plan, f"{inst.name} exact optimum total {res.optimum_cost.total!r}"),
            encoding="utf-8", newline="\n")
    return EXIT_OK if res.optimum_is_feasible else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    try:
        inst = random_instance(args.stores, args.vehicles, seed=args.seed, tightness=args.tightness,
                               area=args.area, capacity=args.capacity)
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = emit_instance(inst)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="freshroute", description="Soft-time-window delivery routing toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    inst_help = "instance file, or 'paper' for the bundled eight-store case (default)"

    s = sub.add_parser("solve", help="run the genetic algorithm")
    s.add_argument("instance", nargs="?", default=PAPER, help=inst_help)
    defaults = GaConfig()
    s.add_argument("--seed", type=int, default=defaults.rng_seed)
    s.add_argument("--generations", type=int, default=defaults.max_generations)
    s.add_argument("--population", type=int, default=defaults.population_size)
    s.add_argument("--pc", type=float, default=defaults.crossover_rate, help="crossover rate")
    s.add_argument("--pm", type=float, default=defaults.mutation_rate, help="mutation rate")
    s.add_argument("--inversion", type=float, default=defaults.inversion_rate)
    s.add_argument("--stall", type=int, default=defaults.stall_generations,
                   help="stop after this many generations without improvement")
    s.add_argument("--elitism", type=int, default=defaults.elitism_count)
    s.add_argument("--restarts", type=int, default=1, help="independent runs with seeds seed..seed+R-1")
    s.add_argument("--workers", type=int, default=1, help="processes for --restarts")
    s.add_argument("--out", help="directory for best_plan.txt, trace.csv, report.txt, stops.csv, routes.svg")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("evaluate", help="price a plan and list violations")
    e.add_argument("instance", help=inst_help)
    e.add_argument("plan", help="plan file, or paper:before / paper:after")
    e.add_argument("--out", help="directory for stops.csv and routes.svg")
    e.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("compare", help="side-by-side cost table for two plans")
    c.add_argument("instance", help=inst_help)
    c.add_argument("plan_a")
    c.add_argument("plan_b")
    c.add_argument("--labels", help="names for the two plans, e.g. before,after")
    c.add_argument("--format", choices=("text", "csv"), default="text")
    c.add_argument("--csv", help="also write the CSV table here")
    c.set_defaults(func=cmd_compare)

    o = sub.add_parser("oracle", help="exact optimum by enumeration (small instances)")
    o.add_argument("instance", nargs="?", default=PAPER, help=inst_help)
    o.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    o.add_argument("--out-plan")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="random instance")
    g.add_argument("--stores", type=int, default=7)
    g.add_argument("--vehicles", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tightness", type=int, default=60, help="max window slack each side, minutes")
    g.add_argument("--area", type=float, default=30.0, help="side of the square area, km")
    g.add_argument("--capacity", type=float, default=2.0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (FormatError, InvalidInstance, InstanceError, UsageError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
