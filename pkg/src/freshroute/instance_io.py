"""Text formats for instances and plans.

Instance file (UTF-8, one record per line, ``#`` starts a comment)::

    META
    name <token>
    currency <token>
    depot_open HH:MM
    FLEET
    vehicles <int>
    capacity <num>
    max_distance <num>
    speed <num>
    COEFFS
    per_km <num>
    early_penalty <num>
    late_penalty <num>
    infeasibility_weight <num>
    STORES
    <id> <demand> <handling> HH:MM HH:MM [HH:MM HH:MM]
    MATRIX
    <N+1 rows, full or lower-triangular>
    COORDS                      (optional)
    <node> <x> <y>

The last two STORES columns are the expected window. Plan file: one line per
vehicle, ``<vehicle> <store> <store> ...``; vehicles left out run empty.
"""

from __future__ import annotations

from importlib import resources
from typing import Dict, List, Optional

from .model import CostCoefficients, Fleet, Instance, RoutePlan, Store, validate_instance

SECTIONS = ("META", "FLEET", "COEFFS", "STORES", "MATRIX", "COORDS")
REQUIRED = SECTIONS[:-1]

_KEYS = {
    "META": ("name", "currency", "depot_open"),
    "FLEET": ("vehicles", "capacity", "max_distance", "speed"),
    "COEFFS": ("per_km", "early_penalty", "late_penalty", "infeasibility_weight"),
}

PAPER_FIXTURE = "paper_8store.txt"


class FormatError(ValueError):
    def __init__(self, lineno: Optional[int], message: str):
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)
        self.lineno = lineno


class InvalidInstance(ValueError):
    def __init__(self, problems: List[str]):
        super().__init__("instance violates model invariants:\n  " + "\n  ".join(problems))
        self.problems = problems


def parse_hhmm(text: str) -> int:
    hh, sep, mm = text.partition(":")
    if not sep or not hh.isdigit() or not mm.isdigit() or len(mm) != 2:
        raise ValueError(f"expected HH:MM, got {text!r}")
    h, m = int(hh), int(mm)
    if h > 23 or m > 59:
        raise ValueError(f"time {text!r} outside 00:00..23:59")
    return h * 60 + m


def format_hhmm(minutes: float) -> str:
    m = int(round(minutes))
    return f"{m // 60:02d}:{m % 60:02d}"


def format_number(x: float) -> str:
    """Shortest text that reads back to the same float; integers lose the '.0'."""
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _num(tok: str, lineno: int, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise FormatError(lineno, f"{what}: expected a number, got {tok!r}") from None


def parse_instance(text: str, validate: bool = True) -> Instance:
    sections: Dict[str, List[tuple]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in SECTIONS:
            if line in sections:
                raise FormatError(lineno, f"section {line} repeated")
            current = line
            sections[current] = []
            continue
        if current is None:
            raise FormatError(lineno, f"expected a section header ({', '.join(SECTIONS)})")
        sections[current].append((lineno, line.split()))

    kv: Dict[str, Dict[str, tuple]] = {}
    for sec, keys in _KEYS.items():
        kv[sec] = {}
        for lineno, toks in sections.get(sec, ()):
            if len(toks) != 2 or toks[0] not in keys:
                raise FormatError(lineno, f"{sec}: expected '<key> <value>' with key in {keys}")
            kv[sec][toks[0]] = (lineno, toks[1])

    for name in REQUIRED:
        if name not in sections:
            raise FormatError(None, f"missing section {name}")
    for sec, keys in _KEYS.items():
        for key in keys:
            if key not in kv[sec]:
                raise FormatError(None, f"{sec}: missing key {key}")

    meta = kv["META"]
    lineno, tok = meta["depot_open"]
    try:
        depot_open = parse_hhmm(tok)
    except ValueError as e:
        raise FormatError(lineno, f"depot_open: {e}") from None

    f = {k: _num(v, ln, k) for k, (ln, v) in kv["FLEET"].items()}
    ln, vtok = kv["FLEET"]["vehicles"]
    if not vtok.isdigit():
        raise FormatError(ln, f"vehicles: expected a positive integer, got {vtok!r}")
    fleet = Fleet(int(vtok), f["capacity"], f["max_distance"], f["speed"])
    c = {k: _num(v, ln, k) for k, (ln, v) in kv["COEFFS"].items()}
    coeffs = CostCoefficients(c["per_km"], c["early_penalty"], c["late_penalty"],
                              c["infeasibility_weight"])

    stores = []
    for lineno, toks in sections["STORES"]:
        if len(toks) not in (5, 7):
            raise FormatError(
                lineno, "STORES: expected '<id> <demand> <handling> HH:MM HH:MM [HH:MM HH:MM]'"
            )
        if not toks[0].isdigit():
            raise FormatError(lineno, f"STORES: store id must be a positive integer, got {toks[0]!r}")
        try:
            times = [parse_hhmm(t) for t in toks[3:]]
        except ValueError as e:
            raise FormatError(lineno, f"STORES: {e}") from None
        stores.append(Store(
            id=int(toks[0]),
            demand=_num(toks[1], lineno, "demand"),
            handling_time=_num(toks[2], lineno, "handling"),
            accept_earliest=times[0],
            accept_latest=times[1],
            expected_earliest=times[2] if len(times) == 4 else None,
            expected_latest=times[3] if len(times) == 4 else None,
        ))

    size = len(stores) + 1
    rows = sections["MATRIX"]
    if len(rows) != size:
        raise FormatError(
            rows[-1][0] if rows else None,
            f"MATRIX: expected {size} rows (depot plus {size - 1} stores), got {len(rows)}",
        )
    matrix = [[0.0] * size for _ in range(size)]
    lower_only = [False] * size
    for i, (lineno, toks) in enumerate(rows):
        if len(toks) == size:
            matrix[i] = [_num(t, lineno, "distance") for t in toks]
        elif len(toks) == i + 1:
            lower_only[i] = True
            for j, t in enumerate(toks):
                matrix[i][j] = _num(t, lineno, "distance")
        else:
            raise FormatError(
                lineno, f"MATRIX row {i}: expected {size} values (full) or {i + 1} (lower-triangular)"
            )
    for i in range(size):
        for j in range(i + 1, size):
            if lower_only[i]:
                matrix[i][j] = matrix[j][i]

    coords = None
    if "COORDS" in sections:
        pts: Dict[int, tuple] = {}
        for lineno, toks in sections["COORDS"]:
            if len(toks) != 3 or not toks[0].isdigit():
                raise FormatError(lineno, "COORDS: expected '<node> <x> <y>'")
            pts[int(toks[0])] = (_num(toks[1], lineno, "x"), _num(toks[2], lineno, "y"))
        if sorted(pts) != list(range(size)):
            raise FormatError(None, f"COORDS: need exactly nodes 0..{size - 1}")
        coords = tuple(pts[i] for i in range(size))

    inst = Instance(
        stores=tuple(stores),
        fleet=fleet,
        coeffs=coeffs,
        distances=tuple(tuple(r) for r in matrix),
        depot_open=depot_open,
        name=meta["name"][1],
        currency=meta["currency"][1],
        coords=coords,
    )
    if validate:
        problems = validate_instance(inst)
        if problems:
            raise InvalidInstance(problems)
    return inst


def emit_instance(instance: Instance) -> str:
    fn = format_number
    out = [
        "META",
        f"name {instance.name}",
        f"currency {instance.currency}",
        f"depot_open {format_hhmm(instance.depot_open)}",
        "FLEET",
        f"vehicles {instance.fleet.vehicle_count}",
        f"capacity {fn(instance.fleet.capacity)}",
        f"max_distance {fn(instance.fleet.max_route_distance)}",
        f"speed {fn(instance.fleet.speed)}",
        "COEFFS",
        f"per_km {fn(instance.coeffs.per_km)}",
        f"early_penalty {fn(instance.coeffs.early_penalty)}",
        f"late_penalty {fn(instance.coeffs.late_penalty)}",
        f"infeasibility_weight {fn(instance.coeffs.infeasibility_weight)}",
        "STORES",
    ]
    for s in instance.stores:
        cols = [str(s.id), fn(s.demand), fn(s.handling_time),
                format_hhmm(s.accept_earliest), format_hhmm(s.accept_latest)]
        if s.expected_earliest is not None:
            cols += [format_hhmm(s.expected_earliest), format_hhmm(s.expected_latest)]
        out.append(" ".join(cols))
    out.append("MATRIX")
    out.extend(" ".join(fn(x) for x in row) for row in instance.distances)
    if instance.coords is not None:
        out.append("COORDS")
        out.extend(f"{i} {fn(x)} {fn(y)}" for i, (x, y) in enumerate(instance.coords))
    return "\n".join(out) + "\n"


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def paper_fixture_text() -> str:
    return resources.files("freshroute").joinpath("data", PAPER_FIXTURE).read_text(encoding="utf-8")


def paper_instance() -> Instance:
    return parse_instance(paper_fixture_text())


def parse_plan(text: str, n_vehicles: int) -> RoutePlan:
    """Read a plan file; store ids are not checked here (see check_constraints)."""
    routes: Dict[int, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise FormatError(lineno, "expected '<vehicle> <store> <store> ...' as integers") from None
        k = nums[0]
        if not 1 <= k <= n_vehicles:
            raise FormatError(lineno, f"vehicle {k} outside 1..{n_vehicles}")
        if k in routes:
            raise FormatError(lineno, f"vehicle {k} listed twice")
        routes[k] = tuple(nums[1:])
    return RoutePlan(tuple(routes.get(k, ()) for k in range(1, n_vehicles + 1)))


def emit_plan(plan: RoutePlan, comment: Optional[str] = None) -> str:
    lines = [f"# {c}" for c in comment.splitlines()] if comment else []
    for k, route in enumerate(plan.routes, start=1):
        lines.append(" ".join([str(k)] + [str(s) for s in route]))
    return "\n".join(lines) + "\n"


def load_plan(path, n_vehicles: int) -> RoutePlan:
    with open(path, encoding="utf-8") as fh:
        return parse_plan(fh.read(), n_vehicles)
