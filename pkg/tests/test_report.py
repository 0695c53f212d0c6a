import csv
import io
import xml.etree.ElementTree as ET

import pytest

from freshroute.evaluator import evaluate, propagate_times
from freshroute.ga import GaConfig, solve
from freshroute.model import RoutePlan
from freshroute.report import (
    comparison_rows,
    export_route_geometry,
    render_comparison,
    route_svg,
    trace_csv,
)

SVG = "{http://www.w3.org/2000/svg}"


def _rows(paper, a, b):
    return {(r[0], r[1]): r for r in comparison_rows(paper, a, b, ("before", "after"))}


def test_comparison_load_factors(paper, before_plan, after_plan):
    rows = _rows(paper, before_plan, after_plan)
    assert round(rows["before", "1"][2]) == 60
    assert round(rows["before", "2"][2]) == 110
    assert round(rows["after", "1"][2]) == 90
    assert round(rows["after", "2"][2]) == 80
    assert rows["before", "2"][8] == "INFEASIBLE"
    assert rows["before", "1"][8] == "ok"
    assert rows["after", "total"][8] == "ok"
    text = render_comparison(paper, before_plan, after_plan, ("before", "after"))
    assert "110%" in text and "INFEASIBLE" in text


def test_mileage_delta(paper, before_plan, after_plan):
    rows = _rows(paper, before_plan, after_plan)
    assert rows["before", "total"][7] == 218
    assert rows["after", "total"][7] == 203
    assert rows["delta", "total"][7] == -15


def test_totals_obey_identities(paper, before_plan, after_plan):
    rows = comparison_rows(paper, before_plan, after_plan)
    for label in ("A", "B"):
        vehicles = [r for r in rows if r[0] == label and r[1] != "total"]
        (total,) = [r for r in rows if r[0] == label and r[1] == "total"]
        assert total[3] == sum(r[3] for r in vehicles)
        assert total[4] == sum(r[4] for r in vehicles)
        assert total[5] == total[3] + total[4]


def test_self_comparison_zero_deltas(paper, before_plan):
    for r in comparison_rows(paper, before_plan, before_plan):
        if r[0] == "delta":
            assert all(x == 0 for x in r[2:8])


def test_csv_rendering(paper, before_plan, after_plan):
    text = render_comparison(paper, before_plan, after_plan, fmt="csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][:3] == ["plan", "vehicle", "load_pct"]
    assert len(rows) == 1 + 3 * 3
    assert "\r" not in text


def test_svg_counts(paper, after_plan):
    root = ET.fromstring(route_svg(paper, after_plan))
    assert len(root.findall(f"{SVG}polyline")) == 2
    assert len(root.findall(f"{SVG}circle[@class='store']")) == 8
    assert len(root.findall(f"{SVG}text[@class='store-label']")) == 8
    assert len(root.findall(f"{SVG}rect[@class='depot']")) == 1


def test_svg_skips_empty_route(paper):
    plan = RoutePlan.of([1, 2, 3], [])
    root = ET.fromstring(route_svg(paper, plan))
    assert len(root.findall(f"{SVG}polyline")) == 1


def test_geometry_without_coords(paper, after_plan):
    from dataclasses import replace
    svg, stops = export_route_geometry(replace(paper, coords=None), after_plan)
    assert svg is None
    assert stops.startswith("vehicle,seq,store,")


def test_stops_csv(paper, after_plan):
    tls = [propagate_times(paper, r) for r in after_plan.routes]
    _, stops = export_route_geometry(paper, after_plan, tls)
    rows = list(csv.DictReader(io.StringIO(stops)))
    assert len(rows) == 8
    assert [int(r["store"]) for r in rows] == [4, 1, 2, 3, 8, 5, 7, 6]
    assert float(rows[0]["arrival_min"]) == 400.0 and rows[0]["arrival"] == "06:40"


def test_trace_csv(paper):
    rep = solve(paper, GaConfig(max_generations=3))
    rows = list(csv.DictReader(io.StringIO(trace_csv(rep.trace))))
    assert [int(r["generation"]) for r in rows] == [0, 1, 2, 3]
    assert float(rows[-1]["best_cost"]) == pytest.approx(rep.trace[-1].best_cost)
