"""JSON and CSV wire formats, all stamped with the schema version.

Floats are emitted with Python's shortest round-trip repr and keys are
sorted, so identical in-memory artifacts serialize to identical bytes.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .control import ControlTable
from .errors import PlankforgeError
from .geom import Ball, Body, Box, Covering, Slab
from .greedy import GreedyStep, GreedyTrace
from .moment import MomentSystem
from .region import RegionPlan
from .verify import VerificationReport

SCHEMA = "plankforge/1"
MAX_WITNESSES = 100


def _vec(v) -> list[float]:
    return [float(x) for x in np.asarray(v, dtype=np.float64)]


def body_to_json(body: Body) -> dict:
    if isinstance(body, Ball):
        return {"type": "ball", "center": _vec(body.center), "radius": float(body.radius)}
    if isinstance(body, Box):
        return {"type": "box", "low": _vec(body.low), "high": _vec(body.high)}
    raise PlankforgeError(f"unsupported body type {type(body).__name__}")


def body_from_json(obj: dict) -> Body:
    kind = obj.get("type")
    if kind == "ball":
        return Ball(np.array(obj["center"], dtype=np.float64), float(obj["radius"]))
    if kind == "box":
        return Box(
            np.array(obj["low"], dtype=np.float64),
            np.array(obj["high"], dtype=np.float64),
        )
    raise PlankforgeError(f"unknown body type {kind!r}")


def slab_to_json(slab: Slab) -> dict:
    return {"normal": _vec(slab.normal), "lower": float(slab.lower), "width": float(slab.width)}


def slab_from_json(obj: dict) -> Slab:
    return Slab(np.array(obj["normal"], dtype=np.float64), float(obj["lower"]), float(obj["width"]))


def trace_to_json(trace: GreedyTrace) -> list[dict]:
    return [
        {
            "offset": s.offset,
            "aliveBefore": s.alive_before,
            "coveredCount": s.covered,
            "candidateCount": s.candidates,
        }
        for s in trace.steps
    ]


def trace_from_json(items: list[dict]) -> GreedyTrace:
    return GreedyTrace(
        [
            GreedyStep(
                offset=float(s["offset"]),
                alive_before=int(s["aliveBefore"]),
                covered=int(s["coveredCount"]),
                candidates=int(s["candidateCount"]),
            )
            for s in items
        ]
    )


def covering_to_json(cov: Covering) -> dict:
    out = {
        "schema": SCHEMA,
        "kind": "covering",
        "body": body_to_json(cov.body),
        "provenance": cov.provenance,
        "slabs": [slab_to_json(s) for s in cov.placed],
        "warnings": list(cov.warnings),
    }
    if isinstance(cov.trace, GreedyTrace):
        out["trace"] = trace_to_json(cov.trace)
    return out


def covering_from_json(obj: dict) -> Covering:
    check_schema(obj, "covering")
    trace = trace_from_json(obj["trace"]) if "trace" in obj else None
    return Covering(
        body=body_from_json(obj["body"]),
        placed=[slab_from_json(s) for s in obj["slabs"]],
        provenance=str(obj.get("provenance", "unknown")),
        trace=trace,
        warnings=[str(w) for w in obj.get("warnings", [])],
    )


def report_to_json(report: VerificationReport) -> dict:
    witnesses = report.uncovered[:MAX_WITNESSES]
    return {
        "schema": SCHEMA,
        "kind": "verification",
        "checked": report.checked,
        "uncoveredCount": report.uncovered_count,
        "witnesses": [_vec(p) for p in witnesses],
        "totalWidth": float(report.total_width),
        "necessityMargin": float(report.necessity_margin),
        "status": report.status,
        "mode": report.mode,
        "seed": report.seed,
    }


def plan_to_json(plan: RegionPlan) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "region-plan",
        "region": body_to_json(plan.region),
        "ballDiameter": float(plan.ball_diameter),
        "centers": [_vec(c) for c in plan.centers],
        "assignment": plan.assignment,
    }


def moment_system_to_json(ms: MomentSystem) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "moment-system",
        "degree": ms.degree,
        "xs": _vec(ms.xs),
        "widths": _vec(ms.widths),
        "normals": [_vec(row) for row in ms.unit_normals],
    }


def table_to_json(table: ControlTable) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "control-table",
        "degree": table.degree,
        "pairs": [{"x": float(x), "y": float(y)} for x, y in zip(table.xs, table.ys)],
        "certBall": {"center": _vec(table.cert_center), "radius": float(table.cert_radius)},
        "warnings": list(table.warnings or []),
    }


def table_from_json(obj: dict) -> ControlTable:
    check_schema(obj, "control-table")
    pairs = obj["pairs"]
    return ControlTable(
        degree=int(obj["degree"]),
        xs=np.array([p["x"] for p in pairs], dtype=np.float64),
        ys=np.array([p["y"] for p in pairs], dtype=np.float64),
        cert_center=np.array(obj["certBall"]["center"], dtype=np.float64),
        cert_radius=float(obj["certBall"]["radius"]),
        warnings=[str(w) for w in obj.get("warnings", [])],
    )


def table_to_csv(table: ControlTable) -> str:
    lines = ["x,y"] + [f"{float(x)!r},{float(y)!r}" for x, y in zip(table.xs, table.ys)]
    return "\n".join(lines) + "\n"


def check_schema(obj: dict, kind: str | None = None) -> None:
    if not isinstance(obj, dict) or obj.get("schema") != SCHEMA:
        raise PlankforgeError(f"expected schema {SCHEMA!r}, got {obj.get('schema')!r}")
    if kind is not None and obj.get("kind") != kind:
        raise PlankforgeError(f"expected kind {kind!r}, got {obj.get('kind')!r}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path, obj: dict) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())
