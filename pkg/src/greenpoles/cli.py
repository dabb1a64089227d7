"""Command-line front end: evaluate, bound, verify, reproduce.

Job specifications are JSON files with complex numbers as two-element
[re, im] arrays. Identical job specs produce byte-identical output (no
timestamps in data rows). Exit codes: 0 success, 2 spec error, 3 math or
domain error, 4 verification failure.

Each invocation runs one command; the GREENPOLES_THREADS variable is the
only accepted environment knob (searches and harness reductions are ordered,
so results never depend on it).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from .domains import (
    ABS_PLUS_SQRT_ABS,
    ABS_SUM,
    MAX_ABS,
    Domain,
    GaugeBall,
    Polydisc,
    ProductDomain,
    ReinhardtPower,
    Scaled,
    UnitDisc,
)
from .errors import (
    GreenpolesError,
    InvariantViolationError,
    SpecFileError,
)
from .weights import WeightMap

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_MATH = 3
EXIT_VERIFY = 4

_GAUGES = {"abs_sum": ABS_SUM, "abs_plus_sqrt_abs": ABS_PLUS_SQRT_ABS, "max_abs": MAX_ABS}

_ESTIMATE_INVARIANTS = ("green", "mobius", "dmin", "dmax", "lempert", "coman")
_EVAL_INVARIANTS = ("green", "mobius", "dmin", "dmax", "lempert", "caratheodory")


# ---------------------------------------------------------------------------
# (de)serialization


def complex_to_jsonable(c: complex) -> list[float]:
    return [complex(c).real, complex(c).imag]


def complex_from_jsonable(v: Any) -> complex:
    if not (isinstance(v, list) and len(v) == 2):
        raise SpecFileError(f"complex numbers are [re, im] arrays, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def point_to_jsonable(p: Sequence[complex]) -> list[list[float]]:
    return [complex_to_jsonable(c) for c in p]


def point_from_jsonable(v: Any) -> tuple[complex, ...]:
    if not isinstance(v, list) or not v:
        raise SpecFileError(f"points are nonempty arrays of [re, im] pairs, got {v!r}")
    return tuple(complex_from_jsonable(c) for c in v)


def domain_to_jsonable(dom: Domain) -> dict:
    if isinstance(dom, UnitDisc):
        return {"variant": "unit_disc"}
    if isinstance(dom, Polydisc):
        return {"variant": "polydisc", "n": dom.n}
    if isinstance(dom, GaugeBall):
        return {"variant": "gauge_ball", "gauge": dom.gauge.kind, "n": dom.n}
    if isinstance(dom, ReinhardtPower):
        return {"variant": "reinhardt_power", "alpha": list(dom.alpha)}
    if isinstance(dom, ProductDomain):
        return {
            "variant": "product",
            "left": domain_to_jsonable(dom.left),
            "right": domain_to_jsonable(dom.right),
        }
    if isinstance(dom, Scaled):
        return {"variant": "scaled", "r": dom.r, "inner": domain_to_jsonable(dom.inner)}
    raise SpecFileError(f"unknown domain {dom!r}")


def domain_from_jsonable(v: Any) -> Domain:
    if not isinstance(v, dict) or "variant" not in v:
        raise SpecFileError(f"domains are objects with a 'variant' key, got {v!r}")
    variant = v["variant"]
    try:
        if variant == "unit_disc":
            return UnitDisc()
        if variant == "polydisc":
            return Polydisc(int(v["n"]))
        if variant == "gauge_ball":
            gauge = _GAUGES.get(v["gauge"])
            if gauge is None:
                raise SpecFileError(f"unknown gauge kind {v['gauge']!r}")
            return GaugeBall(gauge, int(v["n"]))
        if variant == "reinhardt_power":
            return ReinhardtPower(tuple(int(a) for a in v["alpha"]))
        if variant == "product":
            return ProductDomain(
                domain_from_jsonable(v["left"]), domain_from_jsonable(v["right"])
            )
        if variant == "scaled":
            return Scaled(float(v["r"]), domain_from_jsonable(v["inner"]))
    except KeyError as err:
        raise SpecFileError(f"domain spec missing field {err}") from None
    raise SpecFileError(f"unknown domain variant {variant!r}")


def weight_to_jsonable(p: WeightMap) -> dict:
    return {
        "entries": [
            {"point": point_to_jsonable(pt), "weight": w} for pt, w in p.entries
        ],
        "integer_valued": p.integer_valued,
    }


def weight_from_jsonable(v: Any) -> WeightMap:
    if not isinstance(v, dict) or "entries" not in v:
        raise SpecFileError(f"weights are objects with an 'entries' array, got {v!r}")
    entries = []
    for e in v["entries"]:
        if not isinstance(e, dict) or "point" not in e or "weight" not in e:
            raise SpecFileError(f"weight entries need 'point' and 'weight', got {e!r}")
        entries.append((point_from_jsonable(e["point"]), float(e["weight"])))
    return WeightMap(entries, integer_valued=bool(v.get("integer_valued", False)))


def search_from_jsonable(v: Any, seed_override: int | None):
    from .variational import SearchConfig

    v = dict(v or {})
    if seed_override is not None:
        v["seed"] = seed_override
    if "seed" not in v:
        raise SpecFileError("a seed is mandatory for estimate/verify runs")
    allowed = {"seed", "restarts", "max_evals", "blaschke_degree_max",
               "disc_degree_max", "tolerance"}
    unknown = set(v) - allowed
    if unknown:
        raise SpecFileError(f"unknown search fields {sorted(unknown)!r}")
    return SearchConfig(**v)


@dataclass(frozen=True)
class JobSpec:
    command: str
    invariant: str
    domain: Domain
    weight: WeightMap
    point: tuple[complex, ...]
    search: dict
    output: str

    @staticmethod
    def from_jsonable(v: Any) -> "JobSpec":
        if not isinstance(v, dict):
            raise SpecFileError("job specs are JSON objects")
        command = v.get("command", "eval")
        if command not in ("eval", "estimate", "verify", "reproduce"):
            raise SpecFileError(f"unknown command {command!r}")
        invariant = v.get("invariant", "green")
        if invariant not in set(_EVAL_INVARIANTS) | set(_ESTIMATE_INVARIANTS):
            raise SpecFileError(f"unknown invariant {invariant!r}")
        output = v.get("output", "text")
        if output not in ("text", "csv", "records"):
            raise SpecFileError(f"unknown output format {output!r}")
        try:
            domain = domain_from_jsonable(v["domain"])
            weight = weight_from_jsonable(v["weight"])
            point = point_from_jsonable(v["point"])
        except KeyError as err:
            raise SpecFileError(f"job spec missing field {err}") from None
        except GreenpolesError:
            raise
        except (TypeError, ValueError) as err:
            raise SpecFileError(f"malformed job spec: {err}") from None
        return JobSpec(command, invariant, domain, weight, point,
                       dict(v.get("search", {})), output)

    def to_jsonable(self) -> dict:
        return {
            "command": self.command,
            "invariant": self.invariant,
            "domain": domain_to_jsonable(self.domain),
            "weight": weight_to_jsonable(self.weight),
            "point": point_to_jsonable(self.point),
            "search": dict(self.search),
            "output": self.output,
        }


def canonical_spec_text(v: Any) -> str:
    """Canonical serialization: parse, normalize, dump with sorted keys."""
    return json.dumps(JobSpec.from_jsonable(v).to_jsonable(), sort_keys=True)


def load_job(path: str) -> JobSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as err:
        raise SpecFileError(f"cannot read job spec: {err}") from None
    except json.JSONDecodeError as err:
        raise SpecFileError(f"job spec is not valid JSON: {err}") from None
    return JobSpec.from_jsonable(raw)


# ---------------------------------------------------------------------------
# output helpers


def _emit_rows(rows: list[dict], columns: list[str], fmt: str, out) -> None:
    if fmt == "records":
        for row in rows:
            out.write(json.dumps(row, sort_keys=True) + "\n")
    elif fmt == "csv":
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(str(row.get(c, "")) for c in columns) + "\n")
    else:
        for row in rows:
            out.write("  ".join(f"{c}={row.get(c)!r}" for c in columns) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_eval(spec: JobSpec, fmt: str, out) -> int:
    from . import exact

    if spec.invariant == "coman":
        raise SpecFileError("the two-pole Coman function has no exact evaluator; "
                            "use `estimate`")
    kind = exact.InvariantKind(spec.invariant)
    try:
        val = exact.evaluate(kind, spec.domain, spec.weight, spec.point)
    except exact.NoExactFormulaError as err:
        print(f"error: {err}", file=sys.stderr)
        print("hint: `greenpoles estimate` computes certified bounds instead",
              file=sys.stderr)
        return EXIT_MATH
    _emit_rows([{"value": val.value, "formula": val.formula_id}],
               ["value", "formula"], fmt, out)
    return EXIT_OK


def cmd_estimate(spec: JobSpec, fmt: str, out, seed_override: int | None,
                 witness: bool) -> int:
    from . import variational

    cfg = search_from_jsonable(spec.search, seed_override)
    inv = spec.invariant
    witness_rows: list[dict] = []
    if inv in ("green", "mobius"):
        b = variational.sandwich(spec.domain, spec.weight, spec.point, cfg)
    elif inv == "dmin":
        b = variational.dmin_lower_bound(spec.domain, spec.weight, spec.point, cfg)
    elif inv == "dmax":
        b = variational.dmax_upper_bound(spec.domain, spec.weight, spec.point, cfg)
    elif inv == "lempert":
        if len(spec.weight) != 1:
            raise SpecFileError("lempert estimates need a single-pole weight")
        b = variational.lempert_upper_bound(
            spec.domain, spec.weight.entries[0][0], spec.point, cfg
        )
    elif inv == "coman":
        if len(spec.weight) != 2:
            raise SpecFileError("coman estimates need exactly two poles")
        poles = (spec.weight.entries[0][0], spec.weight.entries[1][0])
        val = variational.coman_upper_bound(spec.domain, poles, spec.point, cfg)
        b = variational.BoundInterval(0.0, min(val, 1.0), note="coman upper bound")
    else:
        raise SpecFileError(f"invariant {inv!r} has no estimator")
    row = {"lower": b.lower, "upper": b.upper, "note": b.note or ""}
    _emit_rows([row], ["lower", "upper", "note"], fmt, out)
    if witness:
        if b.lower_witness is not None:
            witness_rows.append({"witness": "lower", **b.lower_witness.describe()})
        if b.upper_witness is not None:
            witness_rows.append({
                "witness": "upper",
                "coefficients": [
                    [complex_to_jsonable(c) for c in row_]
                    for row_ in b.upper_witness.coefficients
                ],
                "frame": "normalized" if b.upper_frame is not None else "original",
            })
        for wr in witness_rows:
            out.write(json.dumps(wr, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(ids: list[str], seed: int, trials: int, fmt: str, out) -> int:
    from .properties import PROPERTY_IDS, run_property

    if not ids:
        return EXIT_OK  # empty id list: no-op success
    unknown = [i for i in ids if i not in PROPERTY_IDS]
    if unknown:
        raise SpecFileError(f"unknown property ids {unknown!r}")
    rows = []
    reproducers = []
    any_violation = False
    for pid in ids:
        rep = run_property(pid, trials, seed)
        any_violation = any_violation or not rep.ok
        rows.append({
            "property_id": rep.property_id,
            "trials": rep.trials,
            "violations": len(rep.violations),
            "max_gap": rep.max_gap,
            "tolerance": rep.tolerance,
            "status": "PASS" if rep.ok else "FAIL",
        })
        for v in rep.violations[:3]:  # minimal reproducer instances
            reproducers.append(
                f"reproduce with: id={pid} seed={seed} trials={trials} "
                f"instance[{v.instance}] lhs={v.lhs!r} rhs={v.rhs!r} gap={v.gap!r}"
            )
        if fmt == "records":
            out.write(json.dumps(rep.to_record(), sort_keys=True) + "\n")
    if fmt != "records":
        _emit_rows(rows, ["property_id", "trials", "violations", "max_gap",
                          "tolerance", "status"], fmt, out)
        for line in reproducers:
            out.write(line + "\n")
    return EXIT_VERIFY if any_violation else EXIT_OK


def _reproduce_rows() -> list[dict]:
    from . import exact
    from .domains import minkowski
    from .variational import SearchConfig, coman_upper_bound, dmin_lower_bound

    rows: list[dict] = []

    def add_row(row_id, description, computed, expected, passed):
        rows.append({
            "row": row_id,
            "description": description,
            "computed": computed,
            "expected": expected,
            "status": "PASS" if passed else "FAIL",
        })

    p = WeightMap([((-0.5 + 0j, 0j), 2.0), ((0.5 + 0j, 0j), 1.0)])
    z = (0.0 + 0.0j, 1.0 / 3.0 + 0.0j)
    cw = exact.green_exact(Polydisc(2), p, z).value
    add_row("collinear_two_pole_green", "Green value of the weighted collinear pair",
            cw, 1.0 / 6.0, abs(cw - 1.0 / 6.0) <= 1e-12)

    cfg = SearchConfig(seed=0)
    low = dmin_lower_bound(Polydisc(2), p, z, cfg).lower
    add_row("min_family_bound", "competitor bound for the same instance (<= 1/8, below 1/6)",
            low, 0.125, 0.0 < low <= 0.125 + 1e-9 and low < 1.0 / 6.0 - 1e-3)

    h_d = minkowski(ABS_SUM, (1.0, 1.0))
    add_row("gauge_abs_sum_11", "abs-sum gauge at (1, 1)", h_d, 2.0, h_d == 2.0)

    h_g = minkowski(ABS_PLUS_SQRT_ABS, (1.0, 1.0))
    expected_hg = 2.0 / (3.0 - math.sqrt(5.0))
    add_row("gauge_abs_sqrt_11", "abs-plus-sqrt gauge at (1, 1)", h_g, expected_hg,
            abs(h_g - expected_hg) <= 1e-9)

    D = GaugeBall(ABS_SUM, 2)
    for t in (0.01, 0.04):
        s = math.sqrt(t)
        twin = WeightMap.indicator([(t, s), (t, -s)])
        dmax = exact.dmax_eval(D, twin, (0.0, 0.0)).value
        add_row(f"dmax_twin_poles_t{t}", "maximal-family value of the twin-pole pair",
                dmax, t + s, dmax == t + s)
    t = 0.04
    s = math.sqrt(t)
    coman = coman_upper_bound(D, ((t, s), (t, -s)), (0.0, 0.0),
                              SearchConfig(seed=0, restarts=8, max_evals=200))
    add_row("coman_twin_poles_t0.04", "certified two-pole disc bound (<= 4t)",
            coman, 4.0 * t, coman <= 4.0 * t + 1e-9)

    prod = exact.dmin_countable_pole_example(0.0, 1e-9).value
    oracle = 0.39158673047111858  # log-series sum with integral tail enclosure
    add_row("infinite_product_axis_weights",
            "truncated product of reciprocal-integer poles at 0",
            prod, oracle, abs(prod - oracle) <= 1e-8)
    return rows


def cmd_reproduce(fmt: str, out) -> int:
    rows = _reproduce_rows()
    _emit_rows(rows, ["row", "description", "computed", "expected", "status"], fmt, out)
    return EXIT_OK if all(r["status"] == "PASS" for r in rows) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenpoles",
        description="Evaluate, bound, and property-test pole-weighted "
                    "invariant functions on model domains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="exact evaluation from a job spec")
    p_eval.add_argument("--spec", required=True)
    p_eval.add_argument("--format", choices=("text", "csv", "records"), default=None)

    p_est = sub.add_parser("estimate", help="certified bounds from a job spec")
    p_est.add_argument("--spec", required=True)
    p_est.add_argument("--seed", type=int, default=None)
    p_est.add_argument("--format", choices=("text", "csv", "records"), default=None)
    p_est.add_argument("--witness", action="store_true")

    p_ver = sub.add_parser("verify", help="run the property harness")
    p_ver.add_argument("--ids", default=None,
                       help="comma-separated property ids (default: all)")
    p_ver.add_argument("--seed", type=int, required=True)
    p_ver.add_argument("--trials", type=int, default=200)
    p_ver.add_argument("--format", choices=("text", "csv", "records"), default="text")

    p_rep = sub.add_parser("reproduce", help="golden table of reference constants")
    p_rep.add_argument("--format", choices=("text", "csv", "records"), default="text")
    return parser


def _check_thread_env() -> None:
    """Validate GREENPOLES_THREADS; restart batches reduce in a fixed order,
    so any accepted value produces identical output."""
    raw = os.environ.get("GREENPOLES_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
    except ValueError:
        raise SpecFileError(f"GREENPOLES_THREADS must be an integer, got {raw!r}")
    if n < 1:
        raise SpecFileError(f"GREENPOLES_THREADS must be >= 1, got {n}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        _check_thread_env()
        if args.command == "eval":
            spec = load_job(args.spec)
            return cmd_eval(spec, args.format or spec.output, out)
        if args.command == "estimate":
            spec = load_job(args.spec)
            return cmd_estimate(spec, args.format or spec.output, out,
                                args.seed, args.witness)
        if args.command == "verify":
            from .properties import PROPERTY_IDS

            if args.ids is None:
                ids = list(PROPERTY_IDS)
            else:
                ids = [i for i in args.ids.split(",") if i.strip()]
            return cmd_verify(ids, args.seed, args.trials, args.format, out)
        if args.command == "reproduce":
            return cmd_reproduce(args.format, out)
        raise SpecFileError(f"unknown command {args.command!r}")
    except SpecFileError as err:
        print(f"spec error: {err}", file=sys.stderr)
        return EXIT_SPEC
    except InvariantViolationError as err:
        print(f"internal invariant violated: {err}", file=sys.stderr)
        return EXIT_MATH
    except GreenpolesError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
