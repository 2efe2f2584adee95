"""Command-line interface and the JSON instance/report formats.

Exit status: 0 on success, 1 on a malformed instance file, 2 when an
operation's contract is violated (the error class name goes to stderr), 3
when the ``oracle`` command finds a disagreement.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any

from .errors import ConelimError, HolomorphyViolation, NotNilpotent, ParseError
from .flow import run_flow
from .forms import ZERO, BinaryForm, as_fraction
from .limits import Case, classify, check_slope_constraints, limit
from .model import HitchinPair, hitchin_map, nilpotency_order, validate
from .polymat import TwistedMatrix, splitting_type
from .stability import is_stable
from .testkit import (
    SHAPES,
    GenParams,
    pointwise_nilpotency_oracle,
    random_pair,
    splitting_from_h0,
)

__all__ = [
    "parse_instance",
    "load_instance",
    "instance_to_dict",
    "dump_instance",
    "build_report",
    "dump_report",
    "main",
]


# --------------------------------------------------------------------------
# serialization


def _rat(q: Fraction) -> str:
    return str(q)


def _cell(f: BinaryForm):
    return None if not f else [_rat(c) for c in f.coeffs]


def _matrix(M: TwistedMatrix):
    return [[_cell(e) for e in row] for row in M.entries]


def instance_to_dict(pair: HitchinPair) -> dict:
    return {
        "rank": pair.rank,
        "twists": list(pair.twists),
        "l_degree": pair.l_degree,
        "higgs": _matrix(pair.higgs),
    }


def dump_instance(pair: HitchinPair) -> str:
    return json.dumps(instance_to_dict(pair), indent=2) + "\n"


def _require(cond: bool, msg: str):
    if not cond:
        raise ParseError(msg)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def parse_instance(text: str) -> HitchinPair:
    """Parse an instance document.

    A nonzero cell where the degree law forces zero is a holomorphy
    violation; any other mismatch between a cell and its slot is a parse error.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _require(isinstance(doc, dict), "instance must be a JSON object")
    for key in ("rank", "twists", "l_degree", "higgs"):
        _require(key in doc, f"missing key {key!r}")
    r, twists, l, higgs = doc["rank"], doc["twists"], doc["l_degree"], doc["higgs"]
    _require(_is_int(r) and r >= 1, "rank must be a positive integer")
    _require(isinstance(twists, list) and all(_is_int(t) for t in twists), "twists must be integers")
    _require(len(twists) == r, f"{len(twists)} twists for rank {r}")
    _require(twists == sorted(twists, reverse=True), "twists must be sorted descending")
    _require(_is_int(l), "l_degree must be an integer")
    _require(isinstance(higgs, list) and len(higgs) == r
             and all(isinstance(row, list) and len(row) == r for row in higgs),
             f"higgs must be a {r}x{r} array")
    violations = []
    rows = []
    for i, row in enumerate(higgs):
        out = []
        for j, cell in enumerate(row):
            deg = twists[i] + l - twists[j]
            where = f"cell ({i + 1},{j + 1})"
            if cell is None:
                out.append(ZERO)
                continue
            _require(isinstance(cell, list), f"{where}: expected null or a list of coefficients")
            try:
                coeffs = [as_fraction(c) if isinstance(c, str) or _is_int(c) else None
                          for c in cell]
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"{where}: coefficients must be exact rationals 'p/q'") from None
            _require(None not in coeffs, f"{where}: coefficients must be strings 'p/q'")
            if deg < 0:
                if any(coeffs):
                    violations.append((i, j, deg, len(coeffs) - 1))
                out.append(ZERO)
                continue
            _require(len(coeffs) == deg + 1,
                     f"{where}: expected {deg + 1} coefficients (degree {deg}), got {len(coeffs)}")
            out.append(BinaryForm(coeffs, deg))
        rows.append(tuple(out))
    if violations:
        raise HolomorphyViolation(violations)
    pair = HitchinPair.from_entries(twists, l, rows)
    try:
        return validate(pair)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load_instance(path: str) -> HitchinPair:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_instance(text)


# --------------------------------------------------------------------------
# reports


def _opt(q):
    return None if q is None else _rat(q)


def _stability_section(pair: HitchinPair):
    verdict = is_stable(pair)
    checks = [
        {"subbundle": c.description, "degree": c.degree, "rank": c.rank,
         "slope": _rat(c.slope), "bound": _rat(c.bound), "passed": c.passed}
        for c in verdict.checks
    ]
    return verdict, checks


def build_report(pair: HitchinPair) -> dict[str, Any]:
    """Full analysis; sections that do not apply are null."""
    image = hitchin_map(pair)
    report: dict[str, Any] = {
        "valid": True,
        "hitchin_image": [_cell(c) for c in image.coefficients],
        "nilpotent": image.is_zero(),
        "nilpotency_order": None,
        "stable": None,
        "stability_checks": None,
        "classification": None,
        "slopes": None,
        "constraints": None,
        "limit": None,
        "flow": None,
    }
    if not report["nilpotent"]:
        return report
    report["nilpotency_order"] = nilpotency_order(pair)
    cls = classify(pair)
    report["classification"] = cls.case.value
    s = cls.slopes
    report["slopes"] = {"E": _rat(s.total), "E2": _opt(s.e2), "E3": _opt(s.e3),
                        "extension": _opt(s.mixed)}
    if cls.case is Case.UNSUPPORTED:
        return report
    verdict, checks = _stability_section(pair)
    report["stable"] = verdict.stable
    report["stability_checks"] = checks
    if cls.case in (Case.INTERMEDIATE_C1, Case.INTERMEDIATE_C2):
        c = check_slope_constraints(pair)
        half = Fraction(pair.l_degree, 2)
        report["constraints"] = {
            **c.as_dict(),
            "window_bounds": [_rat(c.mu - half), _rat(c.mixed), _rat(c.mu + half)],
        }
    h, frame, flow = run_flow(pair)
    report["limit"] = {
        "type_vector": list(h.type_vector),
        "piece_twists": [list(t) for t in h.piece_twists],
        "maps": [_matrix(m) for m in h.maps],
    }
    report["flow"] = {
        "block_sizes": list(frame.block_sizes),
        "exponent_table": [list(row) for row in flow.exponent_table],
        "matches_prediction": flow.matches_prediction,
    }
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _table(rows: list[tuple[str, Any]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {_fmt(v)}" for k, v in rows) + "\n"


def _report_text(report: dict) -> str:
    rows = [(k, v) for k, v in report.items()
            if k not in ("stability_checks", "limit", "flow")]
    for c in report["stability_checks"] or []:
        mark = "<" if c["passed"] else ">="
        rows.append((f"check {c['subbundle']}", f"{c['slope']} {mark} {c['bound']}"))
    if report["limit"]:
        for k, v in report["limit"].items():
            rows.append((f"limit.{k}", v))
    if report["flow"]:
        for k, v in report["flow"].items():
            rows.append((f"flow.{k}", v))
    return _table(rows)


# --------------------------------------------------------------------------
# commands


def _cmd_validate(args) -> int:
    pair = load_instance(args.file)
    sys.stdout.write(_table([("valid", True), ("rank", pair.rank),
                             ("degree", pair.degree), ("l_degree", pair.l_degree)]))
    return 0


def _cmd_analyze(args) -> int:
    report = build_report(load_instance(args.file))
    sys.stdout.write(dump_report(report) if args.json else _report_text(report))
    return 0


def _cmd_flow(args) -> int:
    pair = load_instance(args.file)
    if not hitchin_map(pair).is_zero():
        raise NotNilpotent("the flow has no limit outside the nilpotent cone")
    h, frame, flow = run_flow(pair)
    out = {
        "block_sizes": list(frame.block_sizes),
        "frame": [[str(e) for e in row] for row in frame.change_of_basis],
        "exponent_table": [list(row) for row in flow.exponent_table],
        "limit_matrix": [[str(e) for e in row] for row in flow.limit_matrix],
        "matches_prediction": flow.matches_prediction,
    }
    sys.stdout.write(json.dumps(out, indent=2) + "\n" if args.json
                     else _table(list(out.items())))
    return 0


def _cmd_stability(args) -> int:
    pair = load_instance(args.file)
    verdict, checks = _stability_section(pair)
    if args.json:
        sys.stdout.write(json.dumps({"stable": verdict.stable, "semistable": verdict.semistable,
                                     "checks": checks}, indent=2) + "\n")
    else:
        rows = [("stable", verdict.stable), ("semistable", verdict.semistable)]
        rows += [(c["subbundle"], f"deg {c['degree']} rank {c['rank']}: "
                  f"{c['slope']} {'<' if c['passed'] else '>='} {c['bound']}") for c in checks]
        sys.stdout.write(_table(rows))
    return 0


def _cmd_random(args) -> int:
    env = os.environ.get("CONELIM_SEED")
    seed = int(env) if env is not None else args.seed
    if seed is None:
        raise ParseError("--seed is required (or set CONELIM_SEED)")
    shape = {s.lower(): s for s in SHAPES}.get(args.shape.lower())
    if shape is None:
        raise ParseError(f"unknown shape {args.shape!r}; choose from {', '.join(SHAPES)}")
    l_range = (args.l, args.l) if args.l is not None else (1, 6)
    try:
        params = GenParams(seed, args.rank, (args.twist_min, args.twist_max), l_range,
                           shape, args.stable)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    sys.stdout.write(dump_instance(random_pair(params)))
    return 0


def _cmd_oracle(args) -> int:
    from .filtration import kernel_filtration, rank3_filtration

    pair = load_instance(args.file)
    try:
        order = nilpotency_order(pair)
    except NotNilpotent:
        order = None
    pointwise = pointwise_nilpotency_oracle(pair, samples=max(8, pair.rank + 1))
    rows = [("nilpotent (algebraic)", order is not None), ("nilpotent (pointwise)", pointwise)]
    agree = (order is not None) == pointwise
    if order is not None:
        filt = rank3_filtration(pair) if (pair.rank == 3 and order == 2) else kernel_filtration(pair)
        for j, step in enumerate(filt.steps):
            st, oracle = splitting_type(step), splitting_from_h0(step)
            agree &= st == oracle
            rows.append((f"E_{j + 1} splitting", f"{list(st)} vs h0 {list(oracle)}"))
    rows.append(("agree", agree))
    sys.stdout.write(_table(rows))
    return 0 if agree else 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conelim", description=(
        "Limits of the C*-flow on nilpotent Hitchin pairs over the projective line."))
    sub = p.add_subparsers(dest="command", required=True)
    for name, func, helptext in [
        ("validate", _cmd_validate, "check an instance file"),
        ("analyze", _cmd_analyze, "full report: stability, classification, limit, flow"),
        ("flow", _cmd_flow, "run the weight flow in an adapted frame"),
        ("stability", _cmd_stability, "stability over invariant subbundles"),
        ("oracle", _cmd_oracle, "cross-check against the independent oracles"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("file")
        if name in ("analyze", "flow", "stability"):
            sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.set_defaults(func=func)
    rp = sub.add_parser("random", help="generate a seeded random instance")
    rp.add_argument("--seed", type=int)
    rp.add_argument("--rank", type=int, default=3)
    rp.add_argument("--shape", default="Any", help="regular, rank3intermediate, zero or any")
    rp.add_argument("--stable", action="store_true")
    rp.add_argument("--twist-min", type=int, default=-3)
    rp.add_argument("--twist-max", type=int, default=3)
    rp.add_argument("--l", type=int)
    rp.set_defaults(func=_cmd_random)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return 1
    except ConelimError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
