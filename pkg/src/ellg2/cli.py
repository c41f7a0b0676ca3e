"""Command-line front end: ``ellg2 eval | verify | sweep``.

Exit status: 0 when every gating check passes, 1 when at least one fails,
2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import re
import sys
from pathlib import Path

import numpy as np

from .errors import EllipticError
from .special import Nome, e_pair, elliptic_gamma, qpoch_double_inf, qpoch_inf, theta, theta_prod
from .verifier import CANONICAL, DEFAULT_SUITE, parse_complex, quad_spec_from, run_check, suite_passed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EVAL_FUNCTIONS = ("qpoch", "qpoch2", "theta", "gamma", "e", "theta-ratio")


class UsageError(Exception):
    pass


def format_complex(z: complex) -> str:
    z = complex(z)
    # adding 0.0 turns -0.0 into 0.0
    return f"{z.real + 0.0:.16g}{z.imag + 0.0:+.16g}i"


def _cx_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except EllipticError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- eval ------------------------------------------------------------------------------------

def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.function} needs {', '.join(missing)}")


def cmd_eval(args) -> int:
    fn = args.function
    if fn == "qpoch":
        _need(args, "u", "q")
        value = qpoch_inf(args.u, args.q)
    elif fn == "qpoch2":
        _need(args, "u", "p", "q")
        value = qpoch_double_inf(args.u, Nome(args.p, args.q))
    elif fn == "theta":
        _need(args, "u", "p")
        value = theta(args.u, args.p)
    elif fn == "gamma":
        _need(args, "u", "p", "q")
        value = elliptic_gamma(args.u, Nome(args.p, args.q))
    elif fn == "e":
        _need(args, "u", "v", "p")
        value = e_pair(args.u, args.v, args.p)
    else:
        _need(args, "p")
        if not args.num and not args.den:
            raise UsageError("theta-ratio needs --num and/or --den arguments")
        value = theta_prod(args.num or [], args.p) / theta_prod(args.den or [], args.p)
    print(format_complex(value))
    return EXIT_OK


# -- report output ----------------------------------------------------------------------------

CSV_FIELDS = ["schema", "check_id", "p_re", "p_im", "q_re", "q_im", "epsilon", "a", "lhs_re", "lhs_im",
              "rhs_re", "rhs_im", "abs_err", "rel_err", "tol", "pass", "n_used", "runtime_ms", "warnings"]


def flatten(record: dict, extra: dict | None = None) -> dict:
    """One CSV row: complex fields split into ``_re``/``_im`` columns."""
    row = dict(extra or {})
    params = record.get("params") or {}
    for key in ("schema", "check_id", "abs_err", "rel_err", "tol", "pass", "n_used", "runtime_ms"):
        row[key] = record.get(key)
    for key in ("p", "q"):
        val = params.get(key)
        row[f"{key}_re"] = val["re"] if isinstance(val, dict) else None
        row[f"{key}_im"] = val["im"] if isinstance(val, dict) else None
    row["epsilon"] = params.get("epsilon")
    a = params.get("a") or []
    row["a"] = ";".join(f"{x['re']:.16g}{x['im']:+.16g}i" for x in a if isinstance(x, dict))
    for key in ("lhs", "rhs"):
        val = record.get(key)
        row[f"{key}_re"] = val["re"] if val else None
        row[f"{key}_im"] = val["im"] if val else None
    row["warnings"] = " | ".join(record.get("warnings") or [])
    return row


def render(records: list, fmt: str, extra_fields=()) -> str:
    if fmt == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(extra_fields) + CSV_FIELDS, extrasaction="ignore",
                                lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow(flatten(rec["report"], rec["extra"]) if "report" in rec else flatten(rec))
        return buf.getvalue()
    lines = []
    for rec in records:
        rep = rec.get("report", rec)
        status = {True: "PASS", False: "FAIL", None: "INFO"}[rep["pass"]]
        prefix = " ".join(f"{k}={v}" for k, v in rec.get("extra", {}).items())
        lines.append(f"{status} {prefix + ' ' if prefix else ''}{rep['check_id']} rel_err={rep['rel_err']} "
                     f"abs_err={rep['abs_err']} tol={rep['tol']} n={rep['n_used']}")
    return "\n".join(lines) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- config handling --------------------------------------------------------------------------

def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


_ENTRY_META = {"schema", "quad", "seed", "checks", "description"}


def entries_for(check: str, config: dict) -> list:
    if check == "all":
        if "checks" in config:
            return [{"id": e} if isinstance(e, str) else dict(e) for e in config["checks"]]
        return [dict(e) for e in DEFAULT_SUITE]
    if check not in CANONICAL:
        raise UsageError(f"unknown check id {check!r}; known: all, {', '.join(CANONICAL)}")
    if "checks" in config:
        picked = [dict(e) if isinstance(e, dict) else {"id": e} for e in config["checks"]]
        picked = [e for e in picked if e.get("id") == check]
        if not picked:
            raise UsageError(f"config has no entry for {check!r}")
        return picked
    entry = {k: v for k, v in config.items() if k not in _ENTRY_META}
    if entry.get("id", check) != check:
        raise UsageError(f"config is for {entry['id']!r}, not {check!r}")
    entry["id"] = check
    return [entry]


def _quad(args, config: dict):
    fields = dict(config.get("quad") or {})
    for name in ("n_start", "n_max", "rel_tol", "threads"):
        val = getattr(args, name, None)
        if val is not None:
            fields[name] = val
    return quad_spec_from(fields)


def _seed(args, config: dict) -> int:
    return int(args.seed if args.seed is not None else config.get("seed", 0))


def _apply_tol(entries: list, tol) -> list:
    if tol is not None:
        for e in entries:
            e["tol"] = tol
    return entries


def _exit_code(reports) -> int:
    if any(r.lhs is None and r.passed is False for r in reports):
        return EXIT_USAGE
    return EXIT_OK if suite_passed(reports) else EXIT_FAIL


def cmd_verify(args) -> int:
    config = load_config(args.config)
    entries = _apply_tol(entries_for(args.check, config), args.tol)
    quad, seed = _quad(args, config), _seed(args, config)
    reports = []
    for entry in entries:
        for rep in run_check(entry, quad, seed):
            reports.append(rep)
            print(rep.summary(), file=sys.stderr, flush=True)
    emit(render([r.to_dict() for r in reports], args.format), args.out)
    for rep in reports:
        if rep.lhs is None:
            print(f"error in {rep.check_id}: {'; '.join(rep.warnings)}", file=sys.stderr)
    return _exit_code(reports)


# -- sweep ------------------------------------------------------------------------------------

_GRID = re.compile(r"^\s*([^:]+):([^:]+):(\d+)\s*$")


def parse_grid(args) -> list:
    if args.values:
        vals = [parse_complex(v) for v in args.values.split(",") if v.strip()]
    elif args.grid:
        m = _GRID.match(args.grid)
        if not m:
            raise UsageError(f"grid must look like START:STOP:COUNT, got {args.grid!r}")
        start, stop, count = float(m.group(1)), float(m.group(2)), int(m.group(3))
        vals = [complex(x) for x in np.linspace(start, stop, count)]
    else:
        raise UsageError("sweep needs --grid or --values")
    if not vals:
        raise UsageError("sweep grid is empty")
    return vals


def sweep_entry(entry: dict, axis: str, value: complex) -> dict:
    """Copy of ``entry`` with ``axis`` set; for a_k and t_k only the modulus changes."""
    out = dict(entry)
    m = re.fullmatch(r"([at])(\d)", axis)
    if axis in ("p", "q"):
        if out["id"] == "remark1" and axis == "p":
            out["p_sequence"] = [value]
        else:
            out[axis] = value
    elif m:
        key, idx = m.group(1), int(m.group(2)) - 1
        vec = [parse_complex(x) for x in out[key]]
        if not 0 <= idx < len(vec):
            raise UsageError(f"axis {axis} is out of range for this check ({len(vec)} entries)")
        vec[idx] = cmath.rect(abs(value), cmath.phase(vec[idx]))
        out[key] = vec
    elif axis == "epsilon":
        out["epsilon"] = int(value.real)
    else:
        raise UsageError(f"unsupported sweep axis {axis!r}")
    return out


def cmd_sweep(args) -> int:
    if args.check == "all":
        raise UsageError("sweep needs a single check id")
    config = load_config(args.config)
    base = _apply_tol(entries_for(args.check, config), args.tol)[0]
    base = {**CANONICAL[args.check], **base}
    values = parse_grid(args)
    quad, seed = _quad(args, config), _seed(args, config)
    records, reports = [], []
    for value in values:
        entry = sweep_entry(base, args.axis, value)
        for rep in run_check(entry, quad, seed):
            reports.append(rep)
            shown = value.real if value.imag == 0 else format_complex(value)
            records.append({"extra": {"axis": args.axis, "value": shown}, "report": rep.to_dict()})
            print(f"{args.axis}={shown}: {rep.summary()}", file=sys.stderr, flush=True)
    emit(render(records, args.format, ("axis", "value")), args.out)
    return _exit_code(reports)


# -- parser ------------------------------------------------------------------------------------

def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (single check or a suite with 'checks')")
    p.add_argument("--seed", type=int, help="seed for randomized checks (default 0)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--tol", type=float, help="override the tolerance of every selected check")
    p.add_argument("--n-start", dest="n_start", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--threads", type=int, help="worker threads (default: ELLG2_THREADS or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellg2", description="Elliptic G2 beta integral toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a special function")
    ev.add_argument("function", choices=EVAL_FUNCTIONS)
    for name in ("u", "v", "p", "q"):
        ev.add_argument(f"--{name}", type=_cx_arg, help="complex literal, e.g. 0.7+0.1i")
    ev.add_argument("--num", type=_cx_arg, nargs="*", help="theta-ratio numerator arguments")
    ev.add_argument("--den", type=_cx_arg, nargs="*", help="theta-ratio denominator arguments")
    ev.set_defaults(handler=cmd_eval)

    ve = sub.add_parser("verify", help="run one check or the whole suite ('all')")
    ve.add_argument("check")
    _add_run_options(ve)
    ve.set_defaults(handler=cmd_verify)

    sw = sub.add_parser("sweep", help="re-run a check along a parameter axis")
    sw.add_argument("check")
    sw.add_argument("--axis", required=True, help="p, q, epsilon, a1..a4 (modulus) or t1..t5 (modulus)")
    sw.add_argument("--grid", help="START:STOP:COUNT (inclusive linspace)")
    sw.add_argument("--values", help="comma-separated values")
    _add_run_options(sw)
    sw.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"ellg2: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EllipticError as exc:
        print(f"ellg2: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
