"""Command line front end.

Three subcommands:

  verify SUITE   run a named verification suite, emit a report document
  eval OP ...    evaluate one public operation at given parameters
  table OP ...   tabulate an operation over a grid, as CSV

Exit codes: 0 all reports passed (or evaluation succeeded), 1 any report
failed (or a numeric error), 2 malformed invocation.
"""

from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import math
import os
import re
import sys
import time

from . import families, limits, operator, orthogonality, qseries
from .errors import QNumericsError, UnknownFunction, UsageError
from .families import BigJacobiParams, MeasureSpec
from .limits import LimitStudyConfig
from .operator import OperatorSpec
from .orthogonality import VerificationReport
from .suites import SUITES, RunConfig, run_suite

# Ops that take or return callables cannot be driven from a command line.
_NOT_DISPATCHABLE = {
    "jackson_qintegral",
    "functional_L",
    "apply_operator",
    "eigen_residual",
    "wronskian",
    "lattice_v",
    "lattice_u",
    "laguerre_lattice",
    "m_lattice",
    "m_hat_lattice",
    "monomial_lattice",
    "make_report",
}


def _registry() -> dict:
    reg = {}
    for mod in (qseries, families, operator, orthogonality, limits):
        for name, obj in vars(mod).items():
            if name.startswith("_") or not callable(obj) or isinstance(obj, type):
                continue
            if getattr(obj, "__module__", None) != mod.__name__:
                continue
            if name in _NOT_DISPATCHABLE:
                continue
            reg[name] = obj
    return reg


# ---------------------------------------------------------------------------
# parameter parsing

_QPOW = re.compile(r"^([+-]?)q(?:\^([+-]?\d+))?$")


def _parse_scalar(txt: str, q: float) -> float:
    """Float literal, or the lattice shorthand q^k (also -q, q^-3)."""
    m = _QPOW.match(txt.strip())
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        exp = int(m.group(2)) if m.group(2) else 1
        return sign * q**exp
    try:
        return float(txt)
    except ValueError:
        raise UsageError(f"cannot parse number {txt!r}") from None


def _convert(name: str, txt: str, ann: str, q: float):
    if "tuple" in ann:
        if txt == "":
            return ()
        return tuple(_parse_scalar(t, q) for t in txt.split(","))
    if "bool" in ann:
        low = txt.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"parameter {name} expects a boolean, got {txt!r}")
    if "int" in ann:
        try:
            return int(txt)
        except ValueError:
            raise UsageError(f"parameter {name} expects an integer, got {txt!r}") from None
    if "str" in ann:
        return txt
    return _parse_scalar(txt, q)


def _split_pairs(tokens: list[str]) -> dict:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise UsageError(f"expected KEY=VALUE, got {tok!r}")
        key, _, val = tok.partition("=")
        if not key:
            raise UsageError(f"expected KEY=VALUE, got {tok!r}")
        out[key] = val
    return out


def _bind_call(name: str, fn, rc: RunConfig, user: dict):
    """Build the argument list for ``fn`` from KEY=VALUE pairs plus the
    run config. Config values q/alpha/c/t default like-named parameters;
    spec/params/cfg/ctx arguments are constructed, consuming the keys
    a, b, c, k, l when the signature itself does not claim them."""
    ctx = rc.ctx()
    sig = inspect.signature(fn)
    remaining = dict(user)
    kwargs = {}
    composites = []

    rc_defaults = {"q": rc.q, "alpha": rc.alpha, "c": rc.c, "t": rc.t_value}
    for pname, par in sig.parameters.items():
        ann = par.annotation if isinstance(par.annotation, str) else ""
        if pname == "ctx":
            kwargs[pname] = ctx
            continue
        if pname in ("spec", "params", "cfg"):
            composites.append((pname, ann))
            continue
        if pname in remaining:
            kwargs[pname] = _convert(pname, remaining.pop(pname), ann, rc.q)
        elif pname in rc_defaults:
            kwargs[pname] = rc_defaults[pname]
        elif par.default is not inspect.Parameter.empty:
            kwargs[pname] = par.default
        else:
            raise UsageError(f"{name}: missing required parameter {pname}")

    for pname, ann in composites:
        if pname == "spec":
            if fn.__module__.endswith(".operator"):
                kwargs[pname] = OperatorSpec(rc.c, rc.t_value, ctx)
            else:
                kwargs[pname] = MeasureSpec(alpha=rc.alpha, c=rc.c, ctx=ctx)
        elif pname == "params":
            a = _parse_scalar(remaining.pop("a"), rc.q) if "a" in remaining else rc.q**rc.alpha
            b = _parse_scalar(remaining.pop("b"), rc.q) if "b" in remaining else 0.0
            cc = _parse_scalar(remaining.pop("c"), rc.q) if "c" in remaining else rc.c
            kwargs[pname] = BigJacobiParams(a, b, cc)
        else:
            k = int(remaining.pop("k")) if "k" in remaining else 0
            l = int(remaining.pop("l")) if "l" in remaining else 0
            kwargs[pname] = LimitStudyConfig(
                alpha=rc.alpha, c=rc.c, k=k, l=l, ctx=ctx, r_values=rc.r_values
            )

    if remaining:
        extra = ", ".join(sorted(remaining))
        raise UsageError(f"{name}: unknown parameter(s) {extra}")
    return fn(**kwargs)


# ---------------------------------------------------------------------------
# result rendering

def _is_logreal(v) -> bool:
    return hasattr(v, "sign") and hasattr(v, "log") and hasattr(v, "float")


def _eval_fields(res) -> dict:
    """Normalize any op result into value / abs_err / n_terms /
    cancellation plus optional extras; None marks not-applicable."""
    f = {"value": None, "abs_err": None, "n_terms": None, "cancellation": None}
    if res is None:
        return f
    if isinstance(res, VerificationReport):
        f.update(
            value=res.computed,
            abs_err=res.abs_err,
            cancellation=res.cancellation,
            predicted=res.predicted,
            rel_err=res.rel_err,
            passed=res.passed,
        )
        return f
    if _is_logreal(res):
        f["value"] = res.float()
        return f
    if hasattr(res, "value") and hasattr(res, "n_terms"):
        val = res.value
        f["value"] = val.float() if _is_logreal(val) else val
        f["n_terms"] = res.n_terms
        f["cancellation"] = res.cancellation
        if hasattr(res, "abs_err"):
            f["abs_err"] = res.abs_err
        elif hasattr(res, "err_log"):
            f["abs_err"] = math.exp(res.err_log) if res.err_log < 700 else math.inf
        return f
    if isinstance(res, tuple) and len(res) == 2 and all(
        isinstance(v, (int, float)) for v in res
    ):
        f["value"], f["predicted"] = float(res[0]), float(res[1])
        f["abs_err"] = abs(res[0] - res[1])
        return f
    if isinstance(res, tuple) and all(isinstance(v, (int, float)) for v in res):
        f["value"] = float(res[0])
        f["extras"] = [float(v) for v in res[1:]]
        return f
    if isinstance(res, (int, float)):
        f["value"] = float(res)
        return f
    f["result"] = res
    return f


def _fmt(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render_eval_text(name: str, res) -> str:
    lines = [f"op           = {name}"]
    if isinstance(res, dict):
        for key in res:
            lines.append(f"{key} = {_fmt(res[key])}")
        return "\n".join(lines) + "\n"
    if isinstance(res, list):
        for i, item in enumerate(res):
            if isinstance(item, VerificationReport):
                status = "pass" if item.passed else "FAIL"
                lines.append(
                    f"{item.name}: computed={_fmt(item.computed)} "
                    f"predicted={_fmt(item.predicted)} rel_err={_fmt(item.rel_err)} {status}"
                )
            elif hasattr(item, "kind") and hasattr(item, "x"):
                lines.append(f"[{i}] kind={item.kind} p={item.p} x={_fmt(item.x)}")
            else:
                lines.append(f"[{i}] {_fmt(item)}")
        if res and isinstance(res[0], VerificationReport):
            n_ok = sum(r.passed for r in res)
            lines.append(f"passed {n_ok}/{len(res)}")
        return "\n".join(lines) + "\n"
    fields = _eval_fields(res)
    order = ["value", "predicted", "abs_err", "rel_err", "n_terms", "cancellation",
             "passed", "extras", "result"]
    for key in order:
        if key in ("value", "abs_err", "n_terms", "cancellation") or key in fields:
            lines.append(f"{key:12s} = {_fmt(fields.get(key))}")
    return "\n".join(lines) + "\n"


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, tuple):
        return list(v)
    return v


def _render_eval_json(name: str, res) -> str:
    if isinstance(res, list) and res and isinstance(res[0], VerificationReport):
        doc = {"op": name, "reports": [r.as_dict() for r in res]}
    elif isinstance(res, dict):
        doc = {"op": name, "result": {k: _json_safe(v) for k, v in res.items()}}
    else:
        fields = _eval_fields(res)
        fields.pop("result", None)
        doc = {"op": name}
        doc.update({k: _json_safe(v) for k, v in fields.items()})
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# verify

def _params_cell(params: dict) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))


def _render_verify(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "params", "computed", "predicted", "abs_err",
                    "rel_err", "cancellation", "pass"])
        for r in payload["reports"]:
            w.writerow([
                r["name"], _params_cell(r["params"]), _fmt(r["computed"]),
                _fmt(r["predicted"]), _fmt(r["abs_err"]), _fmt(r["rel_err"]),
                _fmt(r["cancellation"]), _fmt(r["pass"]),
            ])
        return buf.getvalue()
    lines = []
    for r in payload["reports"]:
        status = "pass" if r["pass"] else "FAIL"
        lines.append(
            f"{status}  {r['name']:44s} computed={_fmt(r['computed'])} "
            f"predicted={_fmt(r['predicted'])} rel_err={_fmt(r['rel_err'])}"
        )
    s = payload["summary"]
    wall = "" if s["wall_time_ms"] is None else f"  ({s['wall_time_ms']:.0f} ms)"
    lines.append(f"passed {s['passed']}/{s['total']}{wall}")
    return "\n".join(lines) + "\n"


def cmd_verify(args, rc: RunConfig) -> int:
    t0 = time.perf_counter()
    reports = run_suite(args.suite, rc)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    n_pass = sum(1 for r in reports if r.passed)
    payload = {
        "suite": args.suite,
        "config": rc.as_dict(),
        "reports": [r.as_dict() for r in reports],
        "summary": {
            "total": len(reports),
            "passed": n_pass,
            "wall_time_ms": round(wall_ms, 3) if rc.timing else None,
        },
    }
    _emit(_render_verify(payload, args.output or "json"), args.out)
    return 0 if n_pass == len(reports) else 1


# ---------------------------------------------------------------------------
# eval

def cmd_eval(args, rc: RunConfig) -> int:
    reg = _registry()
    if args.op not in reg:
        raise UnknownFunction(
            f"unknown operation {args.op!r}; see 'qortho eval --list'"
        )
    user = _split_pairs(args.params)
    res = _bind_call(args.op, reg[args.op], rc, user)
    fmt = args.output or "text"
    if fmt == "json":
        _emit(_render_eval_json(args.op, res), args.out)
    else:
        _emit(_render_eval_text(args.op, res), args.out)
    return 0


def _list_ops() -> str:
    reg = _registry()
    lines = []
    for name in sorted(reg):
        fn = reg[name]
        sig = str(inspect.signature(fn))
        lines.append(f"{name}{sig}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# table

def _parse_grid(spec: str):
    if "=" not in spec:
        raise UsageError(f"--grid expects PARAM=LO:HI[:COUNT], got {spec!r}")
    pname, _, rng = spec.partition("=")
    parts = rng.split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"--grid expects PARAM=LO:HI[:COUNT], got {spec!r}")
    try:
        if len(parts) == 2 and all(re.fullmatch(r"[+-]?\d+", p) for p in parts):
            lo, hi = int(parts[0]), int(parts[1])
            if hi < lo:
                raise UsageError(f"--grid: empty range {spec!r}")
            return pname, list(range(lo, hi + 1))
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) == 3 else 11
    except ValueError:
        raise UsageError(f"--grid expects PARAM=LO:HI[:COUNT], got {spec!r}") from None
    if count < 2:
        return pname, [lo]
    return pname, [lo + i * (hi - lo) / (count - 1) for i in range(count)]


def _row_columns(res) -> tuple[list[str], list]:
    if isinstance(res, VerificationReport):
        d = res.as_dict()
        cols = ["name", "computed", "predicted", "abs_err", "rel_err", "pass"]
        return cols, [_fmt(d[c]) for c in cols]
    fields = _eval_fields(res)
    if "predicted" in fields:
        return (["computed", "predicted", "abs_err"],
                [_fmt(fields["value"]), _fmt(fields["predicted"]), _fmt(fields["abs_err"])])
    if "extras" in fields:
        cols = ["value"] + [f"value_{i + 1}" for i in range(len(fields["extras"]))]
        return cols, [_fmt(fields["value"])] + [_fmt(v) for v in fields["extras"]]
    if fields["n_terms"] is not None:
        return (["value", "abs_err", "n_terms", "cancellation"],
                [_fmt(fields["value"]), _fmt(fields["abs_err"]),
                 _fmt(fields["n_terms"]), _fmt(fields["cancellation"])])
    return ["value"], [_fmt(fields["value"])]


def cmd_table(args, rc: RunConfig) -> int:
    reg = _registry()
    if args.op not in reg:
        raise UnknownFunction(
            f"unknown operation {args.op!r}; see 'qortho eval --list'"
        )
    fn = reg[args.op]
    user = _split_pairs(args.params)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")

    if args.grid is not None:
        pname, points = _parse_grid(args.grid)
        sig_names = set(inspect.signature(fn).parameters)
        # integer grids over k map onto the point lattice x = q^k when the
        # target takes x but not k itself
        lattice = pname == "k" and "k" not in sig_names and "x" in sig_names
        header = None
        rows = []
        for v in points:
            call_user = dict(user)
            if lattice:
                x = rc.q ** v
                call_user["x"] = repr(x)
            else:
                call_user[pname] = repr(v)
            res = _bind_call(args.op, fn, rc, call_user)
            cols, cells = _row_columns(res)
            if lattice:
                cols, cells = ["k", "x"] + cols, [str(v), repr(x)] + cells
            else:
                cols, cells = [pname] + cols, [_fmt(v)] + cells
            if header is None:
                header = cols
            rows.append(cells)
        w.writerow(header or [pname, "value"])
        w.writerows(rows)
    else:
        res = _bind_call(args.op, fn, rc, user)
        if isinstance(res, list) and res and isinstance(res[0], VerificationReport):
            w.writerow(["name", "params", "computed", "predicted", "abs_err",
                        "rel_err", "cancellation", "pass"])
            for r in res:
                d = r.as_dict()
                w.writerow([d["name"], _params_cell(d["params"]), _fmt(d["computed"]),
                            _fmt(d["predicted"]), _fmt(d["abs_err"]), _fmt(d["rel_err"]),
                            _fmt(d["cancellation"]), _fmt(d["pass"])])
        elif isinstance(res, list) and res and hasattr(res[0], "kind"):
            w.writerow(["kind", "p", "x"])
            for pt in res:
                w.writerow([pt.kind, "" if pt.p is None else pt.p, repr(pt.x)])
        elif isinstance(res, list):
            w.writerow(["index", "value"])
            for i, v in enumerate(res):
                w.writerow([i, _fmt(v)])
        elif isinstance(res, dict):
            w.writerow(["key", "value"])
            for key in res:
                w.writerow([key, _fmt(res[key])])
        else:
            cols, cells = _row_columns(res)
            w.writerow(cols)
            w.writerow(cells)

    _emit(buf.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# wiring

def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)


def _runconfig(args) -> RunConfig:
    max_terms = args.max_terms
    if max_terms is None:
        env = os.environ.get("QORTHO_MAX_TERMS", "").strip()
        if env:
            try:
                max_terms = int(env)
            except ValueError:
                raise UsageError(f"QORTHO_MAX_TERMS must be an integer, got {env!r}") from None
        else:
            max_terms = 10000
    if args.r is None:
        r_values = (10, 20, 30, 40)
    else:
        try:
            r_values = tuple(int(s) for s in args.r.split(","))
        except ValueError:
            raise UsageError(f"--r expects a comma separated integer list, got {args.r!r}") from None
        if not r_values:
            raise UsageError("--r expects at least one value")
    return RunConfig(
        q=args.q, alpha=args.alpha, c=args.c, t=args.t,
        rtol=args.rtol, atol=args.atol, max_terms=max_terms,
        seed=args.seed, r_values=r_values, timing=args.timing,
    )


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--q", type=float, default=0.5, help="base, 0 < q < 1")
    g.add_argument("--alpha", type=float, default=0.25, help="weight exponent, alpha > -1")
    g.add_argument("--c", type=float, default=2.0, help="lattice scale, c > 0")
    g.add_argument("--t", type=float, default=None,
                   help="operator deformation, default q^(-alpha/2)")
    g.add_argument("--rtol", type=float, default=None,
                   help="override every per-report relative tolerance")
    g.add_argument("--atol", type=float, default=None,
                   help="override every per-report absolute tolerance")
    g.add_argument("--max-terms", dest="max_terms", type=int, default=None,
                   help="series truncation cap (env QORTHO_MAX_TERMS)")
    g.add_argument("--output", choices=("json", "csv", "text"), default=None,
                   help="verify: json (default), csv, text; eval: text (default), json")
    g.add_argument("--out", metavar="FILE", default=None, help="write output to FILE")
    g.add_argument("--seed", metavar="N", type=int, default=0,
                   help="seed for randomized parameter grids")
    g.add_argument("--r", metavar="LIST", default=None,
                   help="comma separated degrees for the limits suite, e.g. 10,20,30")
    g.add_argument("--timing", action="store_true",
                   help="include wall_time_ms in the verify summary")

    p = argparse.ArgumentParser(
        prog="qortho",
        description="Verify q-orthogonality identities, evaluate the families, tabulate them.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    pv = sub.add_parser("verify", parents=[common],
                        help="run a verification suite",
                        description="Suites: " + ", ".join(SUITES) + ", all.")
    pv.add_argument("suite", help="suite name, or 'all'")

    pe = sub.add_parser("eval", parents=[common],
                        help="evaluate one operation",
                        description="qortho eval OP KEY=VALUE ... "
                                    "(values accept the lattice shorthand q^k)")
    pe.add_argument("op", nargs="?", default=None, help="operation name")
    pe.add_argument("params", nargs="*", help="KEY=VALUE parameters")
    pe.add_argument("--list", action="store_true", dest="list_ops",
                    help="list dispatchable operations and exit")

    pt = sub.add_parser("table", parents=[common],
                        help="tabulate an operation as CSV",
                        description="qortho table OP KEY=VALUE ... [--grid PARAM=LO:HI[:COUNT]]")
    pt.add_argument("op", help="operation name")
    pt.add_argument("params", nargs="*", help="KEY=VALUE parameters")
    pt.add_argument("--grid", default=None, metavar="PARAM=LO:HI[:COUNT]",
                    help="sweep one parameter; integer k grids map to x = q^k "
                         "for operations taking x")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        rc = _runconfig(args)
        if args.cmd == "verify":
            return cmd_verify(args, rc)
        if args.cmd == "eval":
            if args.list_ops:
                _emit(_list_ops(), args.out)
                return 0
            if args.op is None:
                raise UsageError("eval: missing operation name")
            return cmd_eval(args, rc)
        return cmd_table(args, rc)
    except (UsageError, UnknownFunction) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QNumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
