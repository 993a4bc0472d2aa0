"""Command-line harness: verify identities, run seeded parameter sweeps,
evaluate the special functions pointwise, and run the invariant selftest.

Complex numbers on the command line are `a+bi` strings with no spaces;
parameter lists are comma-separated.  JSON is the default report format;
CSV flattens complex fields into _re/_im columns.  Exit codes: 0 success,
1 identity failure, 2 domain violation, 3 numerical failure, 64 usage.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import os
import sys
import time

import numpy as np

from . import integrals, qseries, selftest
from .errors import (
    AtPole,
    BaseOutOfRange,
    DomainViolation,
    HypbetaError,
    NomeOutOfRange,
    OutsideStrip,
    ParameterOutOfRange,
    PoleNearContour,
    QuadratureFailure,
    RegimeUnsupported,
    UnknownIdentity,
)
from .hypgamma import HyperbolicPair, TauParameter

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64

_DOMAIN_ERRORS = (DomainViolation, AtPole, OutsideStrip, BaseOutOfRange,
                  NomeOutOfRange, ParameterOutOfRange, RegimeUnsupported,
                  PoleNearContour)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j").replace("I", "j"))
    except ValueError as exc:
        raise _UsageError(f"cannot parse complex number {text!r}") from exc


def format_complex(value: complex) -> str:
    value = complex(value)
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real!r}{sign}{abs(value.imag)!r}i"


def _load_config(path: str) -> dict:
    cfg = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _UsageError(f"malformed config line: {line!r}")
            key, _, value = line.partition("=")
            cfg[key.strip()] = value.strip()
    return cfg


def _report_row(report: integrals.IdentityReport, timing: bool) -> dict:
    return {
        "id": report.id,
        "params": {k: format_complex(v) for k, v in sorted(report.params.items())},
        "lhs_re": report.lhs_value.real,
        "lhs_im": report.lhs_value.imag,
        "rhs_re": report.rhs_value.real,
        "rhs_im": report.rhs_value.imag,
        "abs_err": report.abs_err,
        "rel_err": report.rel_err,
        "tol": report.tol,
        "pass": report.passed,
        "evals": report.diagnostics.get("evals", 0),
        "wall_ms": report.diagnostics.get("wall_ms", 0.0) if timing else 0.0,
    }


def _write_report(rows, aggregate, fmt: str, output):
    if fmt == "json":
        doc = {"rows": rows}
        if aggregate is not None:
            doc["aggregate"] = aggregate
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        fields = ["id", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                  "abs_err", "rel_err", "tol", "pass", "evals", "wall_ms"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            flat = dict(row)
            flat["params"] = ";".join(f"{k}={v}" for k, v in row["params"].items())
            writer.writerow(flat)
        if aggregate is not None:
            buf.write("# aggregate: " + json.dumps(aggregate, sort_keys=True) + "\n")
        text = buf.getvalue()
    else:
        raise _UsageError(f"unknown format {fmt!r}")
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_params(desc, args) -> dict:
    params = dict(desc.default_params)
    if args.tau is not None:
        params["tau"] = parse_complex(args.tau)
    if args.params:
        values = [parse_complex(v) for v in args.params.split(",")]
        if len(values) != len(desc.param_names):
            raise _UsageError(
                f"{desc.id} expects {len(desc.param_names)} parameters "
                f"({', '.join(desc.param_names)}), got {len(values)}")
        params.update(dict(zip(desc.param_names, values)))
    return params


def _cmd_verify(args) -> int:
    ids = integrals.identity_ids() if args.identity == "all" else args.identity.split(",")
    rows = []
    status = EXIT_OK
    for identity_id in ids:
        desc = integrals.REGISTRY.get(identity_id)
        if desc is None:
            raise _UsageError(f"unknown identity {identity_id!r}; "
                              f"known ids: {', '.join(integrals.identity_ids())}")
        params = _build_params(desc, args)
        try:
            report = integrals.evaluate_identity(identity_id, params, args.tol)
        except _DOMAIN_ERRORS as exc:
            sys.stderr.write(f"{identity_id}: domain violation: {exc}\n")
            return EXIT_DOMAIN
        except (QuadratureFailure, HypbetaError) as exc:
            sys.stderr.write(f"{identity_id}: numerical failure: {exc}\n")
            return EXIT_NUMERICAL
        rows.append(_report_row(report, args.timing))
        if not report.passed:
            status = EXIT_FAIL
    _write_report(rows, None, args.format, args.output)
    return status


def _sweep_cases(desc, args):
    rng = np.random.default_rng(args.seed)
    cases = []
    rejections = 0
    for _ in range(args.count):
        for _attempt in range(500):
            params = desc.sweep(rng)
            if args.tau is not None:
                params["tau"] = parse_complex(args.tau)
            if desc.domain(params) is None:
                cases.append(params)
                break
            rejections += 1
        else:
            raise HypbetaError(
                f"could not draw an in-domain parameter set for {desc.id}")
    return cases, rejections


def _cmd_sweep(args) -> int:
    if args.count < 1:
        raise _UsageError("--count must be at least 1")
    desc = integrals.REGISTRY.get(args.identity)
    if desc is None:
        raise _UsageError(f"unknown identity {args.identity!r}")
    if desc.sweep is None:
        raise _UsageError(f"{args.identity} has no sweep sampler")
    cases, rejections = _sweep_cases(desc, args)
    start = time.perf_counter()
    reports = [None] * len(cases)

    def evaluate(index_params):
        index, params = index_params
        return index, integrals.evaluate_identity(desc.id, params, args.tol)

    try:
        if args.jobs > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as pool:
                for index, report in pool.map(evaluate, enumerate(cases)):
                    reports[index] = report
        else:
            for index, report in map(evaluate, enumerate(cases)):
                reports[index] = report
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(f"domain violation during sweep: {exc}\n")
        return EXIT_DOMAIN
    except (QuadratureFailure, HypbetaError) as exc:
        sys.stderr.write(f"numerical failure during sweep: {exc}\n")
        return EXIT_NUMERICAL
    total_ms = (time.perf_counter() - start) * 1e3
    rows = [_report_row(r, args.timing) for r in reports]
    aggregate = {
        "identity": desc.id,
        "count": len(rows),
        "pass_count": sum(1 for r in rows if r["pass"]),
        "max_rel_err": max((r["rel_err"] for r in rows), default=0.0),
        "rejections": rejections,
        "seed": args.seed,
        "total_wall_ms": total_ms if args.timing else 0.0,
    }
    _write_report(rows, aggregate, args.format, args.output)
    return EXIT_OK if aggregate["pass_count"] == len(rows) else EXIT_FAIL


_EVAL_FUNCS = {
    "gamma_h": ("aplus", "aminus", "z"),
    "tau_factorial": ("tau", "z"),
    "elliptic_gamma": ("z", "p1", "p2"),
    "theta": ("tau", "z"),
    "eta": ("sigma",),
    "qpoch": ("a", "q"),
}


def _cmd_eval(args) -> int:
    from . import hypgamma

    name = args.func
    if name not in _EVAL_FUNCS:
        raise _UsageError(f"unknown function {name!r}; choose from "
                          f"{', '.join(sorted(_EVAL_FUNCS))}")
    needed = _EVAL_FUNCS[name]
    values = {}
    for key in needed:
        raw = getattr(args, key, None)
        if raw is None:
            raise _UsageError(f"eval {name} requires --{key}")
        values[key] = parse_complex(raw)
    tol = args.tol if args.tol is not None else 1e-11
    try:
        if name == "gamma_h":
            pair = HyperbolicPair(values["aplus"], values["aminus"])
            result, err = hypgamma.gamma_h(pair, values["z"], tol), tol
        elif name == "tau_factorial":
            tp = TauParameter(values["tau"])
            result, err = hypgamma.tau_factorial(values["z"], tp, tol), tol
        elif name == "elliptic_gamma":
            result, err = hypgamma.elliptic_gamma(values["z"], values["p1"],
                                                  values["p2"], tol), tol
        elif name == "theta":
            sv = qseries.theta(values["z"], values["tau"], args.method, tol)
            result, err = sv.value, sv.trunc_err
        elif name == "eta":
            result, err = qseries.dedekind_eta(values["sigma"], tol), tol
        else:  # qpoch
            sv = qseries.qpoch_inf(values["a"], values["q"], tol)
            result, err = sv.value, sv.trunc_err
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(f"{name}: out of domain: {exc}\n")
        return EXIT_DOMAIN
    except (QuadratureFailure, HypbetaError) as exc:
        sys.stderr.write(f"{name}: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    print(f"value = {format_complex(result)}")
    print(f"err_est <= {err:.3e}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    return selftest.run_selftest(module_filter=args.filter,
                                 perturb=args.perturb, seed=args.seed or 1234)


def build_parser() -> _Parser:
    parser = _Parser(prog="hypbeta", description=__doc__)
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--timing", action="store_true",
                       help="record wall-clock times (breaks byte-level "
                            "report reproducibility)")

    p_verify = sub.add_parser("verify", help="check identities at given parameters")
    add_common(p_verify)
    p_verify.add_argument("--identity", required=True,
                          help="identity id, comma list, or 'all'")
    p_verify.add_argument("--tau", default=None)
    p_verify.add_argument("--params", default=None,
                          help="comma-separated values in registry order")

    p_sweep = sub.add_parser("sweep", help="seeded random parameter sweep")
    add_common(p_sweep)
    p_sweep.add_argument("--identity", required=True)
    p_sweep.add_argument("--count", type=int, required=True)
    p_sweep.add_argument("--tau", default=None)

    p_eval = sub.add_parser("eval", help="evaluate a special function pointwise")
    add_common(p_eval)
    p_eval.add_argument("func", help=", ".join(sorted(_EVAL_FUNCS)))
    for flag in ("aplus", "aminus", "z", "tau", "p1", "p2", "sigma", "a", "q"):
        p_eval.add_argument(f"--{flag}", default=None)
    p_eval.add_argument("--method", choices=("series", "triple_product"),
                        default="series")

    p_self = sub.add_parser("selftest", help="run the invariant suite")
    add_common(p_self)
    p_self.add_argument("--filter", default="", help="restrict to one module")
    p_self.add_argument("--perturb", type=float, default=0.0,
                        help="inject a relative perturbation into a reference "
                             "constant; the selftest must catch it")
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            cfg = _load_config(args.config)
            for key in ("tol", "format", "output", "jobs", "seed"):
                if key in cfg and getattr(args, key, None) in (None, "json"):
                    value = cfg[key]
                    if key in ("tol",):
                        value = float(value)
                    elif key in ("jobs", "seed"):
                        value = int(value)
                    setattr(args, key, value)
        if getattr(args, "jobs", None) is None:
            env_jobs = os.environ.get("HYPBETA_JOBS")
            args.jobs = int(env_jobs) if env_jobs else (os.cpu_count() or 1)
        if getattr(args, "seed", None) is None and args.command == "sweep":
            args.seed = 0
        handler = {"verify": _cmd_verify, "sweep": _cmd_sweep,
                   "eval": _cmd_eval, "selftest": _cmd_selftest}[args.command]
        return handler(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
