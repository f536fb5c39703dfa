"""Command line: ``ellq run`` and ``ellq sweep``.

Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error
(including an unknown suite), 3 numerical degeneracy abort.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import fields, replace

from .errors import (ContourError, DegenerateSamplingError, EllqError, NearPoleError,
                     RankMismatchError, UnsupportedError)
from .report import Report
from .suites import SUITE_NAMES, RunConfig, parse_roots, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3

COMPLEX_KEYS = {"eta", "tau", "tau1", "tau2", "tau3"}
FLOAT_KEYS = {"tol", "series_eps", "pole_margin"}
INT_KEYS = {"sample_count", "seed"}
VECTOR_KEYS = {"n", "p"}
EXTRA_KEYS = {"h", "m", "nu", "alpha_max"}
SWEEP_PARAMS = ("tau", "eta", "seed")


class ConfigError(EllqError):
    pass


def parse_complex(text: str) -> complex:
    """``0.31+1.07i``, ``0.31+1.07j``, ``2``, ``-i`` ..."""
    t = str(text).strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    try:
        return complex(t)
    except ValueError:
        raise ConfigError(f"not a complex number: {text!r}") from None


def parse_vector(text: str) -> tuple:
    t = str(text).strip().strip("()[]")
    try:
        return tuple(int(v) for v in t.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"not an integer vector: {text!r}") from None


def _convert(key: str, value):
    if value is None:
        return None
    try:
        if key in COMPLEX_KEYS:
            return parse_complex(value)
        if key in FLOAT_KEYS:
            return float(value)
        if key in INT_KEYS or key in EXTRA_KEYS:
            return int(value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    if key in VECTOR_KEYS:
        return parse_vector(value)
    return str(value).strip()


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; ``#`` comments.  No section header needed."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        cp.read_string("[ellq]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return dict(cp["ellq"])


def build_config(values: dict) -> RunConfig:
    known = {f.name for f in fields(RunConfig)} - {"extra"}
    kwargs, extra = {}, {}
    for key, raw in values.items():
        key = key.strip().lower().replace("-", "_")
        if key == "report":
            key = "report_path"
        if key in EXTRA_KEYS:
            extra[key] = _convert(key, raw)
        elif key in known:
            kwargs[key] = _convert(key, raw)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    cfg = RunConfig(**kwargs, extra=extra)
    if cfg.roots:
        roots = parse_roots(cfg.roots)
        for name in ("n", "p"):
            vec = getattr(cfg, name)
            if vec is not None and len(vec) != roots.rank:
                raise RankMismatchError(f"{name}={vec} does not match {cfg.roots}")
    cfg.params()
    return cfg


def _gather(args) -> dict:
    values = read_config_file(args.config) if args.config else {}
    for key in ("suite", "tau", "eta", "seed", "report", "tol", "roots", "n", "p"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return values


def _write(report_path: str | None, reports: list[Report], timings: bool) -> None:
    if not report_path:
        return
    with open(report_path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.text(timings))


def _execute(cfg: RunConfig, out) -> tuple[Report, int]:
    try:
        report = run_suite(cfg)
    except (DegenerateSamplingError, ContourError, NearPoleError) as exc:
        report = Report(cfg.suite, cfg.echo(), aborted=f"{type(exc).__name__}: {exc}")
        print(f"{cfg.suite}: ABORT ({exc})", file=out)
        return report, EXIT_DEGENERATE
    print(report.human(), file=out)
    return report, EXIT_PASS if report.passed else EXIT_FAIL


def _config_error(exc, err) -> int:
    print(f"configuration error: {exc}", file=err)
    return EXIT_CONFIG


def cmd_run(args, out, err) -> int:
    try:
        cfg = build_config(_gather(args))
        if cfg.suite not in SUITE_NAMES:
            print(f"unknown suite {cfg.suite!r}; choose one of: {', '.join(SUITE_NAMES)}", file=err)
            return EXIT_CONFIG
        report, code = _execute(cfg, out)
    except (ConfigError, ValueError, UnsupportedError) as exc:
        return _config_error(exc, err)
    if args.json:
        out.write(report.text(not args.no_timings))
    _write(cfg.report_path, [report], not args.no_timings)
    return code


def _worst(report: Report) -> float:
    vals = [float(c.residual) for c in report.checks if c.threshold < 0.5]
    return max(vals, default=0.0)


def cmd_sweep(args, out, err) -> int:
    if args.param not in SWEEP_PARAMS:
        return _config_error(f"sweep parameter must be one of {SWEEP_PARAMS}", err)
    raw = [v for v in args.values.replace(";", ",").split(",") if v.strip()]
    if not raw:
        return _config_error("no sweep values given", err)
    try:
        base = build_config(_gather(args))
        if base.suite not in SUITE_NAMES:
            print(f"unknown suite {base.suite!r}; choose one of: {', '.join(SUITE_NAMES)}", file=err)
            return EXIT_CONFIG
        configs = [build_config({**_gather(args), args.param: v}) for v in raw]
    except (ConfigError, ValueError, UnsupportedError) as exc:
        return _config_error(exc, err)
    reports, codes, rows = [], [], []
    for v, cfg in zip(raw, configs):
        cfg = replace(cfg, report_path=None)
        try:
            report, code = _execute(cfg, out)
        except (ValueError, UnsupportedError) as exc:
            return _config_error(exc, err)
        reports.append(report)
        codes.append(code)
        status = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_DEGENERATE: "abort"}[code]
        rows.append(f"{args.param}={v.strip():<16} {status:<5} worst residual {_worst(report):.3e}")
    print("sweep summary", file=out)
    for row in rows:
        print("  " + row, file=out)
    if args.json:
        for r in reports:
            out.write(r.text(not args.no_timings))
    _write(base.report_path, reports, not args.no_timings)
    return max(codes)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellq", description="Run numerical verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--suite", help=f"one of: {', '.join(SUITE_NAMES)}")
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--tau", help="quantization parameter, e.g. 0.173+0.219i")
        p.add_argument("--eta", help="lattice parameter with Im > 0")
        p.add_argument("--seed", help="random seed (default 42)")
        p.add_argument("--tol", help="residual threshold")
        p.add_argument("--roots", help="root data, e.g. A1, A2, A1xA1, affine3")
        p.add_argument("--n", help="weight vector, e.g. 1,1")
        p.add_argument("--p", help="representation vector, e.g. 2,2")
        p.add_argument("--report", help="write JSON-lines report here")
        p.add_argument("--json", action="store_true", help="print JSON lines to stdout")
        p.add_argument("--no-timings", action="store_true", help="omit wall times from records")

    run = sub.add_parser("run", help="run one suite")
    common(run)
    sweep = sub.add_parser("sweep", help="rerun a suite over parameter values")
    common(sweep)
    sweep.add_argument("--param", required=True, help="tau, eta or seed")
    sweep.add_argument("--values", required=True, help="comma-separated values")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    if args.command == "run":
        return cmd_run(args, out, err)
    return cmd_sweep(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
