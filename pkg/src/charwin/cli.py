"""Command-line front end over the experiment modules.

Every subcommand emits a result envelope: JSON with the resolved experiment
config, the results payload, library versions, and any warnings raised
during the run.  Identical config and seed produce byte-identical envelopes
up to the ``meta`` block (timestamp, runtime, execution knobs such as
thread count) regardless of parallelism.  ``--format csv`` projects the
main table of each command instead; floats keep 12 significant digits.

Exit codes: 0 success; 1 a guaranteed inequality failed (these signal
implementation bugs, never findings); 2 invalid configuration or input.

Configs may live in an INI file (``--config``): values are read from the
section named after the subcommand (with ``[DEFAULT]`` fallback), and any
flag given on the command line wins over the file.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import platform
import sys
import time
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__
from .arith import ExperimentWarning, PrimeModulus, prime_density_check
from .prime_avg import (
    IntervalSpec,
    derivative_check,
    exceptional_sets,
    growth_schedule,
    interval_primes,
    random_sparse_vectors,
    variance_ratio_battery,
)
from .selberg import abs_weight_sum, build_selberg, interval_weight_sum, verify_indicator
from .squares import paired_count_theta
from .windows import (
    WindowConfig,
    cdf_vs_gaussian,
    empirical_summary,
    gaussian_moment,
    random_weil_instances,
    weil_bound_check,
    window_series,
)

SCHEMA_VERSION = "1"

_REQUIRED = object()


# ---------------------------------------------------------------------------
# value parsers: each takes the flag text and returns (value, jsonable echo)

def _conv_int(raw: str):
    v = int(raw)
    return v, v


def _conv_float(raw: str):
    v = float(raw)
    return v, v


def _conv_bool(raw: str):
    text = raw.strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True, True
    if text in ("0", "false", "no", "off"):
        return False, False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _conv_interval(raw: str):
    lo, sep, width = raw.partition(":")
    if not sep:
        raise ValueError(f"expected Q:DELTA, got {raw!r}")
    spec = IntervalSpec(q_start=int(lo), delta=int(width))
    return spec, {"q_start": spec.q_start, "delta": spec.delta}


def _conv_schedule(raw: str):
    body = raw[len("sched:"):] if raw.startswith("sched:") else raw
    kind, _, rest = body.partition(":")
    if kind == "table":
        pairs = []
        for tok in rest.split(","):
            point, sep, value = tok.partition("=")
            if not sep:
                raise ValueError(f"table entries look like Q=V, got {tok!r}")
            pairs.append((int(point), float(value)))
        return growth_schedule(kind, *pairs), body
    params = tuple(float(tok) for tok in rest.split(":") if tok) if rest else ()
    return growth_schedule(kind, *params), body


def _conv_g_single(raw: str):
    # "full" = one window start per admissible m (g = q - h), the
    # complete-coverage run; anything else is a schedule evaluated at q.
    if raw.strip() == "full":
        return "full", "full"
    return _conv_schedule(raw)


def _conv_lambdas(raw: str):
    values = tuple(float(tok) for tok in raw.split(",") if tok.strip())
    if not values:
        raise ValueError(f"expected a comma-separated grid, got {raw!r}")
    return values, list(values)


def _conv_battery(raw: str):
    parts = raw.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected COUNT:LENGTH:SUPPORT, got {raw!r}")
    count, length, support = (int(p) for p in parts)
    return (count, length, support), {"count": count, "length": length, "support": support}


def _conv_m_start(raw: str):
    v = int(raw)
    if v not in (0, 1):
        raise ValueError(f"m-start must be 0 or 1, got {raw!r}")
    return v, v


def _conv_mode(raw: str):
    if raw not in ("strict", "relaxed"):
        raise ValueError(f"mode must be 'strict' or 'relaxed', got {raw!r}")
    return raw, raw


def _conv_format(raw: str):
    if raw not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {raw!r}")
    return raw, raw


def _conv_path(raw: str):
    return raw, raw


@dataclass(frozen=True)
class _Opt:
    """One CLI option: flag text, converter, default (string form), help."""

    flag: str
    convert: Callable[[str], tuple]
    default: object = _REQUIRED
    help: str = ""
    is_flag: bool = False

    @property
    def dest(self) -> str:
        return self.flag.lstrip("-").replace("-", "_")

    @property
    def key(self) -> str:
        return self.flag.lstrip("-")


# execution/IO knobs: never part of the experiment identity, echoed in meta
_EXEC_OPTS = (
    _Opt("--format", _conv_format, "json", "output format: json envelope or csv table"),
    _Opt("--out", _conv_path, None, "write output to this path instead of stdout"),
    _Opt("--threads", _conv_int, "1", "worker processes for per-prime parallel work"),
)

_COMMANDS: dict[str, tuple[str, tuple[_Opt, ...]]] = {
    "clt-single": (
        "window-sum moments and CDF vs the Gaussian at one prime modulus",
        (
            _Opt("--q", _conv_int, help="odd prime modulus"),
            _Opt("--h", _conv_schedule, "const:100", "window length: const:H or KIND:PARAM"),
            _Opt("--g", _conv_g_single, "full",
                 "sample count: 'full' (q - h) or a schedule such as const:C, log_power:A"),
            _Opt("--moments", _conv_int, "4", "highest moment order to report"),
            _Opt("--lambdas", _conv_lambdas, "-2,-1,0,1,2", "CDF comparison grid"),
            _Opt("--m-start", _conv_m_start, "1", "first window start (0 or 1)"),
            _Opt("--mode", _conv_mode, "relaxed",
                 "strict warns when g is below sqrt(q) log q"),
        ),
    ),
    "clt-interval": (
        "per-prime moment deviations and exceptional fractions over an interval",
        (
            _Opt("--interval", _conv_interval, help="prime interval Q:DELTA"),
            _Opt("--g", _conv_schedule, "log_power:3", "sample-count schedule"),
            _Opt("--h", _conv_schedule, "const:5", "window-length schedule"),
            _Opt("--rmax", _conv_int, "1", "highest moment order r"),
            _Opt("--mode", _conv_mode, "relaxed", "strict enforces the narrow-window cap"),
            _Opt("--threshold-scale", _conv_float, "1.0", "multiplier on the g^(-1/8) threshold"),
            _Opt("--per-prime-inner", _conv_bool, "false", is_flag=True,
                 help="average over m <= g(q) instead of g(Q)"),
            _Opt("--m-start", _conv_m_start, "1", "first window start (0 or 1)"),
        ),
    ),
    "rmf-compare": (
        "prime-average character variance vs the multiplicative-model bound",
        (
            _Opt("--interval", _conv_interval, help="prime interval Q:DELTA"),
            _Opt("--battery", _conv_battery, "50:100:8",
                 "random sparse vectors COUNT:LENGTH:SUPPORT"),
            _Opt("--seed", _conv_int, "1", "battery generation seed"),
        ),
    ),
    "sieve-verify": (
        "build sieve weights and verify the indicator-domination properties",
        (
            _Opt("--z", _conv_int, help="sift odd primes below z"),
            _Opt("--level", _conv_int, None, "support level D (default: z)"),
            _Opt("--nmax", _conv_int, "100000", "verify the indicator up to this n"),
            _Opt("--interval", _conv_interval, None,
                 "optional Q:DELTA for the interval weight sum"),
        ),
    ),
    "weil-check": (
        "random incomplete character sums against the 9 K sqrt(q) log q bound",
        (
            _Opt("--trials", _conv_int, "1000", "number of random instances"),
            _Opt("--interval", _conv_interval, "1000:99000", "prime range Q:DELTA"),
            _Opt("--kmax", _conv_int, "4", "max number of distinct offsets"),
            _Opt("--seed", _conv_int, "1", "instance generation seed"),
        ),
    ),
    "ktheta": (
        "fully-paired tuple counts K(r, h) and the extracted theta(r, h)",
        (
            _Opt("--rmax", _conv_int, "3", "highest pairing order r"),
            _Opt("--hmax", _conv_int, "8", "highest window length h"),
        ),
    ),
    "prime-density": (
        "count primes in the short interval (x, x + x^eta]",
        (
            _Opt("--x", _conv_int, help="left endpoint"),
            _Opt("--eta", _conv_float, "0.525", "interval-length exponent"),
        ),
    ),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="charwin",
        description="experiments on sums of consecutive quadratic-residue symbols",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (summary, opts) in _COMMANDS.items():
        sp = sub.add_parser(name, help=summary, description=summary)
        sp.add_argument("--config", default=None, metavar="PATH",
                        help="INI file; flags given here win over its values")
        for opt in opts + _EXEC_OPTS:
            if opt.is_flag:
                sp.add_argument(opt.flag, dest=opt.dest, action="store_const",
                                const="true", default=None, help=opt.help)
            else:
                sp.add_argument(opt.flag, dest=opt.dest, default=None,
                                metavar="V", help=opt.help)
    return parser


def _resolve(command: str, args: argparse.Namespace):
    """Merge flags > config file > defaults into typed values plus a JSON echo."""
    section = None
    if args.config is not None:
        cp = configparser.ConfigParser()
        with open(args.config) as fh:
            cp.read_file(fh)
        section = cp[command] if cp.has_section(command) else cp["DEFAULT"]

    _, opts = _COMMANDS[command]
    values: dict[str, object] = {}
    echo: dict[str, object] = {}
    exec_values: dict[str, object] = {}
    for opt in opts + _EXEC_OPTS:
        raw = getattr(args, opt.dest)
        if raw is None and section is not None and opt.key in section:
            raw = section[opt.key]
        if raw is None:
            raw = opt.default
        if raw is _REQUIRED:
            raise ValueError(f"{command}: missing required option {opt.flag}")
        if raw is None:
            value = shown = None
        else:
            try:
                value, shown = opt.convert(raw)
            except ValueError as exc:
                raise ValueError(f"{command}: bad value for {opt.flag}: {exc}") from exc
        if opt in _EXEC_OPTS:
            exec_values[opt.dest] = value
        else:
            values[opt.dest] = value
            echo[opt.key] = shown
    return values, echo, exec_values


# ---------------------------------------------------------------------------
# runners: cfg -> (results payload, all-guarantees-hold flag)

def _frac(value: Fraction) -> dict:
    return {"exact": f"{value.numerator}/{value.denominator}", "float": float(value)}


def _run_clt_single(cfg, exec_cfg) -> tuple[dict, bool]:
    q = PrimeModulus(cfg["q"]).q
    h = int(math.floor(cfg["h"](q)))
    g = q - h if cfg["g"] == "full" else int(math.floor(cfg["g"](q)))
    if h < 1 or g < 1:
        raise ValueError(f"schedules gave h={h}, g={g}; both must be >= 1")
    if cfg["mode"] == "strict" and g < math.sqrt(q) * math.log(q):
        warnings.warn(
            f"sample count g={g} is below sqrt(q) log q ~ {math.sqrt(q) * math.log(q):.0f}; "
            "moments may not have settled",
            ExperimentWarning,
            stacklevel=2,
        )
    series = window_series(q, WindowConfig(h=h, g=g, m_start=cfg["m_start"]))
    summary = empirical_summary(series, max_moment=cfg["moments"])
    plain = cdf_vs_gaussian(summary, cfg["lambdas"], corrected=False)
    corrected = cdf_vs_gaussian(summary, cfg["lambdas"], corrected=True)
    moments = [
        {
            "j": j,
            "empirical": value,
            "gaussian": float(gaussian_moment(j)),
            "abs_diff": abs(value - gaussian_moment(j)),
        }
        for j, value in sorted(summary.moments.items())
    ]
    results = {
        "q": q,
        "h": h,
        "g": g,
        "moments": moments,
        "cdf_plain": plain,
        "cdf_corrected": corrected,
        "value_counts": list(summary.value_counts),
    }
    return results, True


def _run_clt_interval(cfg, exec_cfg) -> tuple[dict, bool]:
    spec = cfg["interval"]
    if cfg["mode"] == "strict":
        slope = derivative_check(cfg["g"], spec.q_start, spec.delta)
        if not slope["ok"]:
            warnings.warn(
                f"g-schedule slope exceeds the slowly-varying budget "
                f"(max ratio {slope['max_ratio']:.3g})",
                ExperimentWarning,
                stacklevel=2,
            )
    report = exceptional_sets(
        spec,
        cfg["g"],
        cfg["h"],
        r_max=cfg["rmax"],
        mode=cfg["mode"],
        per_prime_inner=cfg["per_prime_inner"],
        threshold_scale=cfg["threshold_scale"],
        m_start=cfg["m_start"],
        workers=exec_cfg["threads"],
    )
    for note in report.warnings:
        warnings.warn(note, ExperimentWarning, stacklevel=2)
    results = {
        "prime_count": report.prime_count,
        "fraction_even": report.fraction_even,
        "fraction_odd": report.fraction_odd,
        "fraction_union": report.fraction_union,
        "mean_sq_deviation": report.mean_sq_deviation,
        "mean_sq_deviation_normalized": report.mean_sq_deviation_normalized,
        "records": [
            {
                "q": rec.q,
                "r": rec.r,
                "parity": rec.parity,
                "deviation": rec.deviation,
                "threshold": rec.threshold,
                "exceptional": rec.exceptional,
            }
            for rec in report.records
        ],
    }
    return results, True


def _run_rmf_compare(cfg, exec_cfg) -> tuple[dict, bool]:
    spec = cfg["interval"]
    count, length, support = cfg["battery"]
    battery = random_sparse_vectors(count, length, seed=cfg["seed"], support=support)
    rows = [
        {"index": i, "lhs": rec["lhs"], "rhs": rec["rhs"], "ratio": rec["ratio"]}
        for i, rec in enumerate(variance_ratio_battery(spec, battery))
    ]
    results = {
        "prime_count": len(interval_primes(spec)),
        "rows": rows,
        "max_ratio": max(r["ratio"] for r in rows),
    }
    return results, True


def _run_sieve_verify(cfg, exec_cfg) -> tuple[dict, bool]:
    z = cfg["z"]
    level = cfg["level"] if cfg["level"] is not None else z
    system = build_selberg(z, level)
    report = verify_indicator(system, cfg["nmax"])
    results = {
        "z": z,
        "level": level,
        "sifting_primes": list(system.sifting_primes),
        "lambda": [
            {"d": d, **_frac(v)} for d, v in sorted(system.lambda_base.items())
        ],
        "rho": [{"e": e, **_frac(v)} for e, v in sorted(system.rho.items())],
        "indicator": {
            "n_max": report["n_max"],
            "rough_count": report["rough_count"],
            "min_value": _frac(report["min_value"]),
            "ok": report["ok"],
        },
        "abs_weight_sum": _frac(abs_weight_sum(system)),
    }
    if cfg["interval"] is not None:
        spec = cfg["interval"]
        sums = interval_weight_sum(system, spec.q_start, spec.delta)
        results["interval_weight_sum"] = {
            "total": _frac(sums["total"]),
            "comparator": sums["comparator"],
            "ratio": sums["ratio"],
            "odd_only": sums["odd_only"],
        }
    return results, True


def _run_weil_check(cfg, exec_cfg) -> tuple[dict, bool]:
    spec = cfg["interval"]
    instances = random_weil_instances(
        cfg["trials"], spec.q_start, spec.q_start + spec.delta, cfg["kmax"], seed=cfg["seed"]
    )
    checks = []
    for inst in instances:
        rec = weil_bound_check(inst["q"], inst["gamma"], inst["x"], inst["y"])
        rec["gamma"] = list(inst["gamma"])
        checks.append(rec)
    failures = [rec for rec in checks if not rec["holds"]]
    results = {
        "trials": len(checks),
        "holds": len(checks) - len(failures),
        "max_ratio": max(rec["ratio"] for rec in checks),
        "checks": checks,
        "failures": failures,
    }
    return results, not failures


def _run_ktheta(cfg, exec_cfg) -> tuple[dict, bool]:
    if cfg["rmax"] < 1 or cfg["hmax"] < 1:
        raise ValueError("need rmax >= 1 and hmax >= 1")
    rows = []
    for r in range(1, cfg["rmax"] + 1):
        for h in range(r, cfg["hmax"] + 1):
            pc = paired_count_theta(r, h)
            rows.append({"r": r, "h": h, "K": pc.count, "theta": pc.theta})
    if not rows:
        raise ValueError(f"no (r, h) pairs with r <= h <= {cfg['hmax']}")
    ok = all(0.0 <= row["theta"] <= 1.0 for row in rows)
    results = {
        "rows": rows,
        "theta_min": min(row["theta"] for row in rows),
        "theta_max": max(row["theta"] for row in rows),
    }
    return results, ok


def _run_prime_density(cfg, exec_cfg) -> tuple[dict, bool]:
    record = prime_density_check(cfg["x"], cfg["eta"])
    return record, record["count"] > 0


_RUNNERS = {
    "clt-single": _run_clt_single,
    "clt-interval": _run_clt_interval,
    "rmf-compare": _run_rmf_compare,
    "sieve-verify": _run_sieve_verify,
    "weil-check": _run_weil_check,
    "ktheta": _run_ktheta,
    "prime-density": _run_prime_density,
}


# ---------------------------------------------------------------------------
# rendering

def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def _csv_rows(command: str, results: dict) -> tuple[list[str], list[list]]:
    if command == "clt-single":
        header = ["lam", "empirical", "gaussian", "abs_diff",
                  "gaussian_corrected", "abs_diff_corrected"]
        rows = [
            [p["lam"], p["empirical"], p["gaussian"], p["abs_diff"],
             c["gaussian"], c["abs_diff"]]
            for p, c in zip(results["cdf_plain"]["rows"], results["cdf_corrected"]["rows"])
        ]
    elif command == "clt-interval":
        header = ["q", "r", "parity", "deviation", "threshold", "exceptional"]
        rows = [[r["q"], r["r"], r["parity"], r["deviation"], r["threshold"], r["exceptional"]]
                for r in results["records"]]
    elif command == "rmf-compare":
        header = ["index", "lhs", "rhs", "ratio"]
        rows = [[r["index"], r["lhs"], r["rhs"], r["ratio"]] for r in results["rows"]]
    elif command == "sieve-verify":
        header = ["e", "rho", "rho_float"]
        rows = [[r["e"], r["exact"], r["float"]] for r in results["rho"]]
    elif command == "weil-check":
        header = ["q", "k", "x", "y", "gamma", "value", "bound", "ratio", "holds"]
        rows = [[r["q"], r["k"], r["x"], r["y"], r["gamma"], r["value"],
                 r["bound"], r["ratio"], r["holds"]] for r in results["checks"]]
    elif command == "ktheta":
        header = ["r", "h", "K", "theta"]
        rows = [[r["r"], r["h"], r["K"], r["theta"]] for r in results["rows"]]
    else:  # prime-density
        header = ["x", "eta", "length", "count", "comparator", "ratio"]
        rows = [[results[k] for k in header]]
    return header, rows


def _render(command: str, envelope: dict, fmt: str) -> str:
    if fmt == "json" or "error" in envelope["results"]:
        return json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    header, rows = _csv_rows(command, envelope["results"])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_csv_cell(v) for v in row] for row in rows)
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg, echo, exec_cfg = _resolve(args.command, args)
    except (ValueError, OSError, configparser.Error) as exc:
        print(f"charwin: {exc}", file=sys.stderr)
        return 2

    captured: list[str] = []
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, ok = _RUNNERS[args.command](cfg, exec_cfg)
        captured = [str(w.message) for w in caught]
    except AssertionError as exc:  # guaranteed inequality failed: exit 1
        results, ok = {"ok": False, "error": str(exc)}, False
    except ValueError as exc:
        print(f"charwin: {exc}", file=sys.stderr)
        return 2

    envelope = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "config": echo,
        "results": results,
        "versions": {
            "charwin": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
        },
        "warnings": captured,
        "meta": {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "runtime_seconds": time.perf_counter() - started,
            "threads": exec_cfg["threads"],
        },
    }
    text = _render(args.command, envelope, exec_cfg["format"])
    if exec_cfg["out"] is not None:
        with open(exec_cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
