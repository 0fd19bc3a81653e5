"""Command-line interface.

    page-entropy exact M N [--rational] [--bits]
    page-entropy mc M N [--samples S] [--seed X] [--workers W] [--bits]
    page-entropy density-check M N [-f entropy|purity|maxp|one] [--resolution R] [--samples S] [--seed X]
    page-entropy asympt --geom1 SPEC --geom2 SPEC --n-list LIST [--order P]
    page-entropy selftest
    page-entropy replay MANIFEST.json

stdout carries data only (``--format json`` or ``csv``).  Every run also
produces a manifest (parameters, seed, generator, versions, timestamp,
elapsed time), written to ``--manifest PATH`` or, if not given, to stderr
as one JSON line.  Errors go to stderr as a JSON object.

Exit codes: 0 success, 1 numeric-consistency failure, 2 usage error.

Geometry SPEC: ``proj:d`` (projective space, dimension C(N+d, d)) or
``poly:d:V[,c_{d-1},...,c_0]`` (dimension = V N^d + ... + c_0, rounded).
N list: comma-separated integers; an item ``A..B`` expands to
A, 2A, 4A, ... (below B) followed by B.

CSV columns are fixed per command (see ``COLUMNS``); floats are written
with 17 significant digits.  Seeds default to ``$PAGE_ENTROPY_SEED`` or 0.
An optional ``--config FILE`` of ``key=value`` lines supplies any flag;
explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from datetime import datetime, timezone

from . import __version__
from .asymptotics import TABLE_COLUMNS, GeometrySpec, convergence_table
from .errors import ConfigurationError, ConsistencyError, ConvergenceError, DomainError
from .monte_carlo import FUNCTIONALS, generator_version, mc_expectation
from .page_exact import (
    EXACT_RATIONAL_LIMIT,
    PageParams,
    page_average_entropy,
    page_average_entropy_exact,
    page_average_entropy_plus,
    page_I1,
    page_I2,
    page_I2_via_laguerre,
)
from .selftest import run_selftest
from .spectral_density import density_vs_sphere_check

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
SEED_ENV = "PAGE_ENTROPY_SEED"
LN2 = math.log(2.0)

COLUMNS = {
    "exact": ("m", "n", "units", "E", "I1", "I2", "I2_laguerre", "E_plus_variant",
              "residual_split", "residual_laguerre_rel", "E_rational"),
    "mc": ("m", "n", "units", "functional", "mean", "std_error", "samples", "seed", "exact", "z_score"),
    "density-check": ("m", "n", "functional", "quadrature", "quadrature_error", "converged",
                      "mc_mean", "mc_std_error", "samples", "seed", "z_score", "passed"),
    "asympt": TABLE_COLUMNS,
    "selftest": ("name", "passed", "detail"),
}

# option name -> (type, hard default); None default means "no default"
OPTION_TYPES = {
    "format": (str, None),
    "samples": (int, 100_000),
    "seed": (int, None),
    "workers": (int, 1),
    "resolution": (int, 48),
    "functional": (str, "entropy"),
    "geom1": (str, None),
    "geom2": (str, None),
    "n_list": (str, None),
    "order": (int, None),
    "bits": ("flag", False),
    "rational": ("flag", False),
}

DEFAULT_FORMAT = {"asympt": "csv"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--config", default=None, help="key=value file mirroring the flags")
    common.add_argument("--manifest", default=None, help="write the run manifest here instead of stderr")

    parser = _Parser(prog="page-entropy", description="Average entanglement entropy of random pure states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", parents=[common], help="closed form and its two cross-checks")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--rational", action="store_true", default=None)
    p.add_argument("--bits", action="store_true", default=None)

    p = sub.add_parser("mc", parents=[common], help="Monte-Carlo estimate over the state sphere")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("-f", "--functional", choices=sorted(FUNCTIONALS))
    p.add_argument("--bits", action="store_true", default=None)

    p = sub.add_parser("density-check", parents=[common], help="eigenvalue-density quadrature vs Monte Carlo")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--resolution", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("-f", "--functional", choices=sorted(FUNCTIONALS))

    p = sub.add_parser("asympt", parents=[common], help="exact entropy vs semiclassical asymptote")
    p.add_argument("--geom1")
    p.add_argument("--geom2")
    p.add_argument("--n-list", dest="n_list")
    p.add_argument("--order", type=int)

    sub.add_parser("selftest", parents=[common], help="reduced-scale invariant suite")

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest_path")
    return parser


def read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "f":
                key = "functional"
            if key not in OPTION_TYPES:
                raise ConfigurationError(f"{path}:{lineno}: unknown option {key!r}")
            values[key] = value
    return values


def _convert(key: str, raw: str):
    typ, _ = OPTION_TYPES[key]
    if typ == "flag":
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigurationError(f"option {key} expects a boolean, got {raw!r}")
    try:
        return typ(raw)
    except ValueError:
        raise ConfigurationError(f"option {key} expects {typ.__name__}, got {raw!r}") from None


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge flags, config file, environment and defaults (in that priority)."""
    config = read_config(args.config) if getattr(args, "config", None) else {}
    opts = {}
    for key, (_, default) in OPTION_TYPES.items():
        if not hasattr(args, key):
            continue
        value = getattr(args, key)
        if value is None and key in config:
            value = _convert(key, config[key])
        if value is None and key == "seed":
            env = os.environ.get(SEED_ENV)
            value = _convert("seed", env) if env not in (None, "") else 0
        if value is None and key == "format":
            value = DEFAULT_FORMAT.get(args.command, "json")
        if value is None:
            value = default
        opts[key] = value
    if "format" not in opts:
        opts["format"] = "json"
    if opts["format"] not in ("json", "csv"):
        raise ConfigurationError(f"format must be json or csv, got {opts['format']!r}")
    if opts.get("functional") is not None and opts["functional"] not in FUNCTIONALS:
        raise ConfigurationError(f"unknown functional {opts['functional']!r}")
    return opts


def parse_n_list(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            if ".." in tok:
                a, b = (int(s) for s in tok.split(".."))
                if a < 1 or b < a:
                    raise ValueError
                v = a
                while v < b:
                    out.append(v)
                    v *= 2
                out.append(b)
            else:
                out.append(int(tok))
        except ValueError:
            raise ConfigurationError(f"bad N-list item {tok!r}") from None
    if not out:
        raise ConfigurationError("empty N list")
    return sorted(set(out))


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _run_exact(args, opts):
    m, n = args.m, args.n
    PageParams(m, n)
    scale = 1.0 / LN2 if opts["bits"] else 1.0
    e = page_average_entropy(m, n)
    i1, i2, i2l = page_I1(m, n), page_I2(m, n), page_I2_via_laguerre(m, n)
    residuals = {
        "residual_split": abs(e - (i1 - i2)),
        "residual_laguerre_rel": abs(i2 - i2l) / max(abs(i2), 1e-300),
    }
    record = {
        "m": m,
        "n": n,
        "units": "bits" if opts["bits"] else "nats",
        "E": e * scale,
        "I1": i1 * scale,
        "I2": i2 * scale,
        "I2_laguerre": i2l * scale,
        "E_plus_variant": page_average_entropy_plus(m, n) * scale,
        **residuals,
        "E_rational": None,
    }
    if opts["rational"]:
        if m * n > EXACT_RATIONAL_LIMIT:
            raise ConfigurationError(f"--rational needs m*n <= {EXACT_RATIONAL_LIMIT}")
        frac = page_average_entropy_exact(m, n)
        record["E_rational"] = f"{frac.numerator}/{frac.denominator}"
    if residuals["residual_split"] > 1e-12 or residuals["residual_laguerre_rel"] > 1e-9:
        return [record], ConsistencyError("page consistency failed", residuals)
    return [record], None


def _run_mc(args, opts):
    PageParams(args.m, args.n)
    name = opts["functional"]
    if opts["samples"] < 2:
        raise ConfigurationError("--samples must be at least 2")
    est = mc_expectation(args.m, args.n, FUNCTIONALS[name], opts["samples"], opts["seed"], opts["workers"])
    scale = 1.0 / LN2 if (opts["bits"] and name == "entropy") else 1.0
    exact = page_average_entropy(args.m, args.n) if name == "entropy" else None
    z = None
    if exact is not None:
        diff = est.mean - exact
        z = diff / est.std_error if est.std_error > 0 else (0.0 if diff == 0 else math.inf)
    record = {
        "m": args.m,
        "n": args.n,
        "units": "bits" if scale != 1.0 else "nats",
        "functional": name,
        "mean": est.mean * scale,
        "std_error": est.std_error * scale,
        "samples": est.samples,
        "seed": est.seed,
        "exact": None if exact is None else exact * scale,
        "z_score": z,
    }
    return [record], None


def _run_density(args, opts):
    name = opts["functional"]
    rep = density_vs_sphere_check(
        args.m, args.n, FUNCTIONALS[name], samples=opts["samples"], seed=opts["seed"],
        resolution=opts["resolution"], name=name, workers=opts["workers"],
    )
    record = {k: getattr(rep, k) for k in COLUMNS["density-check"]}
    failure = None
    if not rep.passed:
        failure = ConsistencyError("quadrature and Monte Carlo disagree", {"z_score": rep.z_score})
    return [record], failure


def _run_asympt(args, opts):
    if not opts["geom1"] or not opts["geom2"] or not opts["n_list"]:
        raise ConfigurationError("asympt needs --geom1, --geom2 and --n-list")
    g1 = GeometrySpec.parse(opts["geom1"])
    g2 = GeometrySpec.parse(opts["geom2"])
    rows = convergence_table(g1, g2, parse_n_list(opts["n_list"]), order=opts["order"])
    return [{k: getattr(r, k) for k in TABLE_COLUMNS} for r in rows], None


def _run_selftest(args, opts):
    results = run_selftest()
    failure = None
    if not all(r["passed"] for r in results):
        bad = [r["name"] for r in results if not r["passed"]]
        failure = ConsistencyError("selftest failed: " + ", ".join(bad), {})
    return results, failure


RUNNERS = {
    "exact": _run_exact,
    "mc": _run_mc,
    "density-check": _run_density,
    "asympt": _run_asympt,
    "selftest": _run_selftest,
}


def _fmt_csv(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "nan" if math.isnan(value) else format(value, ".17g")
    return str(value)


def render(command: str, records: list[dict], fmt: str) -> str:
    columns = COLUMNS[command]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_fmt_csv(rec.get(c)) for c in columns])
        return buf.getvalue()
    clean = [{c: _num(rec.get(c)) for c in columns} for rec in records]
    if command in ("asympt", "selftest"):
        doc = {"command": command, "rows": clean}
    else:
        doc = {"command": command, "result": clean[0]}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def canonical_argv(args, opts) -> list[str]:
    """An argv that reproduces this run with every option spelled out."""
    argv = [args.command]
    if args.command in ("exact", "mc", "density-check"):
        argv += [str(args.m), str(args.n)]
    argv += ["--format", opts["format"]]
    for key in ("samples", "seed", "workers", "resolution", "functional", "geom1", "geom2", "n_list", "order"):
        if key in opts and opts[key] is not None:
            argv += ["--" + key.replace("_", "-"), str(opts[key])]
    for key in ("bits", "rational"):
        if opts.get(key):
            argv.append("--" + key)
    return argv


def _emit_error(exc: Exception, code: int, extra: dict | None = None) -> int:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    if extra:
        payload["error"].update(extra)
    print(json.dumps(payload, allow_nan=False, default=str), file=sys.stderr)
    return code


def _run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _emit_error(exc, EXIT_USAGE)
    if args.command == "replay":
        try:
            with open(args.manifest_path, encoding="utf-8") as fh:
                manifest = json.load(fh)
            replay_argv = list(manifest["argv"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            return _emit_error(exc, EXIT_USAGE)
        return _run(replay_argv)

    t0 = time.perf_counter()
    started = datetime.now(timezone.utc).isoformat()
    try:
        opts = resolve_options(args)
        records, failure = RUNNERS[args.command](args, opts)
    except (DomainError, ConfigurationError, OSError) as exc:
        return _emit_error(exc, EXIT_USAGE)
    except (ConvergenceError, ConsistencyError) as exc:
        return _emit_error(exc, EXIT_NUMERIC, {"residuals": getattr(exc, "residuals", {})})

    sys.stdout.write(render(args.command, records, opts["format"]))
    sys.stdout.flush()

    params = {k: v for k, v in opts.items()}
    if args.command in ("exact", "mc", "density-check"):
        params.update(m=args.m, n=args.n)
    manifest = {
        "command": args.command,
        "parameters": params,
        "argv": canonical_argv(args, opts),
        "seed": opts.get("seed"),
        "generator": generator_version() if args.command in ("mc", "density-check", "selftest") else None,
        "tool_version": __version__,
        "timestamp": started,
        "elapsed": time.perf_counter() - t0,
    }
    text = json.dumps(manifest, sort_keys=True)
    if getattr(args, "manifest", None):
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(json.dumps({"manifest": manifest}, sort_keys=True), file=sys.stderr)

    if failure is not None:
        return _emit_error(failure, EXIT_NUMERIC, {"residuals": failure.residuals})
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    return _run(list(sys.argv[1:] if argv is None else argv))
