"""Command-line experiment runner.

Each run reads an optional JSON config, executes one task and writes
``results.csv``, ``verdict.json`` and ``plotdata/*.dat`` into the output
directory.  Every file is written to a temporary name and renamed into place
once the task has finished.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import errors
from .convexity import check_space
from .fixtures import FIXTURES, get_fixture, list_fixtures
from .geometry import Circle, DensitySpec, Interval, ModelSpace, make_space
from .harness import (ALPHA_GRID, Atoms, Lebesgue, XLogX, abelian_check, classify_dimension,
                      heat_trace_limit, log_normalizer, weyl_tail_check)
from .measure import domination_bound_check, ratio_profile
from .spectral import Discretization, eigen_solve, heat_trace

log = logging.getLogger("weyl1d")

SCHEMA_VERSION = 1
TASKS = ("spectrum", "weyl", "ratio-integral", "convexity-check", "heat-trace", "abelian")

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_MISS = 2
EXIT_IO = 3
EXIT_DOMAIN = 4
EXIT_NUMERIC = 5

EXIT_HELP = """\
exit codes:
  0  every target met
  1  usage or configuration error (the diagnostic names the offending key)
  2  a quantitative target was missed (see verdict.json)
  3  input/output failure
  4  invalid space, density or parameter (domain error)
  5  numerical failure (quadrature, solver, unresolved spectrum)

environment:
  WEYL1D_CACHE_DIR     directory for the binary spectrum cache (off when unset)
  WEYL1D_PURE_PYTHON   set to 1 to force the pure-Python kernels
"""


# --------------------------------------------------------------------------
# config parsing

def _fail(msg: str):
    raise errors.ConfigParse(msg)


def _take(obj: dict, where: str, allowed: dict[str, type], required: tuple = ()) -> dict:
    if not isinstance(obj, dict):
        _fail(f"{where}: expected an object")
    for key in obj:
        if key not in allowed:
            _fail(f"{where}: unknown key {key!r}")
    for key in required:
        if key not in obj:
            _fail(f"{where}: missing required key {key!r}")
    out = {}
    for key, typ in allowed.items():
        if key in obj:
            val = obj[key]
            if typ is float and isinstance(val, int) and not isinstance(val, bool):
                val = float(val)
            if not isinstance(val, typ) or (typ in (int, float) and isinstance(val, bool)):
                _fail(f"{where}.{key}: expected {typ.__name__}, got {type(val).__name__}")
            out[key] = val
    return out


_DENSITY_KEYS = {"family": str, "value": float, "N": float, "K": float, "exponent": float,
                 "f": str, "file": str, "grid": list, "values": list}
_SPACE_KEYS = {"fixture": str, "kind": str, "length": float, "radius": float,
               "density": dict, "normalize": bool}

TASK_KEYS: dict[str, dict[str, type]] = {
    "spectrum": {"elements": int, "grading": str, "grading_strength": float,
                 "quadrature_order": int, "count": int, "method": str, "law_rtol": float,
                 "law_count": int},
    "weyl": {"elements": int, "grading": str, "grading_strength": float,
             "quadrature_order": int, "method": str, "rtol": float, "alpha_grid": list,
             "points": int},
    "ratio-integral": {"r_max": float, "r_min": float, "steps": int, "rtol": float},
    "convexity-check": {"grid_resolution": int, "random_triples": int, "K": float,
                        "tolerance": float},
    "heat-trace": {"elements": int, "grading": str, "grading_strength": float,
                   "quadrature_order": int, "t_min": float, "t_max": float, "points": int,
                   "k": float, "tol": float, "tail_model": bool},
    "abelian": {"suite": str, "gamma": float, "C": float, "a_min": float, "a_max": float,
                "t_min": float, "t_max": float, "points": int, "rtol": float, "atoms": int,
                "elements": int},
}


@dataclass
class ExperimentConfig:
    task: str
    space: Optional[dict] = None
    task_parameters: dict = field(default_factory=dict)
    output: Optional[Path] = None
    seed: int = 0
    base_dir: Path = field(default_factory=Path.cwd)


def parse_config(text: str, base_dir: Path) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"config is not valid JSON: {exc}")
    top = _take(raw, "config", {"schema_version": int, "space": dict, "task": str,
                                "task_parameters": dict, "output": str, "seed": int},
                required=("schema_version", "task"))
    if top["schema_version"] != SCHEMA_VERSION:
        _fail(f"config.schema_version: unsupported version {top['schema_version']}")
    task = top["task"]
    if task not in TASKS:
        _fail(f"config.task: unknown task {task!r}; expected one of {', '.join(TASKS)}")
    params = _take(top.get("task_parameters", {}), "config.task_parameters", TASK_KEYS[task])
    space = top.get("space")
    if space is not None:
        _take(space, "config.space", _SPACE_KEYS)
        if "density" in space:
            _take(space["density"], "config.space.density", _DENSITY_KEYS, required=("family",))
    out = top.get("output")
    return ExperimentConfig(task=task, space=space, task_parameters=params,
                            output=(base_dir / out) if out else None,
                            seed=top.get("seed", 0), base_dir=base_dir)


def build_space(spec: Optional[dict], base_dir: Path, default_fixture: str) -> tuple[ModelSpace, Optional[str]]:
    if spec is None:
        spec = {"fixture": default_fixture}
    if "fixture" in spec:
        extra = set(spec) - {"fixture"}
        if extra:
            _fail(f"config.space: key {sorted(extra)[0]!r} cannot be combined with 'fixture'")
        try:
            fx = get_fixture(spec["fixture"])
        except KeyError as exc:
            _fail(f"config.space.fixture: {exc.args[0]}")
        return fx.build(), fx.name
    kind_name = spec.get("kind")
    if kind_name == "interval":
        if "length" not in spec:
            _fail("config.space: interval needs 'length'")
        kind = Interval(float(spec["length"]))
    elif kind_name == "circle":
        if "radius" not in spec:
            _fail("config.space: circle needs 'radius'")
        kind = Circle(float(spec["radius"]))
    else:
        _fail(f"config.space.kind: expected 'interval' or 'circle', got {kind_name!r}")
    d = spec.get("density", {"family": "constant"})
    fam = d["family"]
    N = float(d.get("N", 2.0))
    K = d.get("K")
    if fam == "constant":
        density = DensitySpec.constant(float(d.get("value", 1.0)), K=0.0 if K is None else K, N=N)
    elif fam == "sinpower":
        if "N" not in d and "exponent" in d:
            N = float(d["exponent"]) + 1.0
        density = DensitySpec.sinpower(N, K=K)
    elif fam == "expnegf":
        if "f" not in d:
            _fail("config.space.density: family 'expnegf' needs 'f'")
        density = DensitySpec.exp_neg_f(d["f"], 0.0 if K is None else K, N)
    elif fam == "sampled":
        if "file" in d:
            path = base_dir / d["file"]
            try:
                data = np.loadtxt(path, delimiter="," if path.suffix == ".csv" else None, ndmin=2)
            except ValueError as exc:
                _fail(f"config.space.density.file: cannot parse {path}: {exc}")
            grid, values = data[:, 0], data[:, 1]
        elif "grid" in d and "values" in d:
            grid, values = d["grid"], d["values"]
        else:
            _fail("config.space.density: family 'sampled' needs 'file' or 'grid' and 'values'")
        if K is None:
            _fail("config.space.density: family 'sampled' needs 'K'")
        density = DensitySpec.sampled(grid, values, K, N)
    else:
        _fail(f"config.space.density.family: unknown family {fam!r}")
    return make_space(kind, density, normalize=bool(spec.get("normalize", False))), None


# --------------------------------------------------------------------------
# output

def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % float(x)


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO(newline="")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def dat_text(x, y, comment: str) -> str:
    lines = [f"# {comment}"]
    lines += ["%.17g %.17g" % (float(a), float(b)) for a, b in zip(x, y)]
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class Outcome:
    passed: bool
    verdict: dict
    csv: str
    plots: dict[str, str] = field(default_factory=dict)
    stdout: Optional[str] = None


# --------------------------------------------------------------------------
# tasks

def _discretization(space: ModelSpace, p: dict) -> Discretization:
    n = p.get("elements", 4000)
    grading = p.get("grading", "auto")
    strength = p.get("grading_strength", 1.5)
    order = p.get("quadrature_order", 8)
    if grading == "auto":
        return Discretization.auto(space, n, strength, order)
    if grading == "uniform":
        return Discretization.uniform(space, n, order)
    if grading == "graded":
        return Discretization.graded(space, n, strength, order)
    _fail(f"config.task_parameters.grading: expected auto, uniform or graded, got {grading!r}")


def task_spectrum(space, fixture, p, ctx) -> Outcome:
    spec = eigen_solve(space, _discretization(space, p), p.get("count"),
                       method=p.get("method", "bisection"))
    vals = spec.computed
    rows = [(i, v, i < spec.resolved_count) for i, v in enumerate(vals)]
    verdict = {"resolved_count": spec.resolved_count, "mesh_size": spec.mesh_size,
               "lambda_cut": spec.lambda_cut, "lambda_0": float(vals[0])}
    passed = abs(float(vals[0])) <= 1e-8 and spec.resolved_count > 1
    checks = {"zero_mode": abs(float(vals[0])) <= 1e-8}
    if fixture is not None and FIXTURES[fixture].law is not None:
        count = min(p.get("law_count", 11), spec.resolved_count)
        exact = FIXTURES[fixture].exact_eigenvalues(count)
        got = spec.eigenvalues[:count]
        rel = np.abs(got[1:] / exact[1:] - 1.0)
        tol = p.get("law_rtol", 1e-3) * ctx["tolerance_scale"]
        worst = float(rel.max()) if rel.size else 0.0
        verdict.update({"law": FIXTURES[fixture].eigen_law, "law_max_rel_error": worst,
                        "law_rtol": tol})
        checks["eigenvalue_law"] = worst <= tol
        passed &= worst <= tol
    verdict["checks"] = checks
    return Outcome(passed, verdict, csv_text(["index", "eigenvalue", "resolved"], rows),
                   {"eigenvalues.dat": dat_text(np.arange(spec.resolved_count), spec.eigenvalues,
                                                "index eigenvalue")})


def task_weyl(space, fixture, p, ctx) -> Outcome:
    spec = eigen_solve(space, _discretization(space, p), method=p.get("method", "bisection"))
    rtol = p.get("rtol", 0.05) * ctx["tolerance_scale"]
    tail = weyl_tail_check(spec, rtol=rtol, points=p.get("points", 200))
    alpha = tuple(float(a) for a in p.get("alpha_grid", ALPHA_GRID))
    one_d, fit = classify_dimension(spec, alpha)
    counts = np.rint(tail.ratios * np.sqrt(tail.lambdas)).astype(int)
    rows = [(lam, n, r, tail.target) for lam, n, r in zip(tail.lambdas, counts, tail.ratios)]
    verdict = {"target": tail.target, "tail_ratio": tail.ratio_at_top,
               "max_rel_deviation": tail.max_rel_deviation, "rtol": rtol,
               "resolved_count": spec.resolved_count, "is_one_dimensional": one_d,
               "exponent": fit.exponent, "constant": fit.constant, "residual": fit.residual,
               "window": list(fit.window), "log_correction_detected": fit.log_correction_detected,
               "checks": {"weyl_tail": tail.ok, "one_dimensional": one_d}}
    return Outcome(tail.ok and one_d, verdict,
                   csv_text(["lambda", "count", "ratio", "target"], rows),
                   {"weyl_ratio.dat": dat_text(tail.lambdas, tail.ratios, "lambda N(lambda)/sqrt(lambda)")})


def task_ratio(space, fixture, p, ctx) -> Outcome:
    prof = ratio_profile(space, p.get("r_max"), p.get("r_min"), p.get("steps", 11),
                         threads=ctx["threads"])
    target = space.hausdorff_length / 2.0
    rtol = p.get("rtol", 1e-3) * ctx["tolerance_scale"]
    rows = [(r, v, prof.extrapolated_limit, target, abs(v - target))
            for r, v in zip(prof.radii, prof.integrals)]
    rel = abs(prof.extrapolated_limit / target - 1.0)
    checks = {"limit": rel <= rtol}
    verdict = {"target": target, "extrapolated_limit": prof.extrapolated_limit,
               "extrapolation_error": prof.extrapolation_error, "rel_error": rel, "rtol": rtol}
    if not space.is_circle:
        dom = domination_bound_check(space)
        verdict.update({"domination_sup": dom.sup_observed, "domination_bound": dom.bound})
        checks["domination"] = dom.ok
    verdict["checks"] = checks
    return Outcome(all(checks.values()), verdict,
                   csv_text(["r", "integral", "extrapolated_limit", "target", "abs_error"], rows),
                   {"ratio_profile.dat": dat_text(prof.radii, prof.integrals, "r integral")})


def task_convexity(space, fixture, p, ctx) -> Outcome:
    rep = check_space(space, p.get("grid_resolution", 200), p.get("K"),
                      tolerance=p.get("tolerance"), random_triples=p.get("random_triples", 0),
                      seed=ctx["seed"])
    w = rep.witness or (float("nan"),) * 3
    verdict = {**rep.to_dict(), "K": space.cd.K if p.get("K") is None else p["K"],
               "N_minus_1": space.cd.N - 1.0, "checks": {"convex": rep.passed}}
    rows = [(rep.passed, rep.worst_margin, w[0], w[1], w[2], rep.tolerance)]
    return Outcome(rep.passed, verdict,
                   csv_text(["passed", "worst_margin", "witness_y0", "witness_y1", "witness_t",
                             "tolerance"], rows),
                   stdout=json.dumps(_jsonable(rep.to_dict()), sort_keys=True))


def task_heat(space, fixture, p, ctx) -> Outcome:
    spec = eigen_solve(space, _discretization(space, p))
    diam = space.diameter
    t = np.geomspace(p.get("t_max", 1e-1), p.get("t_min", 1e-3), p.get("points", 41)) * diam ** 2
    k = p.get("k", 1.0)
    tol = p.get("tol", 0.02) * ctx["tolerance_scale"]
    res = heat_trace_limit(spec, k, t, tol=tol, tail_model=p.get("tail_model", True))
    z = np.asarray(heat_trace(spec, t, tail_model=p.get("tail_model", True)))
    rows = [(ti, zi, vi, res.lower_bound) for ti, zi, vi in zip(t, z, res.values)]
    verdict = {"liminf_estimate": res.liminf_estimate, "lower_bound": res.lower_bound,
               "k": k, "tol": tol, "checks": {"liminf_bound": res.ok}}
    return Outcome(res.ok, verdict, csv_text(["t", "heat_trace", "scaled", "bound"], rows),
                   {"heat_trace.dat": dat_text(t, res.values, "t t^(k/2) Z(t)")})


def task_abelian(space, fixture, p, ctx) -> Outcome:
    suite = p.get("suite", "squares")
    rtol = p.get("rtol", 0.01) * ctx["tolerance_scale"]
    n = p.get("points", 40)
    L = None
    if suite == "lebesgue":
        nu, gamma, C = Lebesgue(), 1.0, 1.0
        a = np.geomspace(p.get("a_min", 1.0), p.get("a_max", 1e6), n)
        t = np.geomspace(p.get("t_max", 1.0), p.get("t_min", 1e-6), n)
    elif suite == "squares":
        kmax = p.get("atoms", 4000)
        nu, gamma, C = Atoms.squares(kmax), 0.5, 1.0
        a = np.geomspace(p.get("a_min", 10.0), p.get("a_max", 0.99 * kmax ** 2), n)
        t = np.geomspace(p.get("t_max", 1.0), p.get("t_min", 1e-5), n)
    elif suite == "xlogx":
        nu, gamma, C = XLogX(), 1.0, 1.0 / (4.0 * math.pi)
        L = log_normalizer
        a = np.geomspace(p.get("a_min", 10.0), p.get("a_max", 1e8), n)
        t = np.geomspace(p.get("t_max", 0.5), p.get("t_min", 1e-24), n)
    elif suite == "spectrum":
        if space is None:
            _fail("config.space: suite 'spectrum' needs a space")
        spec = eigen_solve(space, _discretization(space, p))
        nu, gamma, C = Atoms.from_spectrum(spec), 0.5, space.hausdorff_length / math.pi
        hi = spec.lambda_max
        a = np.geomspace(p.get("a_min", hi / 10.0), p.get("a_max", hi), n)
        # t >= 10 / lambda_hi keeps the truncated sum trustworthy
        t = np.geomspace(p.get("t_max", 100.0 / hi), p.get("t_min", 10.0 / hi), n)
    else:
        _fail(f"config.task_parameters.suite: unknown suite {suite!r}")
    gamma = p.get("gamma", gamma)
    C = p.get("C", C)
    # a computed spectrum only approaches its Weyl constant to a few percent
    a_rtol = max(rtol, 0.05) if suite == "spectrum" else rtol
    res = abelian_check(nu, gamma, C, a, t, rtol=rtol, a_rtol=a_rtol, slowly_varying=L)
    rows = [(ti, vi, res.rhs) for ti, vi in zip(t, res.transform_ratios)]
    verdict = {"suite": suite, "gamma": gamma, "C": C, "lhs_limit": res.lhs_limit, "rhs": res.rhs,
               "rel_error": res.rel_error, "rtol": rtol, "checks": {"abelian": res.ok}}
    return Outcome(res.ok, verdict, csv_text(["t", "transform", "rhs"], rows),
                   {"abelian_transform.dat": dat_text(t, res.transform_ratios, "t normalized transform"),
                    "abelian_cdf.dat": dat_text(a, res.cdf_ratios, "a normalized cdf")})


RUNNERS = {"spectrum": task_spectrum, "weyl": task_weyl, "ratio-integral": task_ratio,
           "convexity-check": task_convexity, "heat-trace": task_heat, "abelian": task_abelian}
DEFAULT_FIXTURE = {"spectrum": "flat_pi", "weyl": "flat_pi", "ratio-integral": "flat_pi",
                   "convexity-check": "sinpow_N3", "heat-trace": "flat_pi", "abelian": None}


# --------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyl1d", description="Spectral experiments on one-dimensional model spaces.",
        epilog=EXIT_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", type=Path, help="JSON experiment config")
    parser.add_argument("--out", type=Path, help="output directory (overrides the config)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for grid evaluations")
    parser.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="multiply every pass/fail tolerance by this factor")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for task in TASKS:
        sp = sub.add_parser(task, help=f"run the {task} task")
        sp.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in space (ignored with --config)")
        if task == "abelian":
            sp.add_argument("--suite", choices=["lebesgue", "squares", "xlogx", "spectrum"])
    fx = sub.add_parser("fixtures", help="list the built-in model spaces")
    fx.add_argument("--json", action="store_true", help="print JSON instead of a table")
    return parser


def _fixtures_table(as_json: bool) -> str:
    rows = list_fixtures()
    if as_json:
        return json.dumps(_jsonable(rows), indent=2)
    cols = ["name", "weyl_constant", "ratio_limit", "heat_trace_bound", "eigenvalue_law", "provenance"]
    cells = [[r[c] if isinstance(r[c], str) else "%.6g" % r[c] for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(out)


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, errors.ConfigParse):
        return EXIT_ERROR
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, (errors.QuadratureNonConvergence, errors.SolverFailure,
                        errors.SingularMass, errors.EvaluationFailure, errors.UnresolvedTail,
                        errors.InsufficientSpectrum, errors.HypothesisNotMet)):
        return EXIT_NUMERIC
    if isinstance(exc, errors.Weyl1DError):
        return EXIT_DOMAIN
    return EXIT_ERROR


def run(args: argparse.Namespace) -> int:
    if args.command == "fixtures":
        print(_fixtures_table(args.json))
        return EXIT_PASS
    if args.config is not None:
        cfg_path = args.config.resolve()
        text = cfg_path.read_text()
        cfg = parse_config(text, cfg_path.parent)
        if cfg.task != args.command:
            _fail(f"config.task: config is for {cfg.task!r} but the command is {args.command!r}")
    else:
        space = {"fixture": args.fixture} if args.fixture else None
        params = {"suite": args.suite} if getattr(args, "suite", None) else {}
        cfg = ExperimentConfig(task=args.command, space=space, task_parameters=params)
    if args.threads < 1:
        _fail("--threads must be at least 1")
    if not args.tolerance_scale > 0:
        _fail("--tolerance-scale must be positive")
    out_dir = args.out or cfg.output or Path("weyl1d-out")
    ctx = {"threads": args.threads, "tolerance_scale": args.tolerance_scale, "seed": cfg.seed}

    start = time.perf_counter()
    default = DEFAULT_FIXTURE[cfg.task]
    space, fixture = (None, None)
    if cfg.space is not None or default is not None:
        space, fixture = build_space(cfg.space, cfg.base_dir, default)
    outcome = RUNNERS[cfg.task](space, fixture, cfg.task_parameters, ctx)
    log.info("%s finished in %.2f s", cfg.task, time.perf_counter() - start)

    verdict = {"task": cfg.task, "passed": bool(outcome.passed),
               "fixture": fixture, "space_fingerprint": space.fingerprint() if space else None,
               **outcome.verdict}
    write_atomic(out_dir / "results.csv", outcome.csv)
    for name, text in sorted(outcome.plots.items()):
        write_atomic(out_dir / "plotdata" / name, text)
    write_atomic(out_dir / "verdict.json",
                 json.dumps(_jsonable(verdict), indent=2, sort_keys=True) + "\n")
    if outcome.stdout is not None:
        print(outcome.stdout)
    print(f"{cfg.task}: {'PASS' if outcome.passed else 'MISS'} -> {out_dir}", file=sys.stderr)
    return EXIT_PASS if outcome.passed else EXIT_MISS


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        parser.print_help()
        return EXIT_ERROR
    try:
        return run(args)
    except Exception as exc:  # mapped to documented exit codes
        code = _exit_code(exc)
        if code == EXIT_ERROR and not isinstance(exc, errors.ConfigParse):
            log.exception("unexpected failure")
        print(f"weyl1d: error: {exc}", file=sys.stderr)
        if isinstance(exc, errors.ConvexityViolation) and exc.witness is not None:
            print(f"weyl1d: witness (y0, y1, t) = {exc.witness}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
