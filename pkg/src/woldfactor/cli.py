"""Command line front end.

Exit codes: 0 all checks passed, 1 usage or I/O error, 2 a regularity
condition or verification check failed (the report is still written).
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import InputFormatError, WoldFactorError
from .pipeline import RunConfig, factorize
from .simulate import SimulationConfig, ma_sample_path, round_trip
from .spectra import FrequencyGrid, density_from_covariance, density_from_ma
from .wold import predict, recover_noise

OK, USAGE, FAILED = 0, 1, 2


def _add_common(p):
    p.add_argument("--input", required=True, help="input JSON file")
    p.add_argument("--output", help="output file")
    p.add_argument("--grid", type=int, default=None, help="grid size N (power of two, default 4096)")
    p.add_argument("--rank-tol", type=float, default=1e-10)
    p.add_argument("--causal-tol", type=float, default=1e-8)
    p.add_argument("--trunc", type=int, default=None, help="truncation order J = K (default N/4)")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="woldfactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("factorize", "factorize a spectral density into a Wold model"),
                       ("check", "run the regularity diagnostics only")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--report", help="report JSON (default: <output>.report.json or stdout summary only)")
        p.add_argument("--force-noncausal", action="store_true",
                       help="factorize even if the Hardy-space check fails")
        p.add_argument("--psd-fix", action="store_true",
                       help="clip negative eigenvalues of a density built from covariances")

    p = sub.add_parser("simulate", help="simulate a path of an MA specification")
    _add_common(p)
    p.add_argument("--length", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--noise", choices=("complex", "real"), default="complex")

    p = sub.add_parser("predict", help="h-step prediction from a model and a path")
    _add_common(p)
    p.add_argument("--path", required=True, help="path CSV")
    p.add_argument("--steps", type=int, default=1, help="prediction horizon h")

    p = sub.add_parser("validate", help="round-trip an MA specification through the factorization")
    _add_common(p)
    p.add_argument("--residual-tol", type=float, default=1e-6)
    p.add_argument("--force-noncausal", action="store_true")
    return parser


def _config(args, grid_size=None):
    return RunConfig(
        grid_size=grid_size or args.grid or 4096,
        rank_tol=args.rank_tol,
        causal_tol=args.causal_tol,
        trunc=args.trunc,
        seed=args.seed,
        force_noncausal=getattr(args, "force_noncausal", False),
    )


def _density(args):
    obj = io.load_json(args.input)
    kind = io.source_kind(obj)
    if kind == "density":
        f = io.density_from_json(obj, args.input)
        if args.grid is not None and args.grid != f.grid.size:
            raise InputFormatError(f"--grid {args.grid} conflicts with the sampled density of size {f.grid.size}")
        return f
    grid = FrequencyGrid(args.grid or 4096)
    if kind == "ma":
        return density_from_ma(io.ma_spec_from_json(obj, args.input), grid)
    cov = io.covariance_from_json(obj, args.input)
    return density_from_covariance(cov, grid, psd_fix=args.psd_fix)


def _report_path(args):
    if getattr(args, "report", None):
        return args.report
    if args.output:
        out = Path(args.output)
        return str(out.with_name(out.stem + ".report.json"))
    return None


def _cmd_factorize(args, emit_model):
    f = _density(args)
    config = _config(args, f.grid.size)
    result = factorize(f, config)
    report = result.report()
    if emit_model:
        target = _report_path(args)
        if result.model is not None and args.output:
            io.dump_json(io.model_to_json(result.model, report["tolerances"], report), args.output)
    else:
        target = args.report or args.output
        report.pop("verification", None)
    if target:
        io.dump_json(report, target)
    failed = [k for k, v in report["checks"].items() if not v]
    status = "PASS" if result.passed else "FAIL " + ",".join(failed or ["no model"])
    print(f"{args.command}: d={f.dimension} r={result.rank.rank} N={f.grid.size} {status}")
    return OK if result.passed else FAILED


def _cmd_simulate(args):
    spec = io.ma_spec_from_json(io.load_json(args.input), args.input)
    cfg = SimulationConfig(args.length, args.seed, args.burn_in, args.noise)
    path = ma_sample_path(spec, cfg)
    if args.output:
        io.write_path_csv(path.values, args.output)
    print(f"simulate: d={spec.dimension} T={path.length} seed={args.seed}")
    return OK


def _cmd_predict(args):
    model = io.model_from_json(io.load_json(args.input), args.input)
    _, x = io.read_path_csv(args.path)
    noise = recover_noise(model, x)
    result = predict(model, noise, args.steps)
    records = io.prediction_records(result)
    if args.output and args.output.endswith(".csv"):
        io.write_path_csv(result.values, args.output, t=[r["t"] for r in records])
    elif args.output:
        io.dump_json({"origin": result.origin, "gauge": model.gauge,
                      "truncation_bound": noise.truncation_bound, "predictions": records}, args.output)
    print(f"predict: origin t={result.origin} h={args.steps} |x_hat_1|={np.linalg.norm(result.values[0]):.6g}")
    return OK


def _cmd_validate(args):
    spec = io.ma_spec_from_json(io.load_json(args.input), args.input)
    config = _config(args)
    rep = round_trip(spec, FrequencyGrid(config.grid_size), config, tol=args.residual_tol)
    out = rep.to_dict()
    if rep.factorization is not None:
        out["factorization"] = rep.factorization.report()
    if args.output:
        io.dump_json(out, args.output)
    print(f"validate: residual={rep.residual:.3e} {'PASS' if rep.passed else 'FAIL'}")
    return OK if rep.passed else FAILED


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    try:
        if args.command == "factorize":
            return _cmd_factorize(args, emit_model=True)
        if args.command == "check":
            return _cmd_factorize(args, emit_model=False)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "predict":
            return _cmd_predict(args)
        return _cmd_validate(args)
    except (WoldFactorError, ValueError, OSError) as exc:
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
