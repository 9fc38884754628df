"""Command-line surface.

Subcommands: estimate, scree, simulate, evaluate, bench. Matrix files are
headerless CSV; every run writes a JSON manifest next to its outputs.
Exit codes: 0 success, 2 bad input data, 3 bad configuration/flags.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as benchmod
from . import io, rankselect
from .errors import ConfigError, InputError, SvdIfaError
from .estimator import (
    EstimationConfig,
    ResponseMatrix,
    TruncationPolicy,
    estimate_binary,
    estimate_missing,
    estimate_ordinal,
)
from .evaluate import alignment_loss
from .links import LinkFunction
from .simulate import SimulationScenario, generate_ordinal, simulate_dataset

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3


class _Parser(argparse.ArgumentParser):
    # flag/usage problems are configuration errors (exit 3)
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="svdifa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="fit loadings/scores/intercepts")
    est.add_argument("--input", required=True, help="response matrix CSV (NA allowed)")
    est.add_argument("--k", type=int, required=True, help="number of factors")
    est.add_argument("--mask", help="0/1 observation mask CSV")
    est.add_argument("--ordinal", type=int, metavar="T", help="number of ordinal levels")
    est.add_argument("--link", choices=["logistic", "probit"], default="logistic")
    est.add_argument("--epsilon", type=float, help="constant clamp level")
    est.add_argument(
        "--epsilon-decay", metavar="G0,G1", help="power-decay clamp gamma0,gamma1"
    )
    est.add_argument("--threshold-const", type=float, default=1.01)
    est.add_argument("--out", default=".", help="output directory")
    est.add_argument(
        "--seed-report", action="store_true", help="echo seeds into the manifest"
    )
    est.set_defaults(func=cmd_estimate)

    scr = sub.add_parser("scree", help="scree series and suggested K")
    scr.add_argument("--input", required=True)
    scr.add_argument("--kdag", type=int, required=True, help="input dimension")
    scr.add_argument("--mask", help="0/1 observation mask CSV")
    scr.add_argument("--link", choices=["logistic", "probit"], default="logistic")
    scr.add_argument("--svg", help="also write an SVG scree plot")
    scr.add_argument("--out", default=".")
    scr.set_defaults(func=cmd_scree)

    sim = sub.add_parser("simulate", help="generate a benchmark dataset")
    sim.add_argument("--k", type=int, default=4)
    sim.add_argument("--j", type=int, default=200)
    sim.add_argument("--n", type=int, help="persons; defaults to 20*J")
    sim.add_argument("--rho", type=float, default=0.0)
    sim.add_argument("--missing", type=float, default=0.0, metavar="RATE")
    sim.add_argument("--ordinal", type=int, metavar="T")
    sim.add_argument("--item-seed", type=int, default=0)
    sim.add_argument("--person-seed", type=int, default=1)
    sim.add_argument("--out", default=".")
    sim.set_defaults(func=cmd_simulate)

    ev = sub.add_parser("evaluate", help="rotation-invariant loading loss")
    ev.add_argument("--reference", required=True, help="true loadings CSV")
    ev.add_argument("--estimate", required=True, help="estimated loadings CSV")
    ev.add_argument("--out", default=".")
    ev.set_defaults(func=cmd_evaluate)

    bn = sub.add_parser("bench", help="run a scenario grid")
    bn.add_argument("--grid", required=True, help="e.g. k=4;j=200,400;rho=0,0.3")
    bn.add_argument("--reps", type=int, required=True)
    bn.add_argument("--item-seed", type=int, default=0)
    bn.add_argument("--out", default=".")
    bn.set_defaults(func=cmd_bench)

    return parser


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _truncation(args) -> TruncationPolicy:
    if args.epsilon is not None and args.epsilon_decay is not None:
        raise ConfigError("--epsilon and --epsilon-decay are mutually exclusive")
    if args.epsilon is not None:
        return TruncationPolicy.constant(args.epsilon)
    if args.epsilon_decay is not None:
        try:
            g0, g1 = (float(v) for v in args.epsilon_decay.split(","))
        except ValueError as exc:
            raise ConfigError("--epsilon-decay expects two numbers G0,G1") from exc
        return TruncationPolicy.power_decay(g0, g1)
    return TruncationPolicy()


def _load_response_matrix(args, n_categories: int) -> ResponseMatrix:
    values, na_mask = io.read_responses(args.input)
    if args.mask is not None:
        mask_values = io.read_matrix(args.mask)
        if mask_values.shape != values.shape:
            raise InputError(
                f"--mask shape {mask_values.shape} does not match "
                f"--input shape {values.shape}"
            )
        mask = (mask_values != 0) & na_mask
    else:
        mask = na_mask
    return ResponseMatrix(values=values, mask=mask, n_categories=n_categories)


def cmd_estimate(args) -> int:
    if args.mask is not None and args.ordinal is not None:
        raise ConfigError("--mask cannot be combined with --ordinal")
    out = _outdir(args)
    manifest = io.Manifest(
        "estimate",
        {
            "k": args.k,
            "link": args.link,
            "threshold_const": args.threshold_const,
            "ordinal": args.ordinal,
        },
    )
    total0 = time.perf_counter()

    t0 = time.perf_counter()
    n_categories = args.ordinal if args.ordinal is not None else 1
    data = _load_response_matrix(args, n_categories)
    manifest.add_input(args.input)
    if args.mask is not None:
        manifest.add_input(args.mask)
    manifest.add_timing("load", time.perf_counter() - t0)

    config = EstimationConfig(
        n_factors=args.k,
        link=LinkFunction(args.link),
        truncation=_truncation(args),
        threshold_constant=args.threshold_const,
    )
    if args.ordinal is not None:
        estimate = estimate_ordinal(data, config)
    elif data.is_complete:
        estimate = estimate_binary(data, config)
    else:
        estimate = estimate_missing(data, config)
    for stage, seconds in estimate.timings.items():
        manifest.add_timing(stage, seconds)
    manifest.record["config"]["epsilon_used"] = estimate.epsilon_used
    manifest.record["config"]["k_tilde"] = estimate.k_tilde

    t0 = time.perf_counter()
    for name, matrix in (
        ("loadings.csv", estimate.loadings),
        ("scores.csv", estimate.scores),
        ("intercepts.csv", np.atleast_2d(estimate.intercepts).T
         if np.asarray(estimate.intercepts).ndim == 1 else estimate.intercepts),
        ("singular_values.csv", estimate.singular_values_std[:, np.newaxis]),
    ):
        path = out / name
        io.write_matrix(path, matrix)
        manifest.add_output(path)
    manifest.add_timing("write", time.perf_counter() - t0)
    manifest.record["total_seconds"] = time.perf_counter() - total0
    manifest.write(out / "manifest.json")
    print(f"estimate written to {out} (k_tilde = {estimate.k_tilde})")
    return EXIT_OK


def cmd_scree(args) -> int:
    out = _outdir(args)
    manifest = io.Manifest("scree", {"kdag": args.kdag, "link": args.link})
    total0 = time.perf_counter()

    t0 = time.perf_counter()
    data = _load_response_matrix(args, 1)
    manifest.add_input(args.input)
    manifest.add_timing("load", time.perf_counter() - t0)

    config = EstimationConfig(
        n_factors=args.kdag, link=LinkFunction(args.link), input_dim=args.kdag
    )
    t0 = time.perf_counter()
    result = rankselect.scree(data, config)
    manifest.add_timing("scree", time.perf_counter() - t0)

    t0 = time.perf_counter()
    scree_path = out / "scree.csv"
    with open(scree_path, "w") as fh:
        fh.write("k,sigma_std,gap_ratio,gap_diff,suggested\n")
        for idx, value in enumerate(result.standardized_values, start=1):
            ratio = result.gap_ratios[idx - 1] if idx < args.kdag else ""
            diff = result.gap_diffs[idx - 1] if idx < args.kdag else ""
            ratio = f"{ratio:.17g}" if ratio != "" else ""
            diff = f"{diff:.17g}" if diff != "" else ""
            flag = 1 if idx == result.suggested_k else 0
            fh.write(f"{idx},{value:.17g},{ratio},{diff},{flag}\n")
    manifest.add_output(scree_path)
    if args.svg:
        io.write_scree_svg(args.svg, result.standardized_values, result.suggested_k)
        manifest.add_output(args.svg)
    manifest.add_timing("write", time.perf_counter() - t0)
    manifest.record["total_seconds"] = time.perf_counter() - total0
    manifest.write(out / "manifest.json")
    print(f"suggested number of factors: {result.suggested_k}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    out = _outdir(args)
    scenario = SimulationScenario(
        n_factors=args.k,
        n_items=args.j,
        n_persons=args.n,
        latent_correlation=args.rho,
        item_seed=args.item_seed,
        person_seed=args.person_seed,
    )
    manifest = io.Manifest(
        "simulate",
        {
            "k": args.k,
            "j": args.j,
            "n": scenario.persons,
            "rho": args.rho,
            "missing": args.missing,
            "ordinal": args.ordinal,
            "latent_covariance": scenario.latent_covariance().tolist(),
        },
    )
    manifest.add_seed("item_seed", args.item_seed)
    manifest.add_seed("person_seed", args.person_seed)
    total0 = time.perf_counter()

    t0 = time.perf_counter()
    if args.ordinal is not None:
        if args.missing > 0:
            raise ConfigError("--ordinal cannot be combined with --missing")
        data, truth = generate_ordinal(scenario, args.ordinal)
        truth_thetas = truth.thetas
        truth_intercepts = truth.intercepts
    else:
        data, truth = simulate_dataset(scenario, args.missing)
        truth_thetas = truth.thetas
        truth_intercepts = truth.intercepts[:, np.newaxis]
    manifest.add_timing("generate", time.perf_counter() - t0)

    t0 = time.perf_counter()
    responses = np.where(data.mask, data.values, 0).astype(int)
    for name, matrix in (
        ("responses.csv", responses),
        ("mask.csv", data.mask.astype(int)),
        ("truth_loadings.csv", truth.loadings),
        ("truth_intercepts.csv", truth_intercepts),
        ("truth_thetas.csv", truth_thetas),
    ):
        path = out / name
        io.write_matrix(path, matrix)
        manifest.add_output(path)
    manifest.add_timing("write", time.perf_counter() - t0)
    manifest.record["total_seconds"] = time.perf_counter() - total0
    manifest.write(out / "manifest.json")
    print(f"dataset written to {out} (N = {scenario.persons}, J = {args.j})")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    out = _outdir(args)
    reference = io.read_matrix(args.reference)
    estimate = io.read_matrix(args.estimate)
    result = alignment_loss(reference, estimate)
    rotation_path = out / "rotation.csv"
    io.write_matrix(rotation_path, result.rotation)
    manifest = io.Manifest("evaluate")
    manifest.add_input(args.reference)
    manifest.add_input(args.estimate)
    manifest.add_output(rotation_path)
    manifest.record["loss"] = result.loss
    manifest.write(out / "manifest.json")
    print(f"alignment loss: {result.loss:.8g}")
    return EXIT_OK


def cmd_bench(args) -> int:
    out = _outdir(args)
    cells = benchmod.parse_grid(args.grid)
    total0 = time.perf_counter()
    records = benchmod.run_grid(cells, args.reps, args.item_seed)
    rows = benchmod.summarize(records)
    summary_path = out / "bench_summary.csv"
    records_path = out / "bench_records.csv"
    benchmod.write_summary(summary_path, rows)
    benchmod.write_records(records_path, records)
    manifest = io.Manifest("bench", {"grid": args.grid, "reps": args.reps})
    manifest.add_seed("item_seed", args.item_seed)
    manifest.add_output(summary_path)
    manifest.add_output(records_path)
    manifest.add_timing("bench", time.perf_counter() - total0)
    manifest.record["total_seconds"] = time.perf_counter() - total0
    manifest.write(out / "manifest.json")
    for row in rows:
        print(
            f"k={row['k']} j={row['j']} rho={row['rho']}: "
            f"median loss {row['loss_median']:.5f}, "
            f"median time {row['seconds_median']:.2f}s"
        )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SvdIfaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
