"""Command-line harness.

    corrspread bound <config>       compute and write the bound grids only
    corrspread simulate <config>    compute and write the exact grids only
    corrspread verify <config>      both, plus the cell-wise dominance report
    corrspread constants <config>   lattice-constant convergence table vs N
    corrspread arrivals <config>    threshold-crossing times per distance

Exit codes: 0 success, 1 validation error, 2 dominance violation, 3 I/O
error. `--threads` only affects speed, never results.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .lattice import LatticeSpec, PairInteractionSpec, constant_C, norm_F, norm_phi
from .scenario import (
    ConfigError,
    ScenarioError,
    arrival_times,
    emit_outputs,
    load_config,
    run_scenario,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_DOMINANCE = 2
EXIT_IO = 3


def _apply_overrides(cfg, out_dir, emit_bound=None, emit_exact=None):
    outputs = cfg.outputs
    changes = {}
    if out_dir is not None:
        changes["directory"] = out_dir
    if emit_bound is not None:
        changes["emit_bound"] = emit_bound
    if emit_exact is not None:
        changes["emit_exact"] = emit_exact
    if changes:
        outputs = dataclasses.replace(outputs, **changes)
        cfg = dataclasses.replace(cfg, outputs=outputs)
    return cfg


def _run_and_emit(cfg, threads):
    result = run_scenario(cfg, threads=threads)
    paths = emit_outputs(result.grids, result.report, result.summary, cfg.outputs.directory)
    for p in paths:
        print(f"wrote {p}")
    return result


def cmd_bound(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args.out, emit_bound=True, emit_exact=False)
    _run_and_emit(cfg, args.threads)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args.out, emit_bound=False, emit_exact=True)
    _run_and_emit(cfg, args.threads)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args.out, emit_bound=True, emit_exact=True)
    result = _run_and_emit(cfg, args.threads)
    report = result.report
    print(
        f"dominance: {report.num_violations} violation(s) in {report.num_cells} cells, "
        f"worst margin {report.worst_margin:.3e}"
    )
    return EXIT_OK if report.num_violations == 0 else EXIT_DOMINANCE


def cmd_constants(args) -> int:
    cfg = load_config(args.config)
    n_top = cfg.lattice.num_sites
    ladder = sorted({n for n in (5, 11, 25, 51, 101, 201, 401) if n < n_top} | {n_top})
    interaction = PairInteractionSpec.xx_chain(
        J=cfg.J, eta=cfg.simulation.eta if cfg.simulation.kind == "gaussian_quench" else 0.0
    )
    print(f"{'N':>6}  {'norm_F':>18}  {'const_C':>18}  {'norm_phi':>18}")
    for n in ladder:
        lat = LatticeSpec(n)
        print(
            f"{n:>6}  {norm_F(cfg.decay, lat):>18.12f}  "
            f"{constant_C(cfg.decay, lat):>18.12f}  "
            f"{norm_phi(interaction, cfg.decay, lat):>18.12f}"
        )
    return EXIT_OK


def cmd_arrivals(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args.out)
    result = run_scenario(cfg, threads=args.threads)
    arrivals = {
        grid.label: {str(d): t for d, t in arrival_times(grid, args.threshold).items()}
        for grid in result.grids
    }
    for label, table in arrivals.items():
        print(f"[{label}] threshold {args.threshold}")
        for d, t in table.items():
            print(f"  delta {d:>4}: {'never' if t is None else f'{t:.6f}'}")
    os.makedirs(cfg.outputs.directory, exist_ok=True)
    path = os.path.join(cfg.outputs.directory, "arrivals.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"threshold": args.threshold, "arrivals": arrivals}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrspread",
        description="Lightcone bounds on correlation spreading, with exact XX-chain checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, threshold=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="scenario configuration file")
        if name != "constants":
            p.add_argument("--out", default=None, help="override the output directory")
            p.add_argument("--threads", type=int, default=1,
                           help="worker threads (speed only, never results)")
        if threshold:
            p.add_argument("--threshold", type=float, default=0.1,
                           help="arrival threshold on |value| (default 0.1)")
        p.set_defaults(func=func)

    add("bound", cmd_bound, "compute bound grids only")
    add("simulate", cmd_simulate, "compute exact grids only")
    add("verify", cmd_verify, "bound + exact + dominance certification")
    add("constants", cmd_constants, "print the lattice-constant convergence table")
    add("arrivals", cmd_arrivals, "threshold-crossing times per distance", threshold=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ScenarioError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
