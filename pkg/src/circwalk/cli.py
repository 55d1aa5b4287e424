"""Command-line entry point: ``circwalk walk|verify|dioph``.

Exit codes: 0 success, 2 config/parse error, 3 resource cap exceeded with
no rows produced.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import experiments as ex
from .measure import DEFAULT_SUPPORT_CAP, SupportCapExceeded

log = logging.getLogger("circwalk")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAP = 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", required=True, help="phi | plastic | sqrt:n1,n2,... | dec:v1,v2,...")
    p.add_argument("--k", type=int, help="single step count (sets kmin = kmax)")
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=100)
    p.add_argument("--kstep", type=int, default=1)
    p.add_argument("--mode", choices=ex.MODES, default="exact")
    p.add_argument("--samples", type=int, default=100_000, help="Monte Carlo sample count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nmax", type=int, default=100_000, help="horizon of the beta_hat scan")
    p.add_argument("--qmax", type=int, default=1000, help="horizon of the Dirichlet B_hat scan")
    p.add_argument("--mcap", type=int, default=None, help="Erdos-Turan scan cap (default 10^6/d)")
    p.add_argument("--support-cap", type=int, default=DEFAULT_SUPPORT_CAP)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=ex.FORMATS, default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circwalk",
        description="Exact discrepancy of rotation walks on the circle, with Fourier bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("walk", "dump the step-k distribution as (position, weight) atoms"),
        ("verify", "per-k discrepancy, Fourier bounds and rate envelopes"),
        ("dioph", "empirical approximation constants of the generator tuple"),
    ):
        _common(sub.add_parser(name, help=help_))
    return parser


def config_from_args(args: argparse.Namespace) -> ex.ExperimentConfig:
    k_min, k_max = args.kmin, args.kmax
    if args.k is not None:
        k_min = k_max = args.k
    elif args.command == "walk":
        k_max = max(k_min, k_max)
    return ex.ExperimentConfig(
        alpha_spec=args.alpha,
        k_min=k_min,
        k_max=k_max,
        k_step=args.kstep,
        mode=args.mode,
        n_samples=args.samples,
        seed=args.seed,
        n_max_dioph=args.nmax,
        q_max=args.qmax,
        m_cap=args.mcap,
        support_cap=args.support_cap,
        output_path=args.out,
        format=args.format,
    )


def render(command: str, config: ex.ExperimentConfig) -> str:
    if command == "verify":
        result = ex.run_verify(config)
        return ex.verify_to_json(result) if config.format == "json" else ex.verify_to_csv(result)
    if command == "walk":
        measure = ex.run_walk(config)
        if config.format == "csv":
            return ex.walk_to_csv(measure)
        alpha = config.alpha()
        meta = {
            "alpha_spec": config.alpha_spec,
            "entries": list(alpha.entries),
            "k": config.k_min,
            "mode": config.mode,
            "seed": config.seed if config.mode == "montecarlo" else None,
            "n_atoms": len(measure),
        }
        return ex.walk_to_json(measure, meta)
    report = ex.run_dioph(config)
    return ex.dioph_to_json(report) if config.format == "json" else ex.dioph_to_csv(report)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        text = render(args.command, config)
    except ex.ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except SupportCapExceeded as exc:
        log.error("%s", exc)
        return EXIT_CAP

    if config.output_path == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(config.output_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        log.error("cannot write %s: %s", config.output_path, exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
