"""Command line entry point: ``priyasim simulate`` and ``priyasim version``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import __version__
from .config import ExperimentSpec, parse_config
from .experiment import run_experiment
from .topology import ConfigError

log = logging.getLogger("priyasim")

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="priyasim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a protocol x seed sweep and write CSVs")
    sim.add_argument("--config", help="flat key = value config file (defaults if omitted)")
    sim.add_argument("--protocol", action="append", dest="protocols",
                     help="protocol to run; repeatable, overrides experiment.protocols")
    sim.add_argument("--seed", action="append", type=int, dest="seeds",
                     help="seed to run; repeatable, overrides experiment.seeds")
    sim.add_argument("--out", help="output directory, overrides experiment.out_dir")
    sim.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    sub.add_parser("version", help="print the package version")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    if args.command == "version":
        print(__version__)
        return EXIT_OK

    try:
        spec = parse_config(args.config) if args.config else ExperimentSpec()
        overrides = {}
        if args.protocols:
            overrides["protocols"] = tuple(p.lower() for p in args.protocols)
        if args.seeds:
            overrides["seeds"] = tuple(args.seeds)
        if args.out:
            overrides["out_dir"] = args.out
        spec = replace(spec, **overrides)
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
    except ConfigError as e:
        log.error("configuration error: %s", e)
        return EXIT_CONFIG
    except OSError as e:
        log.error("cannot read config: %s", e)
        return EXIT_IO

    try:
        written = run_experiment(spec, jobs=args.jobs)
    except OSError as e:
        log.error("cannot write results: %s", e)
        return EXIT_IO
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
