"""Command-line entry point: ``mfs run``, ``mfs synth`` and ``mfs convert``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import uci
from .dataset import DatasetError
from .experiment import ExperimentConfig, pct, run_experiment, write_report
from .synthetic import write_control_chart_csv

# flag -> (config key, type)
RUN_FLAGS = {
    "--seed": ("seed", int),
    "--runs": ("runs", int),
    "--generations": ("generations", int),
    "--pop": ("pop", int),
    "--pc": ("pc", float),
    "--pm": ("pm", float),
    "--elite": ("elite", int),
    "--ls-passes": ("ls_passes", int),
    "--elite-replacement": ("elite_replacement", str),
    "--folds": ("folds", int),
    "--cv-repeats": ("cv_repeats", int),
    "--missing-token": ("missing_token", str),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfs", description="Memetic feature selection with 1NN wrapper fitness.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run MFS on a CSV dataset and write a report")
    run.add_argument("--data", help="CSV file, header row, class label in the last column")
    run.add_argument("--config", help="JSON file with keys named like the flags (snake_case)")
    run.add_argument("--out", help="output directory")
    for flag, (key, typ) in RUN_FLAGS.items():
        run.add_argument(flag, dest=key, type=typ, default=None)
    run.add_argument("--baselines", action="store_true", default=None,
                     help="also score ReliefF and information-gain rankings at the MFS cardinality")

    synth = sub.add_parser("synth", help="write a synthetic control chart CSV")
    synth.add_argument("--out", required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--per-class", type=int, default=100)
    synth.add_argument("--length", type=int, default=60)

    conv = sub.add_parser("convert", help="rewrite raw UCI files into the loader's CSV layout")
    conv.add_argument("name", choices=sorted(uci.LAYOUTS))
    conv.add_argument("--raw-dir", required=True)
    conv.add_argument("--out", required=True)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            values.update(json.load(fh))
    for key in ["data", "out", "baselines"] + [k for k, _ in RUN_FLAGS.values()]:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    cfg = ExperimentConfig.from_dict(values)
    if not cfg.data:
        raise ValueError("no dataset given (--data or 'data' in the config file)")
    if not cfg.out:
        raise ValueError("no output directory given (--out or 'out' in the config file)")
    return cfg


def cmd_run(args) -> int:
    cfg = resolve_config(args)
    records, summary = run_experiment(cfg)
    write_report(records, summary, cfg.out, cfg)
    print(f"{summary.dataset}: unselected {pct(summary.unselected)}  best {pct(summary.best)}  "
          f"average {pct(summary.average)}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "synth":
            write_control_chart_csv(args.out, args.per_class, args.length, args.seed)
            return 0
        if args.command == "convert":
            uci.convert(args.name, args.raw_dir, args.out)
            return 0
    except (DatasetError, ValueError, KeyError, OSError) as exc:
        print(f"mfs: error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
