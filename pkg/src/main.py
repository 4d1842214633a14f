"""M2m Long-tail Experiments - CLI Entry Point."""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from harness import gen_data, load_config, load_gen_data_config, rerender, run, sweep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Train and compare re-balancing strategies on class-imbalanced data"
    )
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    subparsers = parser.add_subparsers(dest="verb", required=True)

    run_parser = subparsers.add_parser("run", help="Run every strategy x seed in a config")
    run_parser.add_argument("config", type=Path, help="Experiment YAML file")
    run_parser.add_argument("--output-dir", help="Override output_dir from the config")

    sweep_parser = subparsers.add_parser(
        "sweep", help="Grid-search lam, beta, gamma on validation bACC"
    )
    sweep_parser.add_argument("config", type=Path, help="Experiment YAML file")
    sweep_parser.add_argument("--output-dir", help="Override output_dir from the config")

    report_parser = subparsers.add_parser(
        "report", help="Re-render result tables of a finished run"
    )
    report_parser.add_argument("directory", type=Path, help="Output directory of a run")

    data_parser = subparsers.add_parser("gen-data", help="Export train/val/test splits as CSV")
    data_parser.add_argument("spec", type=Path, help="Dataset YAML file")
    return parser


def _load(args):
    config = load_config(args.config)
    if args.output_dir:
        config = replace(config, output_dir=args.output_dir)
    return config


def dispatch(args) -> None:
    """Run one verb; failures surface as exceptions, never as a return code."""
    if args.verb == "run":
        rows = run(_load(args))
        failed = [row for row in rows if row["status"] != "ok"]
        if failed:
            raise RuntimeError(f"{len(failed)} of {len(rows)} runs failed")
    elif args.verb == "sweep":
        sweep(_load(args))
    elif args.verb == "report":
        rerender(args.directory)
    elif args.verb == "gen-data":
        gen_data(load_gen_data_config(args.spec))


def main(argv=None):
    """CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        dispatch(args)
    except Exception as e:
        record = {"error": type(e).__name__, "message": str(e), "verb": args.verb}
        print(json.dumps(record), file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
