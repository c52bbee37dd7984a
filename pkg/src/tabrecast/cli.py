"""Command-line entry point: ``tabrecast {recast,split,stats,validate}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import PluginProtocolError
from .pipeline import Config, PipelineIOError, UsageError, run, split, stats, validate
from .recasters import Limits

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_PLUGIN = 0, 1, 2, 3
TASKS = {"t2tg": "T2TG", "tqa-short": "TQA_short", "tqa-long": "TQA_long", "spt": "SPT"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _count(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _seed(text: str) -> int:
    n = int(text)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tabrecast", description="Recast table tasks into table NLI data.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("recast", help="generate NLI instances from a source JSONL file")
    p.add_argument("--task", required=True, choices=sorted(TASKS))
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--tables", help="tables sidecar path (default: <output>.tables.jsonl)")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-entailments", type=_count, default=5)
    p.add_argument("--max-contradictions", type=_count, default=5)
    p.add_argument("--enable-cf", action="store_true")
    p.add_argument("--enable-paraphrase", action="store_true")
    p.add_argument("--antonyms")
    p.add_argument("--abbrev")
    p.add_argument("--plugin", help="command line of a statement/paraphrase plugin")
    p.add_argument("--plugin-timeout", type=float, default=10.0)
    p.add_argument("--workers", type=_count, default=1)
    p.add_argument("--skeletons", action="store_true",
                   help="instantiate squall skeletons across the tables of the batch")
    p.add_argument("--no-auto-orient", action="store_true")

    p = sub.add_parser("split", help="split a dataset by table into train and test")
    p.add_argument("--input", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)

    p = sub.add_parser("stats", help="count labels per variant")
    p.add_argument("--input", required=True)

    p = sub.add_parser("validate", help="re-derive labels and report mismatches")
    p.add_argument("--input", required=True)
    p.add_argument("--tables", required=True)
    return parser


def _print(obj):
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "recast":
            limits = Limits(
                max_entailments=args.max_entailments, max_contradictions=args.max_contradictions,
                enable_cf=args.enable_cf, enable_paraphrase=args.enable_paraphrase,
                auto_orient=not args.no_auto_orient,
            )
            config = Config(
                task=TASKS[args.task], input=args.input, output=args.output, seed=args.seed,
                limits=limits, antonyms_path=args.antonyms, abbrev_path=args.abbrev,
                plugin=args.plugin, plugin_timeout=args.plugin_timeout,
                workers=max(args.workers, 1), skeletons=args.skeletons, tables_output=args.tables,
            )
            _print(run(config).to_json())
        elif args.command == "split":
            r = split(args.input, args.ratio, args.seed, args.train, args.test)
            _print({"train": r.train, "test": r.test, "train_tables": r.train_tables,
                    "test_tables": r.test_tables, "skipped": dict(r.skipped)})
        elif args.command == "stats":
            _print(stats(args.input).to_json())
        else:
            report = validate(args.input, args.tables)
            _print(report.to_json())
    except UsageError as exc:
        print(f"tabrecast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PluginProtocolError as exc:
        print(f"tabrecast: plugin protocol error: {exc}", file=sys.stderr)
        return EXIT_PLUGIN
    except (PipelineIOError, OSError) as exc:
        print(f"tabrecast: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # lexicon files that fail to parse are configuration mistakes
        print(f"tabrecast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
