"""Command-line entry point.

Subcommands: generate, validate, score, baseline, stats, catalog-dump.

Exit codes:
    0  success
    2  usage error (argparse)
    3  data error (malformed manifest/dataset/prediction file, missing pose)
    4  validation mismatch
    5  I/O error
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from ._version import __version__
from .dataset import (
    GenerationConfig,
    generate_dataset,
    label_stats,
)
from .discretize import OPTION_LABELS_BY_KIND, ThresholdConfig
from .errors import HandMcqError, ParseError
from .evaluate import load_predictions, random_baseline, score
from .oracle import validate_dataset
from .skeleton import (
    KINDS,
    NUM_JOINTS,
    catalog,
    joint_display_name,
)

EXIT_OK = 0
EXIT_DATA = 3
EXIT_MISMATCH = 4
EXIT_IO = 5

DEFAULT_SEED = 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="handmcq",
        description="Generate and score spatial-reasoning MCQs from 3D hand joints.",
    )
    parser.add_argument("--version", action="version", version=f"handmcq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate an MCQ dataset from a pose manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples-per-type", type=int, default=5)
    p.add_argument("--config", help="JSON config file; its values override flags")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="parallel workers (output bytes are identical for any value)")

    p = sub.add_parser("validate", help="replay every question against the manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", help="JSON threshold config to validate against "
                                    "(defaults to the dataset header's)")

    p = sub.add_parser("score", help="score a prediction file against a gold dataset")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--calibration-bins", type=int, default=None)
    p.add_argument("--report", help="write the full machine-readable report here")

    p = sub.add_parser("baseline", help="uniform random-guess metrics on a gold dataset")
    p.add_argument("--gold", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--report")

    p = sub.add_parser("stats", help="ground-truth label frequencies of a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--json", action="store_true", dest="as_json")

    sub.add_parser("catalog-dump", help="print the joint and descriptor catalogs")

    return parser


def _load_generation_config(args) -> GenerationConfig:
    cfg_dict = {
        "seed": args.seed,
        "per_type_samples": args.samples_per_type,
    }
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg_dict.update(json.load(fh))
    return GenerationConfig.from_dict(cfg_dict)


def _cmd_generate(args) -> int:
    cfg = _load_generation_config(args)
    summary = generate_dataset(args.manifest, cfg, args.out, jobs=args.jobs)
    print(json.dumps(summary.to_dict(), sort_keys=True))
    return EXIT_OK


def _cmd_validate(args) -> int:
    thresholds = None
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        thresholds = ThresholdConfig.from_dict(loaded.get("thresholds", loaded))
    report = validate_dataset(args.manifest, args.dataset, thresholds=thresholds)
    print(f"questions: {report.total}  mismatches: {len(report.mismatches)}  "
          f"skipped: {len(report.skipped)}")
    for mismatch in report.mismatches:
        print(f"MISMATCH {mismatch['question_id']}: stored "
              f"{mismatch['expected_category']!r} but oracle says "
              f"{mismatch['oracle_category']!r}")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _print_score_report(report, report_path) -> None:
    print(report.format_text())
    for kind, matrix in sorted(report.confusion.items()):
        print(f"\nconfusion [{kind}] (rows = gold, columns = predicted)")
        labels = list(OPTION_LABELS_BY_KIND[kind])
        width = max(len(lb) for lb in labels) + 2
        print(" " * width + "".join(f"{lb:>{width}}" for lb in labels))
        for g in labels:
            cells = "".join(f"{matrix[g][p]:>{width}.6g}" for p in labels)
            print(f"{g:>{width}}" + cells)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        print(f"\nreport written to {report_path}")


def _cmd_score(args) -> int:
    report = score(args.gold, load_predictions(args.pred),
                   calibration_bins=args.calibration_bins)
    _print_score_report(report, args.report)
    return EXIT_OK


def _cmd_baseline(args) -> int:
    report = random_baseline(args.gold, seed=args.seed, trials=args.trials)
    _print_score_report(report, args.report)
    return EXIT_OK


def _cmd_stats(args) -> int:
    stats = label_stats(args.dataset)
    if args.as_json:
        print(json.dumps(stats, indent=2))
        return EXIT_OK
    for kind in KINDS:
        counts = stats[kind]
        by_freq = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        cells = ", ".join(f"{label} ({count:,})" for label, count in by_freq)
        print(f"{kind:<10} {cells}")
    return EXIT_OK


def _cmd_catalog_dump(args) -> int:
    print(f"joints ({NUM_JOINTS}):")
    for j in range(NUM_JOINTS):
        print(f"  {j:2d}  {joint_display_name(j)}")
    for kind in KINDS:
        targets = catalog(kind)
        print(f"\n{kind} targets ({len(targets)}):")
        for t in targets:
            if t.object is None:
                print(f"  {joint_display_name(t.subject)}")
            else:
                print(f"  {joint_display_name(t.subject)}  vs.  {joint_display_name(t.object)}")
    total = sum(len(catalog(k)) for k in KINDS)
    print(f"\ntotal targets: {total}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "validate": _cmd_validate,
    "score": _cmd_score,
    "baseline": _cmd_baseline,
    "stats": _cmd_stats,
    "catalog-dump": _cmd_catalog_dump,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except HandMcqError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        # bad config values (out-of-range samples, malformed threshold JSON)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
