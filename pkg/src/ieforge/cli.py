"""Command-line interface: build, audit and score."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import AlignmentError, ConfigError, ManifestError

log = logging.getLogger("ieforge")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="pipeline config file (JSON)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="override the output directory")
    parser.add_argument(
        "--datasets", default=None, help="comma-separated subset of dataset names to process"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ieforge",
        description=(
            "Turn annotated information-extraction datasets into schema-based "
            "instruction corpora, audit them, and score model extractions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="run the full pipeline and write the corpus")
    _add_common_flags(p_build)
    p_build.add_argument(
        "--mode",
        choices=["hard_negative", "traditional_full_schema"],
        default=None,
        help="override the generation mode",
    )

    p_audit = sub.add_parser("audit", help="ingest and clean only; write records and reports")
    _add_common_flags(p_audit)

    p_score = sub.add_parser("score", help="score predictions against gold per an eval manifest")
    p_score.add_argument("--manifest", required=True, help="evaluation manifest file (JSON)")
    p_score.add_argument("--out", default=None, help="directory for the report and figure")

    return parser


def _load_config(args: argparse.Namespace):
    from .pipeline import load_config

    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out_dir = Path(args.out)
    if getattr(args, "mode", None):
        config.generation.mode = args.mode
    dataset_filter = None
    if args.datasets:
        dataset_filter = {name.strip() for name in args.datasets.split(",") if name.strip()}
    return config, dataset_filter


def cmd_build(args: argparse.Namespace) -> int:
    from .pipeline import run_pipeline

    config, dataset_filter = _load_config(args)
    results = run_pipeline(config, generate=True, dataset_filter=dataset_filter)
    print(f"built {len(results)} dataset(s) -> {config.out_dir}")
    for r in results:
        print(
            f"  {r.name}: samples in {r.samples_in} out {r.samples_out}, "
            f"instances {r.instances}, tokens ~{r.tokens}"
        )
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    from .pipeline import run_pipeline

    config, dataset_filter = _load_config(args)
    results = run_pipeline(config, generate=False, dataset_filter=dataset_filter)
    print(f"audited {len(results)} dataset(s) -> {config.out_dir}")
    for r in results:
        removed = r.report.removed
        collapsed = r.report.collapsed
        print(
            f"  {r.name}: samples in {r.samples_in} out {r.samples_out}, "
            f"removed {removed}, collapsed {collapsed}"
        )
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    from . import figures
    from .corpus_io import write_json
    from .evaluation import EvalManifest, run_manifest

    manifest = EvalManifest.from_file(args.manifest)
    report = run_manifest(manifest)

    out_dir = Path(args.out) if args.out else Path(args.manifest).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    serializable = {
        "benchmark": report["benchmark"],
        "datasets": {
            name: {
                "task": entry["task"],
                "parse_status": entry["parse_status"],
                "facets": {facet: score.to_obj() for facet, score in entry["facets"].items()},
            }
            for name, entry in report["datasets"].items()
        },
        "avg": report["avg"],
    }
    write_json(serializable, out_dir / "score_report.json")
    figures.plot_score_summary(report, out_dir / "scores.png")

    print(f"{report['benchmark']}")
    header = f"{'dataset':<24}{'facet':<12}{'P':>8}{'R':>8}{'F1':>8}"
    print(header)
    print("-" * len(header))
    for name, entry in report["datasets"].items():
        for facet, score in entry["facets"].items():
            print(f"{name:<24}{facet:<12}{score.precision:>8.4f}{score.recall:>8.4f}{score.f1:>8.4f}")
    for key, value in sorted(report["avg"].items()):
        print(f"{'Avg':<24}{key:<12}{'':>8}{'':>8}{value:>8.4f}")
    print(f"report -> {out_dir / 'score_report.json'}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"build": cmd_build, "audit": cmd_audit, "score": cmd_score}
    try:
        return handlers[args.command](args)
    except (ConfigError, ManifestError, AlignmentError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
