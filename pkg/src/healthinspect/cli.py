"""Command line entry point.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 report
directory not writable.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, PipelineConfig, load_config
from .ingest import DataError, link_and_label, load_inspections, load_links, load_reviews
from .lda import format_topics
from .pipeline import Corpus, cross_validate_methods, fit_report_topics
from .report import ReportError, emit_report
from .synthdata import generate_corpus, write_dataset
from .textprep import load_stopwords

log = logging.getLogger("healthinspect")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_REPORT = 0, 2, 3, 4


def load_corpus(cfg: PipelineConfig) -> Corpus:
    reviews = load_reviews(cfg.require_path("paths.reviews"))
    inspections = load_inspections(cfg.require_path("paths.inspections"))
    links = load_links(cfg.require_path("paths.links"))
    linked = link_and_label(reviews, inspections, links, cfg["window_days"])
    log.info("%d labelled reviews (%d dropped)", len(linked.documents), linked.dropped)
    if not linked.documents:
        raise DataError("no review could be labelled")
    try:
        stopwords = load_stopwords(cfg.path("paths.stopwords"))
    except OSError as exc:
        raise DataError(f"cannot read stopwords: {exc.strerror or exc}") from None
    return Corpus.from_documents(linked.documents, stopwords)


def cmd_run(cfg: PipelineConfig) -> int:
    corpus = load_corpus(cfg)
    settings = cfg.settings()
    methods = list(cfg["methods"])
    try:
        cv = cross_validate_methods(methods, corpus, settings)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    topics = None
    if any(m.endswith("topics") for m in methods):
        _, topics = fit_report_topics(corpus, settings, cfg["report.top_words"])
    written = emit_report(cv.summaries, topics, cfg.require_path("paths.output"), cv.folds)
    sys.stdout.write((cfg.require_path("paths.output") / "summary.txt").read_text())
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_topics(cfg: PipelineConfig) -> int:
    corpus = load_corpus(cfg)
    try:
        _, topics = fit_report_topics(corpus, cfg.settings(), cfg["report.top_words"])
    except ValueError as exc:
        raise DataError(str(exc)) from None
    out = cfg.require_path("paths.output")
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "topics.txt").write_text(format_topics(topics), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ReportError(f"cannot write report to {out}: {exc.strerror or exc}") from None
    sys.stdout.write(format_topics(topics))
    return EXIT_OK


def cmd_synth(cfg: PipelineConfig, out_dir) -> int:
    synth = cfg.synth_config()
    docs = generate_corpus(synth)
    try:
        paths = write_dataset(docs, out_dir, seed=synth.seed)
    except OSError as exc:
        raise ReportError(f"cannot write dataset to {out_dir}: {exc.strerror or exc}") from None
    for path in paths.values():
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="healthinspect", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="cross-validate the configured method rows")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int)

    synth = sub.add_parser("synth", help="write a synthetic dataset")
    synth.add_argument("--config", required=True)
    synth.add_argument("--out", required=True)

    topics = sub.add_parser("topics", help="fit topics on the full corpus and print them")
    topics.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "run":
            if args.seed is not None:
                if args.seed < 0 or args.seed >= 2**64:
                    raise ConfigError("--seed must be an unsigned 64-bit integer")
                cfg = cfg.with_seed(args.seed)
            return cmd_run(cfg)
        if args.command == "synth":
            return cmd_synth(cfg, args.out)
        return cmd_topics(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ReportError as exc:
        print(f"report error: {exc}", file=sys.stderr)
        return EXIT_REPORT


if __name__ == "__main__":
    sys.exit(main())
