"""Command-line surface: index, batch, eval, stats.

Data outputs (run files, CSV) go to the requested path or stdout;
progress and timing lines go to stderr so piped output stays clean.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from .errors import MirelaxError
from .evaluation import (
    MetricsReport,
    evaluate,
    format_run_lines,
    read_qrels,
    read_run,
    run_from_merged,
)
from .expansion import Strategy, expand, reverse_query
from .index import Index, build_index, load_corpus, load_index, save_index, search
from .merging import MergedList, SubqueryStats, merge_stats, strip_merge
from .model import Query, parse_query, parse_topic_line


@dataclass(frozen=True)
class RunConfig:
    strategy: Strategy
    per_subquery_limit: int = 1000
    final_limit: int = 1000
    run_tag: str = ""
    reverse_topics: bool = False

    def __post_init__(self) -> None:
        if self.per_subquery_limit < 1 or self.final_limit < 1:
            raise ValueError("limits must be >= 1")

    @property
    def tag(self) -> str:
        return self.run_tag or f"{self.strategy.value}-{self.final_limit}"


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def read_topic_pairs(path: str | Path) -> list[tuple[str, str]]:
    """Lenient topic reader: bad lines are reported and skipped."""
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            try:
                pair = parse_topic_line(line)
            except MirelaxError as exc:
                _log(f"skipping {path}:{line_no}: {exc}")
                continue
            if pair is None:
                continue
            if pair[0] in seen:
                _log(f"skipping {path}:{line_no}: duplicate topic id {pair[0]!r}")
                continue
            seen.add(pair[0])
            pairs.append(pair)
    return pairs


def parse_topics(path: str | Path) -> list[Query]:
    queries = []
    for topic_id, raw in read_topic_pairs(path):
        try:
            queries.append(parse_query(raw, topic_id))
        except MirelaxError as exc:
            _log(f"skipping topic {topic_id}: {exc}")
    queries.sort(key=lambda q: q.topic_id)
    return queries


def run_topic(index: Index, query: Query, config: RunConfig) -> tuple[MergedList, list[SubqueryStats]]:
    """Expand, search, and merge one topic."""
    plan = expand(query, config.strategy)
    lists = [
        search(index, entry.subquery, config.per_subquery_limit, subquery_index=i)
        for i, entry in enumerate(plan.entries)
    ]
    merged = strip_merge(
        [(rl, entry.strip_width) for rl, entry in zip(lists, plan.entries)],
        config.final_limit,
        topic_id=query.topic_id,
    )
    return merged, merge_stats(plan, lists, config.per_subquery_limit)


def _open_out(path: str) -> TextIO:
    return sys.stdout if path == "-" else open(path, "w", encoding="utf-8")


def cmd_index(args: argparse.Namespace) -> int:
    index = build_index(load_corpus(args.corpus))
    save_index(index, args.out)
    print(
        f"indexed {index.doc_count} documents "
        f"({len(index.text_postings)} text terms, "
        f"{len(index.math_postings)} math tokens) -> {args.out}"
    )
    return 0


def _overlap_report(plain: MergedList, reversed_: MergedList) -> tuple[int, int, int, float]:
    docs_plain = {item.doc_id for item in plain.items}
    docs_reversed = {item.doc_id for item in reversed_.items}
    union = docs_plain | docs_reversed
    inter = docs_plain & docs_reversed
    jaccard = len(inter) / len(union) if union else 1.0
    return len(inter), len(docs_plain), len(docs_reversed), jaccard


def cmd_batch(args: argparse.Namespace) -> int:
    config = RunConfig(
        strategy=Strategy(args.strategy),
        per_subquery_limit=args.subquery_limit,
        final_limit=args.limit,
        run_tag=args.tag,
        reverse_topics=args.reverse,
    )
    index = load_index(args.index)
    queries = parse_topics(args.topics)
    if not queries:
        _log("error: no usable topics")
        return 2
    merged_lists: list[MergedList] = []
    jaccards: list[float] = []
    cumulative = 0.0
    for query in queries:
        started = time.perf_counter()
        effective = reverse_query(query) if config.reverse_topics else query
        merged, stats = run_topic(index, effective, config)
        if config.reverse_topics:
            plain_merged, _ = run_topic(index, query, config)
            inter, n_plain, n_rev, jaccard = _overlap_report(plain_merged, merged)
            jaccards.append(jaccard)
            _log(
                f"overlap {query.topic_id}: {inter} shared of "
                f"{n_plain} plain / {n_rev} reversed (jaccard {jaccard:.4f})"
            )
        merged_lists.append(merged)
        elapsed = time.perf_counter() - started
        cumulative += elapsed
        _log(
            f"topic {query.topic_id}: {len(stats)} subqueries, "
            f"{len(merged.items)} merged hits, {elapsed:.3f}s"
        )
    if jaccards:
        _log(f"overlap mean jaccard: {sum(jaccards) / len(jaccards):.4f}")
    _log(f"cumulative time for {len(queries)} topics: {cumulative:.3f}s")
    run = run_from_merged(merged_lists, config.tag)
    out = _open_out(args.out)
    try:
        for line in format_run_lines(run):
            out.write(line + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _print_metrics(report: MetricsReport, per_topic: bool) -> None:
    if per_topic:
        print(f"{'topic':<12} {'Bpref':>8} {'AP':>8} {'P@1':>8} {'P@5':>8} {'P@10':>8}")
        for topic_id in sorted(report.per_topic):
            m = report.per_topic[topic_id]
            print(
                f"{topic_id:<12} {m.bpref:>8.4f} {m.average_precision:>8.4f} "
                f"{m.precision_at_1:>8.4f} {m.precision_at_5:>8.4f} "
                f"{m.precision_at_10:>8.4f}"
            )
    print(f"Bpref  {report.bpref:.4f}")
    print(f"MAP    {report.mean_average_precision:.4f}")
    print(f"P@1    {report.precision_at_1:.4f}")
    print(f"P@5    {report.precision_at_5:.4f}")
    print(f"P@10   {report.precision_at_10:.4f}")
    print(f"topics evaluated: {report.evaluated_topics}")
    if report.excluded_topics:
        print(f"topics excluded (no relevant judgments): {report.excluded_topics}")


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def cmd_eval(args: argparse.Namespace) -> int:
    run = read_run(args.run)
    qrels = read_qrels(args.qrels)
    report = evaluate(run, qrels)
    _print_metrics(report, args.per_topic)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["topic_id", "bpref", "ap", "p_at_1", "p_at_5", "p_at_10"])
            for topic_id in sorted(report.per_topic):
                m = report.per_topic[topic_id]
                writer.writerow(
                    [
                        topic_id,
                        f"{m.bpref:.6f}",
                        f"{m.average_precision:.6f}",
                        f"{m.precision_at_1:.6f}",
                        f"{m.precision_at_5:.6f}",
                        f"{m.precision_at_10:.6f}",
                    ]
                )
            writer.writerow(
                [
                    "all",
                    f"{report.bpref:.6f}",
                    f"{report.mean_average_precision:.6f}",
                    f"{report.precision_at_1:.6f}",
                    f"{report.precision_at_5:.6f}",
                    f"{report.precision_at_10:.6f}",
                ]
            )
        if not args.no_figure:
            from .plotting import save_metrics_figure

            figure = _figure_path(args.out)
            save_metrics_figure(report, figure, title=f"run {Path(args.run).name}")
            _log(f"figure -> {figure}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    config = RunConfig(
        strategy=Strategy(args.strategy),
        per_subquery_limit=args.subquery_limit,
        reverse_topics=args.reverse,
    )
    index = load_index(args.index)
    queries = parse_topics(args.topics)
    if not queries:
        _log("error: no usable topics")
        return 2
    per_topic: dict[str, list[SubqueryStats]] = {}
    for query in queries:
        effective = reverse_query(query) if config.reverse_topics else query
        _, stats = run_topic(index, effective, config)
        per_topic[query.topic_id] = stats
        print(f"topic {query.topic_id} ({config.strategy.value}):")
        print(f"  {'#':>2} {'mask':<14} {'width':>5} {'hits':>6} {'fraction':>9}")
        for row in stats:
            print(
                f"  {row.subquery_index + 1:>2} {row.mask:<14} {row.strip_width:>5} "
                f"{row.hits:>6} {row.fraction:>9.4f}"
            )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["topic_id", "subquery", "mask", "strip_width", "hits", "fraction"]
            )
            for topic_id in sorted(per_topic):
                for row in per_topic[topic_id]:
                    writer.writerow(
                        [
                            topic_id,
                            row.subquery_index + 1,
                            row.mask,
                            row.strip_width,
                            row.hits,
                            f"{row.fraction:.6f}",
                        ]
                    )
        if not args.no_figure:
            from .plotting import save_stats_figure

            figure = _figure_path(args.out)
            save_stats_figure(per_topic, figure)
            _log(f"figure -> {figure}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirelax",
        description="Query relaxation, strip-merging, and retrieval evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build an index snapshot from a corpus")
    p_index.add_argument("corpus", help="corpus file (TSV) or directory of .txt files")
    p_index.add_argument("out", help="path for the index snapshot (JSON)")
    p_index.set_defaults(func=cmd_index)

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--strategy",
            choices=[s.value for s in Strategy],
            default=Strategy.OQO.value,
        )
        p.add_argument("--subquery-limit", type=int, default=1000, metavar="N")
        p.add_argument("--reverse", action="store_true", help="reverse term order inside each group")

    p_batch = sub.add_parser("batch", help="run topics and write a TREC run file")
    p_batch.add_argument("index", help="index snapshot path")
    p_batch.add_argument("topics", help="topic file (<topic_id><TAB><query>)")
    add_run_flags(p_batch)
    p_batch.add_argument("--limit", type=int, default=1000, metavar="N")
    p_batch.add_argument("--tag", default="", help="run tag (default <strategy>-<limit>)")
    p_batch.add_argument("--out", default="-", help="run file path ('-' for stdout)")
    p_batch.set_defaults(func=cmd_batch)

    p_eval = sub.add_parser("eval", help="score a run file against qrels")
    p_eval.add_argument("run", help="TREC run file")
    p_eval.add_argument("qrels", help="TREC qrels file")
    p_eval.add_argument("--per-topic", action="store_true")
    p_eval.add_argument("--out", default="", help="write per-topic CSV here")
    p_eval.add_argument("--no-figure", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_stats = sub.add_parser("stats", help="per-subquery result counts")
    p_stats.add_argument("index", help="index snapshot path")
    p_stats.add_argument("topics", help="topic file")
    add_run_flags(p_stats)
    p_stats.add_argument("--out", default="", help="write CSV here")
    p_stats.add_argument("--no-figure", action="store_true")
    p_stats.set_defaults(func=cmd_stats)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MirelaxError as exc:
        _log(f"error: {exc}")
        return 2
    except OSError as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
