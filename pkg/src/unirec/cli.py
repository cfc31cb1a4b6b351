"""Command-line entry points for the pipeline and the service."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arff, ingest, integrate, stats
from .profile import UserProfile, Weights
from .recommend import class_recommend, recommend, search
from .schema import Dataset, load_dataset, save_dataset
from .service import ServiceState, create_app, replay


def _print_diagnostics(diagnostics, stream=sys.stderr) -> None:
    for diag in diagnostics:
        where = f" (line {diag.line})" if diag.line is not None else ""
        print(f"{diag.severity}{where}: {diag.message}", file=stream)


def _load(path: str) -> Dataset:
    return load_dataset(Path(path))


def _profile_for(args, dataset: Dataset) -> UserProfile:
    with open(args.events, encoding="utf-8") as handle:
        profiles = replay(handle, dataset)
    profile = profiles.get(args.user)
    if profile is None:
        raise SystemExit(f"unknown user {args.user!r} in {args.events}")
    return profile


def _rec_json(rec) -> dict:
    return {
        "name": rec.name,
        "score": rec.score,
        "matched_features": [[f.key, theta] for f, theta in rec.matched_features],
        "class_labels": rec.class_labels,
    }


def _print_recommendations(recs, as_json: bool) -> None:
    if as_json:
        for rec in recs:
            print(json.dumps(_rec_json(rec), sort_keys=True))
        return
    for rank, rec in enumerate(recs, start=1):
        matched = ", ".join(f.key for f, _ in rec.matched_features[:3])
        suffix = f"  [{matched}]" if matched else ""
        print(f"{rank:>3}. {rec.name:<30} {rec.score:.6f}{suffix}")


def cmd_ingest(args) -> int:
    records, diagnostics = ingest.load_raw_file(args.raw)
    for record in records:
        diagnostics.extend(ingest.validate_raw(record))
    _print_diagnostics(diagnostics)
    output = ingest.records_to_jsonl(records)
    if args.output:
        Path(args.output).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    errors = sum(1 for d in diagnostics if d.severity == "error")
    print(f"{len(records)} record(s), {errors} error(s)", file=sys.stderr)
    return 0


def cmd_build(args) -> int:
    records, diagnostics = ingest.load_raw_file(args.raw)
    dataset, report = integrate.build_dataset(records)
    _print_diagnostics(diagnostics)
    _print_diagnostics(report.diagnostics)
    save_dataset(dataset, Path(args.output))
    print(
        f"{report.raw_count} raw -> {report.deduped_count} canonical record(s)"
        f" ({report.dropped_count} duplicate(s) dropped)",
        file=sys.stderr,
    )
    return 0


def cmd_emit_arff(args) -> int:
    dataset = _load(args.data)
    text = arff.emit_arff(dataset)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_parse_arff(args) -> int:
    dataset = arff.load_arff(Path(args.arff))
    if args.output:
        save_dataset(dataset, Path(args.output))
    print(f"{len(dataset.records)} record(s) parsed", file=sys.stderr)
    return 0


def cmd_stats(args) -> int:
    dataset = _load(args.data)
    if args.format == "text":
        sys.stdout.write(stats.summary(dataset))
        return 0
    attributes = [args.attribute] if args.attribute else [
        name for name in dataset.schema.nominal_names() if name not in stats.EMPHASIS_DISPLAY
    ]
    for attribute in attributes:
        if attribute == "academic-emphasis":
            dist = stats.emphasis_distribution(dataset)
        else:
            dist = stats.class_distribution(dataset, attribute)
        for row in stats.distribution_rows(dist):
            print(json.dumps(row, sort_keys=True))
    if not args.attribute:
        for row in stats.distribution_rows(stats.emphasis_distribution(dataset)):
            print(json.dumps(row, sort_keys=True))
    return 0


def cmd_search(args) -> int:
    dataset = _load(args.data)
    for name, count in search(dataset, args.query):
        print(f"{count:>3}  {name}")
    return 0


def cmd_recommend(args) -> int:
    dataset = _load(args.data)
    profile = _profile_for(args, dataset)
    _print_recommendations(recommend(profile, dataset, args.k), args.json)
    return 0


def cmd_class_recommend(args) -> int:
    dataset = _load(args.data)
    profile = _profile_for(args, dataset)
    buckets = class_recommend(profile, dataset, args.attribute, args.per_class)
    if args.json:
        for label, recs in buckets.items():
            print(json.dumps({"class": label, "recommendations": [_rec_json(r) for r in recs]}, sort_keys=True))
        return 0
    for label, recs in buckets.items():
        print(f"{label}:")
        _print_recommendations(recs, as_json=False)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    dataset = _load(args.data)
    weights = Weights(
        register=args.w_reg,
        search=args.w_search,
        click=args.w_click,
        imported=args.w_import,
        alpha=args.alpha,
    )
    state = ServiceState(dataset, weights, Path(args.events) if args.events else None)
    try:
        uvicorn.run(create_app(state), host=args.host, port=args.port, log_level="warning")
    finally:
        state.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unirec", description="University data pipeline and recommender.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a raw instance file to line-delimited records")
    p.add_argument("raw")
    p.add_argument("-o", "--output", help="write records here instead of stdout")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build", help="integrate a raw file into a canonical dataset")
    p.add_argument("raw")
    p.add_argument("-o", "--output", required=True, help="canonical dataset path")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("emit-arff", help="render a canonical dataset as ARFF")
    p.add_argument("data")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_emit_arff)

    p = sub.add_parser("parse-arff", help="parse an ARFF file back into a canonical dataset")
    p.add_argument("arff")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_parse_arff)

    p = sub.add_parser("stats", help="class-distribution tables")
    p.add_argument("data")
    p.add_argument("--format", choices=("text", "jsonl"), default="text")
    p.add_argument("--attribute", help="restrict jsonl output to one attribute")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("search", help="keyword search over a canonical dataset")
    p.add_argument("data")
    p.add_argument("query")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("recommend", help="top-k recommendations for a user")
    p.add_argument("data")
    p.add_argument("--events", required=True, help="event log to replay")
    p.add_argument("--user", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--json", action="store_true", help="one structured record per line")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("class-recommend", help="top recommendations per class of an attribute")
    p.add_argument("data")
    p.add_argument("--events", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--attribute", required=True)
    p.add_argument("--per-class", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_class_recommend)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--data", required=True)
    p.add_argument("--events", help="append-only event log path")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--w-reg", type=float, default=5.0)
    p.add_argument("--w-search", type=float, default=1.0)
    p.add_argument("--w-click", type=float, default=2.0)
    p.add_argument("--w-import", type=float, default=3.0)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
