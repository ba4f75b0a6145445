"""Command-line entry point.

Subcommands cover every pipeline stage headlessly: serving the HTTP API,
ingesting corpora, querying an archive, training the tagger, and writing a
static report (CSV tables plus rendered figures).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ChronolensError, MalformedInput
from .ingest import clean_article, read_corpus
from .ner import bootstrap, load_gazetteer, load_model, save_model
from .service import DATA_ENV_VAR, Archive, api_search, load_state, parse_span


def _data_dir(args) -> Path:
    if args.data:
        return Path(args.data)
    return Path(os.environ.get(DATA_ENV_VAR, "chronolens-data"))


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    app = create_app(_data_dir(args), static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_ingest(args) -> int:
    archive = Archive(_data_dir(args))
    gazetteer = load_gazetteer(args.gazetteer) if args.gazetteer else None
    model = load_model(args.model) if args.model else None
    if gazetteer is not None or model is not None:
        archive.configure(gazetteer=gazetteer, model=model)
    status = 0
    for name in args.files:
        report = archive.ingest(Path(name))
        print(
            f"{name}: {report.articles} articles, {report.mentions} mentions, "
            f"{report.entities_created} new entities, {report.quotations} quotations, "
            f"{report.edges_touched} edges, {report.skipped_duplicates} duplicates skipped"
        )
        for issue in report.errors:
            where = f"line {issue.line_no}" if issue.line_no else "input"
            print(f"  {where}: [{issue.code}] {issue.message}", file=sys.stderr)
        if report.errors:
            status = 1
    return status


def cmd_query(args) -> int:
    state = load_state(_data_dir(args))
    span = parse_span(args.from_, args.to)
    payload = api_search(state, args.text, span, args.limit)
    for row in payload["results"]:
        print(
            "\t".join(
                (
                    row["entity_id"],
                    row["canonical_name"],
                    f"{row['score']:.4f}",
                    str(row["snippet_count"]),
                    row["profession"],
                )
            )
        )
    return 0


def cmd_bootstrap(args) -> int:
    gazetteer = load_gazetteer(args.gazetteer)
    articles = []
    for line_no, item in read_corpus(args.corpus):
        if isinstance(item, MalformedInput):
            print(f"line {line_no}: [{item.code}] {item}", file=sys.stderr)
            continue
        articles.append(clean_article(item))
    result = bootstrap(
        articles,
        gazetteer,
        max_iters=args.max_iters,
        epochs=args.epochs,
        seed=args.seed,
    )
    for it in result.trace:
        agreement = "-" if it.token_agreement is None else f"{it.token_agreement:.6f}"
        print(f"iteration {it.iteration}: agreement={agreement} per_tokens={it.per_tokens}")
    state = "converged" if result.converged else "stopped"
    print(f"{state} after {result.iterations} trainings")
    if args.out:
        save_model(result.model, args.out)
        print(f"model written to {args.out}")
    return 0


def cmd_report(args) -> int:
    from .report import write_report

    state = load_state(_data_dir(args))
    span = parse_span(args.from_, args.to)
    written = write_report(
        state,
        args.out,
        entity_id=args.entity,
        span=span,
        granularity=args.granularity,
        max_nodes=args.max_nodes,
    )
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronolens",
        description="Entity-centric news archive: ingest, search, visualize.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data(p):
        p.add_argument("--data", help=f"archive directory (default ${DATA_ENV_VAR} or ./chronolens-data)")

    def add_span(p):
        p.add_argument("--from", dest="from_", metavar="DATE", help="inclusive ISO start date")
        p.add_argument("--to", metavar="DATE", help="inclusive ISO end date")

    p = sub.add_parser("serve", help="run the HTTP API")
    add_data(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", help="directory of built UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("ingest", help="ingest JSONL corpus files into an archive")
    add_data(p)
    p.add_argument("--gazetteer", help="seed name dictionary to install before ingesting")
    p.add_argument("--model", help="trained tagger model to install before ingesting")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="search entities in an archive")
    add_data(p)
    add_span(p)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("text", metavar="QUERY")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bootstrap-ner", help="train the tagger by dictionary self-training")
    p.add_argument("--corpus", required=True, metavar="FILE")
    p.add_argument("--gazetteer", required=True, metavar="FILE")
    p.add_argument("--out", metavar="FILE", help="where to write the trained model")
    p.add_argument("--max-iters", type=int, default=10)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("report", help="write CSV tables and figures for an archive")
    add_data(p)
    add_span(p)
    p.add_argument("--entity", help="center the report on one entity id")
    p.add_argument("--granularity", choices=("day", "month", "year"), default="month")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ChronolensError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
