"""Command-line interface.

Exit codes: 0 success, 1 validation or alignment failure, 2 input error,
3 endpoint/transport error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .alignment import LlmEndpointConfig, align_llm, align_rule_based, build_prompt, get_rule_set, parse_metadata
from .alignment.llm import TOKEN_ENV
from .emission import emit_all
from .errors import AlignmentError, InputError, MetaUrbanError, NoSchemaForCategory, ProducedInvalidDocument, TransportError
from .ingestion import DEFAULT_SENTINELS, RawDataset, read_codebook_file, read_table_file
from .schema import SchemaCategory, builtin_schema
from .validation import validate_document

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_TRANSPORT = 0, 1, 2, 3

log = logging.getLogger("metaurban")

_CATEGORY_HELP = "one of: " + ", ".join(c.token for c in SchemaCategory)


def _category(token: str) -> SchemaCategory:
    try:
        return SchemaCategory.from_token(token)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def render_schema(category: SchemaCategory) -> str:
    lines = []
    for spec in builtin_schema(category):
        req = "required" if spec.required else "optional"
        lines.append(f"{spec.canonical_name} | {spec.kind} ({req}) | {spec.notes}")
    return "\n".join(lines) + "\n"


def cmd_schema_show(args: argparse.Namespace) -> int:
    try:
        sys.stdout.write(render_schema(args.category))
    except NoSchemaForCategory:
        print(f"{args.category.token}: no field schema defined for this category", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_prompt(args: argparse.Namespace) -> int:
    try:
        sys.stdout.write(build_prompt(args.category, not args.no_codebook))
    except NoSchemaForCategory:
        print(f"{args.category.token}: no field schema defined for this category", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        text = Path(args.metadata).read_text(encoding="utf-8-sig")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"cannot read {args.metadata}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        parsed = parse_metadata(text, args.category)
    except InputError as exc:
        print(f"cannot parse {args.metadata}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = validate_document(parsed.document)
    sys.stdout.write(report.to_csv() if args.format == "csv" else report.to_text())
    for name in parsed.unknown_fields:
        print(f"note: unknown field {name!r} ignored", file=sys.stderr)
    return EXIT_OK if report.valid() else EXIT_FAILED


def _sentinels(raw: str | None) -> frozenset[str]:
    if raw is None:
        return DEFAULT_SENTINELS
    return frozenset(s.strip() for s in raw.split(","))


def cmd_align(args: argparse.Namespace) -> int:
    if args.aligner == "llm":
        if not os.environ.get(TOKEN_ENV):
            print(f"error: --aligner llm needs the API token in environment variable {TOKEN_ENV}", file=sys.stderr)
            return EXIT_TRANSPORT
        if not args.endpoint or not args.model:
            print("error: --aligner llm requires --endpoint and --model", file=sys.stderr)
            return EXIT_INPUT
        if args.category is None:
            print("error: --aligner llm requires --category", file=sys.stderr)
            return EXIT_INPUT
    else:
        if not args.rules:
            print("error: --aligner rules requires --rules", file=sys.stderr)
            return EXIT_INPUT
        try:
            rules = get_rule_set(args.rules)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_INPUT
        if args.category is None:
            args.category = rules.category
        elif args.category is not rules.category:
            print(f"error: rule set {rules.id!r} is for {rules.category.token}, not {args.category.token}", file=sys.stderr)
            return EXIT_INPUT

    try:
        builtin_schema(args.category)
        table = read_table_file(args.data)
        codebook = read_codebook_file(args.codebook) if args.codebook else None
        dataset = RawDataset(table, codebook, _sentinels(args.sentinels))
        if args.aligner == "llm":
            cfg = LlmEndpointConfig(
                base_url=args.endpoint,
                model=args.model,
                timeout=args.timeout,
                max_retries=args.retries,
                row_cap=args.row_cap,
            )
            result = align_llm(dataset, args.category, cfg)
        else:
            result = align_rule_based(dataset, args.category, rules)
        written = emit_all(result, table, args.out)
    except ProducedInvalidDocument as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.stderr.write(exc.report.to_text())
        return EXIT_FAILED
    except AlignmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    out = Path(args.out)
    for name in written:
        print(out / name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metaurban",
        description="Meta-Urban schema tools: show the schema, validate metadata, align open datasets.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    schema = sub.add_parser("schema", help="inspect the schema catalog")
    schema_sub = schema.add_subparsers(dest="schema_command", required=True)
    show = schema_sub.add_parser("show", help="print the fields of one category")
    show.add_argument("category", type=_category, help=_CATEGORY_HELP)
    show.set_defaults(func=cmd_schema_show)

    prompt = sub.add_parser("prompt", help="print the alignment prompt for a category")
    prompt.add_argument("category", type=_category, help=_CATEGORY_HELP)
    prompt.add_argument("--no-codebook", action="store_true", help="render the prompt for a data file only")
    prompt.set_defaults(func=cmd_prompt)

    validate = sub.add_parser("validate", help="validate a metadata.csv file")
    validate.add_argument("metadata", help="path to metadata.csv")
    validate.add_argument("--category", type=_category, help="tie-breaker when fields fit several categories")
    validate.add_argument("--format", choices=("text", "csv"), default="text")
    validate.set_defaults(func=cmd_validate)

    align = sub.add_parser(
        "align",
        help="align a raw dataset and write metadata.csv plus per-variable files",
        epilog="Categories: " + ", ".join(c.token for c in SchemaCategory)
        + f". The model API token is read from ${TOKEN_ENV}.",
    )
    align.add_argument("--category", type=_category, help=_CATEGORY_HELP)
    align.add_argument("--aligner", choices=("rules", "llm"), default="rules")
    align.add_argument("--rules", help="bundled rule set id (cbecs, eia, recs)")
    align.add_argument("--data", required=True, help="data table (File 1), CSV or TSV")
    align.add_argument("--codebook", help="optional codebook (File 2)")
    align.add_argument("--out", required=True, help="output directory")
    align.add_argument(
        "--sentinels",
        help="comma-separated sentinel codes; default -2,-9 and empty (write as --sentinels=-2,-9,)",
    )
    align.add_argument("--row-cap", type=int, default=1000, help="data rows uploaded to the model")
    align.add_argument("--endpoint", help="chat-completion URL for --aligner llm")
    align.add_argument("--model", help="model id for --aligner llm")
    align.add_argument("--timeout", type=float, default=120.0, help="request timeout in seconds")
    align.add_argument("--retries", type=int, default=2, help="extra attempts after a failed reply (max 5)")
    align.set_defaults(func=cmd_align)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except MetaUrbanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT if isinstance(exc, TransportError) else EXIT_INPUT if isinstance(exc, InputError) else EXIT_FAILED
    except Exception:
        log.exception("unexpected failure")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
