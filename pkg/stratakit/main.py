from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from stratakit import __version__
from stratakit.dsl import load_document
from stratakit.errors import DocumentError, InvariantViolation, StratakitError, UsageError
from stratakit.fixtures import ExampleCatalog
from stratakit.logging_utils import configure_logging
from stratakit.metrics import write_metrics
from stratakit.models import InputDocument, OracleEntry, RunOptions
from stratakit.report import COMMANDS, AnalysisEngine, emit
from stratakit.settings import Settings
from stratakit.settings import settings as default_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INTERNAL = 2


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="stratakit",
        description="Directed stratifications, projective resolutions and dimension bounds for finite-dimensional algebras.",
    )
    parser.add_argument("command", help=f"one of {', '.join(COMMANDS)}, analyze, example")
    parser.add_argument("arguments", nargs="*", help="input file (or example name) followed by command arguments")
    parser.add_argument("--field", help="override the document field, e.g. F2, F3, Q")
    parser.add_argument("--cutoff", type=int, help="maximum resolution length before reporting a cutoff")
    parser.add_argument("--tor-depth", type=int, dest="tor_depth", help="highest Tor/Ext degree checked")
    parser.add_argument("--seed", type=int, help="seed for randomised isomorphism searches")
    parser.add_argument("--oracle", action="append", default=[], metavar="OBJ=D", help="known fin.dim of a stratum")
    parser.add_argument("--stratification", help='groups of vertex labels, earliest first, e.g. "1,2,3,4|5"')
    parser.add_argument("--format", choices=("text", "json"), dest="output_format")
    parser.add_argument("--output", help="write the report to this file instead of stdout")
    parser.add_argument("--metrics-file", dest="metrics_file")
    parser.add_argument("--log-level", dest="log_level")
    parser.add_argument("--version", action="version", version=f"stratakit {__version__}")
    return parser


def _input(args: argparse.Namespace, app_settings: Settings) -> tuple[InputDocument, list[str]]:
    if not args.arguments:
        raise UsageError(f"{args.command} needs an input file" if args.command != "example" else "example needs a name")
    target, rest = args.arguments[0], args.arguments[1:]
    if args.command == "example":
        catalog = ExampleCatalog.from_yaml(app_settings.catalog_file)
        entry = catalog.get(target)
        if entry is None:
            raise UsageError(f"unknown example {target!r}; available: {', '.join(catalog.names)}")
        document = catalog.document(target, args.field)
        if rest:
            return document, [" ".join(rest)]
        return document, list(entry.commands or document.analyses)
    document = load_document(target)
    if args.command == "analyze":
        if rest:
            raise UsageError("analyze takes only the input file")
        if not document.analyses:
            raise UsageError(f"{target} has no analyses block")
        return document, list(document.analyses)
    if args.command not in COMMANDS:
        raise UsageError(f"unknown command {args.command!r}")
    return document, [" ".join([args.command, *rest])]


def _emit(data: bytes, output: str | None) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
        sys.stdout.flush()


def main(argv: Sequence[str] | None = None, app_settings: Settings | None = None) -> int:
    app_settings = app_settings or default_settings
    try:
        args = build_parser().parse_intermixed_args(argv)
    except UsageError as exc:
        print(f"stratakit: {exc}", file=sys.stderr)
        return EXIT_INVALID

    overrides = {
        key: getattr(args, key)
        for key in ("log_level", "metrics_file", "output_format")
        if getattr(args, key) is not None
    }
    app_settings = app_settings.model_copy(update=overrides)
    configure_logging(app_settings.log_level, app_settings.log_json)

    try:
        options = RunOptions(
            cutoff=args.cutoff,
            tor_depth=args.tor_depth,
            seed=args.seed,
            field=args.field,
            oracle=[OracleEntry.parse(text) for text in args.oracle],
            stratification=args.stratification,
        )
        document, commands = _input(args, app_settings)
        engine = AnalysisEngine(document, options, app_settings)
        sections = engine.run_all(commands)
        _emit(emit(engine.report(sections), app_settings.output_format), args.output)
    except DocumentError as exc:
        for diagnostic in exc.diagnostics:
            print(f"stratakit: {diagnostic}", file=sys.stderr)
        return EXIT_INVALID
    except InvariantViolation as exc:
        logger.error("invariant_violation", extra={"command": args.command, "status": str(exc)})
        print(f"stratakit: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (StratakitError, ValidationError, ValueError, FileNotFoundError) as exc:
        print(f"stratakit: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        logger.exception("command_crashed", extra={"command": args.command})
        return EXIT_INTERNAL
    finally:
        if app_settings.metrics_file:
            write_metrics(app_settings.metrics_file)

    if any(section.error for section in sections):
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
