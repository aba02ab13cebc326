"""Command-line entry point.

Subcommands: build-index, derive-weights, serve, simulate-variants.
Exit codes: 0 success, 1 unexpected runtime failure, 2 usage or validation
error. Validation failures print a machine-readable JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import DEFAULT_LIMIT, load_engine
from .errors import SearchEngineError
from .features import FeatureId
from .manifest import build_index
from .weights import (
    Tier,
    derive_weights,
    formulation_prefs,
    load_feature_ratings,
    load_formulation_ratings,
    write_weights_file,
)


def _emit_error(code: str, message: str, **extra: object) -> None:
    body: dict[str, object] = {"code": code, "message": message}
    for key, value in extra.items():
        if value:
            body[key] = value
    print(json.dumps(body), file=sys.stderr)


def _cmd_build_index(args: argparse.Namespace) -> int:
    manifest, warnings = build_index(
        args.trials, args.concepts, args.out_dir, args.weights, args.templates
    )
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    counts = manifest["counts"]
    print(f"indexed {counts['trials']} trials, {counts['concepts']} concepts -> {args.out_dir}")
    return 0


def _cmd_derive_weights(args: argparse.Namespace) -> int:
    feature_records = load_feature_ratings(args.feature_ratings)
    formulation_records = load_formulation_ratings(args.formulation_ratings)
    table = derive_weights(feature_records)
    prefs, pref_warnings = formulation_prefs(formulation_records)
    for line in table.warnings + pref_warnings:
        print(f"warning: {line}", file=sys.stderr)
    write_weights_file(args.out, table, prefs)
    for tier in (Tier.HIGH, Tier.LOW):
        members = [f.value for f in FeatureId if table.tiers[f] is tier]
        print(f"{tier.value}: {', '.join(members) if members else '(none)'}")
    print(
        "formulation: "
        f"numeric_style={prefs.numeric_style}, verb_style={prefs.verb_style}, "
        f"disease_naming={prefs.disease_naming}"
    )
    print(f"wrote {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    engine = load_engine(args.index_dir, args.weights, args.templates)
    # the reload endpoint re-reads whichever file the table came from
    weights_source: Path | None
    if args.weights is not None:
        weights_source = Path(args.weights)
    else:
        weights_source = Path(args.index_dir) / "weights.json"
        if not weights_source.is_file():
            weights_source = None
    app = create_app(engine, weights_path=weights_source, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_simulate_variants(args: argparse.Namespace) -> int:
    from .report import write_variant_report

    engine = load_engine(args.index_dir, args.weights, args.templates)
    written = write_variant_report(engine, args.query, args.out, args.limit)
    for name, path in written.items():
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trialexplain",
        description="Explainable clinical-trial search: index, weights, service, reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build-index", help="validate data files and write an index directory")
    p_build.add_argument("--trials", required=True, help="trial records, one JSON object per line")
    p_build.add_argument("--concepts", required=True, help="condition concepts, one JSON object per line")
    p_build.add_argument("--out-dir", required=True)
    p_build.add_argument("--weights", default=None, help="weights document to pin into the index")
    p_build.add_argument("--templates", default=None, help="template catalog to pin into the index")
    p_build.set_defaults(func=_cmd_build_index)

    p_weights = sub.add_parser("derive-weights", help="derive feature weights from rating CSVs")
    p_weights.add_argument("--feature-ratings", required=True)
    p_weights.add_argument("--formulation-ratings", required=True)
    p_weights.add_argument("--out", required=True)
    p_weights.set_defaults(func=_cmd_derive_weights)

    p_serve = sub.add_parser("serve", help="serve the HTTP API over a built index")
    p_serve.add_argument("--index-dir", required=True)
    p_serve.add_argument("--weights", default=None)
    p_serve.add_argument("--templates", default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--ui-dir", default=None, help="static frontend directory to mount at /")
    p_serve.set_defaults(func=_cmd_serve)

    p_sim = sub.add_parser(
        "simulate-variants", help="write per-variant result tables and a score figure"
    )
    p_sim.add_argument("--index-dir", required=True)
    p_sim.add_argument("--weights", default=None)
    p_sim.add_argument("--templates", default=None)
    p_sim.add_argument("--query", required=True)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p_sim.set_defaults(func=_cmd_simulate_variants)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SearchEngineError as exc:
        _emit_error(
            exc.code,
            str(exc),
            rows=getattr(exc, "rows", None),
            missing=getattr(exc, "missing", None),
            suggestions=getattr(exc, "suggestions", None),
        )
        return 2
    except Exception as exc:  # pragma: no cover - last-resort guard
        _emit_error("runtime_error", f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
