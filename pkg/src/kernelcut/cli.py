"""Command-line client: argument parsing and dispatch only, all logic lives in
the core package. Every order-reading subcommand accepts --input or stdin.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrics, oracle
from .batching import batch_kernels
from .config import load_config
from .errors import InvalidOrderBookError, KernelCutError
from .model import OrderBook, validate_order_book
from .orders import order_book_digest, parse_orders
from .pipeline import render_report, load_artifacts, run_pipeline, save_artifacts


def _add_input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="order file; stdin when omitted")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="order format (default csv)")


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file (key=value lines or JSON object)")
    parser.add_argument("--max-fprs", type=int)
    parser.add_argument("--size-balance-weight", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--population-size", type=int)
    parser.add_argument("--elite-fraction", type=float)
    parser.add_argument("--generations", type=int)
    parser.add_argument("--neighbour-mutation-rate", type=float)
    parser.add_argument("--foreign-mutation-rate", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--stagnation-patience", type=int)
    parser.add_argument("--pallet-limit", type=int)


_CONFIG_KEYS = (
    "max_fprs", "size_balance_weight", "alpha", "beta", "population_size",
    "elite_fraction", "generations", "neighbour_mutation_rate",
    "foreign_mutation_rate", "seed", "stagnation_patience", "pallet_limit",
)


def _config_from_args(args) -> "RunConfig":
    overrides = {key: getattr(args, key, None) for key in _CONFIG_KEYS}
    return load_config(path=getattr(args, "config", None), overrides=overrides)


def _read_order_book(args) -> OrderBook:
    if args.input:
        source = Path(args.input).read_bytes()
    else:
        source = sys.stdin.buffer.read()
    return parse_orders(source, format=args.format)


def _cmd_validate(args) -> int:
    if args.input:
        source = Path(args.input).read_bytes()
    else:
        source = sys.stdin.buffer.read()
    try:
        book = parse_orders(source, format=args.format)
    except InvalidOrderBookError as err:
        for v in err.report.violations:
            print(f"VIOLATION [{v.kind}] {v.message}")
        for w in err.report.warnings:
            print(f"warning  [{w.kind}] {w.message}")
        return 1
    report = validate_order_book(book)
    for w in report.warnings:
        print(f"warning  [{w.kind}] {w.message}")
    print(f"order book valid: {len(book.kernels)} kernels, {book.n_fprs} references, digest {order_book_digest(book)}")
    return 0


def _cmd_batch(args) -> int:
    book = _read_order_book(args)
    config = _config_from_args(args)
    result = batch_kernels(book, config.batching)
    payload = {
        "fpr_batches": [
            {"label": fb.label, "fpr_ids": sorted(fb.fpr_ids), "p_m": fb.p_m}
            for fb in result.fpr_batches
        ],
        "manufacturing_batches": [
            {"mb_id": mb.mb_id, "thickness": mb.thickness, "kernels": sorted(mb.kernel_ids)}
            for mb in result.manufacturing_batches
        ],
    }
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_schedule(args) -> int:
    book = _read_order_book(args)
    config = _config_from_args(args)
    artifacts = run_pipeline(book, config, eval_workers=args.eval_workers)
    run_dir = save_artifacts(artifacts, args.store)
    best = artifacts.ga.best.fitness
    print(f"run {artifacts.run_id} written to {run_dir}")
    print(f"fitness: f1={best.f1} f2={best.f2} combined={best.combined:g}")
    print(" -> ".join(artifacts.schedule.sequence))
    return 0


def _cmd_compare(args) -> int:
    book = _read_order_book(args)
    config = _config_from_args(args)
    artifacts = run_pipeline(book, config, eval_workers=args.eval_workers)
    print("policy | setups | max_wip_same_fpr | max_pallets_open")
    for row in artifacts.comparison.rows:
        print(f"{row.policy} | {row.setups} | {row.max_wip_same_fpr} | {row.max_pallets_open}")
    return 0


def _cmd_oracle(args) -> int:
    book = _read_order_book(args)
    config = _config_from_args(args)
    batching = batch_kernels(book, config.batching)
    weights = config.weights_for(len(batching.manufacturing_batches))
    result = oracle.exhaustive_best(batching, weights, cap=args.cap)
    v = result.best_value
    print(f"enumerated {result.enumerated} permutations; {result.optima_count} optimal")
    print(f"optimum: f1={v.f1} f2={v.f2} combined={v.combined:g}")
    print(" -> ".join(result.best_sequence.sequence))
    return 0


def _cmd_report(args) -> int:
    artifacts = load_artifacts(args.run_dir)
    sys.stdout.write(render_report(artifacts, args.report_format))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import RunStore, create_app

    store = RunStore(args.store)
    app = create_app(store, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kernelcut", description="Batching and sequencing for a cutting work-center")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an order book and print its validation report")
    _add_input_args(p)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("batch", help="run both batching levels and print the result")
    _add_input_args(p)
    _add_config_args(p)
    p.set_defaults(fn=_cmd_batch)

    p = sub.add_parser("schedule", help="full pipeline: batch, optimise, write run artifacts")
    _add_input_args(p)
    _add_config_args(p)
    p.add_argument("--store", default="runs", help="directory for run artifacts (default ./runs)")
    p.add_argument("--eval-workers", type=int, default=1, help="parallel fitness evaluation workers")
    p.set_defaults(fn=_cmd_schedule)

    p = sub.add_parser("compare", help="run the pipeline and print the policy comparison")
    _add_input_args(p)
    _add_config_args(p)
    p.add_argument("--eval-workers", type=int, default=1)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    _add_input_args(p)
    _add_config_args(p)
    p.add_argument("--cap", type=int, default=10, help="largest batch count to enumerate (default 10)")
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("report", help="render a stored run's report")
    p.add_argument("--input", dest="run_dir", required=True, help="run directory containing run.json")
    p.add_argument("--report-format", choices=["text", "markdown"], default="text")
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("serve", help="start the control-station HTTP service")
    p.add_argument("--store", default="runs", help="run artifact directory to serve")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", default=None, help="optional static directory mounted at /ui")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except KernelCutError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
