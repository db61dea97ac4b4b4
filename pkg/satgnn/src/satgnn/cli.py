"""Command-line interface: train, evaluate, and plot.

`train` consumes a dataset directory produced by the generator CLI
(`satforge generate` for the manifest, `satforge export` for the graph
records) and writes a metrics CSV with a rendered training-curve figure
next to it. `plot` re-renders the figure from an existing CSV; `eval`
scores a saved model on a dataset.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .graphs import load_dataset
from .metrics import evaluate
from .plots import training_curves
from .train import (
    TrainConfig,
    load_model,
    read_metrics_csv,
    save_model,
    train,
    write_metrics_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satgnn",
        description="Graph network over slack-augmented CNF systems.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    train_p = commands.add_parser("train", help="train a model on an exported dataset")
    train_p.add_argument("--data", required=True, help="dataset dir (manifest + graph files)")
    train_p.add_argument("--graphs", help="graph-record dir when separate from --data")
    train_p.add_argument("--eval-data", help="held-out dataset dir for the metrics columns")
    train_p.add_argument("-o", "--output", default="metrics.csv", help="metrics CSV path")
    train_p.add_argument("--epochs", type=int, default=5)
    train_p.add_argument("--hidden", type=int, default=128)
    train_p.add_argument("--layers", type=int, default=16)
    train_p.add_argument("--lr", type=float, default=1e-3)
    train_p.add_argument("--weight-decay", type=float, default=1e-6)
    train_p.add_argument("--seed", type=int, default=0)
    train_p.add_argument(
        "--no-residual", action="store_true", help="disable the residual-injection path"
    )
    train_p.add_argument("--save", help="write the trained model to this path")
    train_p.add_argument(
        "--no-plot", dest="plot", action="store_false", help="skip the PNG figure"
    )

    eval_p = commands.add_parser("eval", help="score a saved model on a dataset")
    eval_p.add_argument("--data", required=True)
    eval_p.add_argument("--graphs")
    eval_p.add_argument("--model", required=True)

    plot_p = commands.add_parser("plot", help="render training curves from a metrics CSV")
    plot_p.add_argument("metrics", help="metrics CSV written by `satgnn train`")
    plot_p.add_argument("-o", "--output", help="PNG path (default: CSV stem + .png)")
    return parser


def _load(data: str, graphs: str | None):
    return load_dataset(Path(data), Path(graphs) if graphs else None)


def cmd_train(args) -> int:
    dataset = _load(args.data, args.graphs)
    eval_set = _load(args.eval_data, None) if args.eval_data else None
    config = TrainConfig(
        hidden_dim=args.hidden,
        num_layers=args.layers,
        use_residual=not args.no_residual,
        epochs=args.epochs,
        lr=args.lr,
        weight_decay=args.weight_decay,
        seed=args.seed,
    )
    model, rows = train(dataset, config, eval_graphs=eval_set, log=print)
    out = Path(args.output)
    write_metrics_csv(rows, out)
    print(f"wrote {out}")
    if args.plot:
        fig_path = out.with_suffix(".png")
        training_curves(rows, fig_path)
        print(f"wrote {fig_path}")
    if args.save:
        save_model(model, config, args.save)
        print(f"wrote {args.save}")
    return EXIT_OK


def cmd_eval(args) -> int:
    dataset = _load(args.data, args.graphs)
    model = load_model(args.model)
    scores = evaluate(model, dataset)
    print(
        f"accuracy {scores.accuracy:.4f} csr {scores.csr:.4f} "
        f"k/m {scores.k_over_m:.4f} ({scores.n_sat} SAT, {scores.n_unsat} UNSAT)"
    )
    return EXIT_OK


def cmd_plot(args) -> int:
    rows = read_metrics_csv(args.metrics)
    out = Path(args.output) if args.output else Path(args.metrics).with_suffix(".png")
    training_curves(rows, out)
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"train": cmd_train, "eval": cmd_eval, "plot": cmd_plot}
    try:
        return handlers[args.command](args)
    except (FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
