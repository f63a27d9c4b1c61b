"""Reservoir computing experiments on chaotic systems.

Exit status is 0 on success, 2 for configuration or input errors and 3 for
numerical failures (overflow, divergence, singular solves).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .dynamics import Trajectory, save_trajectory
from .exceptions import NumericFailure, RejectedInputError, ReservoirError
from .harness import (
    ExperimentConfig,
    depth_table,
    export,
    grid_search,
    make_dataset,
    memory_capacity_study,
    run_experiment,
)
from .quantum import ANSATZE

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _write_rows(rows: list[dict], out, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2)
    else:
        buf = io.StringIO()
        keys = list(rows[0]) if rows else []
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("%.17g" % v if isinstance(v, float) else v) for k, v in row.items()})
        text = buf.getvalue()
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = cfg.replace(master_seed=args.seed)
    return cfg


def _cmd_generate(args) -> None:
    cfg = _load_config(args)
    data = make_dataset(cfg)
    out = Path(args.out or "data")
    out.mkdir(parents=True, exist_ok=True)
    for split, series in (("train", data.train), ("test", data.test)):
        for i, s in enumerate(series):
            traj = Trajectory(s, data.dt, data.lyapunov_exponent, system=cfg.system, seed=cfg.master_seed)
            save_trajectory(traj, out / f"{split}_{i:04d}.csv")
    meta = {"config": cfg.to_dict(), "n_train": len(data.train), "n_test": len(data.test), **data.meta}
    (out / "dataset.json").write_text(json.dumps(meta, indent=2))
    print(f"wrote {len(data.train)} training and {len(data.test)} test series to {out}")


def _cmd_tune(args) -> None:
    cfg = _load_config(args)
    result = grid_search(cfg)
    _write_rows(result.table, args.out, args.format)
    print(json.dumps({"best_params": result.best_params, "best_score": result.best_score}), file=sys.stderr)


def _cmd_run(args) -> None:
    cfg = _load_config(args)
    hp = None
    if args.hyperparams:
        try:
            hp = json.loads(Path(args.hyperparams).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise RejectedInputError(f"cannot read hyperparameters {args.hyperparams}: {exc}") from exc
    if args.out:
        cfg = cfg.replace(output=None)
    records = run_experiment(cfg, hp)
    out = args.out or cfg.output or "results." + args.format
    export(records, out, args.format)
    print(f"wrote {len(records)} records to {out}")


def _cmd_depth(args) -> None:
    rows = depth_table(tuple(args.ansatze), range(args.qubits[0], args.qubits[1] + 1), args.inputs)
    _write_rows(rows, args.out, args.format)


def _cmd_mc(args) -> None:
    cfg = _load_config(args)
    records = memory_capacity_study(cfg, d_max=args.d_max, input_len=args.input_len)
    if args.out:
        export(records, args.out, args.format)
    best = max(records, key=lambda r: r.metrics["mc"])
    print(json.dumps({"best_mc": best.metrics["mc"], "params": best.hyperparameters, "seed": best.seed}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfqrc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="JSON experiment configuration")
            p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        return p

    common(sub.add_parser("generate", help="integrate a system and write its datasets")).set_defaults(
        func=_cmd_generate
    )
    common(sub.add_parser("tune", help="grid search over hyperparameters")).set_defaults(func=_cmd_tune)
    p = common(sub.add_parser("run", help="train per seed and evaluate metrics"))
    p.add_argument("--hyperparams", help="JSON object of hyperparameters (skips tuning)")
    p.set_defaults(func=_cmd_run)
    p = common(sub.add_parser("depth", help="circuit depth per ansatz and qubit count"), config=False)
    p.add_argument("--qubits", type=int, nargs=2, default=(4, 11), metavar=("MIN", "MAX"))
    p.add_argument("--inputs", type=int, default=10, help="number of input components")
    p.add_argument("--ansatze", nargs="+", default=sorted(ANSATZE), choices=sorted(ANSATZE))
    p.set_defaults(func=_cmd_depth)
    p = common(sub.add_parser("mc", help="memory capacity over the hyperparameter grid"))
    p.add_argument("--d-max", type=int, default=25)
    p.add_argument("--input-len", type=int, default=5000)
    p.set_defaults(func=_cmd_mc)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ReservoirError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
