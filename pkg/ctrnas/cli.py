# -*- coding: utf-8 -*-
# Copyright 2024-2026 The ctrnas developers
#
# This file is part of ctrnas.
#
# ctrnas is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the license, or
# (at your option) any later version.
#
# ctrnas is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with ctrnas. If not, see <https://www.gnu.org/licenses/#GPL>.

"""
Command-line interface
----------------------

``ctrnas <command> [options]`` with the commands ``search``, ``evaluate``,
``rank-consistency``, ``ablation``, ``importance`` and ``final-fit``. Every
command writes a ``manifest.json`` next to its outputs; the default output
root is taken from the ``CTRNAS_OUTPUT_ROOT`` environment variable.

``--data`` accepts ``oracle`` (the synthetic architecture oracle, no
training), ``synthetic`` (a planted-interaction dataset of ``--rows`` rows),
``synthetic:<recipe.json>`` or the path of a CSV file described by
``--schema``.

``evaluate --baseline`` fits a logistic regression on the dense features only,
under the same fidelity and split as the searched architectures.

``final-fit`` saves ``model.npz``; ``--warm-embeddings`` loads its embedding
tables as warm-start weights for later evaluations.
"""

import argparse
import json
import logging
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ctrnas.data.loading import CsvSchema, load_csv
from ctrnas.data.synthetic import load_recipe, synthetic_ctr
from ctrnas.evaluation.evaluator import (
    CtrEvaluator,
    OracleEvaluator,
    dense_logistic_baseline,
    final_fit,
)
from ctrnas.evaluation.fidelity import FidelityConfig
from ctrnas.evaluation.log import EvalLog
from ctrnas.exceptions import CsvParseError, InvalidArchitectureError
from ctrnas.models.checkpoint import embeddings_path, load_embeddings
from ctrnas.models.training import TrainConfig
from ctrnas.searchers.autoctr import SearchConfig, search
from ctrnas.searchers.guider import GuiderConfig, feature_importance, train_guider
from ctrnas.searchers.lanas import LanasConfig, lanas_search
from ctrnas.searchers.random_search import random_search
from ctrnas.space.architecture import Architecture, BlockType
from ctrnas.space.operators import random_arch
from ctrnas.space.presets import available_presets, preset
from ctrnas.utils.consistency import DEFAULT_SEEDS, STRATEGIES, rank_consistency_experiment
from ctrnas.utils.io import savetxt

_logger = logging.getLogger(__name__)

OUTPUT_ROOT_ENV = "CTRNAS_OUTPUT_ROOT"
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130

LAMBDA_SWEEP = (1, 5, 10, 25, 50)
GUIDER_SWEEP = ("random", "regression", "rank")
OBJECTIVE_SUBSETS = ("a", "r", "c", "ar", "ac", "rc", "arc")
CURVE_COLUMNS = ("eval_index", "best_val_logloss")


class UsageError(Exception):
    """Invalid flags or unreadable inputs; reported with exit code 2."""


def _version():
    from ctrnas import __version__

    return __version__


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_curve(path, log):
    savetxt(path, log.best_so_far(), CURVE_COLUMNS, fmt=["%d", "%.6f"])
    return Path(path)


def output_dir(args, default_name):
    if args.out is not None:
        out = Path(args.out)
    else:
        out = Path(os.environ.get(OUTPUT_ROOT_ENV, "runs")) / default_name
    out.mkdir(parents=True, exist_ok=True)
    return out


# inputs


def load_data(args):
    """The dataset selected by ``--data`` or ``None`` for the oracle."""
    spec = args.data
    if spec == "oracle":
        return None
    try:
        if spec == "synthetic":
            return synthetic_ctr(args.data_seed, args.rows)
        if spec.startswith("synthetic:"):
            return synthetic_ctr(**load_recipe(spec.split(":", 1)[1]))
        if args.schema is None:
            raise UsageError("--schema is required for CSV data.")
        return load_csv(spec, CsvSchema.from_json(args.schema))
    except (OSError, CsvParseError, KeyError, ValueError) as exc:
        raise UsageError(f"Cannot read data {spec!r}: {exc}") from exc


def require_data(args):
    data = load_data(args)
    if data is None:
        raise UsageError(f"'{args.command}' needs a dataset, not the oracle.")
    return data


def train_config(args):
    return TrainConfig(
        batch_size=args.batch_size,
        learning_rate=args.lr,
        max_epochs=args.epochs,
        seed=args.seed,
    )


def fidelity_config(args):
    return FidelityConfig(
        subsample_rows=args.subsample,
        hash_cap=None if args.hash_cap == 0 else args.hash_cap,
        warm_start=args.warm_start or args.warm_embeddings is not None,
    )


def load_warm_tables(path, data, fidelity):
    """Embedding tables of a stored checkpoint, checked against the
    cardinalities ``data`` has under ``fidelity``."""
    try:
        tables = load_embeddings(path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"Cannot read embeddings of {path!r}: {exc}") from exc
    spec = data.spec.with_hash_cap(fidelity.hash_cap)
    expected = [(card, spec.embedding_dim) for card in spec.cardinalities]
    found = [t.shape for t in tables]
    if found != expected:
        raise UsageError(
            f"Embeddings of {path!r} have shapes {found}; this data and hash cap "
            f"need {expected}."
        )
    return tables


def make_evaluator(args, data):
    if data is None:
        return OracleEvaluator()
    fidelity = fidelity_config(args)
    warm_tables = None
    if args.warm_embeddings is not None:
        warm_tables = load_warm_tables(args.warm_embeddings, data, fidelity)
    return CtrEvaluator(data, fidelity, train_config(args), warm_tables)


def describe_evaluator(args, evaluator):
    out = evaluator.describe()
    out["data"] = args.data
    return out


def load_arch(source):
    """An architecture from a preset name or a JSON file.

    The file may hold the architecture itself or an object with an
    ``"arch"`` entry, as written to ``best_architecture.json``.
    """
    if source in available_presets():
        return preset(source)
    try:
        with open(source, encoding="utf-8") as f:
            obj = json.load(f)
        return Architecture.from_json(obj.get("arch", obj))
    except (OSError, ValueError, AttributeError) as exc:
        raise UsageError(f"Cannot read architecture {source!r}: {exc}") from exc


def block_types(args):
    return (BlockType.MLP,) if getattr(args, "mlp_only", False) else None


def search_config(args, **overrides):
    values = dict(
        population_size=args.population,
        window=args.q_window,
        mu=tuple(args.mu),
        selection_intensity=args.lam,
        n_neighbors=args.n_neighbors,
        init_size=args.init,
        budget=args.budget,
        workers=args.workers,
        guider=args.guider,
        use_age_filter=not args.no_age_filter,
        block_types=block_types(args),
        guider_config=GuiderConfig(seed=args.seed),
    )
    values.update(overrides)
    return SearchConfig(**values)


def run_searcher(args, evaluator, out, config=None, suffix=""):
    """Run the selected searcher, logging to ``eval_log<suffix>.jsonl``
    and ``eval_timings<suffix>.jsonl`` under ``out``."""
    fidelity = getattr(evaluator, "fidelity", None)
    context = {} if fidelity is None else {"fidelity": fidelity.to_dict()}
    log = EvalLog(
        out / f"eval_log{suffix}.jsonl", out / f"eval_timings{suffix}.jsonl", context
    )
    searcher = getattr(args, "searcher", "autoctr")
    if searcher == "random":
        result = random_search(
            evaluator,
            args.budget,
            args.seed,
            log,
            args.workers,
            block_types=block_types(args),
        )
        used = {"budget": args.budget, "workers": args.workers}
    elif searcher == "lanas+":
        cfg = LanasConfig(
            init_size=args.init,
            budget=args.budget,
            workers=args.workers,
            block_types=block_types(args),
        )
        result = lanas_search(evaluator, cfg, args.seed, log)
        used = cfg.to_dict()
    else:
        cfg = search_config(args) if config is None else config
        result = search(evaluator, cfg, args.seed, log)
        used = cfg.to_dict()
    return result, used


# commands


def cmd_search(args, manifest):
    data = load_data(args)
    evaluator = make_evaluator(args, data)
    out = output_dir(args, f"search-{args.searcher}-seed{args.seed}")
    manifest.update(out=out, evaluator=describe_evaluator(args, evaluator))
    manifest["outputs"] = [str(out / "eval_log.jsonl"), str(out / "eval_timings.jsonl")]
    result, used = run_searcher(args, evaluator, out)
    manifest["config"] = used
    manifest["outputs"] += [
        str(
            write_json(
                out / "best_architecture.json",
                {"arch": result.best.arch.to_json(), "record": result.best.to_dict()},
            )
        ),
        str(write_curve(out / "best_so_far.csv", result.log)),
    ]
    _logger.info("Best val_logloss %.6f", result.best.val_logloss)
    return 0


def cmd_evaluate(args, manifest):
    if args.baseline:
        return _evaluate_baseline(args, manifest)
    if args.arch is None:
        raise UsageError("--arch is required unless --baseline is given.")
    data = load_data(args)
    evaluator = make_evaluator(args, data)
    arch = load_arch(args.arch)
    out = output_dir(args, "evaluate")
    manifest.update(out=out, evaluator=describe_evaluator(args, evaluator))
    start = time.perf_counter()
    record = evaluator(arch, args.seed).with_birth_index(1)
    manifest["seconds"] = time.perf_counter() - start
    manifest["outputs"] = [str(write_json(out / "evaluation.json", record.to_dict()))]
    print(json.dumps(record.to_dict(), sort_keys=True))
    return 0


def _evaluate_baseline(args, manifest):
    data = require_data(args)
    out = output_dir(args, "baseline")
    fidelity = fidelity_config(args)
    manifest.update(out=out, fidelity=fidelity.to_dict())
    result = dense_logistic_baseline(data, fidelity)
    manifest["outputs"] = [str(write_json(out / "baseline.json", result._asdict()))]
    print(json.dumps(result._asdict(), sort_keys=True))
    return 0


def _consistency_archs(args):
    source = args.archs
    if source.isdigit():
        rng = np.random.default_rng(args.seed)
        return [random_arch(rng) for _ in range(int(source))]
    try:
        with open(source, encoding="utf-8") as f:
            obj = json.load(f)
        return [Architecture.from_json(a) for a in obj]
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"Cannot read architectures {source!r}: {exc}") from exc


def cmd_rank_consistency(args, manifest):
    data = require_data(args)
    archs = _consistency_archs(args)
    out = output_dir(args, "rank-consistency")
    manifest.update(out=out, sizes=args.sizes, strategies=args.strategies, seeds=args.seeds)
    report = rank_consistency_experiment(
        archs,
        data,
        args.sizes,
        args.strategies,
        args.seeds,
        train_config(args),
        window=args.window,
        analysis_size=args.analysis_size,
        hash_cap=None if args.hash_cap == 0 else args.hash_cap,
        workers=args.workers,
    )
    archs_path = write_json(out / "archs.json", [a.to_json() for a in archs])
    manifest["outputs"] = [str(archs_path)] + [str(p) for p in report.to_csv(out)]
    return 0


def _objective_settings(values):
    base = (1.0, 0.1, 0.1)
    for subset in values:
        if not subset or set(subset) - set("arc"):
            raise UsageError(f"Objective subsets are made of a, r, c; got {subset!r}.")
        mu = tuple(w if k in subset else 0.0 for k, w in zip("arc", base))
        for age_filter in (True, False):
            name = f"{subset}-{'window' if age_filter else 'nowindow'}"
            yield name, {"mu": mu, "use_age_filter": age_filter}


def cmd_ablation(args, manifest):
    data = load_data(args)
    evaluator = make_evaluator(args, data)
    out = output_dir(args, f"ablation-{args.axis}-seed{args.seed}")
    manifest.update(out=out, axis=args.axis, evaluator=describe_evaluator(args, evaluator))
    if args.axis == "lambda":
        values = args.values or [str(v) for v in LAMBDA_SWEEP]
        settings = [(f"lambda{v}", {"selection_intensity": int(v)}) for v in values]
    elif args.axis == "guider":
        values = args.values or list(GUIDER_SWEEP)
        settings = [(f"guider-{v}", {"guider": v}) for v in values]
    else:
        settings = list(_objective_settings(args.values or OBJECTIVE_SUBSETS))
    summary, outputs, configs = [], [], {}
    for name, overrides in settings:
        _logger.info("Ablation setting %s", name)
        try:
            config = search_config(args, **overrides)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        result, used = run_searcher(args, evaluator, out, config, suffix=f"_{name}")
        configs[name] = used
        outputs.append(str(write_curve(out / f"best_so_far_{name}.csv", result.log)))
        best = result.best
        summary.append((name, best.val_logloss, best.n_params, best.flops))
    outputs.append(str(write_summary(out / "summary.csv", summary)))
    manifest.update(config=configs, outputs=outputs)
    return 0


def write_summary(path, rows):
    savetxt(
        path,
        rows,
        ("setting", "best_val_logloss", "n_params", "flops"),
        fmt=["%s", "%.6f", "%d", "%d"],
    )
    return Path(path)


def cmd_importance(args, manifest):
    out = output_dir(args, "importance")
    if args.log is not None:
        try:
            records = EvalLog.read_jsonl(args.log).records
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"Cannot read evaluation log {args.log!r}: {exc}") from exc
        source = args.log
    else:
        rng = np.random.default_rng(args.seed)
        oracle = OracleEvaluator()
        log = EvalLog()
        for _ in range(args.random):
            log.append(oracle(random_arch(rng), args.seed))
        records = log.records
        source = f"oracle:{args.random}"
    model = train_guider(records, "rank", GuiderConfig(seed=args.seed))
    ranking = feature_importance(model, args.top)
    manifest.update(out=out, source=source, top=args.top)
    manifest["outputs"] = [
        str(write_json(out / "guider.json", model.to_json())),
    ]
    savetxt(out / "importance.csv", ranking, ("label", "gain"), fmt=["%s", "%.6f"])
    manifest["outputs"].append(str(out / "importance.csv"))
    return 0


def cmd_final_fit(args, manifest):
    data = require_data(args)
    arch = load_arch(args.arch)
    out = output_dir(args, f"final-fit-seed{args.seed}")
    manifest.update(out=out, arch=arch.to_json(), train=train_config(args).to_dict())
    result = final_fit(arch, data, train_config(args), args.seed, checkpoint=out / "model.npz")
    manifest["outputs"] = [
        str(write_json(out / "final_metrics.json", result._asdict())),
        str(out / "model.npz"),
        str(embeddings_path(out / "model.npz")),
    ]
    print(json.dumps(result._asdict(), sort_keys=True))
    return 0


COMMANDS = {
    "search": cmd_search,
    "evaluate": cmd_evaluate,
    "rank-consistency": cmd_rank_consistency,
    "ablation": cmd_ablation,
    "importance": cmd_importance,
    "final-fit": cmd_final_fit,
}


# parser


def _add_common(p, data_default="oracle"):
    p.add_argument("--data", default=data_default, help="oracle, synthetic, synthetic:<recipe.json> or a CSV path")
    p.add_argument("--schema", help="JSON column-role schema for CSV data")
    p.add_argument("--rows", type=int, default=20_000, help="rows of --data synthetic")
    p.add_argument("--data-seed", type=int, default=0, help="seed of --data synthetic")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help=f"output directory (default under ${OUTPUT_ROOT_ENV})")
    p.add_argument("--workers", type=int, default=3)
    p.add_argument("--subsample", type=int, help="rows kept for each evaluation")
    p.add_argument("--hash-cap", type=int, default=10_000, help="0 disables hashing")
    p.add_argument("--warm-start", action="store_true")
    p.add_argument("--batch-size", type=int, default=4096)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--epochs", type=int, default=10)


def _add_evaluator_options(p):
    p.add_argument(
        "--warm-embeddings",
        help="model.npz written by final-fit whose embeddings warm-start every evaluation",
    )


def _add_search_options(p):
    p.add_argument("--budget", type=int, default=1500)
    p.add_argument("--init", type=int, default=100)
    p.add_argument("--lambda", dest="lam", type=int, default=10)
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--q-window", type=int, default=200)
    p.add_argument("--mu", type=float, nargs=3, default=[1.0, 0.1, 0.1])
    p.add_argument("--n-neighbors", type=int, default=100)
    p.add_argument("--guider", choices=GUIDER_SWEEP, default="rank")
    p.add_argument("--no-age-filter", action="store_true")
    p.add_argument("--mlp-only", action="store_true", help="search MLP blocks only")


def build_parser():
    parser = argparse.ArgumentParser(prog="ctrnas", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="run an architecture search")
    _add_common(p)
    _add_evaluator_options(p)
    _add_search_options(p)
    p.add_argument("--searcher", choices=("autoctr", "random", "lanas+"), default="autoctr")

    p = sub.add_parser("evaluate", help="evaluate one architecture")
    _add_common(p)
    _add_evaluator_options(p)
    p.add_argument("--arch", help="preset name or architecture JSON")
    p.add_argument(
        "--baseline", action="store_true", help="dense-only logistic regression instead"
    )

    p = sub.add_parser("rank-consistency", help="rank consistency across fidelities")
    _add_common(p, data_default="synthetic")
    p.add_argument("--archs", default="100", help="number of random architectures or a JSON list")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--strategies", nargs="+", choices=STRATEGIES, default=["es"])
    p.add_argument("--window", type=int, default=30)
    p.add_argument("--seeds", type=int, nargs="+", default=list(DEFAULT_SEEDS))
    p.add_argument("--analysis-size", type=int)

    p = sub.add_parser("ablation", help="sweep one search setting")
    _add_common(p)
    _add_evaluator_options(p)
    _add_search_options(p)
    p.add_argument("--axis", choices=("lambda", "guider", "objectives"), required=True)
    p.add_argument("--values", nargs="+", help="override the default sweep")

    p = sub.add_parser("importance", help="guider feature importance")
    p.add_argument("--log", help="eval_log.jsonl to train on")
    p.add_argument("--random", type=int, default=500, help="oracle-scored random architectures")
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")

    p = sub.add_parser("final-fit", help="train an architecture on the full data")
    _add_common(p, data_default="synthetic")
    p.add_argument("--arch", required=True, help="preset name or architecture JSON")
    return parser


def _configure_logging(args):
    level = logging.WARNING
    if args.quiet:
        level = logging.ERROR
    elif args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    manifest = {
        "command": args.command,
        "argv": list(sys.argv[1:] if argv is None else argv),
        "args": {k: v for k, v in vars(args).items() if k not in ("verbose", "quiet")},
        "version": _version(),
        "seed": args.seed,
        "started": _now(),
        "status": "running",
    }
    code = 0
    try:
        code = COMMANDS[args.command](args, manifest)
        manifest["status"] = "completed"
    except UsageError as exc:
        print(f"ctrnas {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidArchitectureError, ValueError) as exc:
        print(f"ctrnas {args.command}: error: {exc}", file=sys.stderr)
        manifest["status"] = "failed"
        manifest["error"] = str(exc)
        code = 1
    except KeyboardInterrupt:
        _logger.warning("Interrupted; writing a partial manifest.")
        manifest["status"] = "interrupted"
        code = EXIT_INTERRUPTED
    manifest["finished"] = _now()
    if "out" in manifest:
        manifest["out"] = str(manifest["out"])
        write_json(Path(manifest["out"]) / "manifest.json", manifest)
    return code


if __name__ == "__main__":
    sys.exit(main())
