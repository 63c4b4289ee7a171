"""Command-line entry point wiring the full pipeline.

Subcommands: clean, stats, prepare, train, predict, eval, submit,
pipeline. Configuration precedence is flags > INI config file >
built-in defaults. Output files are written to a temp name and renamed
into place only on success. Exit codes: 0 ok, 2 parse, 3 validation,
4 io, 5 numeric.
"""

from __future__ import annotations

import argparse
import configparser
import contextlib
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import baseline, dataset, evaluate, pairs as pairs_mod, textclean
from .errors import ParseError, PipelineError, ValidationError

EXIT_CODES = {"parse": 2, "validation": 3, "io": 4, "numeric": 5, "internal": 1}

THREADS_ENV = "WIKILINK_THREADS"


def log(message: str) -> None:
    print(message, file=sys.stderr)


@contextlib.contextmanager
def atomic_output(path: str | None):
    """Yield a text handle; stdout for '-' or None, else temp-and-rename."""
    if path is None or path == "-":
        yield sys.stdout
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as handle:
            yield handle
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(OSError):
            tmp.unlink()
        raise


@contextlib.contextmanager
def open_input(path: str | None):
    if path is None or path == "-":
        yield sys.stdin
    else:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            yield handle


# ---------------------------------------------------------------------------
# Configuration


@dataclasses.dataclass
class PipelineConfig:
    nodes: str | None = None
    train_pairs: str | None = None
    test_pairs: str | None = None
    output_dir: str = "out"
    model: str | None = None
    clean: textclean.CleanConfig = dataclasses.field(default_factory=textclean.CleanConfig)
    pair: pairs_mod.PairConfig = dataclasses.field(default_factory=pairs_mod.PairConfig)
    train: baseline.TrainConfig = dataclasses.field(default_factory=baseline.TrainConfig)
    strict_join: bool = True
    threads: int = 1

    def path(self, name: str) -> str:
        explicit = getattr(self, name, None)
        if isinstance(explicit, str) and explicit:
            return explicit
        return str(Path(self.output_dir) / {
            "model": "model.json",
            "cleaned_nodes": "nodes.clean.tsv",
            "prepared": "prepared.tsv",
            "predictions": "predictions.csv",
            "submission": "submission.csv",
        }[name])


_TRAIN_KEYS = {f.name: f.type for f in dataclasses.fields(baseline.TrainConfig)}


def _read_config_file(path: str) -> PipelineConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ParseError(f"config file not found: {path}")
    cfg = PipelineConfig()
    if parser.has_section("paths"):
        for key in ("nodes", "train_pairs", "test_pairs", "output_dir", "model"):
            if parser.has_option("paths", key):
                setattr(cfg, key, parser.get("paths", key))
    if parser.has_section("clean"):
        stages = tuple(
            s for s in textclean.STAGES
            if parser.getboolean("clean", s, fallback=True)
        )
        cfg.clean = textclean.CleanConfig(stage_mask=stages)
    train_kwargs = {}
    if parser.has_section("train"):
        for key in parser.options("train"):
            if key not in _TRAIN_KEYS:
                raise ValidationError(f"unknown [train] option {key!r} in {path}")
            raw = parser.get("train", key)
            caster = int if key in (
                "batch_size", "max_tokens", "epochs", "seed", "hash_bits"
            ) else float
            train_kwargs[key] = caster(raw)
    if parser.has_section("pairs") and parser.has_option("pairs", "max_tokens"):
        cfg.pair = pairs_mod.PairConfig(parser.getint("pairs", "max_tokens"))
        train_kwargs.setdefault("max_tokens", cfg.pair.max_tokens)
    if train_kwargs:
        cfg.train = baseline.TrainConfig(**train_kwargs)
    if parser.has_section("run"):
        if parser.has_option("run", "strict_join"):
            cfg.strict_join = parser.getboolean("run", "strict_join")
        if parser.has_option("run", "threads"):
            raw = parser.get("run", "threads")
            cfg.threads = 1 if raw == "auto" else int(raw)
    return cfg


def _resolve_threads(cfg: PipelineConfig) -> None:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        cfg.threads = 1 if raw == "auto" else int(raw)
    if cfg.threads < 1:
        raise ValidationError("threads must be a positive integer or auto")


def build_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = _read_config_file(args.config) if getattr(args, "config", None) else PipelineConfig()
    for key in ("nodes", "train_pairs", "test_pairs", "output_dir", "model"):
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            setattr(cfg, key, value)
    train_overrides = {
        key: getattr(args, key)
        for key in _TRAIN_KEYS
        if getattr(args, key, None) is not None
    }
    if train_overrides:
        cfg.train = dataclasses.replace(cfg.train, **train_overrides)
    if getattr(args, "max_tokens", None) is not None:
        cfg.pair = pairs_mod.PairConfig(args.max_tokens)
    stages = [
        s for s in cfg.clean.stage_mask
        if not getattr(args, f"no_{s}", False)
    ]
    cfg.clean = textclean.CleanConfig(stage_mask=tuple(stages))
    if getattr(args, "lenient_join", False):
        cfg.strict_join = False
    if getattr(args, "threads", None) is not None:
        cfg.threads = args.threads
    _resolve_threads(cfg)
    return cfg


# ---------------------------------------------------------------------------
# Pipeline steps (shared by individual subcommands and `pipeline`)


def _clean_nodes(cfg: PipelineConfig, in_path: str | None, out_path: str | None,
                 want_report: bool) -> None:
    aggregate = textclean.CleanReport()
    count = 0
    with open_input(in_path) as src, atomic_output(out_path) as dst:
        for rec in dataset.parse_nodes(src):
            cleaned, rep = textclean.clean(rec.text, cfg.clean)
            aggregate.merge(rep)
            dst.write(f"{rec.id}\t{cleaned}\n")
            count += 1
    log(f"clean: {count} nodes")
    if want_report:
        log("clean-report " + json.dumps(dataclasses.asdict(aggregate), sort_keys=True))


def _prepare(cfg: PipelineConfig, pairs_path: str, nodes_path: str,
             out_path: str | None, labeled: bool) -> None:
    with open_input(nodes_path) as src:
        table = dataset.build_node_table(dataset.parse_nodes(src))
    counters = dataset.ParseCounters()
    count = 0
    with open_input(pairs_path) as src, atomic_output(out_path) as dst:
        joined = dataset.join_pairs(
            dataset.parse_pairs(src, labeled=labeled), table,
            strict=cfg.strict_join, counters=counters,
        )
        for pair, n1, n2 in joined:
            sp = pairs_mod.build_pair(pair, n1.text, n2.text, cfg.pair)
            pairs_mod.write_prepared([sp], dst)
            count += 1
    log(f"prepare: {count} pairs" + (
        f" ({counters.skipped_joins} skipped)" if counters.skipped_joins else ""))


def _load_sentence_pairs(cfg: PipelineConfig, pairs_path: str, nodes_path: str,
                         labeled: bool) -> list[pairs_mod.SentencePair]:
    with open_input(nodes_path) as src:
        table = dataset.build_node_table(dataset.parse_nodes(src))
    with open_input(pairs_path) as src:
        joined = dataset.join_pairs(
            dataset.parse_pairs(src, labeled=labeled), table, strict=cfg.strict_join,
        )
        return [
            pairs_mod.build_pair(pair, n1.text, n2.text, cfg.pair)
            for pair, n1, n2 in joined
        ]


def _train(cfg: PipelineConfig, pairs_path: str, nodes_path: str, model_path: str) -> None:
    examples = _load_sentence_pairs(cfg, pairs_path, nodes_path, labeled=True)
    log(f"train: {len(examples)} examples")
    model = baseline.train(examples, cfg.train)
    with atomic_output(model_path) as dst:
        baseline.save_model(model, dst)
    log(f"train: model written to {model_path}")


def _predict(cfg: PipelineConfig, model_path: str, pairs_path: str,
             nodes_path: str, out_path: str | None, labeled: bool) -> None:
    with open_input(model_path) as src:
        model = baseline.load_model(src)
    examples = _load_sentence_pairs(cfg, pairs_path, nodes_path, labeled=labeled)
    predictions = [baseline.predict(model, sp) for sp in examples]
    with atomic_output(out_path) as dst:
        evaluate.write_predictions(predictions, dst)
    log(f"predict: {len(predictions)} predictions")


def _submit(predictions_path: str, out_path: str | None) -> None:
    with open_input(predictions_path) as src:
        predictions = list(evaluate.read_predictions(src))
    with atomic_output(out_path) as dst:
        count = evaluate.emit_submission(predictions, dst)
    log(f"submit: {count} rows")


# ---------------------------------------------------------------------------
# Subcommand handlers


def cmd_clean(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _clean_nodes(cfg, args.input, args.output, args.report)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    with open_input(args.pairs) as src:
        stats = dataset.label_stats(dataset.parse_pairs(src, labeled=True))
    print(f"{'':12s}{'Non-related (0)':>18s}{'Related (1)':>14s}")
    print(f"{'Frequency':12s}{stats.count_0:>18,d}{stats.count_1:>14,d}")
    print(f"{'Percentage':12s}{stats.pct_0:>17.2f}%{stats.pct_1:>13.2f}%")
    print("stats " + json.dumps(dataclasses.asdict(stats), sort_keys=True))
    return 0


def cmd_prepare(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _prepare(cfg, args.pairs, args.nodes, args.output, labeled=not args.unlabeled)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _train(cfg, args.pairs, args.nodes, args.model_out or cfg.path("model"))
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    _predict(cfg, args.model_file, args.pairs, args.nodes, args.output,
             labeled=args.labeled)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    with open_input(args.predictions) as src:
        predictions = list(evaluate.read_predictions(src))
    with open_input(args.pairs) as src:
        gold = list(dataset.parse_pairs(src, labeled=True))
    rep = evaluate.report(evaluate.confusion(predictions, gold))
    m = rep.matrix
    print(f"pairs: {m.tp + m.fp + m.tn + m.fn}  tp={m.tp} fp={m.fp} tn={m.tn} fn={m.fn}")
    print(f"class 0: precision={rep.precision_0:.4f} recall={rep.recall_0:.4f} f1={rep.f1_0:.4f}")
    print(f"class 1: precision={rep.precision_1:.4f} recall={rep.recall_1:.4f} f1={rep.f1_1:.4f}")
    print(f"macro F1: {rep.macro_f1:.5f}")
    payload = dataclasses.asdict(rep)
    print("eval " + json.dumps(payload, sort_keys=True))
    return 0


def cmd_submit(args: argparse.Namespace) -> int:
    _submit(args.predictions, args.output)
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    for name, value in (("nodes", cfg.nodes), ("train_pairs", cfg.train_pairs),
                        ("test_pairs", cfg.test_pairs)):
        if not value:
            raise ValidationError(f"pipeline requires a {name} path (flag or config file)")
        if not Path(value).exists():
            raise FileNotFoundError(f"{name} path does not exist: {value}")
    cleaned = cfg.path("cleaned_nodes")
    _clean_nodes(cfg, cfg.nodes, cleaned, want_report=True)
    _prepare(cfg, cfg.train_pairs, cleaned, cfg.path("prepared"), labeled=True)
    _train(cfg, cfg.train_pairs, cleaned, cfg.path("model"))
    _predict(cfg, cfg.path("model"), cfg.test_pairs, cleaned,
             cfg.path("predictions"), labeled=False)
    _submit(cfg.path("predictions"), cfg.path("submission"))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common_config_flags(p: argparse.ArgumentParser, train_flags: bool = False) -> None:
    p.add_argument("--config", help="INI config file; flags override it")
    p.add_argument("--threads", type=int, help="worker thread count")
    p.add_argument("--lenient-join", action="store_true",
                   help="skip pairs referencing missing nodes instead of failing")
    p.add_argument("--max-tokens", type=int, dest="max_tokens",
                   help="per-side token budget (default 128)")
    for stage in textclean.STAGES:
        p.add_argument(f"--no-{stage}", action="store_true",
                       help=f"disable the {stage} cleaning stage")
    if train_flags:
        p.add_argument("--batch-size", type=int, dest="batch_size")
        p.add_argument("--learning-rate", type=float, dest="learning_rate")
        p.add_argument("--epochs", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--hash-bits", type=int, dest="hash_bits")
        p.add_argument("--weight-decay", type=float, dest="weight_decay")
        p.add_argument("--decision-threshold", type=float, dest="decision_threshold")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikilink",
        description="Wikipedia link prediction as sentence-pair classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="clean a nodes TSV")
    p.add_argument("--input", default="-", help="nodes TSV path or - for stdin")
    p.add_argument("--output", default="-", help="cleaned TSV path or - for stdout")
    p.add_argument("--report", action="store_true",
                   help="emit an aggregate cleaning report line")
    _add_common_config_flags(p)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("stats", help="label statistics of a labeled pairs CSV")
    p.add_argument("--pairs", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("prepare", help="build prepared premise/hypothesis pairs")
    p.add_argument("--pairs", required=True)
    p.add_argument("--nodes", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--unlabeled", action="store_true")
    _add_common_config_flags(p)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="train the baseline classifier")
    p.add_argument("--pairs", required=True)
    p.add_argument("--nodes", required=True)
    p.add_argument("--model", dest="model_out", help="output model file")
    _add_common_config_flags(p, train_flags=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score pairs with a trained model")
    p.add_argument("--model", dest="model_file", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--nodes", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--labeled", action="store_true",
                   help="pairs file carries labels (evaluation runs)")
    _add_common_config_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="macro-F1 report for predictions vs gold")
    p.add_argument("--predictions", required=True)
    p.add_argument("--pairs", required=True, help="labeled pairs CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("submit", help="write the competition submission CSV")
    p.add_argument("--predictions", required=True)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_submit)

    p = sub.add_parser("pipeline", help="clean, prepare, train, predict, submit")
    p.add_argument("--nodes")
    p.add_argument("--train-pairs", dest="train_pairs")
    p.add_argument("--test-pairs", dest="test_pairs")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--model")
    _add_common_config_flags(p, train_flags=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        log(f"error [{exc.category}]: {exc}")
        return EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        log(f"error [io]: {exc}")
        return EXIT_CODES["io"]


if __name__ == "__main__":
    sys.exit(main())
