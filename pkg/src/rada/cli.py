"""Command-line entry point: ingest, index, augment, filter, report, and eval
subcommands over the augmentation pipeline.

Settings come from an optional YAML config file with explicit flags taking
precedence. Secrets are read only from the environment, never from config
files. Exit codes: 0 success, 1 runtime failure, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import yaml

from .augment import (
    AugmentConfig,
    AugmentError,
    AugmentationInterrupted,
    RETRIEVAL_EMBEDDING,
    RETRIEVAL_LEXICAL,
    STRATEGIES,
    STRATEGY_RADA_TEST_TIME,
    STRATEGY_SEED_ONLY,
    run_augmentation,
    run_self_instruct_baseline,
)
from .corpus import (
    CorpusError,
    SeedDataset,
    TASK_KINDS,
    augmented_to_record,
    load_seed,
    load_store,
    load_test_inputs,
    read_augmented,
    write_augmented,
)
from .llmclient import HttpChatBackend, LlmError, MockLlmBackend
from .manifest import (
    RunManifest,
    STATUS_COMPLETE,
    STATUS_INCOMPLETE,
)
from .quality import (
    DEFAULT_EMBEDDING_DEDUP_THRESHOLD,
    DEFAULT_ROUGE_DEDUP_THRESHOLD,
    FilterConfig,
    NORMALIZATION_MODES,
    NORMALIZATION_STRICT,
    TEXT_UNIT_QUESTION_ANSWER,
    TEXT_UNITS,
    diversity_report,
    embedding_dedup_filter,
    exact_match,
    mcq_accuracy,
    rouge_dedup_filter,
    span_filter,
    squad_f1,
)
from .retrieval import (
    EmbeddingProviderError,
    FIELD_CONTEXT,
    FIELD_QUESTION,
    HashedBowEmbedder,
    HttpEmbeddingProvider,
    RetrievalError,
    build_lexical_index,
)
from .corpus import TASK_EXTRACTIVE_QA, TASK_MCQ

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

ENV_EMBED_ENDPOINT = "RADA_EMBED_ENDPOINT"
ENV_EMBED_API_KEY = "RADA_EMBED_API_KEY"

BACKEND_MOCK = "mock"
BACKEND_HTTP = "http"

SELF_INSTRUCT = "self_instruct"
CLI_STRATEGIES = STRATEGIES + (SELF_INSTRUCT,)

ALLOWED_CONFIG_KEYS = {
    "seed", "store", "test_inputs", "task", "strategy", "k_retrieval",
    "demo_count", "multiplier_m", "target_query_field", "rng_seed",
    "max_parse_retries_per_slot", "in_flight_limit", "retrieval_backend",
    "backend", "out", "kept_out", "rejected_out", "input", "out_dir",
    "text_unit", "span_filter", "normalization", "rouge_dedup_threshold",
    "embedding_dedup_threshold", "embed_export", "predictions", "gold",
    "field",
}


class UsageError(Exception):
    pass


def load_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise UsageError(f"config file {path} is not valid YAML: {exc}")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must contain a mapping")
    for key in data:
        lowered = str(key).lower()
        if "api_key" in lowered or "secret" in lowered or "token" in lowered:
            raise UsageError(
                f"config key {key!r} looks like a secret; secrets are read "
                f"only from the environment"
            )
        if key not in ALLOWED_CONFIG_KEYS:
            raise UsageError(
                f"unknown config key {key!r} (allowed: "
                f"{', '.join(sorted(ALLOWED_CONFIG_KEYS))})"
            )
    return data


def _resolve(args, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if config.get(key) is not None:
        return config[key]
    return default


def _require(value, what: str):
    if value is None or value == [] or value == "":
        raise UsageError(f"{what} is required (flag or config)")
    return value


def _store_paths(value) -> list[str]:
    if isinstance(value, (str, Path)):
        return [str(value)]
    return [str(item) for item in value]


def _embedding_provider():
    endpoint = os.environ.get(ENV_EMBED_ENDPOINT)
    if endpoint:
        return HttpEmbeddingProvider(endpoint, api_key=os.environ.get(ENV_EMBED_API_KEY))
    return HashedBowEmbedder()


def _make_backend(kind: str, rng_seed: int):
    if kind == BACKEND_MOCK:
        return MockLlmBackend(seed=rng_seed)
    try:
        return HttpChatBackend()
    except LlmError as exc:
        raise UsageError(str(exc))


def _write_rejected(rejected, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for item in rejected:
            record = augmented_to_record(item.sample)
            record["rejection_reason"] = item.reason
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def cmd_ingest(args) -> int:
    config = load_config(args.config) if args.config else {}
    task = _require(_resolve(args, config, "task"), "--task")
    if task not in TASK_KINDS:
        raise UsageError(f"unknown task {task!r} (choose from {', '.join(TASK_KINDS)})")
    seed_path = _resolve(args, config, "seed")
    store_value = _resolve(args, config, "store")
    test_path = _resolve(args, config, "test_inputs")
    if not (seed_path or store_value or test_path):
        raise UsageError("nothing to ingest: give --seed, --store, or --test-inputs")

    if seed_path:
        seed = load_seed(seed_path, task)
        print(f"seed {seed_path}: {seed.size_n} examples ({task})")
    if store_value:
        paths = _store_paths(store_value)
        for path in paths:
            single = load_store([path])
            complete = len(single.complete_entries(task))
            print(f"store {path}: {len(single)} entries ({complete} complete)")
        if len(paths) > 1:
            merged = load_store(paths)
            print(f"store total: {len(merged)} entries across {len(paths)} files")
    if test_path:
        tests = load_test_inputs(test_path)
        print(f"test inputs {test_path}: {len(tests)} questions")
    return EXIT_OK


def cmd_index(args) -> int:
    config = load_config(args.config) if args.config else {}
    store_value = _require(_resolve(args, config, "store"), "--store")
    field_selector = _resolve(args, config, "field", FIELD_CONTEXT)
    store = load_store(_store_paths(store_value))
    index = build_lexical_index(store, field_selector=field_selector)
    stats = {
        "entries": len(store),
        "field": field_selector,
        "vocabulary_size": len(index.postings),
        "avg_doc_len": index.avgdl,
        "k1": index.k1,
        "b": index.b,
    }
    out = _resolve(args, config, "out")
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(json.dumps(stats, sort_keys=True, indent=2) + "\n")
        print(f"index stats -> {out}")
    print(
        f"indexed {stats['entries']} entries on {field_selector!r}: "
        f"{stats['vocabulary_size']} terms, avg length {stats['avg_doc_len']:.2f}"
    )
    return EXIT_OK


def cmd_augment(args) -> int:
    config = load_config(args.config) if args.config else {}
    task = _require(_resolve(args, config, "task"), "--task")
    if task not in TASK_KINDS:
        raise UsageError(f"unknown task {task!r} (choose from {', '.join(TASK_KINDS)})")
    strategy = _resolve(args, config, "strategy", "rada_train")
    if strategy not in CLI_STRATEGIES:
        raise UsageError(
            f"unknown strategy {strategy!r} (choose from {', '.join(CLI_STRATEGIES)})"
        )

    try:
        cfg = AugmentConfig(
            strategy=strategy if strategy != SELF_INSTRUCT else STRATEGY_SEED_ONLY,
            k_retrieval=int(_resolve(args, config, "k_retrieval", 5)),
            demo_count=int(_resolve(args, config, "demo_count", 3)),
            multiplier_m=int(_resolve(args, config, "multiplier_m", 30)),
            target_query_field=_resolve(args, config, "target_query_field", FIELD_CONTEXT),
            rng_seed=int(_resolve(args, config, "rng_seed", 0)),
            max_parse_retries_per_slot=int(
                _resolve(args, config, "max_parse_retries_per_slot", 2)
            ),
            in_flight_limit=int(_resolve(args, config, "in_flight_limit", 1)),
            retrieval_backend=_resolve(args, config, "retrieval_backend", RETRIEVAL_LEXICAL),
        )
    except ValueError as exc:
        raise UsageError(str(exc))

    seed_path = _resolve(args, config, "seed")
    store_value = _resolve(args, config, "store")
    test_path = _resolve(args, config, "test_inputs")

    needs_store = strategy not in (STRATEGY_SEED_ONLY, SELF_INSTRUCT)
    if needs_store and not store_value:
        raise UsageError(f"strategy {strategy!r} needs --store")
    if strategy == STRATEGY_RADA_TEST_TIME and not test_path:
        raise UsageError("rada_test_time needs --test-inputs")
    if strategy != STRATEGY_RADA_TEST_TIME and not seed_path:
        raise UsageError(f"strategy {strategy!r} needs --seed")

    if seed_path:
        allow_empty = strategy == STRATEGY_RADA_TEST_TIME
        seed = load_seed(seed_path, task, allow_empty=allow_empty)
    else:
        seed = SeedDataset(task_kind=task, examples=[])
    store = load_store(_store_paths(store_value)) if store_value else None
    test_inputs = load_test_inputs(test_path) if test_path else None

    backend_kind = _resolve(args, config, "backend", BACKEND_MOCK)
    backend = _make_backend(backend_kind, cfg.rng_seed)
    embedding_provider = (
        _embedding_provider() if cfg.retrieval_backend == RETRIEVAL_EMBEDDING else None
    )

    out = Path(_resolve(args, config, "out", "augmented.jsonl"))
    out.parent.mkdir(parents=True, exist_ok=True)
    manifest_path = out.with_name(out.stem + ".manifest.json")

    snapshot = cfg.to_dict()
    snapshot["task_kind"] = task
    if strategy == SELF_INSTRUCT:
        snapshot["strategy"] = SELF_INSTRUCT
    input_paths = [p for p in [seed_path] if p]
    input_paths += _store_paths(store_value) if store_value else []
    input_paths += [test_path] if test_path else []

    manifest = RunManifest.start("augment", snapshot, input_paths, backend)
    manifest.write(manifest_path)

    try:
        if strategy == SELF_INSTRUCT:
            result = run_self_instruct_baseline(seed, cfg, backend)
        else:
            result = run_augmentation(
                seed,
                store,
                cfg,
                backend,
                embedding_provider=embedding_provider,
                test_inputs=test_inputs,
            )
    except AugmentationInterrupted as exc:
        write_augmented(exc.samples, out)
        manifest.finalize(
            STATUS_INCOMPLETE,
            [out.name],
            {
                "slot_count": exc.slot_count,
                "generated": len(exc.samples),
                "skipped": len(exc.skipped),
            },
        )
        manifest.write(manifest_path)
        print(
            f"interrupted: wrote {len(exc.samples)} of {exc.slot_count} samples "
            f"to {out} (manifest marked incomplete)",
            file=sys.stderr,
        )
        return EXIT_RUNTIME
    except AugmentError as exc:
        manifest.finalize(STATUS_INCOMPLETE, [], {"error": str(exc)})
        manifest.write(manifest_path)
        raise

    write_augmented(result.samples, out)
    manifest.finalize(
        STATUS_COMPLETE,
        [out.name],
        {
            "slot_count": result.slot_count,
            "generated": len(result.samples),
            "skipped": len(result.skipped),
        },
    )
    manifest.write(manifest_path)
    print(
        f"generated {len(result.samples)} samples "
        f"(skipped {len(result.skipped)} of {result.slot_count} slots) -> {out}"
    )
    return EXIT_OK


def cmd_filter(args) -> int:
    config = load_config(args.config) if args.config else {}
    task = _require(_resolve(args, config, "task"), "--task")
    if task not in TASK_KINDS:
        raise UsageError(f"unknown task {task!r} (choose from {', '.join(TASK_KINDS)})")
    in_path = Path(_require(_resolve(args, config, "input"), "--in"))
    samples = read_augmented(in_path, task)

    try:
        fcfg = FilterConfig(
            enable_span_filter=_resolve(args, config, "span_filter", True),
            rouge_dedup_threshold=_resolve(args, config, "rouge_dedup_threshold"),
            embedding_dedup_threshold=_resolve(args, config, "embedding_dedup_threshold"),
            normalization=_resolve(args, config, "normalization", NORMALIZATION_STRICT),
        )
    except ValueError as exc:
        raise UsageError(str(exc))

    kept = list(samples)
    rejected = []
    if task == TASK_EXTRACTIVE_QA:
        kept, rejected_here = span_filter(kept, fcfg)
        rejected += rejected_here
    elif fcfg.enable_span_filter:
        logger.info("span filter does not apply to %s samples; skipping", task)
    if fcfg.rouge_dedup_threshold is not None:
        kept, rejected_here = rouge_dedup_filter(kept, fcfg.rouge_dedup_threshold)
        rejected += rejected_here
    if fcfg.embedding_dedup_threshold is not None:
        kept, rejected_here = embedding_dedup_filter(
            kept, _embedding_provider(), fcfg.embedding_dedup_threshold
        )
        rejected += rejected_here

    kept_out = Path(
        _resolve(args, config, "kept_out", in_path.with_name(in_path.stem + ".kept.jsonl"))
    )
    rejected_out = Path(
        _resolve(
            args, config, "rejected_out",
            in_path.with_name(in_path.stem + ".rejected.jsonl"),
        )
    )
    kept_out.parent.mkdir(parents=True, exist_ok=True)
    rejected_out.parent.mkdir(parents=True, exist_ok=True)
    write_augmented(kept, kept_out)
    _write_rejected(rejected, rejected_out)

    reasons: dict[str, int] = {}
    for item in rejected:
        reasons[item.reason] = reasons.get(item.reason, 0) + 1
    reason_text = (
        ", ".join(f"{name}: {count}" for name, count in sorted(reasons.items()))
        or "none"
    )
    print(
        f"kept {len(kept)} of {len(samples)} samples -> {kept_out}; "
        f"rejected {len(rejected)} ({reason_text}) -> {rejected_out}"
    )
    return EXIT_OK


def cmd_report(args) -> int:
    from . import figures

    config = load_config(args.config) if args.config else {}
    task = _require(_resolve(args, config, "task"), "--task")
    if task not in TASK_KINDS:
        raise UsageError(f"unknown task {task!r} (choose from {', '.join(TASK_KINDS)})")
    seed_path = _require(_resolve(args, config, "seed"), "--seed")
    in_path = _require(_resolve(args, config, "input"), "--in")
    out_dir = Path(_resolve(args, config, "out_dir", "report"))
    text_unit = _resolve(args, config, "text_unit", TEXT_UNIT_QUESTION_ANSWER)
    if text_unit not in TEXT_UNITS:
        raise UsageError(f"unknown text_unit {text_unit!r} (choose from {', '.join(TEXT_UNITS)})")

    seed = load_seed(seed_path, task)
    samples = read_augmented(in_path, task)
    out_dir.mkdir(parents=True, exist_ok=True)

    provider = None
    export_path = None
    if _resolve(args, config, "embed_export", False):
        provider = _embedding_provider()
        export_path = out_dir / "embeddings.csv"

    report = diversity_report(
        seed.examples,
        samples,
        provider=provider,
        embedding_export_path=export_path,
        text_unit=text_unit,
    )

    report_path = out_dir / "report.json"
    with open(report_path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    histogram_path = out_dir / "max_rouge_histogram.png"
    domain_path = out_dir / "domain_breakdown.png"
    figures.save_max_rouge_histogram(report, histogram_path)
    figures.save_domain_breakdown(report, domain_path)

    print(
        f"report on {len(samples)} samples: mean max-ROUGE {report.mean:.4f}, "
        f"median {report.median:.4f}, stddev {report.stddev:.4f}"
    )
    written = [report_path, histogram_path, domain_path]
    if export_path is not None:
        written.append(export_path)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _read_predictions(path) -> dict[str, str]:
    predictions: dict[str, str] = {}
    try:
        handle = open(path, "r", encoding="utf-8")
    except FileNotFoundError:
        raise UsageError(f"predictions file not found: {path}")
    with handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{path}:{line_no}: not valid JSON: {exc}")
            if not isinstance(record, dict) or "id" not in record or "prediction" not in record:
                raise UsageError(
                    f"{path}:{line_no}: predictions need 'id' and 'prediction' fields"
                )
            record_id = str(record["id"])
            if record_id in predictions:
                raise UsageError(f"{path}:{line_no}: duplicate prediction id {record_id!r}")
            predictions[record_id] = str(record["prediction"])
    return predictions


def cmd_eval(args) -> int:
    config = load_config(args.config) if args.config else {}
    task = _require(_resolve(args, config, "task"), "--task")
    if task not in TASK_KINDS:
        raise UsageError(f"unknown task {task!r} (choose from {', '.join(TASK_KINDS)})")
    gold_path = _require(_resolve(args, config, "gold"), "--gold")
    pred_path = _require(_resolve(args, config, "predictions"), "--predictions")

    gold = load_seed(gold_path, task)
    predictions = _read_predictions(pred_path)

    gold_ids = set(gold.ids())
    pred_ids = set(predictions)
    missing = sorted(gold_ids - pred_ids)
    extra = sorted(pred_ids - gold_ids)
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing predictions for {missing[:3]}")
        if extra:
            parts.append(f"predictions for unknown ids {extra[:3]}")
        raise UsageError("; ".join(parts))

    if task == TASK_MCQ:
        accuracy = mcq_accuracy(
            [predictions[ex.id] for ex in gold.examples], gold.examples
        )
        print(f"accuracy={accuracy:.4f} n={gold.size_n}")
    else:
        f1_values = [squad_f1(predictions[ex.id], ex.answer) for ex in gold.examples]
        em_values = [exact_match(predictions[ex.id], ex.answer) for ex in gold.examples]
        f1 = sum(f1_values) / len(f1_values)
        em = sum(em_values) / len(em_values)
        print(f"f1={f1:.4f} em={em:.4f} n={gold.size_n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file; flags override its values")
    common.add_argument("--rng-seed", dest="rng_seed", type=int, help="root RNG seed")
    common.add_argument(
        "--backend", choices=(BACKEND_MOCK, BACKEND_HTTP), help="generation backend"
    )

    parser = argparse.ArgumentParser(
        prog="rada",
        description="Grow a small seed dataset by retrieving from a data store "
        "and prompting an LLM, then filter and report on the result.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_ingest = subparsers.add_parser(
        "ingest", parents=[common], help="validate input files and print counts"
    )
    p_ingest.add_argument("--task", choices=TASK_KINDS)
    p_ingest.add_argument("--seed")
    p_ingest.add_argument("--store", nargs="+")
    p_ingest.add_argument("--test-inputs", dest="test_inputs")
    p_ingest.set_defaults(func=cmd_ingest)

    p_index = subparsers.add_parser(
        "index", parents=[common], help="build the lexical index and report stats"
    )
    p_index.add_argument("--store", nargs="+")
    p_index.add_argument("--field", choices=(FIELD_CONTEXT, FIELD_QUESTION))
    p_index.add_argument("--out", help="write index stats JSON here")
    p_index.set_defaults(func=cmd_index)

    p_augment = subparsers.add_parser(
        "augment", parents=[common], help="generate augmented samples"
    )
    p_augment.add_argument("--task", choices=TASK_KINDS)
    p_augment.add_argument("--seed")
    p_augment.add_argument("--store", nargs="+")
    p_augment.add_argument("--test-inputs", dest="test_inputs")
    p_augment.add_argument("--strategy", choices=CLI_STRATEGIES)
    p_augment.add_argument("--k", dest="k_retrieval", type=int)
    p_augment.add_argument("--demo-count", dest="demo_count", type=int)
    p_augment.add_argument("--multiplier", dest="multiplier_m", type=int)
    p_augment.add_argument(
        "--target-query-field",
        dest="target_query_field",
        choices=(FIELD_CONTEXT, FIELD_QUESTION),
    )
    p_augment.add_argument(
        "--max-parse-retries", dest="max_parse_retries_per_slot", type=int
    )
    p_augment.add_argument("--in-flight-limit", dest="in_flight_limit", type=int)
    p_augment.add_argument(
        "--retrieval-backend",
        dest="retrieval_backend",
        choices=(RETRIEVAL_LEXICAL, RETRIEVAL_EMBEDDING),
    )
    p_augment.add_argument("--out")
    p_augment.set_defaults(func=cmd_augment)

    p_filter = subparsers.add_parser(
        "filter", parents=[common], help="apply span and near-duplicate filters"
    )
    p_filter.add_argument("--task", choices=TASK_KINDS)
    p_filter.add_argument("--in", dest="input", help="augmented JSONL to filter")
    p_filter.add_argument(
        "--span-filter",
        dest="span_filter",
        action=argparse.BooleanOptionalAction,
        default=None,
    )
    p_filter.add_argument("--normalization", choices=NORMALIZATION_MODES)
    p_filter.add_argument(
        "--rouge-dedup",
        dest="rouge_dedup_threshold",
        type=float,
        nargs="?",
        const=DEFAULT_ROUGE_DEDUP_THRESHOLD,
        help=f"drop near-duplicates by ROUGE-L (default threshold "
        f"{DEFAULT_ROUGE_DEDUP_THRESHOLD})",
    )
    p_filter.add_argument(
        "--embedding-dedup",
        dest="embedding_dedup_threshold",
        type=float,
        nargs="?",
        const=DEFAULT_EMBEDDING_DEDUP_THRESHOLD,
        help=f"drop near-duplicates by cosine similarity (default threshold "
        f"{DEFAULT_EMBEDDING_DEDUP_THRESHOLD})",
    )
    p_filter.add_argument("--kept-out", dest="kept_out")
    p_filter.add_argument("--rejected-out", dest="rejected_out")
    p_filter.set_defaults(func=cmd_filter)

    p_report = subparsers.add_parser(
        "report", parents=[common], help="diversity report with figures"
    )
    p_report.add_argument("--task", choices=TASK_KINDS)
    p_report.add_argument("--seed")
    p_report.add_argument("--in", dest="input", help="augmented JSONL to analyze")
    p_report.add_argument("--out-dir", dest="out_dir")
    p_report.add_argument("--text-unit", dest="text_unit", choices=TEXT_UNITS)
    p_report.add_argument(
        "--embed-export",
        dest="embed_export",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="also export embedding vectors as CSV",
    )
    p_report.set_defaults(func=cmd_report)

    p_eval = subparsers.add_parser(
        "eval", parents=[common], help="score a predictions file against gold labels"
    )
    p_eval.add_argument("--task", choices=TASK_KINDS)
    p_eval.add_argument("--gold")
    p_eval.add_argument("--predictions")
    p_eval.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AugmentError, LlmError, RetrievalError, EmbeddingProviderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
