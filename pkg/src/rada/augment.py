"""Augmentation orchestration: builds demonstration and target pools from the
seed set and the data store, then drives prompt rendering, generation, and
parsing to produce provenance-tracked samples.

Strategies cover training-time retrieval augmentation, a test-time variant
driven by unlabeled inputs, a seed-only baseline, random-retrieval ablations,
and an iterative self-instruct baseline whose pool grows with its own output.
"""

from __future__ import annotations

import hashlib
import logging
import math
import random
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field

from .corpus import (
    SOURCE_GENERATED,
    AugmentedSample,
    CorpusError,
    DataStore,
    Example,
    McqExample,
    QaExample,
    SeedDataset,
    StoreEntry,
    TASK_EXTRACTIVE_QA,
    TASK_MCQ,
    TestInput,
)
from .llmclient import GenerationParams, LlmBackend
from .promptgen import (
    Demonstration,
    KIND_EXTRACTIVE_QA,
    KIND_MMLU_V1,
    KIND_MMLU_V2,
    ParseError,
    parse_generation,
    render_augmentation_prompt,
)
from .retrieval import (
    FIELD_CONTEXT,
    FIELD_QUESTION,
    RetrievalHit,
    build_embedding_index,
    build_lexical_index,
    embedding_topk,
    lexical_topk,
)

logger = logging.getLogger(__name__)

STRATEGY_RADA_TRAIN = "rada_train"
STRATEGY_RADA_TEST_TIME = "rada_test_time"
STRATEGY_SEED_ONLY = "seed_only"
STRATEGY_ABLATE_INCONTEXT = "ablate_random_incontext"
STRATEGY_ABLATE_TARGET = "ablate_random_target"
STRATEGY_ABLATE_ALL = "ablate_random_all"
STRATEGIES = (
    STRATEGY_RADA_TRAIN,
    STRATEGY_RADA_TEST_TIME,
    STRATEGY_SEED_ONLY,
    STRATEGY_ABLATE_INCONTEXT,
    STRATEGY_ABLATE_TARGET,
    STRATEGY_ABLATE_ALL,
)
# Provenance tag for the iterative baseline; not a configurable strategy.
SELF_INSTRUCT_TAG = "self_instruct"

ORIGIN_SEED = "seed"
ORIGIN_RETRIEVED = "retrieved"
ORIGIN_RANDOM = "random"
ORIGIN_GENERATED = "generated"

RETRIEVAL_LEXICAL = "lexical"
RETRIEVAL_EMBEDDING = "embedding"

SKIP_BUDGET_FRACTION = 0.2
SKIP_REASON = "parse-skip"

MULTIPLIER_SWEEP = (1, 3, 5, 10, 30, 100)


class AugmentError(RuntimeError):
    pass


class AugmentationInterrupted(AugmentError):
    """Raised on Ctrl-C after draining in-flight slots; carries partial results."""

    def __init__(self, samples, skipped, slot_count):
        super().__init__(
            f"interrupted after {len(samples)} of {slot_count} slots"
        )
        self.samples = samples
        self.skipped = skipped
        self.slot_count = slot_count


@dataclass
class AugmentConfig:
    strategy: str = STRATEGY_RADA_TRAIN
    k_retrieval: int = 5
    demo_count: int = 3
    multiplier_m: int = 30
    target_query_field: str = FIELD_CONTEXT
    rng_seed: int = 0
    max_parse_retries_per_slot: int = 2
    in_flight_limit: int = 1
    retrieval_backend: str = RETRIEVAL_LEXICAL

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.strategy == STRATEGY_RADA_TEST_TIME:
            # Test-time generation is zero-shot by definition.
            self.demo_count = 0
        if self.k_retrieval < 0:
            raise ValueError(f"k_retrieval must be >= 0, got {self.k_retrieval}")
        if self.demo_count < 0:
            raise ValueError(f"demo_count must be >= 0, got {self.demo_count}")
        if self.multiplier_m < 1:
            raise ValueError(f"multiplier_m must be >= 1, got {self.multiplier_m}")
        if self.multiplier_m not in MULTIPLIER_SWEEP:
            logger.info("multiplier_m=%d is outside the documented sweep %s",
                        self.multiplier_m, MULTIPLIER_SWEEP)
        if self.target_query_field not in (FIELD_CONTEXT, FIELD_QUESTION):
            raise ValueError(f"unknown target_query_field {self.target_query_field!r}")
        if self.max_parse_retries_per_slot < 0:
            raise ValueError("max_parse_retries_per_slot must be >= 0")
        if self.in_flight_limit < 1:
            raise ValueError(f"in_flight_limit must be >= 1, got {self.in_flight_limit}")
        if self.retrieval_backend not in (RETRIEVAL_LEXICAL, RETRIEVAL_EMBEDDING):
            raise ValueError(f"unknown retrieval_backend {self.retrieval_backend!r}")

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "k_retrieval": self.k_retrieval,
            "demo_count": self.demo_count,
            "multiplier_m": self.multiplier_m,
            "target_query_field": self.target_query_field,
            "rng_seed": self.rng_seed,
            "max_parse_retries_per_slot": self.max_parse_retries_per_slot,
            "in_flight_limit": self.in_flight_limit,
            "retrieval_backend": self.retrieval_backend,
        }


@dataclass(frozen=True)
class PoolMember:
    source_id: str
    demonstration: Demonstration
    origin: str


@dataclass(frozen=True)
class TargetMember:
    source_id: str
    text: str
    origin: str
    options: tuple[str, ...] | None = None
    domain_tag: str | None = None


@dataclass
class DemonstrationPool:
    members: list[PoolMember]

    def origin_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for member in self.members:
            counts[member.origin] = counts.get(member.origin, 0) + 1
        return counts


@dataclass
class TargetPool:
    members: list[TargetMember]

    def origin_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for member in self.members:
            counts[member.origin] = counts.get(member.origin, 0) + 1
        return counts


@dataclass
class SkippedSlot:
    slot_index: int
    prompt_digest: str
    reason: str
    detail: str


@dataclass
class AugmentationResult:
    samples: list[AugmentedSample]
    skipped: list[SkippedSlot]
    slot_count: int
    demonstration_pool: DemonstrationPool
    target_pool: TargetPool
    config: AugmentConfig = field(repr=False, default=None)


def derive_seed(root_seed: int, *labels) -> int:
    """Derive an independent 64-bit stream seed from the root seed and labels."""
    payload = ":".join([str(root_seed), *(str(part) for part in labels)])
    digest = hashlib.blake2b(payload.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def demo_from_example(example: Example) -> Demonstration:
    if isinstance(example, McqExample):
        return Demonstration(
            answer=example.answer,
            question=example.question,
            options=list(example.options),
        )
    return Demonstration(
        answer=example.answer,
        context=example.context,
        question=example.question,
    )


def demo_from_entry(entry: StoreEntry, task_kind: str) -> Demonstration:
    if task_kind == TASK_MCQ:
        return Demonstration(
            answer=entry.answer,
            question=entry.question,
            options=list(entry.options),
        )
    return Demonstration(
        answer=entry.answer,
        context=entry.context,
        question=entry.question,
    )


class Retriever:
    """Batch top-k lookup over a fixed subset of store entries."""

    def batch_topk(self, queries: list[str], k: int) -> list[list[RetrievalHit]]:
        raise NotImplementedError


class LexicalRetriever(Retriever):
    def __init__(self, store: DataStore, entries: list[StoreEntry], field_selector: str):
        substore = DataStore.from_entries(entries)
        self.index = build_lexical_index(substore, field_selector=field_selector)

    def batch_topk(self, queries: list[str], k: int) -> list[list[RetrievalHit]]:
        return [lexical_topk(self.index, query, k) for query in queries]


class EmbeddingRetriever(Retriever):
    def __init__(self, store: DataStore, entries: list[StoreEntry], field_selector: str, provider):
        substore = DataStore.from_entries(entries)
        self.provider = provider
        self.index = build_embedding_index(substore, provider, field_selector=field_selector)

    def batch_topk(self, queries: list[str], k: int) -> list[list[RetrievalHit]]:
        if not queries:
            return []
        vectors = self.provider.embed(queries)
        return [embedding_topk(self.index, vector, k) for vector in vectors]


def _make_retriever(cfg: AugmentConfig, store: DataStore, entries: list[StoreEntry],
                    field_selector: str, embedding_provider) -> Retriever:
    if cfg.retrieval_backend == RETRIEVAL_EMBEDDING:
        if embedding_provider is None:
            raise AugmentError("retrieval_backend=embedding requires an embedding provider")
        return EmbeddingRetriever(store, entries, field_selector, embedding_provider)
    return LexicalRetriever(store, entries, field_selector)


def _demo_eligible(store: DataStore, task_kind: str) -> list[StoreEntry]:
    return store.complete_entries(task_kind)


def _target_eligible(store: DataStore, task_kind: str) -> list[StoreEntry]:
    if task_kind == TASK_MCQ:
        return [e for e in store.entries if e.question and e.options]
    return [e for e in store.entries if e.context]


def _target_member_from_entry(entry: StoreEntry, task_kind: str, origin: str) -> TargetMember:
    if task_kind == TASK_MCQ:
        return TargetMember(
            source_id=entry.id,
            text=entry.question,
            origin=origin,
            options=tuple(entry.options),
            domain_tag=entry.domain_tag,
        )
    return TargetMember(
        source_id=entry.id,
        text=entry.context,
        origin=origin,
        domain_tag=entry.domain_tag,
    )


def _target_member_from_example(example: Example, origin: str = ORIGIN_SEED) -> TargetMember:
    if isinstance(example, McqExample):
        return TargetMember(
            source_id=example.id,
            text=example.question,
            origin=origin,
            options=tuple(example.options),
            domain_tag=example.domain_tag,
        )
    return TargetMember(
        source_id=example.id,
        text=example.context,
        origin=origin,
        domain_tag=example.domain_tag,
    )


def build_demonstration_pool(
    seed: SeedDataset,
    store: DataStore | None,
    retriever: Retriever | None,
    cfg: AugmentConfig,
) -> DemonstrationPool:
    """Union of the seed examples and the top-k complete store entries retrieved
    per seed question, deduplicated by id. Random-in-context ablations replace
    the retrieved portion with a uniform draw of the same size."""
    members = [
        PoolMember(ex.id, demo_from_example(ex), ORIGIN_SEED) for ex in seed.examples
    ]
    no_retrieval = cfg.strategy in (STRATEGY_SEED_ONLY, STRATEGY_RADA_TEST_TIME)
    if no_retrieval or cfg.k_retrieval == 0 or cfg.demo_count == 0:
        return DemonstrationPool(members)
    if store is None or retriever is None:
        raise AugmentError(f"strategy {cfg.strategy!r} needs a store and retriever")

    complete = _demo_eligible(store, seed.task_kind)
    if not complete:
        raise AugmentError("store has no complete entries to use as demonstrations")
    complete_ids = {entry.id for entry in complete}

    queries = [ex.question for ex in seed.examples]
    seen = {member.source_id for member in members}
    retrieved: list[StoreEntry] = []
    for hits in retriever.batch_topk(queries, cfg.k_retrieval):
        for hit in hits:
            if hit.entry_id in seen or hit.entry_id not in complete_ids:
                continue
            seen.add(hit.entry_id)
            retrieved.append(store.get(hit.entry_id))

    if cfg.strategy in (STRATEGY_ABLATE_INCONTEXT, STRATEGY_ABLATE_ALL):
        rng = random.Random(derive_seed(cfg.rng_seed, "ablate-demos"))
        replacement = rng.sample(complete, len(retrieved))
        members.extend(
            PoolMember(e.id, demo_from_entry(e, seed.task_kind), ORIGIN_RANDOM)
            for e in replacement
        )
    else:
        members.extend(
            PoolMember(e.id, demo_from_entry(e, seed.task_kind), ORIGIN_RETRIEVED)
            for e in retrieved
        )
    return DemonstrationPool(members)


def build_target_pool(
    seed: SeedDataset,
    store: DataStore | None,
    retriever: Retriever | None,
    cfg: AugmentConfig,
    test_inputs: list[TestInput] | None = None,
) -> TargetPool:
    """Pool of target contexts to generate against. Seed-only uses the seed
    contexts themselves; retrieval strategies take the deduplicated union of
    top-k store hits across all queries; random-target ablations substitute a
    uniform draw of the same size."""
    if cfg.strategy == STRATEGY_SEED_ONLY:
        members = [_target_member_from_example(ex) for ex in seed.examples]
        if not members:
            raise AugmentError("seed_only needs a non-empty seed dataset")
        return TargetPool(members)

    if cfg.k_retrieval == 0:
        raise AugmentError(
            "target pool would be empty with k_retrieval=0; use strategy seed_only"
        )
    if store is None or retriever is None:
        raise AugmentError(f"strategy {cfg.strategy!r} needs a store and retriever")
    eligible = _target_eligible(store, seed.task_kind)
    if not eligible:
        raise AugmentError("store has no entries usable as target contexts")
    eligible_ids = {entry.id for entry in eligible}

    if cfg.strategy == STRATEGY_RADA_TEST_TIME:
        if not test_inputs:
            raise AugmentError("rada_test_time needs unlabeled test inputs as queries")
        queries = [t.question for t in test_inputs]
    elif seed.task_kind == TASK_MCQ:
        # MCQ entries have no separate document, so questions are the queries.
        queries = [ex.question for ex in seed.examples]
    else:
        queries = [getattr(ex, cfg.target_query_field) for ex in seed.examples]

    seen: set[str] = set()
    retrieved: list[StoreEntry] = []
    for hits in retriever.batch_topk(queries, cfg.k_retrieval):
        for hit in hits:
            if hit.entry_id in seen or hit.entry_id not in eligible_ids:
                continue
            seen.add(hit.entry_id)
            retrieved.append(store.get(hit.entry_id))

    if cfg.strategy in (STRATEGY_ABLATE_TARGET, STRATEGY_ABLATE_ALL):
        rng = random.Random(derive_seed(cfg.rng_seed, "ablate-targets"))
        chosen = rng.sample(eligible, len(retrieved))
        origin = ORIGIN_RANDOM
    else:
        chosen = retrieved
        origin = ORIGIN_RETRIEVED

    members = [_target_member_from_entry(e, seed.task_kind, origin) for e in chosen]
    if not members:
        raise AugmentError("target pool is empty; check k_retrieval and the store")
    return TargetPool(members)


def template_kind_for_slot(task_kind: str, slot_index: int) -> str:
    if task_kind == TASK_EXTRACTIVE_QA:
        return KIND_EXTRACTIVE_QA
    # The two MCQ template versions alternate by sample index parity.
    return KIND_MMLU_V1 if slot_index % 2 == 0 else KIND_MMLU_V2


def assign_targets(pool_size: int, slot_count: int, rng_seed: int) -> list[int]:
    """Round-robin target assignment: each full pass over the pool uses its own
    seeded shuffle, so every target is exercised before any repeats and the
    assignment is independent of execution order."""
    if pool_size < 1:
        raise AugmentError("target pool is empty")
    passes = math.ceil(slot_count / pool_size)
    order: list[int] = []
    for pass_index in range(passes):
        indices = list(range(pool_size))
        random.Random(derive_seed(rng_seed, "targets", pass_index)).shuffle(indices)
        order.extend(indices)
    return order[:slot_count]


def _build_example(kind: str, slot_index: int, target: TargetMember, parsed) -> Example:
    gen_id = f"gen-{slot_index:06d}"
    if kind == KIND_EXTRACTIVE_QA:
        example = QaExample(
            id=gen_id,
            context=target.text,
            question=parsed.question,
            answer=parsed.answer,
            source=SOURCE_GENERATED,
            domain_tag=target.domain_tag,
        )
    elif kind == KIND_MMLU_V1:
        example = McqExample(
            id=gen_id,
            question=target.text,
            options=list(parsed.options),
            answer=parsed.answer,
            source=SOURCE_GENERATED,
            domain_tag=target.domain_tag,
        )
    else:
        example = McqExample(
            id=gen_id,
            question=parsed.question,
            options=list(target.options),
            answer=parsed.answer,
            source=SOURCE_GENERATED,
            domain_tag=target.domain_tag,
        )
    example.validate()
    return example


def _run_slot(
    slot_index: int,
    task_kind: str,
    strategy_tag: str,
    target: TargetMember,
    demo_members: list[PoolMember],
    cfg: AugmentConfig,
    llm: LlmBackend,
    params: GenerationParams,
) -> AugmentedSample | SkippedSlot:
    """One generation slot: seeded demo draw, render, complete, parse. Parse or
    validation failures redraw demonstrations up to the retry budget."""
    rng = random.Random(derive_seed(cfg.rng_seed, "slot", slot_index))
    kind = template_kind_for_slot(task_kind, slot_index)
    expected = cfg.demo_count if cfg.demo_count > 0 else 3
    last_digest = ""
    last_detail = "no attempts made"
    for _attempt in range(cfg.max_parse_retries_per_slot + 1):
        drawn = rng.sample(demo_members, cfg.demo_count) if cfg.demo_count else []
        demos = [member.demonstration for member in drawn]
        payload = list(target.options) if kind == KIND_MMLU_V2 else target.text
        prompt = render_augmentation_prompt(kind, demos, payload, expected_demo_count=expected)
        last_digest = prompt.digest
        record = llm.complete(prompt, params)
        try:
            parsed = parse_generation(kind, record.raw_text)
            example = _build_example(kind, slot_index, target, parsed)
        except (ParseError, CorpusError) as exc:
            last_detail = str(exc)
            continue
        return AugmentedSample(
            example=example,
            strategy=strategy_tag,
            target_context_source=target.source_id,
            demonstration_ids=[member.source_id for member in drawn],
            prompt_digest=prompt.digest,
            raw_generation=record.raw_text,
        )
    return SkippedSlot(slot_index, last_digest, SKIP_REASON, last_detail)


def _collect_parallel(work, slot_count: int, in_flight_limit: int):
    """Run slots under a bounded thread pool; results keyed by slot index so
    ordering never depends on completion order. Ctrl-C drains what finished."""
    results: dict[int, AugmentedSample | SkippedSlot] = {}
    executor = ThreadPoolExecutor(max_workers=in_flight_limit)
    try:
        pending = {}
        next_slot = 0
        # Submit in bounded waves so Ctrl-C never strands a deep queue.
        while next_slot < slot_count or pending:
            while next_slot < slot_count and len(pending) < in_flight_limit * 2:
                future = executor.submit(work, next_slot)
                pending[future] = next_slot
                next_slot += 1
            done, _ = wait(list(pending), return_when=FIRST_COMPLETED)
            for future in done:
                slot = pending.pop(future)
                results[slot] = future.result()
    except KeyboardInterrupt:
        executor.shutdown(wait=False, cancel_futures=True)
        raise _interrupted(results, slot_count)
    finally:
        executor.shutdown(wait=True)
    return results


def _interrupted(results, slot_count: int) -> AugmentationInterrupted:
    samples = [r for _, r in sorted(results.items()) if isinstance(r, AugmentedSample)]
    skipped = [r for _, r in sorted(results.items()) if isinstance(r, SkippedSlot)]
    return AugmentationInterrupted(samples, skipped, slot_count)


def _finish(results, slot_count, demo_pool, target_pool, cfg) -> AugmentationResult:
    samples = [r for _, r in sorted(results.items()) if isinstance(r, AugmentedSample)]
    skipped = [r for _, r in sorted(results.items()) if isinstance(r, SkippedSlot)]
    if len(skipped) > SKIP_BUDGET_FRACTION * slot_count:
        raise AugmentError(
            f"aborting: {len(skipped)} of {slot_count} slots skipped "
            f"(> {SKIP_BUDGET_FRACTION:.0%} budget); first failure: "
            f"{skipped[0].detail}"
        )
    return AugmentationResult(
        samples=samples,
        skipped=skipped,
        slot_count=slot_count,
        demonstration_pool=demo_pool,
        target_pool=target_pool,
        config=cfg,
    )


def run_augmentation(
    seed: SeedDataset,
    store: DataStore | None,
    cfg: AugmentConfig,
    llm: LlmBackend,
    params: GenerationParams | None = None,
    embedding_provider=None,
    test_inputs: list[TestInput] | None = None,
) -> AugmentationResult:
    """Generate multiplier_m samples per seed example (per test input in
    test-time mode), with full provenance and deterministic per-slot RNG."""
    params = params or GenerationParams()
    if cfg.strategy == STRATEGY_RADA_TEST_TIME:
        if not test_inputs:
            raise AugmentError("rada_test_time needs test inputs")
        slot_count = cfg.multiplier_m * len(test_inputs)
    else:
        if seed.size_n < 1:
            raise AugmentError("training-time augmentation needs at least one seed example")
        slot_count = cfg.multiplier_m * seed.size_n

    demo_retriever = None
    target_retriever = None
    needs_retrieval = cfg.strategy != STRATEGY_SEED_ONLY and cfg.k_retrieval > 0
    if needs_retrieval:
        if store is None or len(store) == 0:
            raise AugmentError(f"strategy {cfg.strategy!r} needs a non-empty store")
        if cfg.strategy != STRATEGY_RADA_TEST_TIME and cfg.demo_count > 0:
            demo_entries = _demo_eligible(store, seed.task_kind)
            if not demo_entries:
                raise AugmentError("store has no complete entries to use as demonstrations")
            demo_retriever = _make_retriever(
                cfg, store, demo_entries, FIELD_QUESTION, embedding_provider
            )
        target_entries = _target_eligible(store, seed.task_kind)
        if not target_entries:
            raise AugmentError("store has no entries usable as target contexts")
        target_field = FIELD_QUESTION if seed.task_kind == TASK_MCQ else FIELD_CONTEXT
        target_retriever = _make_retriever(
            cfg, store, target_entries, target_field, embedding_provider
        )

    demo_pool = build_demonstration_pool(seed, store, demo_retriever, cfg)
    target_pool = build_target_pool(seed, store, target_retriever, cfg, test_inputs)
    if cfg.demo_count > len(demo_pool.members):
        raise AugmentError(
            f"demo_count={cfg.demo_count} exceeds pool size {len(demo_pool.members)}"
        )

    assignment = assign_targets(len(target_pool.members), slot_count, cfg.rng_seed)
    targets = [target_pool.members[i] for i in assignment]

    def work(slot_index: int):
        return _run_slot(
            slot_index,
            seed.task_kind,
            cfg.strategy,
            targets[slot_index],
            demo_pool.members,
            cfg,
            llm,
            params,
        )

    if cfg.in_flight_limit > 1:
        results = _collect_parallel(work, slot_count, cfg.in_flight_limit)
    else:
        results = {}
        try:
            for slot_index in range(slot_count):
                results[slot_index] = work(slot_index)
        except KeyboardInterrupt:
            raise _interrupted(results, slot_count)
    return _finish(results, slot_count, demo_pool, target_pool, cfg)


def run_self_instruct_baseline(
    seed: SeedDataset,
    cfg: AugmentConfig,
    llm: LlmBackend,
    params: GenerationParams | None = None,
) -> AugmentationResult:
    """Iterative baseline without a store: demonstrations and targets are drawn
    from a pool that starts as the seed set and absorbs each parsed generation,
    so later rounds condition on earlier output."""
    params = params or GenerationParams()
    if seed.size_n < 1:
        raise AugmentError("self-instruct needs at least one seed example")
    if cfg.demo_count < 1:
        raise AugmentError("self-instruct needs demo_count >= 1")
    if cfg.demo_count > seed.size_n:
        raise AugmentError(
            f"demo_count={cfg.demo_count} exceeds initial pool size {seed.size_n}"
        )

    pool = [PoolMember(ex.id, demo_from_example(ex), ORIGIN_SEED) for ex in seed.examples]
    targets_seen: list[TargetMember] = [_target_member_from_example(ex) for ex in seed.examples]
    slot_count = cfg.multiplier_m * seed.size_n
    results: dict[int, AugmentedSample | SkippedSlot] = {}
    try:
        for slot_index in range(slot_count):
            # Separate stream from the in-slot demo draws.
            target_rng = random.Random(derive_seed(cfg.rng_seed, "si-target", slot_index))
            target = targets_seen[target_rng.randrange(len(targets_seen))]
            outcome = _run_slot(
                slot_index,
                seed.task_kind,
                SELF_INSTRUCT_TAG,
                target,
                pool,
                cfg,
                llm,
                params,
            )
            results[slot_index] = outcome
            if isinstance(outcome, AugmentedSample):
                generated = outcome.example
                pool.append(
                    PoolMember(generated.id, demo_from_example(generated), ORIGIN_GENERATED)
                )
                targets_seen.append(
                    _target_member_from_example(generated, origin=ORIGIN_GENERATED)
                )
    except KeyboardInterrupt:
        raise _interrupted(results, slot_count)
    return _finish(
        results,
        slot_count,
        DemonstrationPool(pool),
        TargetPool(targets_seen),
        cfg,
    )
