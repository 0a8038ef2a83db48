"""Retrieval-augmented data augmentation: grow a small seed dataset by
retrieving related instances from an external data store, prompting an LLM
with retrieved demonstrations and target contexts, and filtering the output
into a training-ready augmented dataset."""

from .augment import (
    AugmentConfig,
    AugmentError,
    AugmentationResult,
    run_augmentation,
    run_self_instruct_baseline,
)
from .corpus import (
    AugmentedSample,
    CorpusError,
    DataStore,
    McqExample,
    QaExample,
    SeedDataset,
    StoreEntry,
    TestInput,
    load_seed,
    load_store,
    load_test_inputs,
    read_augmented,
    write_augmented,
)
from .llmclient import (
    GenerationParams,
    HttpChatBackend,
    LlmError,
    MockLlmBackend,
)
from .quality import (
    DiversityReport,
    FilterConfig,
    diversity_report,
    embedding_dedup_filter,
    exact_match,
    mcq_accuracy,
    rouge_dedup_filter,
    rouge_l,
    span_filter,
    squad_f1,
)
from .retrieval import (
    HashedBowEmbedder,
    HttpEmbeddingProvider,
    build_embedding_index,
    build_lexical_index,
    embedding_topk,
    lexical_topk,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentConfig",
    "AugmentError",
    "AugmentationResult",
    "AugmentedSample",
    "CorpusError",
    "DataStore",
    "DiversityReport",
    "FilterConfig",
    "GenerationParams",
    "HashedBowEmbedder",
    "HttpChatBackend",
    "HttpEmbeddingProvider",
    "LlmError",
    "McqExample",
    "MockLlmBackend",
    "QaExample",
    "SeedDataset",
    "StoreEntry",
    "TestInput",
    "build_embedding_index",
    "build_lexical_index",
    "diversity_report",
    "embedding_dedup_filter",
    "embedding_topk",
    "exact_match",
    "lexical_topk",
    "load_seed",
    "load_store",
    "load_test_inputs",
    "mcq_accuracy",
    "read_augmented",
    "rouge_dedup_filter",
    "rouge_l",
    "run_augmentation",
    "run_self_instruct_baseline",
    "span_filter",
    "squad_f1",
    "write_augmented",
    "__version__",
]
