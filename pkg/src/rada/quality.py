"""Quality control for generated samples: the answer-span filter, greedy
near-duplicate filters (lexical and embedding), evaluation metrics, and the
diversity report comparing generated samples against the seed set.
"""

from __future__ import annotations

import csv
import re
import statistics
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corpus import AugmentedSample, Example, McqExample, QaExample
from .promptgen import OPTION_LETTERS
from .retrieval import tokenize

NORMALIZATION_STRICT = "strict"
NORMALIZATION_RELAXED = "relaxed"
NORMALIZATION_MODES = (NORMALIZATION_STRICT, NORMALIZATION_RELAXED)

TEXT_UNIT_QUESTION_ANSWER = "question_answer"
TEXT_UNIT_QUESTION = "question"
TEXT_UNITS = (TEXT_UNIT_QUESTION_ANSWER, TEXT_UNIT_QUESTION)

# Stable rejection reason codes, shared across filters and slot bookkeeping.
REASON_NOT_A_SPAN = "not-a-span"
REASON_ROUGE_DUP = "rouge-dup"
REASON_EMBEDDING_DUP = "embedding-dup"
REASON_PARSE_SKIP = "parse-skip"

# Documented threshold values used when a dedup filter is switched on without
# an explicit setting; both filters are off by default.
DEFAULT_ROUGE_DEDUP_THRESHOLD = 0.7
DEFAULT_EMBEDDING_DEDUP_THRESHOLD = 0.9

HISTOGRAM_BIN_WIDTH = 0.05
HISTOGRAM_BIN_COUNT = 20

_ARTICLE_RE = re.compile(r"\b(a|an|the)\b")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)
_OPTION_LETTER_RE = re.compile(r"^\s*([A-D])(?:[.):\s]|$)")


@dataclass
class FilterConfig:
    enable_span_filter: bool = True
    rouge_dedup_threshold: float | None = None
    embedding_dedup_threshold: float | None = None
    normalization: str = NORMALIZATION_STRICT

    def __post_init__(self):
        for name, value in (
            ("rouge_dedup_threshold", self.rouge_dedup_threshold),
            ("embedding_dedup_threshold", self.embedding_dedup_threshold),
        ):
            if value is not None and not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        if self.normalization not in NORMALIZATION_MODES:
            raise ValueError(f"unknown normalization {self.normalization!r}")

    def to_dict(self) -> dict:
        return {
            "enable_span_filter": self.enable_span_filter,
            "rouge_dedup_threshold": self.rouge_dedup_threshold,
            "embedding_dedup_threshold": self.embedding_dedup_threshold,
            "normalization": self.normalization,
        }


@dataclass
class RejectedSample:
    sample: AugmentedSample
    reason: str


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, start=1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate: str, reference: str) -> tuple[float, float, float]:
    """LCS-based scores over lowercase word tokens: (precision, recall, F)."""
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return (0.0, 0.0, 0.0)
    lcs = _lcs_length(cand, ref)
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    if precision + recall == 0.0:
        return (precision, recall, 0.0)
    f_score = 2 * precision * recall / (precision + recall)
    return (precision, recall, f_score)


def normalize_answer(text: str) -> str:
    """Lowercase, drop punctuation, drop articles, collapse whitespace."""
    text = text.lower().translate(_PUNCT_TABLE)
    text = _ARTICLE_RE.sub(" ", text)
    return " ".join(text.split())


def squad_f1(prediction: str, gold: str) -> float:
    """Token-overlap F1 between normalized answer strings."""
    pred_tokens = normalize_answer(prediction).split()
    gold_tokens = normalize_answer(gold).split()
    if not pred_tokens or not gold_tokens:
        return 1.0 if pred_tokens == gold_tokens else 0.0
    common = 0
    gold_counts: dict[str, int] = {}
    for token in gold_tokens:
        gold_counts[token] = gold_counts.get(token, 0) + 1
    for token in pred_tokens:
        if gold_counts.get(token, 0) > 0:
            gold_counts[token] -= 1
            common += 1
    if common == 0:
        return 0.0
    precision = common / len(pred_tokens)
    recall = common / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def exact_match(prediction: str, gold: str) -> float:
    return 1.0 if normalize_answer(prediction) == normalize_answer(gold) else 0.0


def _collapse_fold(text: str) -> str:
    return " ".join(text.split()).casefold()


def _prediction_matches_mcq(prediction: str, gold: McqExample) -> bool:
    if _collapse_fold(prediction) == _collapse_fold(gold.answer):
        return True
    match = _OPTION_LETTER_RE.match(prediction)
    if not match:
        return False
    gold_letter = None
    for letter, option in zip(OPTION_LETTERS, gold.options):
        if option.strip() == gold.answer.strip():
            gold_letter = letter
            break
    return match.group(1) == gold_letter


def mcq_accuracy(predictions: list[str], golds: list[McqExample]) -> float:
    if len(predictions) != len(golds):
        raise ValueError(
            f"got {len(predictions)} predictions for {len(golds)} gold examples"
        )
    if not golds:
        raise ValueError("cannot score an empty prediction list")
    correct = sum(
        1 for pred, gold in zip(predictions, golds) if _prediction_matches_mcq(pred, gold)
    )
    return correct / len(golds)


def span_filter(
    samples: list[AugmentedSample], cfg: FilterConfig
) -> tuple[list[AugmentedSample], list[RejectedSample]]:
    """Keep a sample iff its answer is a contiguous substring of its context
    after case folding and whitespace collapsing. Relaxed mode disables the
    check entirely and keeps everything."""
    if cfg.normalization == NORMALIZATION_RELAXED or not cfg.enable_span_filter:
        return list(samples), []
    kept: list[AugmentedSample] = []
    rejected: list[RejectedSample] = []
    for sample in samples:
        example = sample.example
        if not isinstance(example, QaExample):
            raise ValueError(
                f"span filter applies to extractive QA samples, got id {example.id!r}"
            )
        if _collapse_fold(example.answer) in _collapse_fold(example.context):
            kept.append(sample)
        else:
            rejected.append(RejectedSample(sample, REASON_NOT_A_SPAN))
    return kept, rejected


def unit_text(example: Example, text_unit: str = TEXT_UNIT_QUESTION_ANSWER) -> str:
    if text_unit not in TEXT_UNITS:
        raise ValueError(f"unknown text_unit {text_unit!r}")
    if text_unit == TEXT_UNIT_QUESTION:
        return example.question
    return f"{example.question} {example.answer}"


def rouge_dedup_filter(
    samples: list[AugmentedSample],
    threshold: float,
    text_unit: str = TEXT_UNIT_QUESTION_ANSWER,
) -> tuple[list[AugmentedSample], list[RejectedSample]]:
    """Greedy streaming pass in sample order: reject a sample whose max
    ROUGE-L F against any already-kept sample reaches the threshold."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    kept: list[AugmentedSample] = []
    kept_texts: list[str] = []
    rejected: list[RejectedSample] = []
    for sample in samples:
        text = unit_text(sample.example, text_unit)
        duplicate = any(
            rouge_l(text, prior)[2] >= threshold for prior in kept_texts
        )
        if duplicate:
            rejected.append(RejectedSample(sample, REASON_ROUGE_DUP))
        else:
            kept.append(sample)
            kept_texts.append(text)
    return kept, rejected


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return float(np.dot(u, v)) / (norm_u * norm_v)


def embedding_dedup_filter(
    samples: list[AugmentedSample],
    provider,
    threshold: float,
) -> tuple[list[AugmentedSample], list[RejectedSample]]:
    """Same greedy streaming rule as the lexical dedup, under cosine similarity
    of question-text embeddings."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    if not samples:
        return [], []
    vectors = np.asarray(
        provider.embed([sample.example.question for sample in samples]), dtype=np.float64
    )
    kept: list[AugmentedSample] = []
    kept_indices: list[int] = []
    rejected: list[RejectedSample] = []
    for pos, sample in enumerate(samples):
        duplicate = any(
            _cosine(vectors[pos], vectors[prior]) >= threshold for prior in kept_indices
        )
        if duplicate:
            rejected.append(RejectedSample(sample, REASON_EMBEDDING_DUP))
        else:
            kept.append(sample)
            kept_indices.append(pos)
    return kept, rejected


@dataclass
class DiversityReport:
    text_unit: str
    per_sample_max_rouge: list[tuple[str, float]]
    histogram: list[int]
    mean: float
    median: float
    stddev: float
    domain_tally: dict[str, int] = field(default_factory=dict)
    embedding_export_path: str | None = None

    def to_dict(self) -> dict:
        return {
            "text_unit": self.text_unit,
            "sample_count": len(self.per_sample_max_rouge),
            "summary": {
                "mean_max_rouge": self.mean,
                "median_max_rouge": self.median,
                "stddev_max_rouge": self.stddev,
            },
            "histogram": {
                "bin_width": HISTOGRAM_BIN_WIDTH,
                "counts": list(self.histogram),
            },
            "per_sample_max_rouge": [
                [sample_id, value] for sample_id, value in self.per_sample_max_rouge
            ],
            "domain_tally": dict(self.domain_tally),
            "embedding_export_path": self.embedding_export_path,
        }


def histogram_bin(value: float) -> int:
    # Values land in [0, 1]; 1.0 folds into the final bin.
    return min(int(value / HISTOGRAM_BIN_WIDTH), HISTOGRAM_BIN_COUNT - 1)


def _max_rouge_against(text: str, references: list[str]) -> float:
    return max(rouge_l(text, ref)[2] for ref in references)


def diversity_report(
    seed_examples: list[Example],
    samples: list[AugmentedSample],
    provider=None,
    embedding_export_path=None,
    text_unit: str = TEXT_UNIT_QUESTION_ANSWER,
    max_workers: int = 1,
) -> DiversityReport:
    """Per-sample max ROUGE-L F of each generated sample against every seed
    example, summarized as a fixed-width histogram plus mean/median/stddev.
    The F measure is the reported value. Domain tags carried by the generated
    examples are tallied; with an embedding provider, seed and generated
    vectors are exported as CSV for external projection."""
    if not seed_examples:
        raise ValueError("diversity report needs a non-empty seed set")
    if provider is not None and embedding_export_path is None:
        raise ValueError("an embedding provider needs an export path")

    seed_texts = [unit_text(example, text_unit) for example in seed_examples]
    sample_texts = [unit_text(sample.example, text_unit) for sample in samples]

    if max_workers > 1 and sample_texts:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            values = list(
                executor.map(lambda text: _max_rouge_against(text, seed_texts), sample_texts)
            )
    else:
        values = [_max_rouge_against(text, seed_texts) for text in sample_texts]

    per_sample = [
        (sample.example.id, value) for sample, value in zip(samples, values)
    ]
    histogram = [0] * HISTOGRAM_BIN_COUNT
    for value in values:
        histogram[histogram_bin(value)] += 1

    mean = statistics.fmean(values) if values else 0.0
    median = statistics.median(values) if values else 0.0
    stddev = statistics.pstdev(values) if values else 0.0

    domain_tally: dict[str, int] = {}
    for sample in samples:
        tag = sample.example.domain_tag or "untagged"
        domain_tally[tag] = domain_tally.get(tag, 0) + 1

    export_path = None
    if provider is not None:
        export_path = str(embedding_export_path)
        _export_embeddings(
            seed_examples, samples, provider, export_path, text_unit
        )

    return DiversityReport(
        text_unit=text_unit,
        per_sample_max_rouge=per_sample,
        histogram=histogram,
        mean=mean,
        median=median,
        stddev=stddev,
        domain_tally=domain_tally,
        embedding_export_path=export_path,
    )


def _export_embeddings(seed_examples, samples, provider, path, text_unit) -> None:
    texts = [unit_text(example, text_unit) for example in seed_examples]
    texts += [unit_text(sample.example, text_unit) for sample in samples]
    rows: list[tuple[str, str]] = [("seed", example.id) for example in seed_examples]
    rows += [
        (f"generated-{sample.strategy}", sample.example.id) for sample in samples
    ]
    vectors = provider.embed(texts)
    if len(vectors) != len(rows):
        raise ValueError(
            f"provider returned {len(vectors)} vectors for {len(rows)} texts"
        )
    dim = len(vectors[0]) if len(vectors) else 0
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", "origin"] + [f"v{i}" for i in range(dim)])
        for (origin, row_id), vector in zip(rows, vectors):
            writer.writerow([row_id, origin] + [repr(float(x)) for x in vector])
