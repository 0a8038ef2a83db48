"""Data model and line-delimited IO for seed datasets, data stores, and augmented outputs.

All files are UTF-8 JSONL, one record per line. Record schemas:

* seed/store QA record: ``{"id", "context", "question", "answer", "domain_tag"?}``
  (store records may omit ``question``/``answer``; bare passages are valid entries)
* MCQ record: ``{"id", "question", "options", "answer"}`` with exactly 4 options
* test-input record: ``{"id", "question", "domain_tag"?}``
* augmented record: the example record plus
  ``{"strategy", "target_context_source", "demonstration_ids", "prompt_digest", "raw_generation"}``
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

TASK_EXTRACTIVE_QA = "extractive_qa"
TASK_MCQ = "mcq"
TASK_KINDS = (TASK_EXTRACTIVE_QA, TASK_MCQ)

SOURCE_SEED = "seed"
SOURCE_STORE = "store"
SOURCE_GENERATED = "generated"


class CorpusError(ValueError):
    """Schema or invariant violation in a dataset file.

    ``location`` carries "path:line" when the error is tied to a specific record.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _collapse_ws(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


@dataclass
class QaExample:
    """One labeled extractive-QA instance: a context passage, a question, and its answer."""

    id: str
    context: str
    question: str
    answer: str
    source: str = SOURCE_SEED
    domain_tag: str | None = None

    def validate(self) -> None:
        if not self.id:
            raise CorpusError("empty id")
        if not self.context.strip():
            raise CorpusError(f"example {self.id!r}: empty context")
        if not self.question.strip():
            raise CorpusError(f"example {self.id!r}: empty question")
        if not self.answer.strip():
            raise CorpusError(f"example {self.id!r}: empty answer")


@dataclass
class McqExample:
    """One multiple-choice instance with exactly four answer options."""

    id: str
    question: str
    options: list[str]
    answer: str
    source: str = SOURCE_SEED
    domain_tag: str | None = None

    def validate(self) -> None:
        if not self.id:
            raise CorpusError("empty id")
        if not self.question.strip():
            raise CorpusError(f"example {self.id!r}: empty question")
        if len(self.options) != 4:
            raise CorpusError(
                f"example {self.id!r}: expected 4 options, got {len(self.options)}"
            )
        normalized = [_collapse_ws(o) for o in self.options]
        if any(not o for o in normalized):
            raise CorpusError(f"example {self.id!r}: empty option")
        if len(set(normalized)) != 4:
            raise CorpusError(f"example {self.id!r}: duplicate options")
        matches = [o for o in self.options if o.strip() == self.answer.strip()]
        if len(matches) != 1:
            raise CorpusError(
                f"example {self.id!r}: answer must equal exactly one option"
            )


Example = QaExample | McqExample


@dataclass
class SeedDataset:
    """The small labeled dataset to be expanded; empty only in test-time mode."""

    task_kind: str
    examples: list[Example] = field(default_factory=list)

    @property
    def size_n(self) -> int:
        return len(self.examples)

    def ids(self) -> set[str]:
        return {ex.id for ex in self.examples}


@dataclass
class StoreEntry:
    """One entry of the external data store; question/answer/options may be absent.

    MCQ records are ingested with ``context`` set to the question text so that
    context-field indexing works uniformly across QA and MCQ stores.
    """

    id: str
    context: str
    question: str | None = None
    answer: str | None = None
    options: list[str] | None = None
    domain_tag: str | None = None

    def validate(self) -> None:
        if not self.id:
            raise CorpusError("empty id")
        if not self.context.strip():
            raise CorpusError(f"entry {self.id!r}: empty context")
        if self.answer is not None and self.question is None:
            raise CorpusError(
                f"entry {self.id!r}: answer present without a question"
            )
        if self.options is not None and len(self.options) != 4:
            raise CorpusError(
                f"entry {self.id!r}: expected 4 options, got {len(self.options)}"
            )

    def is_complete(self, task_kind: str) -> bool:
        """Whether the entry can serve as a full input-output demonstration."""
        if task_kind == TASK_MCQ:
            return (
                self.question is not None
                and self.answer is not None
                and self.options is not None
            )
        return self.question is not None and self.answer is not None


@dataclass
class DataStore:
    """Indexed pool of entries aggregated from external datasets."""

    entries: list[StoreEntry] = field(default_factory=list)
    index_of_ids: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_entries(cls, entries: list[StoreEntry]) -> DataStore:
        return cls(
            entries=list(entries),
            index_of_ids={entry.id: pos for pos, entry in enumerate(entries)},
        )

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, entry_id: str) -> StoreEntry | None:
        pos = self.index_of_ids.get(entry_id)
        return self.entries[pos] if pos is not None else None

    def complete_entries(self, task_kind: str) -> list[StoreEntry]:
        return [e for e in self.entries if e.is_complete(task_kind)]


@dataclass
class TestInput:
    """An unlabeled input used as a retrieval query in test-time augmentation."""

    id: str
    question: str
    domain_tag: str | None = None


@dataclass
class AugmentedSample:
    """A generated example plus full provenance of how it was produced."""

    example: Example
    strategy: str
    target_context_source: str
    demonstration_ids: list[str]
    prompt_digest: str
    raw_generation: str


def _read_lines(path: str | Path):
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"no such file: {path}")
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                record = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON ({exc.msg})", f"{path}:{line_no}")
            if not isinstance(record, dict):
                raise CorpusError("record is not an object", f"{path}:{line_no}")
            yield line_no, record


def _require(record: dict, key: str, location: str) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value.strip():
        raise CorpusError(f"missing or empty field {key!r}", location)
    return value


def _qa_from_record(record: dict, location: str, source: str) -> QaExample:
    example = QaExample(
        id=_require(record, "id", location),
        context=_require(record, "context", location),
        question=_require(record, "question", location),
        answer=_require(record, "answer", location),
        source=source,
        domain_tag=record.get("domain_tag"),
    )
    try:
        example.validate()
    except CorpusError as exc:
        raise CorpusError(str(exc), location)
    return example


def _mcq_from_record(record: dict, location: str, source: str) -> McqExample:
    options = record.get("options")
    if not isinstance(options, list):
        raise CorpusError("missing or non-array field 'options'", location)
    example = McqExample(
        id=_require(record, "id", location),
        question=_require(record, "question", location),
        options=[str(o) for o in options],
        answer=_require(record, "answer", location),
        source=source,
        domain_tag=record.get("domain_tag"),
    )
    try:
        example.validate()
    except CorpusError as exc:
        raise CorpusError(str(exc), location)
    return example


def load_seed(path: str | Path, task_kind: str, allow_empty: bool = False) -> SeedDataset:
    """Load and validate a seed dataset file.

    ``allow_empty`` permits zero records (test-time mode); otherwise an empty
    file is an error.
    """
    if task_kind not in TASK_KINDS:
        raise CorpusError(f"unknown task_kind {task_kind!r}")
    examples: list[Example] = []
    seen: dict[str, int] = {}
    for line_no, record in _read_lines(path):
        location = f"{Path(path)}:{line_no}"
        if task_kind == TASK_MCQ:
            example: Example = _mcq_from_record(record, location, SOURCE_SEED)
        else:
            example = _qa_from_record(record, location, SOURCE_SEED)
        if example.id in seen:
            raise CorpusError(
                f"duplicate id {example.id!r} (first seen on line {seen[example.id]})",
                location,
            )
        seen[example.id] = line_no
        examples.append(example)
    if not examples and not allow_empty:
        raise CorpusError(f"empty seed file in training mode: {path}")
    return SeedDataset(task_kind=task_kind, examples=examples)


def _store_entry_from_record(record: dict, location: str) -> StoreEntry:
    if "options" in record:
        # MCQ-style record: the question doubles as the indexable context text.
        question = _require(record, "question", location)
        options = record.get("options")
        if not isinstance(options, list):
            raise CorpusError("non-array field 'options'", location)
        entry = StoreEntry(
            id=_require(record, "id", location),
            context=question,
            question=question,
            answer=record.get("answer"),
            options=[str(o) for o in options],
            domain_tag=record.get("domain_tag"),
        )
    else:
        entry = StoreEntry(
            id=_require(record, "id", location),
            context=_require(record, "context", location),
            question=record.get("question"),
            answer=record.get("answer"),
            domain_tag=record.get("domain_tag"),
        )
    try:
        entry.validate()
    except CorpusError as exc:
        raise CorpusError(str(exc), location)
    return entry


def load_store(
    paths: list[str | Path], namespaces: list[str] | None = None
) -> DataStore:
    """Load a data store from one or more files, namespacing ids per file.

    Entry ids become ``"<namespace>::<original-id>"`` where the namespace
    defaults to the file stem; pass ``namespaces`` to override (needed when two
    files share a stem).
    """
    if not paths:
        raise CorpusError("load_store requires at least one path")
    if namespaces is not None and len(namespaces) != len(paths):
        raise CorpusError("namespaces must align one-to-one with paths")
    entries: list[StoreEntry] = []
    index: dict[str, int] = {}
    for file_no, path in enumerate(paths):
        namespace = namespaces[file_no] if namespaces else Path(path).stem
        for line_no, record in _read_lines(path):
            location = f"{Path(path)}:{line_no}"
            entry = _store_entry_from_record(record, location)
            entry.id = f"{namespace}::{entry.id}"
            if entry.id in index:
                raise CorpusError(f"id collision after namespacing: {entry.id!r}", location)
            index[entry.id] = len(entries)
            entries.append(entry)
    if not entries:
        raise CorpusError("no readable store entries in any input file")
    return DataStore(entries=entries, index_of_ids=index)


def load_test_inputs(path: str | Path) -> list[TestInput]:
    """Load unlabeled test inputs (retrieval queries for test-time augmentation)."""
    inputs: list[TestInput] = []
    seen: set[str] = set()
    for line_no, record in _read_lines(path):
        location = f"{Path(path)}:{line_no}"
        test_input = TestInput(
            id=_require(record, "id", location),
            question=_require(record, "question", location),
            domain_tag=record.get("domain_tag"),
        )
        if test_input.id in seen:
            raise CorpusError(f"duplicate id {test_input.id!r}", location)
        seen.add(test_input.id)
        inputs.append(test_input)
    if not inputs:
        raise CorpusError(f"empty test-inputs file: {path}")
    return inputs


def _example_to_record(example: Example) -> dict:
    if isinstance(example, McqExample):
        record: dict = {
            "id": example.id,
            "question": example.question,
            "options": list(example.options),
            "answer": example.answer,
        }
    else:
        record = {
            "id": example.id,
            "context": example.context,
            "question": example.question,
            "answer": example.answer,
        }
    if example.domain_tag is not None:
        record["domain_tag"] = example.domain_tag
    return record


def augmented_to_record(sample: AugmentedSample) -> dict:
    record = _example_to_record(sample.example)
    record["strategy"] = sample.strategy
    record["target_context_source"] = sample.target_context_source
    record["demonstration_ids"] = list(sample.demonstration_ids)
    record["prompt_digest"] = sample.prompt_digest
    record["raw_generation"] = sample.raw_generation
    return record


def write_augmented(samples: list[AugmentedSample], path: str | Path) -> None:
    """Write augmented samples as JSONL with full provenance, one per line."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for sample in samples:
            handle.write(json.dumps(augmented_to_record(sample), ensure_ascii=False))
            handle.write("\n")


def read_augmented(path: str | Path, task_kind: str) -> list[AugmentedSample]:
    """Reload an augmented file; inverse of :func:`write_augmented`."""
    if task_kind not in TASK_KINDS:
        raise CorpusError(f"unknown task_kind {task_kind!r}")
    samples: list[AugmentedSample] = []
    for line_no, record in _read_lines(path):
        location = f"{Path(path)}:{line_no}"
        if task_kind == TASK_MCQ:
            example: Example = _mcq_from_record(record, location, SOURCE_GENERATED)
        else:
            example = _qa_from_record(record, location, SOURCE_GENERATED)
        for key in ("strategy", "target_context_source", "prompt_digest", "raw_generation"):
            if key not in record:
                raise CorpusError(f"missing provenance field {key!r}", location)
        demonstration_ids = record.get("demonstration_ids")
        if not isinstance(demonstration_ids, list):
            raise CorpusError("missing or non-array field 'demonstration_ids'", location)
        samples.append(
            AugmentedSample(
                example=example,
                strategy=record["strategy"],
                target_context_source=record["target_context_source"],
                demonstration_ids=[str(d) for d in demonstration_ids],
                prompt_digest=record["prompt_digest"],
                raw_generation=record["raw_generation"],
            )
        )
    return samples
