"""Prompt rendering and LLM-output parsing for the augmentation templates.

Layout is frozen and byte-exact against the golden files under tests/golden:
a three-line instruction block, one blank line, then demonstration triplets
with single newlines between lines and no blank lines between triplets, ending
at the target line that elicits generation. Answer-inference prompts are
single-line.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

KIND_EXTRACTIVE_QA = "extractive_qa"
KIND_MMLU_V1 = "mmlu_v1"
KIND_MMLU_V2 = "mmlu_v2"
KIND_ANSWER_INFERENCE_QA = "answer_inference_qa"
KIND_ANSWER_INFERENCE_MMLU = "answer_inference_mmlu"

AUGMENTATION_KINDS = (KIND_EXTRACTIVE_QA, KIND_MMLU_V1, KIND_MMLU_V2)

QA_INSTRUCTION = (
    "I want you to act as a question and answer generator.\n"
    "Your goal is to create an extractive question-answer pair based on a given context.\n"
    "The answer to the question must be a specific span from the given context."
)

MMLU_V1_INSTRUCTION = (
    "I want you to act as an answer options and answer generator.\n"
    "Your goal is to create four answer options and the answer pair based on a given question.\n"
    "The answer must be one of the generated answer options."
)

MMLU_V2_INSTRUCTION = (
    "I want you to act as a question and answer generator.\n"
    "Your goal is to create an extractive question-answer pair based on the given answer options.\n"
    "The answer to the question must be selected from the given answer options."
)

INSTRUCTIONS = {
    KIND_EXTRACTIVE_QA: QA_INSTRUCTION,
    KIND_MMLU_V1: MMLU_V1_INSTRUCTION,
    KIND_MMLU_V2: MMLU_V2_INSTRUCTION,
}

OPTION_LETTERS = ("A", "B", "C", "D")


class PromptError(ValueError):
    pass


class ParseError(ValueError):
    pass


@dataclass
class Demonstration:
    """A complete labeled example placed in-context; fields depend on the task.

    Extractive QA uses (context, question, answer); MMLU uses
    (question, options, answer), rendered in v1 or v2 order.
    """

    answer: str
    context: str | None = None
    question: str | None = None
    options: list[str] | None = None


@dataclass
class RenderedPrompt:
    text: str
    template_kind: str
    digest: str


def content_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def format_options(options: list[str]) -> str:
    """Serialize four options onto one line: "A. <opt> B. <opt> C. <opt> D. <opt>"."""
    if len(options) != 4:
        raise PromptError(f"expected 4 options, got {len(options)}")
    return " ".join(f"{letter}. {opt}" for letter, opt in zip(OPTION_LETTERS, options))


def _require_text(value: str | None, what: str) -> str:
    if value is None or not value.strip():
        raise PromptError(f"missing or empty {what}")
    return value


def _demo_lines(kind: str, demo: Demonstration) -> list[str]:
    answer = _require_text(demo.answer, "demonstration answer")
    if kind == KIND_EXTRACTIVE_QA:
        return [
            f"Context: {_require_text(demo.context, 'demonstration context')}",
            f"Question: {_require_text(demo.question, 'demonstration question')}",
            f"Answer: {answer}",
        ]
    if demo.options is None:
        raise PromptError("MMLU demonstration requires options")
    options_line = format_options(demo.options)
    question = _require_text(demo.question, "demonstration question")
    if kind == KIND_MMLU_V1:
        return [f"Question: {question}", f"Answer Options: {options_line}", f"Answer: {answer}"]
    return [f"Answer Options: {options_line}", f"Question: {question}", f"Answer: {answer}"]


def render_augmentation_prompt(
    kind: str,
    demonstrations: list[Demonstration],
    target: str | list[str],
    expected_demo_count: int = 3,
) -> RenderedPrompt:
    """Render an augmentation prompt ending at the target's elicitation line.

    ``target`` is the target context text (extractive QA), the target question
    (MMLU v1), or the target options list (MMLU v2). The demonstration count
    must be 0 (test-time) or exactly ``expected_demo_count``.
    """
    if kind not in AUGMENTATION_KINDS:
        raise PromptError(f"unknown augmentation template kind {kind!r}")
    if len(demonstrations) not in (0, expected_demo_count):
        raise PromptError(
            f"expected 0 or {expected_demo_count} demonstrations, got {len(demonstrations)}"
        )

    if kind == KIND_MMLU_V2:
        if not isinstance(target, list):
            raise PromptError("MMLU v2 target must be an options list")
        target_line = f"Answer Options: {format_options(target)}"
    else:
        if isinstance(target, list):
            raise PromptError(f"{kind} target must be text, not a list")
        target_text = _require_text(target, "target")
        label = "Context" if kind == KIND_EXTRACTIVE_QA else "Question"
        target_line = f"{label}: {target_text}"

    body_lines: list[str] = []
    for demo in demonstrations:
        body_lines.extend(_demo_lines(kind, demo))
    body_lines.append(target_line)
    text = INSTRUCTIONS[kind] + "\n\n" + "\n".join(body_lines)
    return RenderedPrompt(text=text, template_kind=kind, digest=content_digest(text))


def render_answer_inference_prompt(kind: str, example) -> RenderedPrompt:
    """Render the single-line evaluation prompt used to elicit an answer."""
    if kind == KIND_ANSWER_INFERENCE_QA:
        context = _require_text(getattr(example, "context", None), "context")
        question = _require_text(getattr(example, "question", None), "question")
        text = f"Context: {context} Question: {question} Answer: "
    elif kind == KIND_ANSWER_INFERENCE_MMLU:
        question = _require_text(getattr(example, "question", None), "question")
        options = getattr(example, "options", None)
        if not options:
            raise PromptError("missing options")
        text = f"Question: {question} Answer Options: {format_options(list(options))} Answer:"
    else:
        raise PromptError(f"unknown answer-inference kind {kind!r}")
    return RenderedPrompt(text=text, template_kind=kind, digest=content_digest(text))


@dataclass
class ParsedGeneration:
    """Structured fields recovered from one LLM completion."""

    answer: str
    question: str | None = None
    options: list[str] | None = None


_LABEL_RE = re.compile(r"\b(answer options|question|answer)\s*:", re.IGNORECASE)

_OPTIONS_SPLIT_RE = re.compile(
    r"^\s*A[.)]\s*(.+?)\s+B[.)]\s*(.+?)\s+C[.)]\s*(.+?)\s+D[.)]\s*(.+?)\s*$",
    re.DOTALL,
)


def split_options(text: str) -> list[str]:
    """Split an "A. ... B. ... C. ... D. ..." line back into four option texts."""
    match = _OPTIONS_SPLIT_RE.match(text)
    if not match:
        raise ParseError(f"could not split options from {text!r}")
    options = [g.strip() for g in match.groups()]
    if any(not o for o in options):
        raise ParseError(f"empty option in {text!r}")
    return options


def _labeled_fields(raw: str) -> dict[str, str]:
    """Map each label (first occurrence) to its value, captured up to the next label."""
    matches = list(_LABEL_RE.finditer(raw))
    fields: dict[str, str] = {}
    for i, match in enumerate(matches):
        label = match.group(1).lower()
        end = matches[i + 1].start() if i + 1 < len(matches) else len(raw)
        if label not in fields:
            fields[label] = raw[match.end() : end].strip()
    return fields


def parse_generation(kind: str, raw: str) -> ParsedGeneration:
    """Parse an augmentation completion back into structured fields.

    Labels are matched case-insensitively; values run until the next label or
    end of text. Missing labels, empty values, and malformed option lists all
    raise :class:`ParseError`.
    """
    if kind not in AUGMENTATION_KINDS:
        raise ParseError(f"unknown augmentation template kind {kind!r}")
    if not raw.strip():
        raise ParseError("empty generation")
    fields = _labeled_fields(raw)

    def need(label: str) -> str:
        if label not in fields:
            raise ParseError(f"missing {label.title()!r} label in generation")
        value = fields[label]
        if not value:
            raise ParseError(f"empty value for {label.title()!r} label")
        return value

    if kind == KIND_MMLU_V1:
        options = split_options(need("answer options"))
        return ParsedGeneration(answer=need("answer"), options=options)
    return ParsedGeneration(answer=need("answer"), question=need("question"))


def format_qa_pair(question: str, answer: str) -> str:
    """Canonical serialization of a parsed pair; inverse of parse for label-free values."""
    return f"Question: {question}\nAnswer: {answer}"
