"""Run manifests: a JSON record of everything needed to reproduce a run.

The manifest is written with status "running" before the first LLM call and
finalized afterwards. Under a deterministic backend the timestamps are omitted
so that identical configurations produce byte-identical manifests.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .promptgen import INSTRUCTIONS, content_digest

STATUS_RUNNING = "running"
STATUS_COMPLETE = "complete"
STATUS_INCOMPLETE = "incomplete"


def fingerprint_file(path) -> dict:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return {"name": os.path.basename(str(path)), "sha256": digest.hexdigest()}


def instruction_digests() -> dict[str, str]:
    return {kind: content_digest(text) for kind, text in sorted(INSTRUCTIONS.items())}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    command: str
    config: dict
    inputs: list[dict]
    backend: dict
    deterministic: bool
    template_digests: dict[str, str] = field(default_factory=instruction_digests)
    outputs: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    status: str = STATUS_RUNNING
    started_at: str | None = None
    finished_at: str | None = None

    @classmethod
    def start(cls, command: str, config: dict, input_paths: list, backend) -> RunManifest:
        deterministic = bool(getattr(backend, "deterministic", False))
        manifest = cls(
            command=command,
            config=dict(config),
            inputs=[fingerprint_file(path) for path in input_paths],
            backend=backend.identity(),
            deterministic=deterministic,
        )
        if not deterministic:
            manifest.started_at = _now()
        return manifest

    def finalize(self, status: str, outputs: list[str], stats: dict | None = None) -> None:
        self.status = status
        self.outputs = list(outputs)
        if stats is not None:
            self.stats = dict(stats)
        if not self.deterministic:
            self.finished_at = _now()

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "inputs": self.inputs,
            "template_digests": self.template_digests,
            "backend": self.backend,
            "deterministic": self.deterministic,
            "outputs": self.outputs,
            "stats": self.stats,
            "status": self.status,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    def write(self, path) -> None:
        text = json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text + "\n")


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)
