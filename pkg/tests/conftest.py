"""Shared fixture corpora.

The QA seed uses a field-medicine vocabulary (every context mentions fever).
``DISJOINT_STORE_RECORDS`` uses a machining/astronomy vocabulary that shares
no token with any seed text, which pins down strategy-separation behavior.
``DOMAIN_STORE_RECORDS`` mixes a seed-vocabulary-matched domain with a
disjoint one for the domain-breakdown checks.
"""

from __future__ import annotations

import json

import pytest

from rada.corpus import (
    DataStore,
    QaExample,
    SeedDataset,
    StoreEntry,
    TASK_EXTRACTIVE_QA,
    TASK_MCQ,
    load_seed,
    load_store,
    load_test_inputs,
)

SEED_QA_RECORDS = [
    {
        "id": "seed-00",
        "context": "coastal villages reported fever outbreaks after monsoon flooding",
        "question": "what did coastal villages report after monsoon flooding?",
        "answer": "fever outbreaks",
    },
    {
        "id": "seed-01",
        "context": "nurses tracked fever clusters across riverside wards",
        "question": "who tracked fever clusters across riverside wards?",
        "answer": "nurses",
    },
    {
        "id": "seed-02",
        "context": "clinics distributed vaccine doses during the fever season",
        "question": "what did clinics distribute during the fever season?",
        "answer": "vaccine doses",
    },
    {
        "id": "seed-03",
        "context": "herbal remedies calmed stubborn fever coughs in children",
        "question": "what calmed stubborn fever coughs in children?",
        "answer": "herbal remedies",
    },
    {
        "id": "seed-04",
        "context": "quarantine tents sheltered weary travelers with fever symptoms",
        "question": "what sheltered weary travelers with fever symptoms?",
        "answer": "quarantine tents",
    },
    {
        "id": "seed-05",
        "context": "sanitation crews cleaned shallow wells after the fever scare",
        "question": "who cleaned shallow wells after the fever scare?",
        "answer": "sanitation crews",
    },
    {
        "id": "seed-06",
        "context": "village elders approved mosquito nets for families during fever season",
        "question": "what did village elders approve for families?",
        "answer": "mosquito nets",
    },
    {
        "id": "seed-07",
        "context": "midwives recorded newborn fever visits in ledger books",
        "question": "where did midwives record newborn fever visits?",
        "answer": "ledger books",
    },
    {
        "id": "seed-08",
        "context": "weekly markets closed whenever fever spread among herders",
        "question": "when did weekly markets close?",
        "answer": "whenever fever spread among herders",
    },
    {
        "id": "seed-09",
        "context": "scouts mapped safer paths around flooded fever lowlands",
        "question": "what did scouts map around flooded fever lowlands?",
        "answer": "safer paths",
    },
]

DISJOINT_STORE_RECORDS = [
    {
        "id": "d0",
        "context": "turbines spin steadily inside sealed alloy casings",
        "question": "which parts spin steadily inside sealed alloy casings?",
        "answer": "turbines",
    },
    {
        "id": "d1",
        "context": "engineers calibrate torque gauges before every ignition test",
        "question": "which crew calibrates torque gauges?",
        "answer": "engineers",
    },
    {
        "id": "d2",
        "context": "telescopes capture faint starlight above chilly observatory domes",
        "question": "which instruments capture faint starlight?",
        "answer": "telescopes",
    },
    {
        "id": "d3",
        "context": "alloy ingots cool slowly atop foundry racks overnight",
        "question": "which items cool slowly atop foundry racks?",
        "answer": "alloy ingots",
    },
    {
        "id": "d4",
        "context": "pistons compress heated vapor within chrome cylinders",
        "question": "which parts compress heated vapor?",
        "answer": "pistons",
    },
    {
        "id": "d5",
        "context": "lasers etch serial codes onto polished gearbox housings",
        "question": "which marks do lasers etch onto gearbox housings?",
        "answer": "serial codes",
    },
    {
        "id": "d6",
        "context": "satellites relay weather signals between polar ground stations",
        "question": "which craft relay weather signals?",
        "answer": "satellites",
    },
    {
        "id": "d7",
        "context": "technicians grease noisy conveyor axles at midnight shifts",
        "question": "which workers grease noisy conveyor axles?",
        "answer": "technicians",
    },
]

DOMAIN_STORE_RECORDS = [
    {
        "id": "f0",
        "context": "nurses monitored fever charts beside crowded village clinics",
        "question": "who monitored fever charts beside village clinics?",
        "answer": "nurses",
        "domain_tag": "fieldwork",
    },
    {
        "id": "f1",
        "context": "vaccine caravans reached flooded villages during fever season",
        "question": "what reached flooded villages during fever season?",
        "answer": "vaccine caravans",
        "domain_tag": "fieldwork",
    },
    {
        "id": "f2",
        "context": "elders organized quarantine shelters for fever stricken families",
        "question": "who organized quarantine shelters?",
        "answer": "elders",
        "domain_tag": "fieldwork",
    },
    {
        "id": "f3",
        "context": "crews drained stagnant fever ponds near mosquito breeding wells",
        "question": "what did crews drain near mosquito breeding wells?",
        "answer": "stagnant fever ponds",
        "domain_tag": "fieldwork",
    },
    {
        "id": "f4",
        "context": "midwives carried vaccine doses toward riverside fever wards",
        "question": "who carried vaccine doses toward riverside fever wards?",
        "answer": "midwives",
        "domain_tag": "fieldwork",
    },
    {
        "id": "f5",
        "context": "herders reported mosquito swarms after monsoon fever warnings",
        "question": "who reported mosquito swarms?",
        "answer": "herders",
        "domain_tag": "fieldwork",
    },
    {
        "id": "c0",
        "context": "compilers inline tiny bytecode loops aggressively",
        "question": "which tools inline tiny bytecode loops?",
        "answer": "compilers",
        "domain_tag": "computing",
    },
    {
        "id": "c1",
        "context": "routers forward encrypted packets through mesh tunnels",
        "question": "which devices forward encrypted packets?",
        "answer": "routers",
        "domain_tag": "computing",
    },
    {
        "id": "c2",
        "context": "debuggers pause threads on breakpoint instructions",
        "question": "which tools pause threads?",
        "answer": "debuggers",
        "domain_tag": "computing",
    },
    {
        "id": "c3",
        "context": "caches evict stale pages using clock sweeps",
        "question": "which structures evict stale pages?",
        "answer": "caches",
        "domain_tag": "computing",
    },
    {
        "id": "c4",
        "context": "linkers resolve symbol references between object archives",
        "question": "which tools resolve symbol references?",
        "answer": "linkers",
        "domain_tag": "computing",
    },
    {
        "id": "c5",
        "context": "schedulers balance worker queues under bursty loads",
        "question": "which components balance worker queues?",
        "answer": "schedulers",
        "domain_tag": "computing",
    },
]

MCQ_SEED_RECORDS = [
    {
        "id": "mseed-0",
        "question": "which tide follows a new moon?",
        "options": ["spring tide", "neap tide", "slack tide", "ebb tide"],
        "answer": "spring tide",
    },
    {
        "id": "mseed-1",
        "question": "which layer sits directly above the mantle?",
        "options": ["inner core", "outer core", "crust", "lithosphere"],
        "answer": "crust",
    },
    {
        "id": "mseed-2",
        "question": "which cloud type brings steady drizzle?",
        "options": ["cirrus", "stratus", "cumulus", "lenticular"],
        "answer": "stratus",
    },
    {
        "id": "mseed-3",
        "question": "which current warms northern european coasts?",
        "options": ["gulf stream", "humboldt current", "kuroshio current", "canary current"],
        "answer": "gulf stream",
    },
]

MCQ_STORE_RECORDS = [
    {
        "id": "mq0",
        "question": "which tide shows the smallest range?",
        "options": ["spring tide", "neap tide", "storm tide", "king tide"],
        "answer": "neap tide",
    },
    {
        "id": "mq1",
        "question": "which rock forms from cooled lava?",
        "options": ["basalt", "limestone", "shale", "marble"],
        "answer": "basalt",
    },
    {
        "id": "mq2",
        "question": "which wind belt sits near the equator?",
        "options": ["doldrums", "trade winds", "westerlies", "polar easterlies"],
        "answer": "doldrums",
    },
    {
        "id": "mq3",
        "question": "which scale rates tornado damage?",
        "options": ["richter scale", "fujita scale", "beaufort scale", "mercalli scale"],
        "answer": "fujita scale",
    },
    {
        "id": "mq4",
        "question": "which gas traps the most heat per molecule?",
        "options": ["methane", "carbon dioxide", "nitrogen", "argon"],
        "answer": "methane",
    },
    {
        "id": "mq5",
        "question": "which zone hosts deep ocean vents?",
        "options": ["abyssal zone", "photic zone", "intertidal zone", "neritic zone"],
        "answer": "abyssal zone",
    },
]

TEST_INPUT_RECORDS = [
    {"id": "t0", "question": "which parts spin inside sealed casings?"},
    {"id": "t1", "question": "which instruments capture faint starlight?"},
    {"id": "t2", "question": "which items cool atop foundry racks?"},
    {"id": "t3", "question": "which craft relay weather signals?"},
]


def write_jsonl(path, records) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


@pytest.fixture
def qa_seed() -> SeedDataset:
    return SeedDataset(
        task_kind=TASK_EXTRACTIVE_QA,
        examples=[QaExample(**record) for record in SEED_QA_RECORDS],
    )


@pytest.fixture
def disjoint_store() -> DataStore:
    return _store_from(DISJOINT_STORE_RECORDS)


@pytest.fixture
def domain_store() -> DataStore:
    return _store_from(DOMAIN_STORE_RECORDS)


def _store_from(records) -> DataStore:
    entries = [StoreEntry(**record) for record in records]
    return DataStore.from_entries(entries)


@pytest.fixture
def workspace(tmp_path):
    """All fixture corpora written as JSONL files, for loader and CLI tests."""
    paths = {
        "seed": tmp_path / "seed.jsonl",
        "disjoint_store": tmp_path / "disjoint_store.jsonl",
        "domain_store": tmp_path / "domain_store.jsonl",
        "mcq_seed": tmp_path / "mcq_seed.jsonl",
        "mcq_store": tmp_path / "mcq_store.jsonl",
        "test_inputs": tmp_path / "test_inputs.jsonl",
        "root": tmp_path,
    }
    write_jsonl(paths["seed"], SEED_QA_RECORDS)
    write_jsonl(paths["disjoint_store"], DISJOINT_STORE_RECORDS)
    write_jsonl(paths["domain_store"], DOMAIN_STORE_RECORDS)
    write_jsonl(paths["mcq_seed"], MCQ_SEED_RECORDS)
    write_jsonl(paths["mcq_store"], MCQ_STORE_RECORDS)
    write_jsonl(paths["test_inputs"], TEST_INPUT_RECORDS)
    return paths


@pytest.fixture
def loaded_workspace(workspace):
    return {
        "seed": load_seed(workspace["seed"], TASK_EXTRACTIVE_QA),
        "disjoint_store": load_store([workspace["disjoint_store"]]),
        "domain_store": load_store([workspace["domain_store"]]),
        "mcq_seed": load_seed(workspace["mcq_seed"], TASK_MCQ),
        "mcq_store": load_store([workspace["mcq_store"]]),
        "test_inputs": load_test_inputs(workspace["test_inputs"]),
        "paths": workspace,
    }
