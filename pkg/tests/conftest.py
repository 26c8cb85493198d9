import socket

import pytest

from tkgqa.kg import Fact, TemporalKG, serialize_facts, unify
from tkgqa.timeline import check_granularity


def make_kg(rows, granularity="year"):
    """Build a unified TemporalKG from (subject, predicate, object, start, end)
    tuples whose times are already unit counts (or None for missing)."""
    check_granularity(granularity)
    entity_ids, relation_ids = {}, {}

    def intern(table, name):
        return table.setdefault(name, len(table))

    facts = []
    for row_id, (subj, pred, obj, start, end) in enumerate(rows):
        interval = None if start is None and end is None else (start, end)
        facts.append(
            Fact(
                id=row_id,
                subject=intern(entity_ids, subj),
                predicate=intern(relation_ids, pred),
                object=intern(entity_ids, obj),
                interval=interval,
            )
        )
    kg = TemporalKG(
        facts=tuple(facts),
        entity_names=tuple(entity_ids),
        relation_names=tuple(relation_ids),
        entity_index={},
        granularity=granularity,
    )
    return unify(kg)


@pytest.fixture
def presidents_kg():
    """Year-granularity toy graph used by the worked spot checks."""
    return make_kg(
        [
            ("Obama", "educated at", "Harvard", 1988, 1991),
            ("Bush", "educated at", "Yale", 1964, 1968),
            ("Obama", "educated at", "Indonesia", 1967, 1971),
            ("Bush", "president of", "USA", 2001, 2009),
            ("Obama", "president of", "USA", 2009, 2017),
        ]
    )


def synthetic_rows(n, span=400, seed=7):
    """Deterministic pseudo-random fact rows over a small entity pool."""
    rows = []
    state = seed
    for i in range(n):
        state = (state * 6364136223846793005 + 1442695040888963407) % 2**64
        a = state % 23
        b = (state >> 8) % 23
        r = (state >> 16) % 5
        start = (state >> 24) % span
        length = (state >> 40) % 25
        rows.append((f"E{a}", f"R{r}", f"E{b}", start, start + length))
    return rows


@pytest.fixture
def toy_kg():
    return make_kg(synthetic_rows(60))


def write_fact_file(path, rows, granularity="year"):
    """Serialize rows through a KG so the file is canonical."""
    path.write_text(serialize_facts(make_kg(rows, granularity)), encoding="utf-8")
    return path


@pytest.fixture
def no_network(monkeypatch):
    """Make any socket use fail loudly for offline guarantees."""

    def blocked(*args, **kwargs):
        raise AssertionError("network operation attempted in an offline run")

    monkeypatch.setattr(socket, "socket", blocked)
    monkeypatch.setattr(socket, "create_connection", blocked)
