import time

import pytest

from tkgqa.allen import (
    ALLEN_DICTIONARY,
    KEY_BY_KIND,
    AllenSignature,
    allen_relation,
    converse_of,
    dictionary_rows,
    export_dictionary,
    signature,
)
from tkgqa.timeline import NEG_INF, POS_INF, TimeInterval


def grid_intervals(lo=0, hi=6):
    return [TimeInterval(s, e) for s in range(lo, hi + 1) for e in range(s, hi + 1)]


def test_dictionary_shape():
    assert len(ALLEN_DICTIONARY) == 26
    by_type = {}
    for rel in ALLEN_DICTIONARY.values():
        by_type[rel.pair_type] = by_type.get(rel.pair_type, 0) + 1
    assert by_type == {"TR-TR": 13, "TP-TR": 5, "TR-TP": 5, "TP-TP": 3}
    kinds = [rel.kind for rel in ALLEN_DICTIONARY.values()]
    assert len(set(kinds)) == 26


def test_signature_components_stay_in_sign_range():
    for a in grid_intervals():
        for b in grid_intervals():
            sig = signature(a, b)
            assert all(c in (-1, 0, 1) for c in sig)
            assert sig[0] in (-1, 0) and sig[1] in (-1, 0)


@pytest.mark.parametrize(
    "a,b,expected",
    [
        ((1, 2), (3, 4), (-1, -1, -1, -1, -1, -1)),
        ((1, 4), (1, 4), (-1, -1, 0, -1, 1, 0)),
        ((5, 5), (5, 5), (0, 0, 0, 0, 0, 0)),
    ],
)
def test_signature_spot_values(a, b, expected):
    assert signature(TimeInterval(*a), TimeInterval(*b)) == expected


@pytest.mark.parametrize(
    "a,b,kind,pair_type",
    [
        ((1, 2), (2, 4), "meets", "TR-TR"),
        ((1, 5), (2, 4), "contains", "TR-TR"),
        ((3, 3), (1, 5), "point-during", "TP-TR"),
        ((1, 5), (3, 3), "contains-point", "TR-TP"),
        ((2, 2), (2, 2), "points-equal", "TP-TP"),
    ],
)
def test_relation_spot_values(a, b, kind, pair_type):
    rel = allen_relation(TimeInterval(*a), TimeInterval(*b))
    assert rel.kind == kind and rel.pair_type == pair_type


def test_point_during_signature_key():
    assert signature(TimeInterval(3, 3), TimeInterval(1, 5)) == (0, -1, 1, -1, 1, -1)


def test_exhaustive_closure_over_grid():
    started = time.perf_counter()
    seen = set()
    for a in grid_intervals():
        for b in grid_intervals():
            sig = signature(a, b)
            assert sig in ALLEN_DICTIONARY, f"unmapped signature {sig} for {a} vs {b}"
            seen.add(sig)
    assert seen == set(ALLEN_DICTIONARY)
    assert time.perf_counter() - started < 1.0


def test_pair_type_matches_pointness():
    expected = {
        (False, False): "TR-TR",
        (True, False): "TP-TR",
        (False, True): "TR-TP",
        (True, True): "TP-TP",
    }
    for a in grid_intervals():
        for b in grid_intervals():
            rel = allen_relation(a, b)
            assert rel.pair_type == expected[(a.is_point(), b.is_point())]


def test_converse_closure_over_grid():
    for a in grid_intervals():
        for b in grid_intervals():
            forward = allen_relation(a, b)
            backward = allen_relation(b, a)
            assert backward.kind == forward.converse
            assert converse_of(converse_of(forward)) is forward


def test_sentinel_intervals_stay_in_dictionary():
    tricky = [
        TimeInterval(NEG_INF, POS_INF),
        TimeInterval(NEG_INF, 3),
        TimeInterval(3, POS_INF),
        TimeInterval(0, 4),
        TimeInterval(2, 2),
    ]
    for a in tricky:
        for b in tricky:
            rel = allen_relation(a, b)
            assert rel.kind in KEY_BY_KIND
    assert allen_relation(TimeInterval(NEG_INF, 3), TimeInterval(3, POS_INF)).kind == "meets"
    assert allen_relation(TimeInterval(NEG_INF, POS_INF), TimeInterval(0, 4)).kind == "contains"
    assert (
        allen_relation(TimeInterval(NEG_INF, POS_INF), TimeInterval(NEG_INF, POS_INF)).kind
        == "equals"
    )


def test_dictionary_rows_and_export(tmp_path):
    rows = dictionary_rows()
    assert len(rows) == 26
    assert rows[0] == ("(-1,-1,-1,-1,-1,-1)", "before", "TR-TR", "before")
    out = tmp_path / "relations.tsv"
    export_dictionary(out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "key\tkind\tpair_type\tsemantic"
    assert len(lines) == 27
    assert lines[1].split("\t")[1] == "before"
