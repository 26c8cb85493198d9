"""The 26-relation interval/point algebra over closed integer intervals.

Every ordered pair of valid intervals maps to a 6-sign signature
(differences of the four endpoints, plus the two degeneracy signs that
tell points from ranges).  The signature keys a fixed dictionary of 26
relations: the 13 classic range/range relations, 5 point/range, 5
range/point, and 3 point/point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .timeline import TimeInterval, cmp_ts

AllenSignature = tuple[int, int, int, int, int, int]

PAIR_TYPES = ("TR-TR", "TP-TR", "TR-TP", "TP-TP")


@dataclass(frozen=True)
class AllenRelation:
    kind: str
    symbol: str
    description: str
    pair_type: str
    semantic: str
    converse: str


# Rows keyed by the sign tuple of
# [s1-e1, s2-e2, s1-s2, s1-e2, e1-s2, e1-e2].
ALLEN_DICTIONARY: dict[AllenSignature, AllenRelation] = {
    # range vs range
    (-1, -1, -1, -1, -1, -1): AllenRelation("before", "X < Y", "X precedes Y", "TR-TR", "before", "after"),
    (-1, -1, -1, -1, 0, -1): AllenRelation("meets", "X m Y", "X meets Y", "TR-TR", "meets", "met-by"),
    (-1, -1, -1, -1, 1, -1): AllenRelation("overlaps", "X o Y", "X overlaps Y", "TR-TR", "during", "overlapped-by"),
    (-1, -1, -1, -1, 1, 0): AllenRelation("finished-by", "X fi Y", "X is finished by Y", "TR-TR", "finishedby", "finishes"),
    (-1, -1, -1, -1, 1, 1): AllenRelation("contains", "X di Y", "X contains Y", "TR-TR", "during", "during"),
    (-1, -1, 0, -1, 1, -1): AllenRelation("starts", "X s Y", "X starts Y", "TR-TR", "starts", "started-by"),
    (-1, -1, 0, -1, 1, 0): AllenRelation("equals", "X = Y", "X equals Y", "TR-TR", "equal", "equals"),
    (-1, -1, 0, -1, 1, 1): AllenRelation("started-by", "X si Y", "X is started by Y", "TR-TR", "startedby", "starts"),
    (-1, -1, 1, -1, 1, -1): AllenRelation("during", "X d Y", "X during Y", "TR-TR", "during", "contains"),
    (-1, -1, 1, -1, 1, 0): AllenRelation("finishes", "X f Y", "X finishes Y", "TR-TR", "finishes", "finished-by"),
    (-1, -1, 1, -1, 1, 1): AllenRelation("overlapped-by", "X oi Y", "X is overlapped by Y", "TR-TR", "during", "overlaps"),
    (-1, -1, 1, 0, 1, 1): AllenRelation("met-by", "X mi Y", "X is met by Y", "TR-TR", "metby", "meets"),
    (-1, -1, 1, 1, 1, 1): AllenRelation("after", "X > Y", "X is preceded by Y", "TR-TR", "after", "before"),
    # point vs range
    (0, -1, -1, -1, -1, -1): AllenRelation("point-before", "X < Y", "X is before Y", "TP-TR", "before", "after-point"),
    (0, -1, 0, -1, 0, -1): AllenRelation("point-starts", "X s Y", "X starts Y", "TP-TR", "starts", "starts-point"),
    (0, -1, 1, -1, 1, -1): AllenRelation("point-during", "X d Y", "X during Y", "TP-TR", "during", "contains-point"),
    (0, -1, 1, 0, 1, 0): AllenRelation("point-finishes", "X f Y", "X finishes Y", "TP-TR", "finishes", "finishes-point"),
    (0, -1, 1, 1, 1, 1): AllenRelation("point-after", "X > Y", "X is after Y", "TP-TR", "after", "before-point"),
    # range vs point
    (-1, 0, -1, -1, -1, -1): AllenRelation("before-point", "X < Y", "X is before Y", "TR-TP", "before", "point-after"),
    (-1, 0, -1, -1, 0, 0): AllenRelation("finishes-point", "X fi Y", "X finishes Y", "TR-TP", "finishes", "point-finishes"),
    (-1, 0, -1, -1, 1, 1): AllenRelation("contains-point", "X di Y", "X during Y", "TR-TP", "during", "point-during"),
    (-1, 0, 0, 0, 1, 1): AllenRelation("starts-point", "X si Y", "X starts Y", "TR-TP", "starts", "point-starts"),
    (-1, 0, 1, 1, 1, 1): AllenRelation("after-point", "X > Y", "X is after Y", "TR-TP", "after", "point-before"),
    # point vs point
    (0, 0, -1, -1, -1, -1): AllenRelation("points-before", "X < Y", "X is before Y", "TP-TP", "before", "points-after"),
    (0, 0, 0, 0, 0, 0): AllenRelation("points-equal", "X = Y", "X equals Y", "TP-TP", "equal", "points-equal"),
    (0, 0, 1, 1, 1, 1): AllenRelation("points-after", "X > Y", "X is after Y", "TP-TP", "after", "points-before"),
}

RELATIONS_BY_KIND: dict[str, AllenRelation] = {rel.kind: rel for rel in ALLEN_DICTIONARY.values()}

KEY_BY_KIND: dict[str, AllenSignature] = {rel.kind: key for key, rel in ALLEN_DICTIONARY.items()}


def signature(a: TimeInterval, b: TimeInterval) -> AllenSignature:
    """Sign tuple of the six endpoint differences of (a, b)."""
    return (
        cmp_ts(a.start, a.end),
        cmp_ts(b.start, b.end),
        cmp_ts(a.start, b.start),
        cmp_ts(a.start, b.end),
        cmp_ts(a.end, b.start),
        cmp_ts(a.end, b.end),
    )


def allen_relation(a: TimeInterval, b: TimeInterval) -> AllenRelation:
    """Look the pair's signature up in the dictionary.

    Total on valid intervals: the 26 rows cover every reachable
    signature, which the test suite proves by exhaustive enumeration.
    """
    sig = signature(a, b)
    relation = ALLEN_DICTIONARY.get(sig)
    if relation is None:
        raise DomainError(f"signature {sig} is outside the relation dictionary")
    return relation


def converse_of(relation: AllenRelation) -> AllenRelation:
    return RELATIONS_BY_KIND[relation.converse]


def dictionary_rows() -> list[tuple[str, str, str, str]]:
    """Audit rows (key, kind, pair type, semantic word), dictionary order."""
    return [
        ("(" + ",".join(str(c) for c in key) + ")", rel.kind, rel.pair_type, rel.semantic)
        for key, rel in ALLEN_DICTIONARY.items()
    ]


def export_dictionary(path) -> None:
    """Write the audit table as TSV."""
    lines = ["key\tkind\tpair_type\tsemantic"]
    lines += ["\t".join(row) for row in dictionary_rows()]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
