"""Cosine-similarity fact ranking over externally supplied vectors.

The harness never trains an encoder: vectors arrive either as text files
(header `dim=<d>`, rows `<id> <v1> ... <vd>`) or from a generic HTTP
embedding endpoint.  The semantic variant of retrieval first narrows the
candidates to facts touching the question's topic entities.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import DomainError, TkgqaError
from .kg import TemporalKG
from .metrics import RankingRun

log = logging.getLogger(__name__)


def cosine_embedding_loss(vq, vf, margin: float, label: int) -> float:
    """Two-branch contrastive loss: 1 - cos for positive pairs,
    max(0, cos - margin) for negatives."""
    if not 0 <= margin < 1:
        raise DomainError("margin must be in [0, 1)")
    if label not in (1, -1):
        raise DomainError("label must be +1 or -1")
    vq = np.asarray(vq, dtype=np.float64)
    vf = np.asarray(vf, dtype=np.float64)
    if vq.shape != vf.shape:
        raise DomainError(f"dimension mismatch {vq.shape} vs {vf.shape}")
    nq, nf = np.linalg.norm(vq), np.linalg.norm(vf)
    if nq == 0 or nf == 0:
        raise DomainError("zero-norm vector")
    cos = float(np.dot(vq, vf) / (nq * nf))
    if label == 1:
        return 1.0 - cos
    return max(0.0, cos - margin)


def cosine_rank(
    query_id: int,
    query_vec,
    fact_vecs: dict[int, np.ndarray],
    prefilter: set[int] | None = None,
) -> RankingRun:
    """Rank candidate facts by descending cosine similarity to the query;
    ties break toward the smaller fact id."""
    query = np.asarray(query_vec, dtype=np.float64)
    qnorm = np.linalg.norm(query)
    if qnorm == 0:
        raise DomainError(f"query {query_id} has a zero-norm vector")
    if prefilter is not None:
        if not prefilter:
            raise DomainError("prefilter must be non-empty when given")
        candidates = [fid for fid in fact_vecs if fid in prefilter]
    else:
        candidates = list(fact_vecs)
    scored = []
    for fid in sorted(candidates):
        vec = np.asarray(fact_vecs[fid], dtype=np.float64)
        if vec.shape != query.shape:
            raise TkgqaError(
                f"fact {fid} vector has dimension {vec.shape[0]}, query has {query.shape[0]}"
            )
        norm = np.linalg.norm(vec)
        if norm == 0:
            log.warning("fact %d has a zero-norm vector; excluded from ranking", fid)
            continue
        scored.append((-float(np.dot(query, vec) / (qnorm * norm)), fid))
    scored.sort()
    return RankingRun(query_id=query_id, ranked_fact_ids=tuple(fid for _, fid in scored))


def topic_entities(record: dict, kg: TemporalKG, mode: str = "predicted") -> set[int]:
    """Entity ids whose surface names occur in the question text.

    predicted scans the whole entity table; gold restricts the scan to
    entities of the query's own context facts.
    """
    question = record["question"]
    if mode == "gold":
        candidate_ids = set()
        for fid in record["context_fact_ids"]:
            fact = kg.facts[fid]
            candidate_ids.update((fact.subject, fact.object))
    elif mode == "predicted":
        candidate_ids = set(range(len(kg.entity_names)))
    else:
        raise DomainError(f"unknown topic-entity mode {mode!r}")
    return {eid for eid in candidate_ids if kg.entity_names[eid] in question}


def prefilter_for(record: dict, kg: TemporalKG, mode: str = "predicted") -> set[int] | None:
    """Fact ids touching the question's topic entities; None when no
    entity matches (callers fall back to the unfiltered candidate set)."""
    fact_ids: set[int] = set()
    for eid in topic_entities(record, kg, mode):
        fact_ids.update(kg.entity_index.get(eid, ()))
    return fact_ids or None


def read_vector_file(path) -> dict[int, np.ndarray]:
    """Parse a `dim=<d>` headed, space-separated vector file."""
    vectors: dict[int, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        if not header.startswith("dim="):
            raise TkgqaError(f"{path}: vector file must start with a dim=<d> header")
        try:
            dim = int(header[4:])
        except ValueError as exc:
            raise TkgqaError(f"{path}: bad dimension in header {header!r}") from exc
        for line_no, line in enumerate(handle, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                raise TkgqaError(
                    f"{path} line {line_no}: expected id plus {dim} values, got {len(parts) - 1}"
                )
            try:
                vectors[int(parts[0])] = np.array([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise TkgqaError(f"{path} line {line_no}: {exc}") from exc
    return vectors


def write_vector_file(path, vectors: dict[int, np.ndarray]) -> None:
    dims = {len(v) for v in vectors.values()}
    if len(dims) > 1:
        raise TkgqaError(f"mixed vector dimensions {sorted(dims)}")
    dim = dims.pop() if dims else 0
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"dim={dim}\n")
        for vid in sorted(vectors):
            values = " ".join(repr(float(v)) for v in vectors[vid])
            handle.write(f"{vid} {values}\n")


def fetch_vectors(endpoint: str, model: str, items: dict[int, str], transport=None, timeout: float = 30.0) -> dict[int, np.ndarray]:
    """Embed texts through a chat-style embeddings endpoint.

    POSTs {model, input: [texts]} and reads data[i].embedding.  Only used
    when an endpoint is configured explicitly; file-based vectors keep
    the pipeline offline.
    """
    if transport is None:
        transport = _requests_transport
    ids = sorted(items)
    payload = {"model": model, "input": [items[i] for i in ids]}
    body = transport(endpoint, payload, timeout)
    try:
        rows = body["data"]
        vectors = {vid: np.array(row["embedding"], dtype=np.float64) for vid, row in zip(ids, rows)}
    except (KeyError, TypeError) as exc:
        raise TkgqaError(f"malformed embedding response: {exc}") from exc
    if len(vectors) != len(ids):
        raise TkgqaError(f"endpoint returned {len(vectors)} embeddings for {len(ids)} inputs")
    return vectors


def _requests_transport(endpoint: str, payload: dict, timeout: float) -> dict:
    import requests

    response = requests.post(endpoint, json=payload, timeout=timeout)
    response.raise_for_status()
    return response.json()
