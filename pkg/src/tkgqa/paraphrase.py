"""Optional LLM paraphrasing of template questions.

The identity provider leaves questions untouched and performs no I/O, so
the pipeline runs fully offline by default.  The HTTP provider posts a
chat-completion request, retries with jittered exponential backoff, and
falls back to the original question on any failure.  A guard keeps a
paraphrase only if every entity and timestamp surface form of the
template question survives, so rewrites cannot corrupt the referents.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .generator import QAPair
from .sampler import STREAM_PARAPHRASE, rng_for

log = logging.getLogger(__name__)

API_KEY_ENV = "TKGQA_API_KEY"

# Versioned so cached rewrites invalidate if the instructions change.
PROMPT_V1 = (
    "Rewrite the question below so it reads naturally, without changing its "
    "meaning or its answer. Keep every entity name and every date or time "
    "expression exactly as written. Reply with the rewritten question only."
)

PROMPTS = {"v1": PROMPT_V1}

BACKOFF_BASE_SECONDS = 1.0
BACKOFF_CAP_SECONDS = 30.0


@dataclass(frozen=True)
class ParaphraseProvider:
    kind: str = "identity"
    endpoint_url: str = ""
    model_name: str = ""
    prompt_version: str = "v1"
    timeout: float = 30.0
    max_retries: int = 3

    def __post_init__(self):
        if self.kind not in ("identity", "http"):
            raise ConfigError(f"unknown paraphrase provider kind {self.kind!r}")
        if self.kind == "http" and not self.endpoint_url:
            raise ConfigError("http paraphrase provider needs an endpoint url")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be non-negative")
        if self.prompt_version not in PROMPTS:
            raise ConfigError(f"unknown prompt version {self.prompt_version!r}")


def cache_key(question: str, model_name: str, prompt_version: str) -> str:
    digest = hashlib.sha256()
    for part in (question, model_name, prompt_version):
        digest.update(part.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


class ParaphraseCache:
    """Append-only JSONL cache of {key, value, created_at} entries."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._entries: dict[str, str] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    entry = json.loads(line)
                    self._entries[entry["key"]] = entry["value"]

    def get(self, key: str) -> str | None:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, value: str) -> None:
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = value
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as handle:
                    handle.write(
                        json.dumps(
                            {"key": key, "value": value, "created_at": time.time()}
                        )
                        + "\n"
                    )


def _requests_transport(provider: ParaphraseProvider, payload: dict) -> dict:
    import requests

    headers = {}
    api_key = os.environ.get(API_KEY_ENV)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    response = requests.post(
        provider.endpoint_url, json=payload, headers=headers, timeout=provider.timeout
    )
    response.raise_for_status()
    return response.json()


class Paraphraser:
    """Applies one provider to pairs; transport and sleep are injectable
    so tests can run against recorded responses."""

    def __init__(
        self,
        provider: ParaphraseProvider,
        cache: ParaphraseCache | None = None,
        transport=None,
        sleep=time.sleep,
    ):
        self.provider = provider
        self.cache = cache if cache is not None else ParaphraseCache()
        self.transport = transport if transport is not None else _requests_transport
        self.sleep = sleep

    def apply(self, pair: QAPair) -> QAPair:
        if not pair.question:
            raise ConfigError(f"pair {pair.id} has an empty question")
        if self.provider.kind == "identity":
            return pair
        key = cache_key(pair.question, self.provider.model_name, self.provider.prompt_version)
        rewritten = self.cache.get(key)
        if rewritten is None:
            rewritten = self._request(pair)
            if rewritten is None:
                return pair
            self.cache.put(key, rewritten)
        if not self._keeps_surface_forms(pair, rewritten):
            log.warning("paraphrase for pair %d dropped a referent; keeping original", pair.id)
            return pair
        return replace(pair, question=rewritten, paraphrased=True)

    def apply_all(self, pairs: list[QAPair], max_in_flight: int = 4) -> list[QAPair]:
        """Paraphrase with bounded concurrency; results commit in pair-id
        order regardless of completion order."""
        if self.provider.kind == "identity":
            return list(pairs)
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            results = list(pool.map(self.apply, pairs))
        return [result for _, result in sorted(zip((p.id for p in pairs), results))]

    def _request(self, pair: QAPair) -> str | None:
        payload = {
            "model": self.provider.model_name,
            "messages": [
                {"role": "system", "content": PROMPTS[self.provider.prompt_version]},
                {"role": "user", "content": pair.question},
            ],
        }
        rng = rng_for(0, STREAM_PARAPHRASE, pair.id if pair.id >= 0 else 0)
        for attempt in range(self.provider.max_retries + 1):
            try:
                body = self.transport(self.provider, payload)
                text = body["choices"][0]["message"]["content"]
                if not isinstance(text, str) or not text.strip():
                    raise ValueError("empty paraphrase body")
                return text.strip()
            except Exception as exc:  # noqa: BLE001 - any failure falls back
                if attempt == self.provider.max_retries:
                    log.warning(
                        "paraphrase failed for pair %d after %d attempts: %s",
                        pair.id,
                        attempt + 1,
                        exc,
                    )
                    return None
                delay = min(BACKOFF_CAP_SECONDS, BACKOFF_BASE_SECONDS * 2**attempt)
                self.sleep(delay * (0.5 + 0.5 * float(rng.random())))
        return None

    @staticmethod
    def _keeps_surface_forms(pair: QAPair, rewritten: str) -> bool:
        return all(form in rewritten for form in pair.surface_forms)


def paraphrase(
    pair: QAPair,
    provider: ParaphraseProvider,
    cache: ParaphraseCache | None = None,
    transport=None,
) -> QAPair:
    """Single-pair convenience wrapper around Paraphraser.apply."""
    return Paraphraser(provider, cache=cache, transport=transport).apply(pair)
