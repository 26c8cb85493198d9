"""Weighted context-fact sampling.

Draws favour facts about frequently occurring entities and, for the
second and third fact of a sample, facts temporally close to the ones
already drawn.  Every draw is a pure function of (seed, draw_index)
through a counter-based generator, so draw streams are reproducible and
order-independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kg import TemporalKG, entity_frequency
from .timeline import TimeInterval

# Counter lanes keep the per-purpose random streams disjoint.
STREAM_SAMPLER = 0
STREAM_GENERATOR = 1
STREAM_SPLIT = 2
STREAM_PARAPHRASE = 3


def rng_for(seed: int, stream: int, index: int) -> np.random.Generator:
    """Independent generator for one (seed, stream, index) triple."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, index, stream]))


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    temporal_tau: float = 100.0
    frequency_exponent: float = 1.0
    allow_timeless: bool = False

    def __post_init__(self):
        if not self.temporal_tau > 0:
            raise DomainError("temporal_tau must be positive")
        if self.frequency_exponent < 0:
            raise DomainError("frequency_exponent must be non-negative")


@dataclass(frozen=True)
class FactSample:
    fact_ids: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.fact_ids)


class FactSampler:
    """Reusable sampler over one unified graph; precomputes weight inputs."""

    def __init__(self, kg: TemporalKG, cfg: SamplerConfig):
        self.kg = kg
        self.cfg = cfg
        counts = entity_frequency(kg)
        eligible = []
        for fact in kg.facts:
            if fact.has_time or cfg.allow_timeless:
                eligible.append(fact.id)
        self.eligible_ids = np.array(eligible, dtype=np.int64)
        freq = np.array(
            [counts[kg.facts[i].subject] + counts[kg.facts[i].object] for i in eligible],
            dtype=np.float64,
        )
        self.freq_weights = freq**cfg.frequency_exponent
        mids, opens = [], []
        for i in eligible:
            interval = kg.facts[i].interval
            mid = interval.midpoint()
            mids.append(0.0 if mid is None else mid)
            opens.append(mid is None)
        self.midpoints = np.array(mids, dtype=np.float64)
        self.fully_open = np.array(opens, dtype=bool)
        self.starts = np.array([kg.facts[i].interval.start for i in eligible], dtype=np.float64)
        self.ends = np.array([kg.facts[i].interval.end for i in eligible], dtype=np.float64)

    def _gaps_to(self, interval: TimeInterval) -> np.ndarray:
        """Midpoint distance to each eligible fact, zero when overlapping."""
        mid = interval.midpoint()
        if mid is None:
            return np.zeros(len(self.eligible_ids))
        gaps = np.abs(self.midpoints - mid)
        overlapping = (self.starts <= interval.end) & (float(interval.start) <= self.ends)
        gaps[overlapping | self.fully_open] = 0.0
        return gaps

    def draw(self, size: int, draw_index: int) -> FactSample:
        if size not in (1, 2, 3):
            raise DomainError(f"sample size must be 1, 2 or 3, got {size}")
        if len(self.eligible_ids) < size:
            raise DomainError(
                f"need at least {size} eligible facts, have {len(self.eligible_ids)}"
            )
        rng = rng_for(self.cfg.seed, STREAM_SAMPLER, draw_index)
        chosen: list[int] = []
        chosen_pos: list[int] = []
        min_gaps = None
        for _ in range(size):
            weights = self.freq_weights.copy()
            if min_gaps is not None:
                with np.errstate(under="ignore"):
                    weights = weights * np.exp(-min_gaps / self.cfg.temporal_tau)
            if chosen_pos:
                weights[chosen_pos] = 0.0
            total = weights.sum()
            if total <= 0.0 or not np.isfinite(total):
                weights = np.ones(len(self.eligible_ids))
                weights[chosen_pos] = 0.0
                total = weights.sum()
            pos = int(rng.choice(len(self.eligible_ids), p=weights / total))
            chosen_pos.append(pos)
            chosen.append(int(self.eligible_ids[pos]))
            gaps = self._gaps_to(self.kg.facts[chosen[-1]].interval)
            min_gaps = gaps if min_gaps is None else np.minimum(min_gaps, gaps)
        return FactSample(fact_ids=tuple(chosen))


def sample_context(
    kg: TemporalKG, size: int, cfg: SamplerConfig, draw_index: int
) -> FactSample:
    """One-shot draw; equivalent to FactSampler(kg, cfg).draw(size, draw_index)."""
    return FactSampler(kg, cfg).draw(size, draw_index)
