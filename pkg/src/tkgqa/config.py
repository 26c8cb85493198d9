"""Generator run configuration.

The JSON config file has sections `sampler`, `counts`, `split_ratios`,
`simple_answer_types`, `enable_negation`, and `seed`; an optional
`template_bank` points at a custom bank file.  A sampler seed left unset
follows the global seed, so one seed drives the whole run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .categories import AnswerType
from .errors import ConfigError
from .generator import DEFAULT_SIMPLE_ANSWER_TYPES
from .sampler import SamplerConfig


@dataclass
class GeneratorConfig:
    seed: int = 0
    counts: dict = field(default_factory=lambda: {"simple": 10, "medium": 10, "complex": 10})
    split_ratios: tuple = (0.6, 0.2, 0.2)
    simple_answer_types: tuple = DEFAULT_SIMPLE_ANSWER_TYPES
    enable_negation: bool = False
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    template_bank: str | None = None

    def resolved(self) -> dict:
        """JSON-safe view used for digests and the manifest."""
        return {
            "seed": self.seed,
            "counts": dict(self.counts),
            "split_ratios": list(self.split_ratios),
            "simple_answer_types": [at.value for at in self.simple_answer_types],
            "enable_negation": self.enable_negation,
            "sampler": {
                "seed": self.sampler.seed,
                "temporal_tau": self.sampler.temporal_tau,
                "frequency_exponent": self.sampler.frequency_exponent,
                "allow_timeless": self.sampler.allow_timeless,
            },
            "template_bank": self.template_bank,
        }


def load_config(path: str | Path | None = None, seed: int | None = None) -> GeneratorConfig:
    """Build a config from a JSON file; `seed` overrides the file value."""
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")

    known = {
        "seed",
        "counts",
        "split_ratios",
        "simple_answer_types",
        "enable_negation",
        "sampler",
        "template_bank",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    run_seed = seed if seed is not None else int(data.get("seed", 0))

    counts = {"simple": 10, "medium": 10, "complex": 10}
    for key, value in data.get("counts", {}).items():
        if key not in counts:
            raise ConfigError(f"unknown counts key {key!r}")
        if not isinstance(value, int) or value < 0:
            raise ConfigError(f"counts.{key} must be a non-negative integer")
        counts[key] = value

    ratios = tuple(data.get("split_ratios", (0.6, 0.2, 0.2)))
    if len(ratios) != 3:
        raise ConfigError("split_ratios must have three entries")

    if "simple_answer_types" in data:
        try:
            simple_types = tuple(AnswerType(v) for v in data["simple_answer_types"])
        except ValueError as exc:
            raise ConfigError(f"bad simple_answer_types: {exc}") from exc
        if not simple_types:
            raise ConfigError("simple_answer_types must not be empty")
    else:
        simple_types = DEFAULT_SIMPLE_ANSWER_TYPES

    sampler_data = dict(data.get("sampler", {}))
    sampler_unknown = set(sampler_data) - {"seed", "temporal_tau", "frequency_exponent", "allow_timeless"}
    if sampler_unknown:
        raise ConfigError(f"unknown sampler keys: {sorted(sampler_unknown)}")
    sampler = SamplerConfig(
        seed=int(sampler_data.get("seed", run_seed)),
        temporal_tau=float(sampler_data.get("temporal_tau", 100.0)),
        frequency_exponent=float(sampler_data.get("frequency_exponent", 1.0)),
        allow_timeless=bool(sampler_data.get("allow_timeless", False)),
    )
    if seed is not None:
        sampler = SamplerConfig(
            seed=seed,
            temporal_tau=sampler.temporal_tau,
            frequency_exponent=sampler.frequency_exponent,
            allow_timeless=sampler.allow_timeless,
        )

    return GeneratorConfig(
        seed=run_seed,
        counts=counts,
        split_ratios=ratios,
        simple_answer_types=simple_types,
        enable_negation=bool(data.get("enable_negation", False)),
        sampler=sampler,
        template_bank=data.get("template_bank"),
    )
