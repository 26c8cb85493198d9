"""Run manifests: digest every input and output so a run can be verified
and regenerated byte for byte (timestamps aside)."""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from . import __version__
from .errors import TkgqaError

MANIFEST_NAME = "run_manifest.json"


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def config_digest(config_dict: dict) -> str:
    return sha256_text(json.dumps(config_dict, sort_keys=True))


def build_manifest(
    config_dict: dict,
    seed: int,
    input_paths: list[Path],
    output_paths: list[Path],
    base_dir: Path,
) -> dict:
    """Inputs keep their given paths; outputs are stored relative to the
    manifest's directory."""
    return {
        "tool_version": __version__,
        "seed": seed,
        "config_digest": config_digest(config_dict),
        "config": config_dict,
        "inputs": {str(Path(p).resolve()): sha256_file(p) for p in input_paths},
        "outputs": {
            str(Path(p).resolve().relative_to(base_dir.resolve())): sha256_file(p)
            for p in output_paths
        },
        "timestamps": {"created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())},
    }


def write_manifest(manifest: dict, directory: str | Path) -> Path:
    path = Path(directory) / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def verify_manifest(manifest_path: str | Path) -> list[str]:
    """Recompute all digests; return a list of mismatch descriptions."""
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise TkgqaError(f"cannot read manifest {manifest_path}: {exc}") from exc
    problems = []
    if config_digest(manifest.get("config", {})) != manifest.get("config_digest"):
        problems.append("config digest mismatch")
    for path_text, expected in manifest.get("inputs", {}).items():
        path = Path(path_text)
        if not path.exists():
            problems.append(f"missing input {path_text}")
        elif sha256_file(path) != expected:
            problems.append(f"input digest mismatch for {path_text}")
    for rel_text, expected in manifest.get("outputs", {}).items():
        path = manifest_path.parent / rel_text
        if not path.exists():
            problems.append(f"missing output {rel_text}")
        elif sha256_file(path) != expected:
            problems.append(f"output digest mismatch for {rel_text}")
    return problems
