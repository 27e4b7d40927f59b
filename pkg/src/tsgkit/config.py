"""Key/value configuration shared by the command-line entry points."""

from __future__ import annotations

from dataclasses import dataclass, fields
from importlib import resources
from typing import Optional


@dataclass
class Config:
    vocab: str = "artifacts/vocab.tsv"
    model: str = "artifacts/model.bin"
    prototypes: str = "artifacts/prototypes.tsv"
    registry: str = "artifacts/registry.txt"
    lexicon: str = ""  # empty = bundled default
    seed: Optional[int] = None
    max_len: int = 64
    learning_rate: float = 1e-3
    epochs: int = 30
    batch_size: int = 32
    n_pairs: int = 2000
    min_freq: int = 1
    knn_k: int = 5
    max_occurrence: int = 3
    abs_window: int = 4
    max_atoms: int = 3
    max_branches: int = 6


_FIELD_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(name: str, raw: str):
    value = raw.strip()
    if name == "seed":
        return int(value)
    kind = _FIELD_TYPES.get(name)
    if kind in ("int", int):
        return int(value)
    if kind in ("float", float):
        return float(value)
    return value


def load_config(path: str) -> Config:
    """Flat `key = value` text; '#' starts a comment."""
    cfg = Config()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            setattr(cfg, key, _coerce(key, value))
    return cfg


def data_path(name: str) -> str:
    """Path of a bundled data file."""
    return str(resources.files("tsgkit").joinpath("data", name))
