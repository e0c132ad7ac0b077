from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class AdapterConfig:
    """Model identifier (hub id or local path), generation limits, and
    decoding mode.  Greedy decoding is the default so outputs stay
    deterministic."""

    model: str
    max_length: int = 128
    decoding: str = "greedy"
    device: str = "cpu"

    def __post_init__(self):
        if self.max_length <= 0:
            raise ValueError(f"max_length must be positive, got {self.max_length}")
        if self.decoding not in ("greedy", "sample"):
            raise ValueError(f"unknown decoding mode: {self.decoding!r}")
