"""Sampling configuration shared by every probabilistic decision.

Rank and zero tests evaluate expressions at pseudo-random rational points.
The knobs live in one frozen dataclass so that a report can record exactly
which seed and sample counts produced it.  The active configuration is held
in a context variable; ``use_config`` swaps it for a block of code.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import threading
from typing import Iterator

DEFAULT_SEED = 1729


@dataclasses.dataclass(frozen=True)
class SamplingConfig:
    seed: int = DEFAULT_SEED
    zero_samples: int = 8
    rank_samples: int = 3
    precision: int = 50
    threshold_exp: int = 30
    max_resample: int = 40

    def __post_init__(self):
        if self.precision < 30:
            raise ValueError("precision must be at least 30 digits")
        if self.zero_samples < 1 or self.rank_samples < 1:
            raise ValueError("sample counts must be positive")
        if self.threshold_exp >= self.precision:
            raise ValueError("zero threshold must sit below the working precision")

    def replace(self, **changes) -> "SamplingConfig":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_current: contextvars.ContextVar[SamplingConfig] = contextvars.ContextVar(
    "goursatkit_sampling", default=SamplingConfig()
)


def current_config() -> SamplingConfig:
    return _current.get()


@contextlib.contextmanager
def use_config(cfg: SamplingConfig) -> Iterator[SamplingConfig]:
    token = _current.set(cfg)
    try:
        yield cfg
    finally:
        _current.reset(token)


class WarningLog:
    """Collects regularity warnings raised while a report is being built."""

    def __init__(self):
        self._lock = threading.Lock()
        self._items: list[str] = []

    def add(self, message: str) -> None:
        with self._lock:
            if message not in self._items:
                self._items.append(message)

    def items(self) -> list[str]:
        with self._lock:
            return list(self._items)


_warnings: contextvars.ContextVar[WarningLog | None] = contextvars.ContextVar(
    "goursatkit_warnings", default=None
)


def record_warning(message: str) -> None:
    log = _warnings.get()
    if log is not None:
        log.add(message)


@contextlib.contextmanager
def collect_warnings() -> Iterator[WarningLog]:
    log = WarningLog()
    token = _warnings.set(log)
    try:
        yield log
    finally:
        _warnings.reset(token)
