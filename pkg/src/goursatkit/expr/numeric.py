"""High-precision evaluation and probabilistic zero testing.

Sample points bind every symbol to a rational ``p/q`` with ``1 <= p, q <= 1000``.
A point is identified by ``(seed, index)`` and binds each name from its own
seeded stream, so the value a symbol receives never depends on which other
symbols were looked up first or in what order calls happened.  That keeps
every verdict reproducible from the seed alone, including under threads.

The zero test declares ``e == 0`` when ``|e(p)|`` sits below ``10**-30`` times
the magnitude of the largest term of ``e`` at every sampled point.  For a
nonzero expression the failure probability is bounded by the chance that
all sampled points land on its zero set, which for the polynomial-trig
coefficients seen in practice is far below anything observable.
"""

from __future__ import annotations

import random
import threading
from fractions import Fraction

import mpmath

from ..config import SamplingConfig, current_config
from .core import Den, Expr, Fn, Sym


class PoleError(ArithmeticError):
    """Evaluation hit (numerically) a zero denominator."""


class ResamplingExhausted(RuntimeError):
    """Every candidate sample point was a pole."""


class Point:
    """A lazily populated binding of symbol names to rational values."""

    def __init__(self, seed: int, index: int, precision: int):
        self.seed = seed
        self.index = index
        self.precision = precision
        self._rational: dict[str, Fraction] = {}
        self._real: dict = {}
        self._cache: dict = {}
        self._fixed = False

    @classmethod
    def from_bindings(cls, bindings: dict, precision: int = 50) -> "Point":
        """A point with explicit values; unbound names raise ``KeyError``."""
        p = cls(seed=0, index=-1, precision=precision)
        p._fixed = True
        with mpmath.workdps(precision):
            for name, value in bindings.items():
                if isinstance(value, (int, Fraction)):
                    q = Fraction(value)
                    p._rational[name] = q
                    p._real[name] = mpmath.mpf(q.numerator) / q.denominator
                else:
                    p._real[name] = mpmath.mpf(value)
        return p

    @property
    def precision_digits(self) -> int:
        return self.precision

    def rational(self, name: str) -> Fraction:
        value = self._rational.get(name)
        if value is None:
            if self._fixed:
                raise KeyError(f"{name} has no rational binding")
            rng = random.Random(f"{self.seed}:{self.index}:{name}")
            value = Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
            self._rational[name] = value
        return value

    def real(self, name: str):
        value = self._real.get(name)
        if value is None:
            if self._fixed:
                raise KeyError(f"symbol {name} is not bound")
            q = self.rational(name)
            with mpmath.workdps(self.precision):
                value = mpmath.mpf(q.numerator) / q.denominator
            self._real[name] = value
        return value

    def bindings(self, names) -> dict:
        return {n: self.real(n) for n in names}


_points: dict = {}
_points_lock = threading.Lock()


def sample_point(index: int, cfg: SamplingConfig | None = None) -> Point:
    cfg = cfg or current_config()
    key = (cfg.seed, index, cfg.precision)
    p = _points.get(key)
    if p is None:
        with _points_lock:
            p = _points.get(key)
            if p is None:
                p = Point(cfg.seed, index, cfg.precision)
                _points[key] = p
    return p


def clear_caches() -> None:
    with _points_lock:
        _points.clear()


_POLE = mpmath.mpf(10) ** -30


def _atom_value(atom, p: Point):
    if isinstance(atom, Sym):
        return p.real(atom.name)
    if isinstance(atom, Fn):
        arg = eval_numeric(atom.arg, p)
        if atom.fn == "sin":
            return mpmath.sin(arg)
        if atom.fn == "cos":
            return mpmath.cos(arg)
        return mpmath.exp(arg)
    return eval_numeric(atom.base, p)


def _evaluate(e: Expr, p: Point, want_scale: bool):
    total = mpmath.mpf(0)
    scale = mpmath.mpf(0)
    for mono, c in e.terms:
        t = mpmath.mpf(c.numerator) / c.denominator
        for atom, k in mono:
            v = _atom_value(atom, p)
            if k < 0:
                if abs(v) < _POLE:
                    raise PoleError(f"pole of {e} at sample {p.index}")
                t = t / v if k == -1 else t * v ** k
            else:
                t = t * v if k == 1 else t * v ** k
        total += t
        if want_scale:
            at = abs(t)
            if at > scale:
                scale = at
    return total, scale


def eval_numeric(e: Expr, p: Point):
    """Value of ``e`` at ``p`` with ``p.precision`` significant digits."""
    cached = p._cache.get(e)
    if cached is not None:
        if isinstance(cached, PoleError):
            raise cached
        return cached[0]
    with mpmath.workdps(p.precision):
        try:
            value, scale = _evaluate(e, p, True)
        except PoleError as err:
            p._cache[e] = err
            raise
    if len(p._cache) > 400_000:
        p._cache.clear()
    p._cache[e] = (value, scale)
    return value


def eval_with_scale(e: Expr, p: Point):
    """Value together with the largest partial-term magnitude."""
    eval_numeric(e, p)
    hit = p._cache.get(e)
    if hit is None or isinstance(hit, PoleError):
        with mpmath.workdps(p.precision):
            return _evaluate(e, p, True)
    return hit


def eval_exact(e: Expr, p: Point) -> Fraction:
    """Exact rational value for expressions free of sin/cos/exp."""
    total = Fraction(0)
    for mono, c in e.terms:
        t = Fraction(c)
        for atom, k in mono:
            if isinstance(atom, Sym):
                v = p.rational(atom.name)
            elif isinstance(atom, Den):
                v = eval_exact(atom.base, p)
            else:
                raise ValueError("exact evaluation needs a function-free expression")
            if k < 0 and v == 0:
                raise PoleError(f"pole of {e} at sample {p.index}")
            t *= v ** k
        total += t
    return total


def is_negligible(value, scale, cfg: SamplingConfig | None = None) -> bool:
    cfg = cfg or current_config()
    bound = mpmath.mpf(10) ** (-cfg.threshold_exp)
    return abs(value) <= bound * scale


def is_zero(e: Expr, cfg: SamplingConfig | None = None) -> bool:
    """Probabilistic identity test: structural check, then sampling."""
    if e.is_structurally_zero:
        return True
    if e.is_const:
        return e.const_value() == 0
    cfg = cfg or current_config()
    found = 0
    index = 0
    misses = 0
    while found < cfg.zero_samples:
        p = sample_point(index, cfg)
        index += 1
        try:
            value, scale = eval_with_scale(e, p)
        except PoleError:
            misses += 1
            if misses > cfg.max_resample:
                raise ResamplingExhausted(f"every sample is a pole of {e}") from None
            continue
        if not is_negligible(value, scale, cfg):
            return False
        found += 1
    return True
