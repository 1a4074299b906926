from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

ROLES = ("time", "state", "control", "auxiliary")


@dataclasses.dataclass(frozen=True)
class Coordinate:
    name: str
    role: str = "state"

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown coordinate role {self.role!r}")


class Chart:
    """Ordered coordinates with roles, plus named symbolic constants."""

    def __init__(self, coords: Sequence[Coordinate | tuple], constants: Iterable[str] = ()):
        items = []
        for c in coords:
            items.append(c if isinstance(c, Coordinate) else Coordinate(*c))
        self.coords = tuple(items)
        self.constants = tuple(constants)
        self.names = tuple(c.name for c in self.coords)
        if len(set(self.names)) != len(self.names):
            raise ValueError("coordinate names must be unique")
        clash = set(self.names) & set(self.constants)
        if clash:
            raise ValueError(f"names used both as coordinate and constant: {sorted(clash)}")
        times = [c.name for c in self.coords if c.role == "time"]
        if len(times) > 1:
            raise ValueError("at most one time coordinate is allowed")
        self.time = times[0] if times else None
        self._index = {n: i for i, n in enumerate(self.names)}
        self._key = (self.coords, self.constants)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a coordinate of this chart") from None

    def role(self, name: str) -> str:
        return self.coords[self.index(name)].role

    def names_with_role(self, role: str) -> tuple[str, ...]:
        return tuple(c.name for c in self.coords if c.role == role)

    @property
    def symbols(self) -> tuple[str, ...]:
        """Every identifier an expression over this chart may use."""
        return self.names + self.constants

    def __eq__(self, other):
        return isinstance(other, Chart) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        parts = ", ".join(f"{c.name}:{c.role}" for c in self.coords)
        return f"Chart({parts})"
