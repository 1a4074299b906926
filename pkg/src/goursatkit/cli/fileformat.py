"""Line-oriented system files.

A file is a sequence of ``[section]`` blocks.  ``#`` starts a comment.

``[chart]``            ``time = t``, ``states = x y``, ``controls = u``, ``constants = h``
``[distribution]``     ``NAME = <vector field>`` using ``d_<coord>`` for coordinate fields
``[fields]``           named helper vector fields, usable inside symmetry blocks
``[symmetry NAME]``    ``GEN = <vector field>`` or a bare name from ``[fields]`` / earlier blocks;
                       ``change GEN = <linear combination of GENs>`` sets the table basis
``[quotient NAME]``    ``q = <expr> : role`` invariants and ``section x = <expr>`` entries
``[tau]``              ``NAME = <expr>`` candidate time scales
``[config]``           ``seed``, ``samples``, ``rank_samples``, ``precision``
"""

from __future__ import annotations

import dataclasses
import re
from pathlib import Path

from ..config import SamplingConfig
from ..expr import Expr, ParseError, parse, to_text
from ..geometry import Chart, VectorField
from ..geometry.chart import Coordinate
from ..symmetry import QuotientSpec, SymmetryAlgebra


class SystemFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = f"{source or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


_SECTION = re.compile(r"^\[(\w+)(?:\s+([\w.-]+))?\]$")
_ROLES = ("time", "state", "control")


@dataclasses.dataclass
class SystemFile:
    name: str
    chart: Chart
    distribution: list[tuple[str, VectorField]]
    fields: dict[str, VectorField] = dataclasses.field(default_factory=dict)
    symmetries: dict[str, SymmetryAlgebra] = dataclasses.field(default_factory=dict)
    quotients: dict[str, QuotientSpec] = dataclasses.field(default_factory=dict)
    taus: dict[str, Expr] = dataclasses.field(default_factory=dict)
    changes: dict[str, dict[str, dict[str, Expr]]] = dataclasses.field(default_factory=dict)
    config: dict[str, int] = dataclasses.field(default_factory=dict)

    def sampling_config(self, base: SamplingConfig | None = None) -> SamplingConfig:
        cfg = base or SamplingConfig()
        mapping = {"seed": "seed", "samples": "zero_samples", "rank_samples": "rank_samples", "precision": "precision"}
        return cfg.replace(**{mapping[k]: v for k, v in self.config.items()})

    def generators(self) -> list[VectorField]:
        return [f for _, f in self.distribution]


def parse_field(text: str, chart: Chart) -> VectorField:
    """``sum c_i * d_<coord>`` with coefficients free of ``d_`` symbols."""
    dnames = [f"d_{n}" for n in chart.names]
    e = parse(text, list(chart.symbols) + dnames)
    coeffs = []
    rest = e
    for n, dn in zip(chart.names, dnames):
        c = e.diff(dn)
        if any(s in c.free_symbols for s in dnames):
            raise ValueError(f"{dn} appears non-linearly")
        coeffs.append(c)
        rest = rest - c * parse(dn, [dn])
    if not rest.is_structurally_zero:
        raise ValueError(f"term without a d_ direction: {to_text(rest)}")
    return VectorField(chart, coeffs)


def format_field(X: VectorField) -> str:
    return str(X)


def _split(line: str, source: str, lineno: int) -> tuple[str, str]:
    if "=" not in line:
        raise SystemFileError(f"expected 'name = value', got {line!r}", lineno, source)
    key, value = line.split("=", 1)
    key, value = key.strip(), value.strip()
    if not key or not value:
        raise SystemFileError(f"empty name or value in {line!r}", lineno, source)
    return key, value


def loads(text: str, name: str = "system", source: str | None = None) -> SystemFile:
    blocks: list[tuple[str, str | None, int, list[tuple[int, str]]]] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            current = (m.group(1), m.group(2), lineno, [])
            blocks.append(current)
            continue
        if current is None:
            raise SystemFileError("content before the first section", lineno, source)
        current[3].append((lineno, line))

    kinds = [b[0] for b in blocks]
    for kind, label, lineno, _ in blocks:
        if kind not in ("chart", "distribution", "fields", "symmetry", "quotient", "tau", "config"):
            raise SystemFileError(f"unknown section [{kind}]", lineno, source)
        if kind in ("symmetry", "quotient") and not label:
            raise SystemFileError(f"[{kind}] needs a name", lineno, source)
    if kinds.count("chart") != 1 or kinds.count("distribution") != 1:
        raise SystemFileError("exactly one [chart] and one [distribution] section are required", None, source)

    chart = _read_chart(next(b for b in blocks if b[0] == "chart"), source)

    def field(value, lineno):
        try:
            return parse_field(value, chart)
        except (ParseError, ValueError) as err:
            raise SystemFileError(str(err), lineno, source) from None

    def expr(value, lineno):
        try:
            return parse(value, chart.symbols)
        except ParseError as err:
            raise SystemFileError(str(err), lineno, source) from None

    out = SystemFile(name, chart, [])
    for kind, label, _, lines in blocks:
        if kind == "distribution":
            for lineno, line in lines:
                key, value = _split(line, source, lineno)
                out.distribution.append((key, field(value, lineno)))
        elif kind == "fields":
            for lineno, line in lines:
                key, value = _split(line, source, lineno)
                out.fields[key] = field(value, lineno)
        elif kind == "tau":
            for lineno, line in lines:
                key, value = _split(line, source, lineno)
                out.taus[key] = expr(value, lineno)
        elif kind == "config":
            for lineno, line in lines:
                key, value = _split(line, source, lineno)
                if key not in ("seed", "samples", "rank_samples", "precision"):
                    raise SystemFileError(f"unknown config key {key!r}", lineno, source)
                try:
                    out.config[key] = int(value)
                except ValueError:
                    raise SystemFileError(f"config value {value!r} is not an integer", lineno, source) from None
    if not out.distribution:
        raise SystemFileError("the distribution has no generators", None, source)

    known: dict[str, VectorField] = dict(out.fields)
    for kind, label, lineno0, lines in blocks:
        if kind == "symmetry":
            gens, names = [], []
            change: dict[str, dict[str, Expr]] = {}
            for lineno, line in lines:
                if line.startswith("change "):
                    key, value = _split(line[len("change "):], source, lineno)
                    change[key] = _combination(value, names, source, lineno)
                    continue
                if "=" in line:
                    key, value = _split(line, source, lineno)
                    X = field(value, lineno)
                    known[key] = X
                else:
                    key = line
                    if key not in known:
                        raise SystemFileError(f"unknown generator {key!r}", lineno, source)
                    X = known[key]
                gens.append(X)
                names.append(key)
            if label in out.symmetries:
                raise SystemFileError(f"duplicate symmetry block {label!r}", lineno0, source)
            out.symmetries[label] = SymmetryAlgebra(gens, names)
            if change:
                unknown = [k for k in change if k not in names]
                if unknown:
                    raise SystemFileError(f"change refers to unknown generator {unknown[0]!r}", lineno0, source)
                out.changes[label] = change
        elif kind == "quotient":
            invariants, section = [], {}
            for lineno, line in lines:
                if line.startswith("section "):
                    key, value = _split(line[len("section "):], source, lineno)
                    if key not in chart.names:
                        raise SystemFileError(f"section names unknown coordinate {key!r}", lineno, source)
                    section[key] = _section_expr(value, chart, invariants, source, lineno)
                    continue
                key, value = _split(line, source, lineno)
                role = "state"
                if ":" in value:
                    value, role = (s.strip() for s in value.rsplit(":", 1))
                if role not in _ROLES:
                    raise SystemFileError(f"unknown role {role!r}", lineno, source)
                invariants.append((key, expr(value, lineno), role))
            out.quotients[label] = QuotientSpec(invariants, section, chart.constants)
    return out


def _combination(value: str, names: list[str], source, lineno) -> dict[str, Expr]:
    try:
        e = parse(value, names)
    except ParseError as err:
        raise SystemFileError(str(err), lineno, source) from None
    combo = {}
    rest = e
    for n in names:
        c = e.diff(n)
        if not c.is_const:
            raise SystemFileError("basis changes need constant coefficients", lineno, source)
        if not c.is_structurally_zero:
            combo[n] = c
            rest = rest - c * parse(n, [n])
    if not rest.is_structurally_zero:
        raise SystemFileError("basis change has a constant term", lineno, source)
    return combo


def _section_expr(value: str, chart: Chart, invariants, source, lineno) -> Expr:
    allowed = list(chart.constants) + [n for n, _, _ in invariants]
    try:
        return parse(value, allowed)
    except ParseError as err:
        raise SystemFileError(f"section values may only use invariant names: {err}", lineno, source) from None


def _read_chart(block, source) -> Chart:
    _, _, _, lines = block
    coords: list[Coordinate] = []
    constants: list[str] = []
    for lineno, line in lines:
        key, value = _split(line, source, lineno)
        names = value.split()
        if key == "time":
            coords.extend(Coordinate(n, "time") for n in names)
        elif key == "states":
            coords.extend(Coordinate(n, "state") for n in names)
        elif key == "controls":
            coords.extend(Coordinate(n, "control") for n in names)
        elif key == "constants":
            constants.extend(names)
        else:
            raise SystemFileError(f"unknown chart key {key!r}", lineno, source)
    try:
        return Chart(coords, constants)
    except ValueError as err:
        raise SystemFileError(str(err), None, source) from None


def load(path: str | Path) -> SystemFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as err:
        raise SystemFileError(f"cannot read {p}: {err.strerror}") from None
    return loads(text, name=p.stem, source=str(p))


def dumps(sf: SystemFile) -> str:
    """Canonical text; ``loads(dumps(sf))`` reproduces ``sf``."""
    ch = sf.chart
    out = ["[chart]"]
    for role, key in (("time", "time"), ("state", "states"), ("control", "controls")):
        names = ch.names_with_role(role)
        if names:
            out.append(f"{key} = {' '.join(names)}")
    if ch.constants:
        out.append(f"constants = {' '.join(ch.constants)}")
    out += ["", "[distribution]"]
    out += [f"{k} = {format_field(X)}" for k, X in sf.distribution]
    if sf.fields:
        out += ["", "[fields]"]
        out += [f"{k} = {format_field(X)}" for k, X in sf.fields.items()]
    emitted = dict(sf.fields)
    for label, G in sf.symmetries.items():
        out += ["", f"[symmetry {label}]"]
        for n, X in zip(G.names, G.generators):
            if n in emitted and emitted[n] == X:
                out.append(n)
            else:
                out.append(f"{n} = {format_field(X)}")
                emitted[n] = X
        for target, combo in sf.changes.get(label, {}).items():
            terms = " + ".join(f"({to_text(c)})*{n}" for n, c in combo.items())
            out.append(f"change {target} = {terms}")
    for label, Q in sf.quotients.items():
        out += ["", f"[quotient {label}]"]
        out += [f"{n} = {to_text(e)} : {role}" for n, e, role in Q.invariants]
        out += [f"section {k} = {to_text(v)}" for k, v in Q.cross_section.items()]
    if sf.taus:
        out += ["", "[tau]"]
        out += [f"{k} = {to_text(e)}" for k, e in sf.taus.items()]
    if sf.config:
        out += ["", "[config]"]
        out += [f"{k} = {v}" for k, v in sf.config.items()]
    return "\n".join(out) + "\n"


__all__ = ["SystemFile", "SystemFileError", "dumps", "format_field", "load", "loads", "parse_field"]
