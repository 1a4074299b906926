"""Canonical symbolic expressions.

An expression is stored as a finite sum of rational multiples of monomials.
A monomial is a product of atoms raised to nonzero integer powers, where an
atom is one of

* a symbol ``x``,
* an opaque function application ``sin(e)``, ``cos(e)``, ``exp(e)``,
* a composite base ``(x + y)`` that only ever occurs with a negative power.

Positive powers of sums are expanded, so the representation is a Laurent
polynomial in the atoms.  Symbols and function atoms may carry negative
exponents, which is how ``x*(1/x)`` cancels to ``1``.  A composite base is
stored primitive (no common monomial factor, leading coefficient one) so that
``1/(2*x + 2*y)`` and ``1/(x + y)`` share the base ``x + y``.

Nothing here knows that ``sin(t)^2 + cos(t)^2`` is one.  Identities of that
kind are left to the sampling zero test in :mod:`goursatkit.expr.numeric`.

>>> x, y = symbols("x y")
>>> str((x + y) * (x - y))
'x^2 - y^2'
>>> str(x * (1 / x))
'1'
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Mapping

FUNCTIONS = ("sin", "cos", "exp")


class DivisionByZeroExpr(ZeroDivisionError):
    """Raised when inverting an expression that is structurally zero."""


class Atom:
    __slots__ = ("key", "_hash", "free")

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Atom) and self._hash == other._hash and self.key == other.key

    def __hash__(self):
        return self._hash

    def derivative(self, var: str) -> "Expr":
        raise NotImplementedError


class Sym(Atom):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.key = (0, name)
        self._hash = hash(self.key)
        self.free = frozenset((name,))

    def derivative(self, var):
        return ONE if var == self.name else ZERO

    def __repr__(self):
        return f"Sym({self.name!r})"


class Fn(Atom):
    __slots__ = ("fn", "arg")

    def __init__(self, fn: str, arg: "Expr"):
        self.fn = fn
        self.arg = arg
        self.key = (1, fn, arg._key)
        self._hash = hash(self.key)
        self.free = arg.free_symbols

    def derivative(self, var):
        inner = self.arg.diff(var)
        if inner.is_structurally_zero:
            return ZERO
        if self.fn == "sin":
            outer = apply_fn("cos", self.arg)
        elif self.fn == "cos":
            outer = -apply_fn("sin", self.arg)
        else:
            outer = apply_fn("exp", self.arg)
        return outer * inner

    def __repr__(self):
        return f"Fn({self.fn!r}, {self.arg})"


class Den(Atom):
    """Composite base of a negative power."""

    __slots__ = ("base",)

    def __init__(self, base: "Expr"):
        self.base = base
        self.key = (2, base._key)
        self._hash = hash(self.key)
        self.free = base.free_symbols

    def derivative(self, var):
        return self.base.diff(var)

    def __repr__(self):
        return f"Den({self.base})"


def _mono_key(mono):
    return tuple((a.key, e) for a, e in mono)


def _atom_sort_key(pair):
    return pair[0].key


class Expr:
    """Immutable canonical expression.  Build with the module helpers or ``parse``."""

    __slots__ = ("_terms", "_key", "_hash", "_free", "_prim", "_size", "__weakref__")

    def __init__(self, terms: tuple):
        self._terms = terms
        self._key = tuple((_mono_key(m), c) for m, c in terms)
        self._hash = hash(self._key)
        free = set()
        for m, _ in terms:
            for a, _ in m:
                free |= a.free
        self._free = frozenset(free)
        self._prim = None
        self._size = None

    # construction -------------------------------------------------------

    @staticmethod
    def _from_dict(d: Mapping) -> "Expr":
        items = [(m, c) for m, c in d.items() if c != 0]
        if len(items) > 1:
            items.sort(key=lambda mc: _mono_key(mc[0]))
        return Expr(tuple(items))

    @staticmethod
    def const(value) -> "Expr":
        value = Fraction(value)
        if value == 0:
            return ZERO
        return Expr((((), value),))

    # basic queries -------------------------------------------------------

    @property
    def terms(self):
        return self._terms

    @property
    def free_symbols(self) -> frozenset:
        return self._free

    @property
    def is_structurally_zero(self) -> bool:
        return not self._terms

    @property
    def is_const(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not self._terms[0][0])

    def const_value(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_const:
            raise ValueError(f"{self} is not constant")
        return self._terms[0][1]

    @property
    def atoms(self) -> set:
        out = set()
        for m, _ in self._terms:
            for a, _ in m:
                out.add(a)
        return out

    def has_functions(self) -> bool:
        """True when a sin/cos/exp atom occurs anywhere, including inside bases."""
        for m, _ in self._terms:
            for a, _ in m:
                if isinstance(a, Fn):
                    return True
                if isinstance(a, Den) and a.base.has_functions():
                    return True
        return False

    def has_denominators(self) -> bool:
        for m, _ in self._terms:
            for a, e in m:
                if e < 0 or isinstance(a, Den):
                    return True
        return False

    @property
    def size(self) -> int:
        """Rough node count, used to prefer simple pivots."""
        if self._size is None:
            n = 0
            for m, _ in self._terms:
                n += 1
                for a, _ in m:
                    if isinstance(a, Sym):
                        n += 1
                    elif isinstance(a, Fn):
                        n += 1 + a.arg.size
                    else:
                        n += 1 + a.base.size
            self._size = n
        return self._size

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                return self.is_const and self.const_value() == other
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Expr({str(self)!r})"

    def __str__(self):
        from .printer import to_text

        return to_text(self)

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = as_expr(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        d = dict(self._terms)
        for m, c in other._terms:
            d[m] = d.get(m, 0) + c
        return Expr._from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return Expr(tuple((m, -c) for m, c in self._terms))

    def __sub__(self, other):
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return as_expr(other) + (-self)

    def __mul__(self, other):
        return _mul(self, as_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _mul(self, as_expr(other).inverse())

    def __rtruediv__(self, other):
        return _mul(as_expr(other), self.inverse())

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer exponents are supported")
        if n == 0:
            return ONE
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Expr":
        c = Fraction(c)
        if c == 0:
            return ZERO
        return Expr(tuple((m, v * c) for m, v in self._terms))

    def primitive(self):
        """Split a multi-term expression as ``content * monomial * base``."""
        if self._prim is None:
            self._prim = _primitive(self)
        return self._prim

    def inverse(self) -> "Expr":
        if not self._terms:
            raise DivisionByZeroExpr("division by the zero expression")
        if len(self._terms) == 1:
            m, c = self._terms[0]
            return _monomial_expr(tuple((a, -e) for a, e in m), 1 / c)
        content, mono, base = self.primitive()
        inv_mono = tuple((a, -e) for a, e in mono)
        inv_mono = inv_mono + ((Den(base), -1),)
        return _monomial_expr(tuple(sorted(inv_mono, key=_atom_sort_key)), 1 / content)

    # calculus and substitution --------------------------------------------

    def diff(self, var: str) -> "Expr":
        if var not in self._free:
            return ZERO
        return _diff_cached(self, var)

    def subs(self, bindings: Mapping[str, "Expr"]) -> "Expr":
        if not bindings or not (self._free & bindings.keys()):
            return self
        parts = []
        for m, c in self._terms:
            t = Expr.const(c)
            for a, e in m:
                t = t * (_subs_atom(a, bindings) ** e)
            parts.append(t)
        return add_all(parts)

    def tree(self):
        """Tagged-tuple view using the node kinds Const/Symbol/Sum/Product/Power/Apply."""
        if not self._terms:
            return ("Const", Fraction(0))
        nodes = [_term_tree(m, c) for m, c in self._terms]
        return nodes[0] if len(nodes) == 1 else ("Sum", nodes)


def _term_tree(mono, c):
    factors = []
    if c != 1 or not mono:
        factors.append(("Const", c))
    for a, e in mono:
        if isinstance(a, Sym):
            base = ("Symbol", a.name)
        elif isinstance(a, Fn):
            base = ("Apply", a.fn, a.arg.tree())
        else:
            base = a.base.tree()
        factors.append(base if e == 1 else ("Power", base, e))
    return factors[0] if len(factors) == 1 else ("Product", factors)


def _subs_atom(a: Atom, bindings) -> Expr:
    if isinstance(a, Sym):
        return bindings.get(a.name, Expr(((((a, 1),), Fraction(1)),)))
    if isinstance(a, Fn):
        return apply_fn(a.fn, a.arg.subs(bindings))
    return a.base.subs(bindings)


def _monomial_expr(mono, coeff) -> Expr:
    """Build ``coeff * mono``, expanding any Den atom with a positive power."""
    if coeff == 0:
        return ZERO
    clean = []
    extra = None
    for a, e in mono:
        if isinstance(a, Den) and e > 0:
            p = a.base ** e
            extra = p if extra is None else extra * p
        else:
            clean.append((a, e))
    base = Expr(((tuple(clean), Fraction(coeff)),))
    return base if extra is None else _mul(base, extra)


def _mono_mul(m1, m2):
    if not m1:
        return m2, None
    if not m2:
        return m1, None
    d = dict(m1)
    for a, e in m2:
        d[a] = d.get(a, 0) + e
    items = []
    extra = None
    for a, e in d.items():
        if e == 0:
            continue
        if e > 0 and isinstance(a, Den):
            extra = (a, e) if extra is None else extra + (a, e)
            continue
        items.append((a, e))
    if len(items) > 1:
        items.sort(key=_atom_sort_key)
    return tuple(items), extra


def _den_atoms(e: Expr) -> set:
    out = set()
    for m, _ in e._terms:
        for a, k in m:
            if isinstance(a, Den) and k < 0:
                out.add(a)
    return out


def _as_factor(a: Expr, other: Expr):
    """Terms of ``a``, rewritten as ``c*m*B`` if ``other`` divides by B."""
    if len(a._terms) < 2:
        return a._terms
    dens = _den_atoms(other)
    if not dens:
        return a._terms
    content, mono, base = a.primitive()
    atom = Den(base)
    if atom not in dens:
        return a._terms
    items = list(mono) + [(atom, 1)]
    items.sort(key=_atom_sort_key)
    return ((tuple(items), content),)


def _mul(a: Expr, b: Expr) -> Expr:
    if not a._terms or not b._terms:
        return ZERO
    if a.is_const:
        c = a._terms[0][1]
        return b if c == 1 else b.scale(c)
    if b.is_const:
        c = b._terms[0][1]
        return a if c == 1 else a.scale(c)
    ta = _as_factor(a, b)
    tb = _as_factor(b, a)
    out: dict = {}
    pending = []
    for m1, c1 in ta:
        for m2, c2 in tb:
            m, extra = _mono_mul(m1, m2)
            c = c1 * c2
            if extra is None:
                out[m] = out.get(m, 0) + c
            else:
                pending.append(_expand_extra(m, c, extra))
    result = Expr._from_dict(out)
    if pending:
        result = add_all([result] + pending)
    return result


def _expand_extra(mono, coeff, extra) -> Expr:
    acc = Expr(((mono, Fraction(coeff)),))
    for i in range(0, len(extra), 2):
        atom, e = extra[i], extra[i + 1]
        acc = _mul(acc, atom.base ** e)
    return acc


def _primitive(e: Expr):
    terms = e._terms
    exps = [dict(m) for m, _ in terms]
    atoms = {a for d in exps for a in d}
    common = {}
    for a in atoms:
        k = min(d.get(a, 0) for d in exps)
        if k:
            common[a] = k
    mono = tuple(sorted(common.items(), key=_atom_sort_key))
    if mono:
        # divide exponents directly: going through _mul would ask e for its
        # primitive part again when the shared factor carries nested denominators
        inv = tuple((a, -k) for a, k in mono)
        out: dict = {}
        pending = []
        for m, c in terms:
            mm, extra = _mono_mul(m, inv)
            if extra is None:
                out[mm] = out.get(mm, 0) + c
            else:
                pending.append(_expand_extra(mm, c, extra))
        base = Expr._from_dict(out)
        if pending:
            base = add_all([base] + pending)
    else:
        base = e
    content = base._terms[0][1]
    if content != 1:
        base = base.scale(1 / content)
    return content, mono, base


@functools.lru_cache(maxsize=1 << 18)
def _diff_cached(e: Expr, var: str) -> Expr:
    parts = []
    for m, c in e._terms:
        for idx, (a, k) in enumerate(m):
            if var not in a.free:
                continue
            da = a.derivative(var)
            if da.is_structurally_zero:
                continue
            rest = list(m[:idx]) + list(m[idx + 1:])
            if k - 1 != 0:
                rest.append((a, k - 1))
                rest.sort(key=_atom_sort_key)
            parts.append(_mul(Expr(((tuple(rest), c * k),)), da))
    return add_all(parts)


def add_all(parts: Iterable[Expr]) -> Expr:
    d: dict = {}
    for p in parts:
        for m, c in p._terms:
            d[m] = d.get(m, 0) + c
    return Expr._from_dict(d)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Expr.const(value)
    if isinstance(value, str):
        from .parser import parse

        return parse(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def symbol(name: str) -> Expr:
    return Expr(((((Sym(name), 1),), Fraction(1)),))


def symbols(names: str) -> list[Expr]:
    return [symbol(n) for n in names.replace(",", " ").split()]


def const(value) -> Expr:
    return Expr.const(value)


def apply_fn(fn: str, arg: Expr) -> Expr:
    if fn not in FUNCTIONS:
        raise ValueError(f"unknown function {fn!r}")
    arg = as_expr(arg)
    if arg.is_structurally_zero:
        return ZERO if fn == "sin" else ONE
    return Expr(((((Fn(fn, arg), 1),), Fraction(1)),))


def sin(e) -> Expr:
    return apply_fn("sin", e)


def cos(e) -> Expr:
    return apply_fn("cos", e)


def exp(e) -> Expr:
    return apply_fn("exp", e)


def differentiate(e: Expr, var: str) -> Expr:
    return as_expr(e).diff(var)


def substitute(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    return as_expr(e).subs({k: as_expr(v) for k, v in bindings.items()})


def normalize(e) -> Expr:
    """Expressions are canonical on construction, so this only coerces."""
    return as_expr(e)


ZERO = Expr(())
ONE = Expr((((), Fraction(1)),))
