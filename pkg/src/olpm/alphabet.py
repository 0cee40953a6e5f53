"""Typed symbol alphabet.

A :class:`TypeHierarchy` compiles named types into bit vectors over a finite
atom space.  Every atom is a primary symbol (a segment, a technical symbol
such as ``repeat`` or ``skip``, or a marker such as a boundary) together with
one value for each secondary dimension that applies to it.  Secondary
dimensions (sync, sonority tag, stress, weight, ...) are declared for a kind of
primary symbol, normally ``segment``; technical symbols usually carry none.

Labels are Python ints used as bit sets.  Boolean formulas over type names are
compiled with ``&`` (and), ``;`` or ``|`` (or) and ``~`` (not, relative to all
atoms).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

PRODUCER = 1
CONSUMER = 0

TECHNICAL = ("repeat", "skip")


class HierarchyError(ValueError):
    pass


class FormulaError(ValueError):
    pass


@dataclass
class Dimension:
    name: str
    values: tuple
    applies_to: str  # a type name over primary symbols


class TypeHierarchy:
    """Immutable-after-compile type hierarchy over a product atom space.

    Build with :meth:`add_*` calls (or :func:`define_hierarchy`) and then call
    :meth:`compile`.  After compilation ``types`` maps every name to its bit
    vector and ``atoms`` lists each atom as a tuple
    ``(primary, ((dim, value), ...))``.
    """

    def __init__(self):
        self.segments: list[str] = []
        self.technical: list[str] = list(TECHNICAL)
        self.markers: list[str] = []
        self.dimensions: list[Dimension] = []
        self.parents: dict[str, list[str]] = {}  # type -> children
        self.disjoint: list[tuple] = []
        self.compiled = False
        self.atoms: list[tuple] = []
        self.types: dict[str, int] = {}
        self._primary_mask: dict[str, int] = {}

    # declaration --------------------------------------------------------
    def _check_open(self):
        if self.compiled:
            raise HierarchyError("hierarchy already compiled")

    def add_segments(self, names):
        self._check_open()
        self.segments.extend(n for n in names if n not in self.segments)

    def add_markers(self, names):
        self._check_open()
        self.markers.extend(n for n in names if n not in self.markers)

    def set_technical(self, names):
        self._check_open()
        self.technical = list(names)

    def add_dimension(self, name, values, applies_to="segment"):
        self._check_open()
        if any(d.name == name for d in self.dimensions):
            raise HierarchyError(f"dimension {name} declared twice")
        self.dimensions.append(Dimension(name, tuple(values), applies_to))

    def add_type(self, name, children):
        self._check_open()
        self.parents.setdefault(name, [])
        for c in children:
            if c not in self.parents[name]:
                self.parents[name].append(c)

    def add_disjoint(self, names):
        self._check_open()
        self.disjoint.append(tuple(names))

    # compilation --------------------------------------------------------
    def _primary_types(self):
        """Types over primary symbols only, resolved before dimensions."""
        prim = {}
        prim["segment"] = set(self.segments)
        prim["content"] = set(self.segments) | set(self.markers)
        prim["technical"] = set(self.technical)
        prim["marker"] = set(self.markers)
        prim["anything"] = set(self.segments) | set(self.technical) | set(self.markers)
        for p in prim["anything"]:
            prim[p] = {p}
        return prim

    def compile(self):
        if self.compiled:
            return self
        primaries = self.segments + self.technical + self.markers
        if len(set(primaries)) != len(primaries):
            raise HierarchyError("primary symbol declared twice")
        dimvals = set()
        for d in self.dimensions:
            for v in d.values:
                if v in dimvals or v in primaries:
                    raise HierarchyError(f"value {v} declared twice")
                dimvals.add(v)
        self._check_acyclic()

        prim = self._primary_types()
        # resolve user types that consist of primary symbols only; these may
        # be used as the domain of a dimension
        def prim_denot(name, stack=()):
            if name in prim:
                return prim[name]
            if name not in self.parents:
                return None
            if name in stack:
                raise HierarchyError(f"cycle through {name}")
            out = set()
            for c in self.parents[name]:
                s = prim_denot(c, stack + (name,))
                if s is None:
                    return None
                out |= s
            return out

        for d in self.dimensions:
            if prim_denot(d.applies_to) is None:
                raise HierarchyError(f"dimension {d.name} applies to unknown type {d.applies_to}")

        atoms = []
        for p in primaries:
            dims = [d for d in self.dimensions if p in prim_denot(d.applies_to)]
            for combo in itertools.product(*[d.values for d in dims]):
                atoms.append((p, tuple(zip((d.name for d in dims), combo))))
        self.atoms = atoms
        self.n = len(atoms)
        self.full = (1 << self.n) - 1

        types = {}
        for p in primaries:
            types[p] = 0
        for i, (p, vals) in enumerate(atoms):
            types[p] |= 1 << i
            for dname, v in vals:
                types[v] = types.get(v, 0) | (1 << i)
        for d in self.dimensions:
            types[d.name] = 0
            for v in d.values:
                types.setdefault(v, 0)
                types[d.name] |= types[v]
        self._primary_mask = {p: types[p] for p in primaries}
        for name, members in prim.items():
            if name not in types:
                m = 0
                for p in members:
                    m |= types[p]
                types[name] = m
        types["anything"] = self.full
        types["sigma"] = self.full

        # user types, resolved recursively
        def denot(name, stack=()):
            if name in types:
                return types[name]
            if name not in self.parents:
                raise HierarchyError(f"undeclared type {name}")
            if name in stack:
                raise HierarchyError(f"cycle through {name}")
            m = 0
            for c in self.parents[name]:
                m |= denot(c, stack + (name,))
            types[name] = m
            return m

        for name in self.parents:
            denot(name)
        self.types = types
        for group in self.disjoint:
            for a, b in itertools.combinations(group, 2):
                if a not in types or b not in types:
                    raise HierarchyError(f"disjointness over undeclared type {a if a not in types else b}")
                if types[a] & types[b]:
                    raise HierarchyError(f"types {a} and {b} declared disjoint but share atoms")
        self.compiled = True
        return self

    def _check_acyclic(self):
        state = {}

        def visit(n):
            if state.get(n) == 1:
                raise HierarchyError(f"cycle through {n}")
            if state.get(n) == 2:
                return
            state[n] = 1
            for c in self.parents.get(n, ()):
                visit(c)
            state[n] = 2

        for n in self.parents:
            visit(n)

    # queries --------------------------------------------------------------
    def mask(self, name) -> int:
        try:
            return self.types[name]
        except KeyError:
            raise FormulaError(f"unknown type {name}") from None

    def has(self, name) -> bool:
        return name in self.types

    def primary_of(self, i: int) -> str:
        return self.atoms[i][0]

    def atom_indices(self, mask: int):
        i = 0
        while mask:
            if mask & 1:
                yield i
            mask >>= 1
            i += 1

    def primaries_in(self, mask: int):
        """Primary symbols having at least one atom in ``mask``, in declaration order."""
        return [p for p, m in self._primary_mask.items() if m & mask]

    def compile_formula(self, text: str) -> int:
        return _FormulaParser(self, text).parse()

    def render(self, mask: int) -> str:
        """A formula string that compiles back to ``mask``."""
        if mask == 0:
            return "~anything"
        if mask == self.full:
            return "anything"
        parts = []
        for p, pm in self._primary_mask.items():
            m = mask & pm
            if not m:
                continue
            if m == pm:
                parts.append(p)
                continue
            for i in self.atom_indices(m):
                vals = self.atoms[i][1]
                parts.append("(" + " & ".join([p] + [v for _, v in vals]) + ")")
        return " ; ".join(parts)

    def dump(self) -> str:
        lines = [f"{i}\t{p}\t" + ",".join(v for _, v in vals) for i, (p, vals) in enumerate(self.atoms)]
        for name in sorted(self.types):
            lines.append(f"{name}\t{self.types[name]:0{self.n}b}")
        return "\n".join(lines)


_TOKEN = re.compile(r"\s*(?:(?P<op>[&;|~()])|(?P<id>'[^']*'|[A-Za-z_#][A-Za-z0-9_#']*))")


class _FormulaParser:
    def __init__(self, h, text):
        self.h = h
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise FormulaError(f"bad formula near {text[pos:]!r}")
            self.toks.append(m.group("op") or m.group("id"))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        v = self.disj()
        if self.peek() is not None:
            raise FormulaError(f"trailing input {self.peek()!r}")
        return v

    def disj(self):
        v = self.conj()
        while self.peek() in (";", "|"):
            self.take()
            v |= self.conj()
        return v

    def conj(self):
        v = self.unary()
        while self.peek() == "&":
            self.take()
            v &= self.unary()
        return v

    def unary(self):
        t = self.take()
        if t == "~":
            return self.h.full & ~self.unary()
        if t == "(":
            v = self.disj()
            if self.take() != ")":
                raise FormulaError("missing )")
            return v
        if t is None or t in "&;|)":
            raise FormulaError(f"unexpected {t!r}")
        if t.startswith("'"):
            t = t[1:-1]
        return self.h.mask(t)


def define_hierarchy(segments=(), markers=(), technical=TECHNICAL, dimensions=(), types=(), disjoint=()):
    """Convenience constructor.

    ``dimensions`` is a sequence of ``(name, values, applies_to)``; ``types`` a
    sequence of ``(name, children)``.
    """
    h = TypeHierarchy()
    h.add_segments(segments)
    h.add_markers(markers)
    h.set_technical(technical)
    for d in dimensions:
        h.add_dimension(*d)
    for name, children in types:
        h.add_type(name, children)
    for group in disjoint:
        h.add_disjoint(group)
    return h.compile()


# labels ------------------------------------------------------------------

@dataclass(frozen=True)
class Label:
    """An arc label: a set of atoms plus a producer/consumer flag."""

    atoms: int
    pc: int = PRODUCER
    h: TypeHierarchy = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, h, formula, pc=PRODUCER):
        return cls(h.compile_formula(formula), pc, h)


def _same(a: Label, b: Label):
    if a.h is not None and b.h is not None and a.h is not b.h:
        raise HierarchyError("labels from different hierarchies")
    return a.h if a.h is not None else b.h


def intersect(a: Label, b: Label) -> Label:
    return Label(a.atoms & b.atoms, a.pc, _same(a, b))


def union(a: Label, b: Label) -> Label:
    return Label(a.atoms | b.atoms, a.pc, _same(a, b))


def complement(a: Label) -> Label:
    if a.h is None:
        raise HierarchyError("complement needs a hierarchy")
    return Label(a.h.full & ~a.atoms, a.pc, a.h)


def is_empty(a: Label) -> bool:
    return a.atoms == 0


def subsumes(a: Label, b: Label) -> bool:
    _same(a, b)
    return b.atoms & ~a.atoms == 0


def compatible(a: Label, b: Label) -> bool:
    return not is_empty(intersect(a, b))
