"""Grammar files: declarations plus macro definitions over regular expressions.

A grammar file is a sequence of statements, each ending in ``.``::

    segments a i u b p.           # primary symbols
    markers '#'.
    dimension sync = synced unsynced.          # applies to segment
    dimension tag(segment) = up down.
    type vowel = a i u.
    disjoint vowel labial.
    weights unsynced = 1, repeat = -inf.
    sonority consonant < vowel.

    word(Stem) := Stem & affix.
    assimilation_for([]) := '{}'.
    assimilation_for([C|Cs]) := { [consumer(C), consumer(C)], assimilation_for(Cs) }.

Expression syntax, loosest first: ``;`` (union, mostly inside formulas),
``o`` (composition), ``&`` and ``-`` (intersection, difference), prefix ``~``
(formulas only), postfix ``*`` ``+`` ``^``, ``:`` (symbol pair).  Brackets:
``[a, b]`` concatenation, ``{a, b}`` union, ``[]`` empty string, ``{}`` and
``'{}'`` the empty language.  ``"abc"`` is a string of segment producers,
``?`` any symbol, ``$@`` any symbol that is neither segment nor technical.

Arguments are passed by name: a call substitutes the argument expressions into
the body before evaluating it.  Inside ``consumer(...)`` and
``producer(...)`` the argument is read as a Boolean type formula.  Results are
memoized on the substituted expression.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import enrich as E
from . import fsa as F
from . import fst as T
from .alphabet import CONSUMER, PRODUCER, FormulaError, HierarchyError, TypeHierarchy
from .blo import WeightScheme, blo as run_blo
from .fsa import Fsa
from .fst import Fst


class DslError(ValueError):
    pass


# lexing ---------------------------------------------------------------------

_TOK = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*|\#[^\n]*)
  | (?P<str>"[^"]*")
  | (?P<q>'[^']*')
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|\$@|[\[\]{}(),&;~*+^:|?\-.=<])
    """,
    re.VERBOSE,
)


@dataclass
class Tok:
    kind: str
    val: object
    line: int
    col: int = 1

    @property
    def where(self):
        return f"line {self.line}, column {self.col}"

    def __repr__(self):
        return f"{self.val!r}@{self.line}"


def tokenize(text: str):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        col = pos - line_start + 1
        m = _TOK.match(text, pos)
        if not m:
            raise DslError(f"line {line}, column {col}: unexpected character {text[pos]!r}")
        kind = m.lastgroup
        s = m.group(kind)
        if kind == "str":
            toks.append(Tok("str", s[1:-1], line, col))
        elif kind == "q":
            toks.append(Tok("q", s[1:-1], line, col))
        elif kind == "num":
            toks.append(Tok("num", int(s), line, col))
        elif kind in ("id", "op"):
            toks.append(Tok(kind, s, line, col))
        if "\n" in s:
            line += s.count("\n")
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    return toks


# parsing ------------------------------------------------------------------------

DECL_KEYWORDS = {"segments", "markers", "technical", "dimension", "type", "disjoint", "weights", "sonority"}
_STARTERS = {"[", "{", "(", "?", "$@", "~"}


@dataclass
class Clause:
    name: str
    params: tuple
    body: tuple
    line: int


@dataclass
class Declarations:
    segments: list = field(default_factory=list)
    markers: list = field(default_factory=list)
    technical: list | None = None
    dimensions: list = field(default_factory=list)
    types: list = field(default_factory=list)
    disjoint: list = field(default_factory=list)
    weights: dict = field(default_factory=dict)
    weight_default: float = 0
    sonority: list = field(default_factory=list)


class Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, val, k=0):
        t = self.peek(k)
        return t is not None and t.kind in ("op", "id") and t.val == val

    def take(self, val=None):
        t = self.peek()
        if t is None:
            last = self.toks[-1].where if self.toks else "line 1, column 1"
            raise DslError(f"{last}: unexpected end of input")
        if val is not None and not (t.kind in ("op", "id") and t.val == val):
            raise DslError(f"{t.where}: expected {val!r}, found {t.val!r}")
        self.i += 1
        return t

    def name(self):
        t = self.take()
        if t.kind not in ("id", "q"):
            raise DslError(f"{t.where}: expected a name, found {t.val!r}")
        return t.val

    # statements
    def program(self, decl: Declarations):
        clauses = []
        while self.peek() is not None:
            t = self.peek()
            nxt = self.peek(1)
            if t.kind == "id" and t.val in DECL_KEYWORDS and nxt is not None and not (
                nxt.kind == "op" and nxt.val in (":=", "(")
            ):
                self.declaration(decl)
            else:
                clauses.append(self.definition())
        return clauses

    def declaration(self, d: Declarations):
        kw = self.take().val
        line = self.toks[self.i - 1].line
        if kw in ("segments", "markers", "technical", "disjoint"):
            names = []
            while not self.at("."):
                names.append(self.name())
            if kw == "segments":
                d.segments += names
            elif kw == "markers":
                d.markers += names
            elif kw == "technical":
                d.technical = names
            else:
                d.disjoint.append(names)
        elif kw == "dimension":
            nm = self.name()
            applies = "segment"
            if self.at("("):
                self.take("(")
                applies = self.name()
                self.take(")")
            self.take("=")
            vals = []
            while not self.at("."):
                vals.append(self.name())
            d.dimensions.append((nm, vals, applies))
        elif kw == "type":
            nm = self.name()
            self.take("=")
            kids = []
            while not self.at("."):
                kids.append(self.name())
            d.types.append((nm, kids))
        elif kw == "weights":
            while not self.at("."):
                nm = self.name()
                self.take("=")
                v = self.number()
                if nm == "default":
                    d.weight_default = v
                else:
                    d.weights[nm] = v
                if self.at(","):
                    self.take(",")
        elif kw == "sonority":
            d.sonority.append(self.name())
            while self.at("<"):
                self.take("<")
                d.sonority.append(self.name())
        self.take(".")

    def number(self):
        sign = 1
        if self.at("-"):
            self.take("-")
            sign = -1
        t = self.take()
        if t.kind == "num":
            return sign * t.val
        if t.kind == "id" and t.val == "inf":
            return sign * math.inf
        raise DslError(f"{t.where}: expected a number, found {t.val!r}")

    def definition(self):
        t = self.take()
        if t.kind != "id":
            raise DslError(f"{t.where}: expected a definition, found {t.val!r}")
        params = ()
        if self.at("("):
            self.take("(")
            ps = [self.pattern()]
            while self.at(","):
                self.take(",")
                ps.append(self.pattern())
            self.take(")")
            params = tuple(ps)
        self.take(":=")
        body = self.expr()
        self.take(".")
        return Clause(t.val, params, body, t.line)

    def pattern(self):
        t = self.peek()
        if self.at("["):
            self.take("[")
            if self.at("]"):
                self.take("]")
                return ("nil",)
            head = self.pattern()
            self.take("|")
            tail = self.pattern()
            self.take("]")
            return ("cons", head, tail)
        t = self.take()
        if t.kind == "id" and t.val[0].isupper():
            return ("var", t.val)
        if t.kind in ("id", "q"):
            return ("lit", t.val)
        raise DslError(f"{t.where}: bad parameter {t.val!r}")

    # expressions
    def expr(self):
        a = self.comp()
        while self.at(";"):
            self.take(";")
            a = ("semi", a, self.comp())
        return a

    def _starts_operand(self, t):
        return t is not None and (t.kind in ("id", "q", "str", "num") or (t.kind == "op" and t.val in _STARTERS))

    def comp(self):
        a = self.inter()
        while self.at("o") and self._starts_operand(self.peek(1)):
            self.take()
            a = ("o", a, self.inter())
        return a

    def inter(self):
        a = self.unary()
        while self.at("&") or self.at("-"):
            op = self.take().val
            a = ("and" if op == "&" else "diff", a, self.unary())
        return a

    def unary(self):
        if self.at("~"):
            self.take()
            return ("not", self.unary())
        return self.postfix()

    def postfix(self):
        a = self.pair()
        while True:
            if self.at("*"):
                a = ("star", a)
            elif self.at("+"):
                a = ("plus", a)
            elif self.at("^"):
                a = ("opt", a)
            else:
                return a
            self.take()

    def pair(self):
        a = self.primary()
        if self.at(":"):
            self.take(":")
            a = ("pair", a, self.primary())
        return a

    def primary(self):
        t = self.take()
        if t.kind == "str":
            return ("str", t.val)
        if t.kind == "q":
            return ("q", t.val)
        if t.kind == "num":
            return ("num", t.val)
        if t.kind == "id":
            if self.at("("):
                self.take("(")
                args = [self.expr()]
                while self.at(","):
                    self.take(",")
                    args.append(self.expr())
                self.take(")")
                return ("call", t.val, tuple(args))
            return ("id", t.val)
        v = t.val
        if v == "?":
            return ("any",)
        if v == "$@":
            return ("rest",)
        if v == "(":
            a = self.expr()
            self.take(")")
            return a
        if v == "[":
            items, tail = [], None
            if not self.at("]"):
                items.append(self.expr())
                while self.at(","):
                    self.take(",")
                    items.append(self.expr())
                if self.at("|"):
                    self.take("|")
                    tail = self.expr()
            self.take("]")
            return ("cat", tuple(items), tail)
        if v == "{":
            items = []
            if not self.at("}"):
                items.append(self.expr())
                while self.at(","):
                    self.take(",")
                    items.append(self.expr())
            self.take("}")
            return ("set", tuple(items))
        raise DslError(f"{t.where}: unexpected {v!r}")


def parse_expr(text: str):
    p = Parser(tokenize(text))
    a = p.expr()
    if p.peek() is not None:
        raise DslError(f"trailing input {p.peek().val!r}")
    return a


# substitution and matching -------------------------------------------------------

def subst(ast, env):
    if not env:
        return ast
    tag = ast[0]
    if tag == "id":
        return env.get(ast[1], ast)
    if tag == "call":
        return ("call", ast[1], tuple(subst(a, env) for a in ast[2]))
    if tag == "cat":
        return ("cat", tuple(subst(a, env) for a in ast[1]), None if ast[2] is None else subst(ast[2], env))
    if tag == "set":
        return ("set", tuple(subst(a, env) for a in ast[1]))
    if tag in ("and", "diff", "o", "semi", "pair"):
        return (tag, subst(ast[1], env), subst(ast[2], env))
    if tag in ("not", "star", "plus", "opt"):
        return (tag, subst(ast[1], env))
    return ast


def _match(pat, ast, env):
    kind = pat[0]
    if kind == "var":
        if pat[1] in env and env[pat[1]] != ast:
            return False
        env[pat[1]] = ast
        return True
    if kind == "lit":
        return ast in (("id", pat[1]), ("q", pat[1]))
    if ast[0] != "cat":
        return False
    items, tail = ast[1], ast[2]
    if kind == "nil":
        return not items and (tail is None or _match(pat, tail, env))
    if not items:
        return tail is not None and _match(pat, tail, env)
    return _match(pat[1], items[0], env) and _match(pat[2], ("cat", items[1:], tail), env)


def render_ast(ast) -> str:
    tag = ast[0]
    if tag in ("id",):
        return ast[1]
    if tag == "q":
        return f"'{ast[1]}'"
    if tag == "str":
        return f'"{ast[1]}"'
    if tag == "num":
        return str(ast[1])
    if tag == "any":
        return "?"
    if tag == "rest":
        return "$@"
    if tag == "call":
        return f"{ast[1]}(" + ", ".join(render_ast(a) for a in ast[2]) + ")"
    if tag == "cat":
        s = ", ".join(render_ast(a) for a in ast[1])
        if ast[2] is not None:
            s += " | " + render_ast(ast[2])
        return f"[{s}]"
    if tag == "set":
        return "{" + ", ".join(render_ast(a) for a in ast[1]) + "}"
    ops = {"and": "&", "diff": "-", "o": "o", "semi": ";", "pair": ":"}
    if tag in ops:
        return f"({render_ast(ast[1])} {ops[tag]} {render_ast(ast[2])})"
    post = {"star": "*", "plus": "+", "opt": "^"}
    if tag in post:
        return f"({render_ast(ast[1])}){post[tag]}"
    if tag == "not":
        return f"~{render_ast(ast[1])}"
    return repr(ast)


# the grammar object ------------------------------------------------------------------

PRELUDE = """
epsilon := [].
material_is(Spec) := [consumer(Spec) *].
first_(X) := [not_contains(X), X].
no_peripheral_occurence_of(Segment) :=
    ([consumer(segment & ~ Segment), [material_is(segment), consumer(segment & ~ Segment)] ^] ^).
extraction :=
    [ { identity(consumer(repeat)), consumer((segment;skip)) : consumer((segment;skip)) } *,
      $@:$@ * ].
"""


class Grammar:
    """A compiled grammar: hierarchy, weights and macro table."""

    def __init__(self, text: str, source: str = "<string>"):
        self.source = source
        self.decl = Declarations()
        try:
            prelude = Parser(tokenize(PRELUDE)).program(Declarations())
            clauses = Parser(tokenize(text)).program(self.decl)
        except DslError as e:
            raise DslError(f"{source}: {e}") from None
        self.h = self._hierarchy()
        self.scheme = WeightScheme(self.h, dict(self.decl.weights), self.decl.weight_default)
        self.sonority = [self.h.mask(c) for c in self.decl.sonority]
        self.clauses: dict = {}
        for c in prelude:
            self.clauses.setdefault((c.name, len(c.params)), []).append(c)
        user = {}
        for c in clauses:
            prev = user.setdefault((c.name, len(c.params)), [])
            # a clause after a catch-all one could never be used
            if any(all(p[0] == "var" for p in q.params) for q in prev):
                raise DslError(f"{source}: line {c.line}: duplicate definition of {c.name}/{len(c.params)}")
            prev.append(c)
        self.clauses.update(user)
        self.user_macros = list(user)
        self.memo: dict = {}
        self.ev = Evaluator(self)

    def _hierarchy(self):
        d = self.decl
        h = TypeHierarchy()
        h.add_segments(d.segments)
        h.add_markers(d.markers)
        if d.technical is not None:
            h.set_technical(d.technical)
        try:
            for dim in d.dimensions:
                h.add_dimension(*dim)
            for name, kids in d.types:
                h.add_type(name, kids)
            for g in d.disjoint:
                h.add_disjoint(g)
            return h.compile()
        except (HierarchyError, FormulaError) as e:
            raise DslError(f"{self.source}: {e}") from None

    def macros(self):
        return sorted(f"{n}/{a}" for n, a in self.user_macros)

    def has_macro(self, name, arity=0):
        return (name, arity) in self.clauses

    def expand(self, text: str):
        """Evaluate an expression such as ``"word(stems)"`` or a macro name."""
        try:
            return self.ev.eval(parse_expr(text))
        except RecursionError:
            self.ev.depth = 0
            raise DslError("macro expansion too deep (recursive definition?)") from None

    def fsa(self, text: str) -> Fsa:
        v = self.expand(text)
        if isinstance(v, Fst):
            v = T.output_projection(v)
        if not isinstance(v, Fsa):
            raise DslError(f"{text} does not denote an automaton")
        return v


def load_grammar(path) -> Grammar:
    p = Path(path)
    return Grammar(p.read_text(encoding="utf-8"), str(p))


# evaluation ------------------------------------------------------------------------

class Evaluator:
    def __init__(self, g: Grammar):
        self.g = g
        self.h = g.h
        self.memo = g.memo
        self.depth = 0

    # formulas
    def formula(self, ast) -> int:
        tag = ast[0]
        h = self.h
        if tag in ("id", "q"):
            if h.has(ast[1]):
                return h.mask(ast[1])
            raise DslError(f"unknown type {ast[1]!r} in formula")
        if tag == "any":
            return h.full
        if tag == "and":
            return self.formula(ast[1]) & self.formula(ast[2])
        if tag == "diff":
            return self.formula(ast[1]) & ~self.formula(ast[2])
        if tag == "semi":
            return self.formula(ast[1]) | self.formula(ast[2])
        if tag == "not":
            return h.full & ~self.formula(ast[1])
        if tag == "set":
            m = 0
            for a in ast[1]:
                m |= self.formula(a)
            return m
        raise DslError(f"not a type formula: {render_ast(ast)}")

    # expressions
    def eval(self, ast):
        if ast in self.memo:
            return self.memo[ast]
        self.depth += 1
        if self.depth > 400:
            raise DslError("macro expansion too deep (recursive definition?)")
        try:
            v = self._eval(ast)
        finally:
            self.depth -= 1
        self.memo[ast] = v
        return v

    def fsa(self, ast) -> Fsa:
        v = self.eval(ast)
        if isinstance(v, Fst):
            return T.output_projection(v)
        if not isinstance(v, Fsa):
            raise DslError(f"expected an automaton: {render_ast(ast)}")
        return v

    def _eval(self, ast):
        tag = ast[0]
        h = self.h
        if tag == "id":
            return self._ident(ast[1])
        if tag == "q":
            if ast[1] == "{}":
                return F.empty(h)
            return self._ident(ast[1], quoted=True)
        if tag == "num":
            return ast[1]
        if tag == "str":
            return self._segments(ast[1])
        if tag == "any":
            return F.symbol(h, h.full)
        if tag == "rest":
            return F.symbol(h, self._rest_mask())
        if tag == "call":
            return self._call(ast[1], ast[2])
        if tag == "cat":
            parts = [self.eval(a) for a in ast[1]]
            if ast[2] is not None:
                parts.append(self.eval(ast[2]))
            if not parts:
                return F.epsilon(h)
            if any(isinstance(p, Fst) for p in parts):
                return T.concat(*parts)
            return F.concat(*[self._need_fsa(p, ast) for p in parts])
        if tag == "set":
            parts = [self.eval(a) for a in ast[1]]
            if not parts:
                return F.empty(h)
            if any(isinstance(p, Fst) for p in parts):
                return T.union(*parts)
            return F.union(*[self._need_fsa(p, ast) for p in parts])
        if tag in ("star", "plus", "opt"):
            v = self.eval(ast[1])
            if isinstance(v, Fst):
                return {"star": T.star, "plus": T.plus, "opt": T.optional}[tag](v)
            v = self._need_fsa(v, ast)
            return {"star": F.star, "plus": F.plus, "opt": F.optional}[tag](v)
        if tag == "and":
            return F.intersect(self.fsa(ast[1]), self.fsa(ast[2]))
        if tag == "diff":
            return F.intersect(self.fsa(ast[1]), F.complement(self.fsa(ast[2])))
        if tag == "semi":
            return F.union(self.fsa(ast[1]), self.fsa(ast[2]))
        if tag == "o":
            return T.compose(self.eval(ast[1]), self.eval(ast[2]))
        if tag == "pair":
            if ast[1] == ("rest",) and ast[2] == ("rest",):
                return T.ident_pair(h, self._rest_mask())
            return T.pair(h, self._single(ast[1]), self._single(ast[2]))
        if tag == "not":
            raise DslError(f"'~' is only allowed inside type formulas: {render_ast(ast)}")
        raise DslError(f"cannot evaluate {ast!r}")

    def _need_fsa(self, v, ast):
        if not isinstance(v, Fsa):
            raise DslError(f"expected an automaton in {render_ast(ast)}")
        return v

    def _rest_mask(self):
        h = self.h
        return h.full & ~h.mask("segment") & ~h.mask("technical")

    def _single(self, ast):
        """Label of a one-symbol expression, or None for the empty string."""
        a = F.minimize(self.fsa(ast))
        if a.starts & a.finals and not a.arcs:
            return None
        labels = {(m, pc) for s, m, pc, d in a.arcs}
        ok = a.n == 2 and not (a.starts & a.finals) and all(s in a.starts and d in a.finals for s, _, _, d in a.arcs)
        pcs = {pc for _, pc in labels}
        if not ok or len(pcs) != 1:
            raise DslError(f"pair sides must be single symbols or []: {render_ast(ast)}")
        m = 0
        for x, _ in labels:
            m |= x
        return (m, pcs.pop())

    def _segments(self, s):
        h = self.h
        labels = []
        for ch in s:
            if not h.has(ch):
                raise DslError(f"unknown segment {ch!r} in {s!r}")
            labels.append((h.mask(ch), PRODUCER))
        return F.string(h, labels)

    def _ident(self, name, quoted=False):
        if (name, 0) in self.g.clauses and not quoted:
            return self._expand(name, ())
        if self.h.has(name):
            return F.symbol(self.h, self.h.mask(name))
        b = BUILTINS.get((name, 0))
        if b is not None and not quoted:
            return b(self, ())
        if name[0].isupper() and not quoted:
            raise DslError(f"unbound variable {name}")
        raise DslError(f"unknown name {name!r}")

    def _call(self, name, args):
        if (name, len(args)) in self.g.clauses:
            return self._expand(name, args)
        b = BUILTINS.get((name, len(args)))
        if b is None:
            arities = sorted({a for n, a in list(self.g.clauses) + list(BUILTINS) if n == name})
            if arities:
                raise DslError(f"{name} takes {' or '.join(map(str, arities))} argument(s), not {len(args)}")
            raise DslError(f"unknown macro {name}/{len(args)}")
        return b(self, args)

    def _expand(self, name, args):
        for c in self.g.clauses[(name, len(args))]:
            env = {}
            if all(_match(p, a, env) for p, a in zip(c.params, args)):
                return self.eval(subst(c.body, env))
        raise DslError(f"no clause of {name}/{len(args)} matches " + ", ".join(render_ast(a) for a in args))


# builtins ------------------------------------------------------------------------

BUILTINS: dict = {}


def builtin(name, arity):
    def deco(fn):
        BUILTINS[(name, arity)] = fn
        return fn
    return deco


@builtin("consumer", 1)
def _consumer(ev, args):
    return F.symbol(ev.h, ev.formula(args[0]), CONSUMER)


@builtin("producer", 1)
def _producer(ev, args):
    return F.symbol(ev.h, ev.formula(args[0]), PRODUCER)


def _string_arg(ast):
    if ast[0] in ("str", "id", "q"):
        return ast[1]
    raise DslError(f"expected a string: {render_ast(ast)}")


@builtin("lexeme", 1)
@builtin("stringToSegments", 1)
def _lexeme(ev, args):
    return ev._segments(_string_arg(args[0]))


@builtin("preprocessed", 1)
def _preprocessed(ev, args):
    return preprocessed(ev.g, _string_arg(args[0]))


def ignore(a: Fsa, s: Fsa) -> Fsa:
    """Strings of ``a`` with strings of ``s`` inserted anywhere."""
    a = F.remove_epsilon(a)
    s = F.remove_epsilon(s)
    h = a.h
    # states: (q, None) for a's states and (q, t) while inside a copy of s
    index, arcs, eps, finals = {}, [], [], []

    def st(key):
        if key not in index:
            index[key] = len(index)
        return index[key]

    for q in range(a.n):
        st((q, None))
    oa, os_ = a.out(), s.out()
    for q in range(a.n):
        i = st((q, None))
        if q in a.finals:
            finals.append(i)
        for _, m, pc, d in oa[q]:
            arcs.append((i, m, pc, st((d, None))))
        for t0 in s.starts:
            eps.append((i, st((q, t0))))
        for t in range(s.n):
            j = st((q, t))
            for _, m, pc, d in os_[t]:
                arcs.append((j, m, pc, st((q, d))))
            if t in s.finals:
                eps.append((j, i))
    starts = frozenset(index[(q, None)] for q in a.starts)
    return F.trim(Fsa(len(index), starts, frozenset(finals), tuple(arcs), h, tuple(eps)))


@builtin("ignore", 2)
def _ignore(ev, args):
    return ignore(ev.fsa(args[0]), ev.fsa(args[1]))


def not_contains(x: Fsa) -> Fsa:
    h = x.h
    sig = F.sigma_star(h, CONSUMER)
    return F.complement(F.concat(sig, x, sig))


def _fixed_length(x: Fsa):
    x = F.trim(F.remove_epsilon(x))
    if not x.finals or not F.is_acyclic(x):
        return None
    lengths = {len(p) for p in F.paths(x, x.n)}
    return lengths.pop() if len(lengths) == 1 else None


@builtin("not_contains", 1)
def _not_contains(ev, args):
    return not_contains(ev.fsa(args[0]))


def _not_contains_n(n):
    def fn(ev, args):
        x = ev.fsa(args[0])
        if _fixed_length(x) != n:
            raise DslError(f"not_contains{n} needs an expression of exactly {n} symbols: {render_ast(args[0])}")
        return not_contains(x)
    return fn


BUILTINS[("not_contains2", 1)] = _not_contains_n(2)
BUILTINS[("not_contains3", 1)] = _not_contains_n(3)


def _list_items(ast):
    if ast[0] != "cat":
        raise DslError(f"expected a list: {render_ast(ast)}")
    items = list(ast[1])
    while ast[2] is not None:
        ast = ast[2]
        if ast[0] != "cat":
            raise DslError("improper list")
        items += ast[1]
    return items


@builtin("enforce_agreement_in_", 2)
def _agreement(ev, args):
    if args[0][0] != "id":
        raise DslError("enforce_agreement_in_ needs a macro name")
    name = args[0][1]
    parts = [ev.eval(("call", name, (item,))) for item in _list_items(args[1])]
    return F.union(*parts) if parts else F.empty(ev.h)


@builtin("assimilation_for", 1)
def _assimilation(ev, args):
    parts = []
    for c in _list_items(args[0]):
        m = ev.formula(c)
        parts.append(F.concat(F.symbol(ev.h, m, CONSUMER), F.symbol(ev.h, m, CONSUMER)))
    return F.union(*parts) if parts else F.empty(ev.h)


def _loop_arg(ev, args):
    return ev.formula(args[1]) if len(args) > 1 else None


for _name, _fn in (
    ("discontiguous", E.discontiguous),
    ("internally_discontiguous", E.internally_discontiguous),
    ("contiguous", E.contiguous),
):
    def _mk(fn):
        def one(ev, args):
            return fn(ev.fsa(args[0]), _loop_arg(ev, args))
        return one
    BUILTINS[(_name, 1)] = _mk(_fn)
    BUILTINS[(_name, 2)] = _mk(_fn)


@builtin("add_repeats", 1)
def _add_repeats(ev, args):
    return E.add_repeats(ev.fsa(args[0]))


@builtin("add_skips", 1)
def _add_skips(ev, args):
    return E.add_skips(ev.fsa(args[0]))


@builtin("closed_interpretation", 1)
def _closed(ev, args):
    return F.closed_interpretation(ev.fsa(args[0]))


@builtin("blo", 2)
def _blo(ev, args):
    k = ev.eval(args[1])
    if not isinstance(k, int) or k < 1:
        raise DslError("blo needs a positive look-ahead")
    a = F.minimize(ev.fsa(args[0]))
    if not a.finals:
        return a
    return run_blo(a, k, ev.g.scheme)


@builtin("mb", 1)
@builtin("minimize", 1)
def _mb(ev, args):
    return F.minimize(ev.fsa(args[0]))


@builtin("cache", 1)
def _cache(ev, args):
    return ev.eval(args[0])


@builtin("identity", 1)
def _identity(ev, args):
    return T.identity(ev.fsa(args[0]))


@builtin("complement", 1)
def _complement(ev, args):
    return F.complement(ev.fsa(args[0]))


@builtin("reverse", 1)
def _reverse(ev, args):
    return F.reverse(ev.fsa(args[0]))


@builtin("plain_sonority_differences", 0)
def _plain_son(ev, args):
    from .prosody import plain_sonority_differences
    return plain_sonority_differences(ev.h, ev.g.sonority)


@builtin("boundary_conditions", 0)
def _boundary(ev, args):
    from .prosody import boundary_conditions
    return boundary_conditions(ev.h)


def preprocessed(g: Grammar, s: str) -> Fsa:
    """Consumer pattern matching ``s`` with technical symbols anywhere.

    Each character must name a segment or marker; categorial information (the
    ``categorial_information`` type, if declared) may follow the last one.
    """
    h = g.h
    tech = h.mask("technical")
    cat = h.mask("categorial_information") if h.has("categorial_information") else 0
    loop = F.star(F.symbol(h, tech, CONSUMER))
    parts = []
    content = h.mask("content")
    for ch in s:
        if not h.has(ch) or not h.mask(ch) & content:
            raise DslError(f"{ch!r} is not a segment or marker")
        parts += [loop, F.symbol(h, h.mask(ch) & content, CONSUMER)]
    parts.append(F.star(F.symbol(h, tech | cat, CONSUMER)))
    return F.concat(*parts)
