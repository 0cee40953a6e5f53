"""A small transducer layer over set labels.

Arcs are ``(src, inp, out, ident, dst)``.  ``inp`` and ``out`` are
``(atoms, pc)`` labels or ``None`` for epsilon.  When ``ident`` is true the arc
relates every atom of ``inp`` to itself only; otherwise it relates every input
atom to every output atom.  That distinction matters for set labels:
``identity(segment)`` and ``segment:segment`` are different relations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .alphabet import CONSUMER, PRODUCER, HierarchyError, TypeHierarchy
from . import fsa as F
from .fsa import Fsa


@dataclass(frozen=True)
class Fst:
    n: int
    starts: frozenset
    finals: frozenset
    arcs: tuple
    h: TypeHierarchy = field(compare=False, repr=False)

    def out(self):
        o = self.__dict__.get("_out")
        if o is None:
            o = [[] for _ in range(self.n)]
            for a in self.arcs:
                o[a[0]].append(a)
            object.__setattr__(self, "_out", o)
        return o

    def __repr__(self):
        return f"<Fst states={self.n} arcs={len(self.arcs)}>"


def identity(a: Fsa) -> Fst:
    a = F.remove_epsilon(a)
    arcs = tuple((s, (m, pc), (m, pc), True, d) for s, m, pc, d in a.arcs)
    return Fst(a.n, a.starts, a.finals, arcs, a.h)


def lift(x) -> Fst:
    return x if isinstance(x, Fst) else identity(x)


def pair(h, inp, out) -> Fst:
    """Single-position relation ``inp:out``; either side may be ``None`` (epsilon)."""
    if inp is None and out is None:
        return Fst(1, frozenset([0]), frozenset([0]), (), h)
    return Fst(2, frozenset([0]), frozenset([1]), ((0, inp, out, False, 1),), h)


def ident_pair(h, atoms, pc=PRODUCER) -> Fst:
    return Fst(2, frozenset([0]), frozenset([1]), ((0, (atoms, pc), (atoms, pc), True, 1),), h)


def _shift(t, k):
    return [(s + k, i, o, idn, d + k) for s, i, o, idn, d in t.arcs]


def _eps_arc(s, d):
    return (s, None, None, False, d)


def concat(*ts) -> Fst:
    ts = [lift(t) for t in ts]
    h = ts[0].h
    arcs, offset, starts, prev = [], 0, None, None
    for t in ts:
        arcs += _shift(t, offset)
        if starts is None:
            starts = {s + offset for s in t.starts}
        else:
            arcs += [_eps_arc(f, s + offset) for f in prev for s in t.starts]
        prev = [f + offset for f in t.finals]
        offset += t.n
    return _clean(Fst(offset, frozenset(starts), frozenset(prev), tuple(arcs), h))


def union(*ts) -> Fst:
    ts = [lift(t) for t in ts]
    h = ts[0].h
    arcs, starts, finals, offset = [], set(), set(), 0
    for t in ts:
        arcs += _shift(t, offset)
        starts |= {s + offset for s in t.starts}
        finals |= {f + offset for f in t.finals}
        offset += t.n
    return Fst(offset, frozenset(starts), frozenset(finals), tuple(arcs), h)


def star(t) -> Fst:
    t = lift(t)
    arcs = _shift(t, 1) + [_eps_arc(0, s + 1) for s in t.starts] + [_eps_arc(f + 1, 0) for f in t.finals]
    return _clean(Fst(t.n + 1, frozenset([0]), frozenset([0]), tuple(arcs), t.h))


def plus(t) -> Fst:
    return concat(t, star(t))


def optional(t) -> Fst:
    t = lift(t)
    return union(t, Fst(1, frozenset([0]), frozenset([0]), (), t.h))


def _clean(t: Fst) -> Fst:
    """Remove arcs that are epsilon on both sides."""
    if not any(i is None and o is None for _, i, o, _, _ in t.arcs):
        return t
    succ = [[] for _ in range(t.n)]
    for s, i, o, _, d in t.arcs:
        if i is None and o is None:
            succ[s].append(d)
    clos = []
    for q in range(t.n):
        seen = {q}
        stack = [q]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        clos.append(seen)
    out = [[] for _ in range(t.n)]
    for a in t.arcs:
        if not (a[1] is None and a[2] is None):
            out[a[0]].append(a)
    arcs = set()
    finals = set()
    for q in range(t.n):
        for r in clos[q]:
            if r in t.finals:
                finals.add(q)
            for _, i, o, idn, d in out[r]:
                arcs.add((q, i, o, idn, d))
    return Fst(t.n, t.starts, frozenset(finals), tuple(sorted(arcs, key=repr)), t.h)


def compose(t1, t2) -> Fst:
    """Relation composition: output of ``t1`` feeds input of ``t2``."""
    t1, t2 = _clean(lift(t1)), _clean(lift(t2))
    if t1.h is not t2.h:
        raise HierarchyError("transducers over different hierarchies")
    o1, o2 = t1.out(), t2.out()
    index = {}
    queue = deque()
    starts = []
    for p in sorted(t1.starts):
        for q in sorted(t2.starts):
            index[(p, q)] = len(index)
            queue.append((p, q))
            starts.append(index[(p, q)])
    arcs, finals = [], []

    def target(key):
        j = index.get(key)
        if j is None:
            j = index[key] = len(index)
            queue.append(key)
        return j

    while queue:
        p, q = queue.popleft()
        i = index[(p, q)]
        if p in t1.finals and q in t2.finals:
            finals.append(i)
        for _, i1, ou1, id1, d1 in o1[p]:
            if ou1 is None:
                arcs.append((i, i1, None, False, target((d1, q))))
        for _, i2, ou2, id2, d2 in o2[q]:
            if i2 is None:
                arcs.append((i, None, ou2, False, target((p, d2))))
        for _, i1, ou1, id1, d1 in o1[p]:
            if ou1 is None:
                continue
            for _, i2, ou2, id2, d2 in o2[q]:
                if i2 is None:
                    continue
                m = ou1[0] & i2[0]
                if not m:
                    continue
                j = target((d1, d2))
                if id1 and id2:
                    arcs.append((i, (m, i1[1]), (m, ou2[1]), True, j))
                elif id1:
                    # identity into a cross arc: inputs restricted to m
                    if ou2 is None:
                        arcs.append((i, (m, i1[1]), None, False, j))
                    else:
                        arcs.append((i, (m, i1[1]), ou2, False, j))
                elif id2:
                    arcs.append((i, i1, (m, ou2[1]), False, j))
                else:
                    arcs.append((i, i1, ou2, False, j))
    return _trim(Fst(len(index), frozenset(starts), frozenset(finals), tuple(arcs), t1.h))


def _trim(t: Fst) -> Fst:
    fwd = set(t.starts)
    stack = list(t.starts)
    out = t.out()
    while stack:
        q = stack.pop()
        for a in out[q]:
            if a[4] not in fwd:
                fwd.add(a[4])
                stack.append(a[4])
    inc = [[] for _ in range(t.n)]
    for a in t.arcs:
        inc[a[4]].append(a[0])
    bwd = set(t.finals)
    stack = list(t.finals)
    while stack:
        q = stack.pop()
        for s in inc[q]:
            if s not in bwd:
                bwd.add(s)
                stack.append(s)
    keep = sorted(fwd & bwd)
    if not keep:
        return Fst(1, frozenset([0]), frozenset(), (), t.h)
    idx = {q: i for i, q in enumerate(keep)}
    arcs = tuple((idx[s], i, o, idn, idx[d]) for s, i, o, idn, d in t.arcs if s in idx and d in idx)
    return Fst(len(keep), frozenset(idx[q] for q in t.starts if q in idx),
               frozenset(idx[q] for q in t.finals if q in idx), arcs, t.h)


def _project(t: Fst, side: int) -> Fsa:
    arcs, eps = [], []
    for a in t.arcs:
        lab = a[1 + side]
        if lab is None:
            eps.append((a[0], a[4]))
        else:
            arcs.append((a[0], lab[0], lab[1], a[4]))
    return F.trim(Fsa(t.n, t.starts, t.finals, tuple(arcs), t.h, tuple(eps)))


def input_projection(t) -> Fsa:
    return _project(lift(t), 0)


def output_projection(t) -> Fsa:
    return _project(lift(t), 1)


def apply(t, a: Fsa) -> Fsa:
    """Output language of ``t`` restricted to inputs in ``a``."""
    return output_projection(compose(identity(a), t))


def relation(t, max_len=6):
    """Enumerate ``(input, output)`` atom-index tuples; small machines only."""
    t = _clean(lift(t))
    h = t.h
    out = t.out()
    res = set()
    frontier = {(q, (), ()) for q in t.starts}
    steps = 0
    while frontier and steps <= 2 * max_len:
        nxt = set()
        for q, i, o in frontier:
            if q in t.finals:
                res.add((i, o))
            for _, il, ol, idn, d in out[q]:
                if idn:
                    for x in h.atom_indices(il[0]):
                        if len(i) < max_len and len(o) < max_len:
                            nxt.add((d, i + (x,), o + (x,)))
                    continue
                ins = [()] if il is None else [(x,) for x in h.atom_indices(il[0])]
                outs = [()] if ol is None else [(x,) for x in h.atom_indices(ol[0])]
                for x in ins:
                    for y in outs:
                        if len(i + x) <= max_len and len(o + y) <= max_len:
                            nxt.add((d, i + x, o + y))
        frontier = nxt
        steps += 1
    return res


def total_reduplication(h, words) -> Fst:
    """Transducer doubling each word, built by composition.

    Each word is wrapped as ``eps:# word eps:#`` and enriched with
    ``eps:repeat`` arcs running backwards over every arc; the result is
    composed with ``[#:eps, (? - technical)*, #:eps, repeat:eps *, #:eps,
    (? - technical)*, #:eps]``.  Since the repeat arcs send the machine back
    over the word, the doubled string shows up on both tapes; the output
    projection is the reduplicated language.
    """
    bnd = h.mask("#") if h.has("#") else h.mask("boundary")
    rep = h.mask("repeat")
    tech = bnd | rep
    enriched = []
    for w in words:
        segs = [identity(F.symbol(h, h.mask(c))) for c in w]
        core = concat(pair(h, None, (bnd, PRODUCER)), *segs, pair(h, None, (bnd, PRODUCER)))
        core = _trim(core)
        extra = tuple((d, None, (rep, PRODUCER), False, s) for s, _, _, _, d in core.arcs if s != d)
        enriched.append(Fst(core.n, core.starts, core.finals, core.arcs + extra, h))
    words_t = union(*enriched)
    other = h.full & ~tech
    red = concat(pair(h, (bnd, PRODUCER), None), star(ident_pair(h, other)), pair(h, (bnd, PRODUCER), None))
    template = concat(red, star(pair(h, (rep, PRODUCER), None)), red)
    return compose(words_t, template)

