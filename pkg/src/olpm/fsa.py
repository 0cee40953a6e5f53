"""Set-labelled finite-state automata with producer/consumer arc flags.

An arc is a tuple ``(src, atoms, pc, dst)`` where ``atoms`` is a nonempty bit
set over the hierarchy's atom space and ``pc`` is 1 for producers and 0 for
consumers.  The language of an automaton is taken over the extended alphabet
of (atom, flag) pairs, so determinization and minimization keep producer and
consumer arcs apart.  Epsilon arcs live in a separate ``eps`` list and are
removed before any product construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .alphabet import CONSUMER, PRODUCER, HierarchyError, TypeHierarchy


class FsaError(ValueError):
    pass


@dataclass(frozen=True)
class Fsa:
    n: int
    starts: frozenset
    finals: frozenset
    arcs: tuple
    h: TypeHierarchy = field(compare=False, repr=False)
    eps: tuple = ()

    def __post_init__(self):
        for s, m, pc, d in self.arcs:
            if m == 0:
                raise FsaError("arc with empty label")

    # adjacency, cached lazily
    def out(self):
        o = self.__dict__.get("_out")
        if o is None:
            o = [[] for _ in range(self.n)]
            for a in self.arcs:
                o[a[0]].append(a)
            object.__setattr__(self, "_out", o)
        return o

    @property
    def states(self):
        return range(self.n)

    def __repr__(self):
        return f"<Fsa states={self.n} arcs={len(self.arcs)} starts={sorted(self.starts)} finals={sorted(self.finals)}>"


def _check(*fsas):
    h = fsas[0].h
    for f in fsas[1:]:
        if f.h is not h:
            raise HierarchyError("automata over different hierarchies")
    return h


def ext(atoms, pc, n):
    """Extended-alphabet mask of a label."""
    return atoms << (n * pc)


def unext(mask, n):
    """Split an extended mask into (atoms, pc) parts."""
    full = (1 << n) - 1
    out = []
    if mask & full:
        out.append((mask & full, CONSUMER))
    if mask >> n:
        out.append((mask >> n, PRODUCER))
    return out


# constructors ---------------------------------------------------------------

def empty(h):
    return Fsa(1, frozenset([0]), frozenset(), (), h)


def epsilon(h):
    return Fsa(1, frozenset([0]), frozenset([0]), (), h)


def symbol(h, atoms, pc=PRODUCER):
    if atoms == 0:
        return empty(h)
    return Fsa(2, frozenset([0]), frozenset([1]), ((0, atoms, pc, 1),), h)


def string(h, labels):
    """Linear automaton over a sequence of ``(atoms, pc)`` labels."""
    arcs = tuple((i, m, pc, i + 1) for i, (m, pc) in enumerate(labels))
    if any(m == 0 for m, _ in labels):
        return empty(h)
    return Fsa(len(labels) + 1, frozenset([0]), frozenset([len(labels)]), arcs, h)


def sigma_star(h, pc=PRODUCER):
    return Fsa(1, frozenset([0]), frozenset([0]), ((0, h.full, pc, 0),), h)


def _shift(a, k):
    return [(s + k, m, pc, d + k) for s, m, pc, d in a.arcs], [(s + k, d + k) for s, d in a.eps]


def concat(*fsas):
    if not fsas:
        raise FsaError("concat of nothing")
    h = _check(*fsas)
    arcs, eps = [], []
    offset = 0
    starts = None
    prev_finals = None
    for a in fsas:
        aa, ee = _shift(a, offset)
        arcs += aa
        eps += ee
        if starts is None:
            starts = {s + offset for s in a.starts}
        else:
            eps += [(f, s + offset) for f in prev_finals for s in a.starts]
        prev_finals = [f + offset for f in a.finals]
        offset += a.n
    return Fsa(offset, frozenset(starts), frozenset(prev_finals), tuple(arcs), h, tuple(eps))


def union(*fsas):
    if not fsas:
        raise FsaError("union of nothing")
    h = _check(*fsas)
    arcs, eps, starts, finals = [], [], set(), set()
    offset = 0
    for a in fsas:
        aa, ee = _shift(a, offset)
        arcs += aa
        eps += ee
        starts |= {s + offset for s in a.starts}
        finals |= {f + offset for f in a.finals}
        offset += a.n
    return Fsa(offset, frozenset(starts), frozenset(finals), tuple(arcs), a.h, tuple(eps))


def star(a):
    # new start state 0 that is final; eps into old starts; finals loop back
    aa, ee = _shift(a, 1)
    eps = ee + [(0, s + 1) for s in a.starts] + [(f + 1, 0) for f in a.finals]
    return Fsa(a.n + 1, frozenset([0]), frozenset([0]), tuple(aa), a.h, tuple(eps))


def plus(a):
    return concat(a, star(a))


def optional(a):
    return union(a, epsilon(a.h))


def power(a, k):
    if k == 0:
        return epsilon(a.h)
    return concat(*([a] * k))


def reverse(a):
    arcs = tuple((d, m, pc, s) for s, m, pc, d in a.arcs)
    eps = tuple((d, s) for s, d in a.eps)
    return Fsa(a.n, a.finals, a.starts, arcs, a.h, eps)


def with_flag(a, pc):
    """Set every arc's producer/consumer flag to ``pc``."""
    return Fsa(a.n, a.starts, a.finals, tuple((s, m, pc, d) for s, m, _, d in a.arcs), a.h, a.eps)


def map_labels(a, fn):
    """Rewrite arc labels with ``fn(atoms, pc) -> (atoms, pc)``; empty results drop the arc."""
    arcs = []
    for s, m, pc, d in a.arcs:
        m2, pc2 = fn(m, pc)
        if m2:
            arcs.append((s, m2, pc2, d))
    return Fsa(a.n, a.starts, a.finals, tuple(arcs), a.h, a.eps)


def primary_closure(a):
    """Widen every label to whole primary symbols, forgetting secondary dimensions."""
    h = a.h
    cache = {}

    def widen(m, pc):
        if m not in cache:
            w = 0
            for p in h.primaries_in(m):
                w |= h.mask(p)
            cache[m] = w
        return cache[m], pc

    return map_labels(a, widen)


# structural operations -----------------------------------------------------------

def _eps_closure(a):
    succ = [[] for _ in range(a.n)]
    for s, d in a.eps:
        succ[s].append(d)
    clos = []
    for q in range(a.n):
        seen = {q}
        stack = [q]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        clos.append(seen)
    return clos


def remove_epsilon(a):
    if not a.eps:
        return a
    clos = _eps_closure(a)
    out = a.out()
    arcs = set()
    finals = set()
    for q in range(a.n):
        for r in clos[q]:
            if r in a.finals:
                finals.add(q)
            for _, m, pc, d in out[r]:
                arcs.add((q, m, pc, d))
    return trim(Fsa(a.n, a.starts, frozenset(finals), tuple(sorted(arcs)), a.h))


def trim(a):
    """Keep only states that are both reachable and co-reachable, renumbered."""
    a = remove_epsilon(a) if a.eps else a
    out = a.out()
    fwd = set(a.starts)
    stack = list(a.starts)
    while stack:
        q = stack.pop()
        for _, _, _, d in out[q]:
            if d not in fwd:
                fwd.add(d)
                stack.append(d)
    inc = [[] for _ in range(a.n)]
    for s, _, _, d in a.arcs:
        inc[d].append(s)
    bwd = set(a.finals)
    stack = list(a.finals)
    while stack:
        q = stack.pop()
        for s in inc[q]:
            if s not in bwd:
                bwd.add(s)
                stack.append(s)
    keep = sorted(fwd & bwd)
    if not keep:
        return empty(a.h)
    idx = {q: i for i, q in enumerate(keep)}
    arcs = tuple((idx[s], m, pc, idx[d]) for s, m, pc, d in a.arcs if s in idx and d in idx)
    return Fsa(len(keep), frozenset(idx[q] for q in a.starts if q in idx),
               frozenset(idx[q] for q in a.finals if q in idx), arcs, a.h)


def is_empty(a):
    return trim(a).finals == frozenset()


def accepts_epsilon(a):
    a = remove_epsilon(a)
    return bool(a.starts & a.finals)


def intersect(a, b, mode="open"):
    """Product construction; arcs combine iff their atom sets overlap.

    In open mode the result flag is the OR of the argument flags, in closed
    mode the AND.
    """
    h = _check(a, b)
    if mode not in ("open", "closed"):
        raise FsaError(f"unknown mode {mode}")
    a = remove_epsilon(a)
    b = remove_epsilon(b)
    oa, ob = a.out(), b.out()
    combine = (lambda x, y: x | y) if mode == "open" else (lambda x, y: x & y)
    index = {}
    queue = deque()
    starts = []
    for p in sorted(a.starts):
        for q in sorted(b.starts):
            index[(p, q)] = len(index)
            queue.append((p, q))
            starts.append(index[(p, q)])
    arcs = []
    finals = []
    while queue:
        p, q = queue.popleft()
        i = index[(p, q)]
        if p in a.finals and q in b.finals:
            finals.append(i)
        for _, ma, pa, da in oa[p]:
            for _, mb, pb, db in ob[q]:
                m = ma & mb
                if not m:
                    continue
                key = (da, db)
                j = index.get(key)
                if j is None:
                    j = index[key] = len(index)
                    queue.append(key)
                arcs.append((i, m, combine(pa, pb), j))
    return trim(Fsa(len(index), frozenset(starts), frozenset(finals), tuple(arcs), h))


def intersect_all(*fsas, mode="open"):
    out = fsas[0]
    for f in fsas[1:]:
        out = intersect(out, f, mode)
    return out


def _partition(masks):
    """Refine a collection of bit sets into pairwise disjoint blocks."""
    blocks = []
    for m in masks:
        new = []
        for b in blocks:
            i = b & m
            if i:
                new.append(i)
                if b & ~m:
                    new.append(b & ~m)
                m &= ~b
            else:
                new.append(b)
        if m:
            new.append(m)
        blocks = new
    return blocks


def determinize(a, merge=False):
    """Subset construction over atomized labels.

    At each subset state the outgoing extended labels are refined into
    pairwise identical-or-disjoint blocks, which then act as opaque symbols.
    With ``merge`` the parallel arcs between two result states are re-merged
    into one label per flag.
    """
    a = remove_epsilon(a)
    n = a.h.n
    out = a.out()
    start = frozenset(a.starts)
    index = {start: 0}
    queue = deque([start])
    arcs = []
    finals = []
    while queue:
        S = queue.popleft()
        i = index[S]
        if S & a.finals:
            finals.append(i)
        trans = []
        for q in S:
            for _, m, pc, d in out[q]:
                trans.append((ext(m, pc, n), d))
        blocks = _partition(sorted({t for t, _ in trans}))
        local = {}
        for blk in blocks:
            T = frozenset(d for t, d in trans if t & blk)
            j = index.get(T)
            if j is None:
                j = index[T] = len(index)
                queue.append(T)
            local[j] = local.get(j, []) + [blk]
        for j, blks in local.items():
            if merge:
                tot = 0
                for blk in blks:
                    tot |= blk
                for m, pc in unext(tot, n):
                    arcs.append((i, m, pc, j))
            else:
                for blk in blks:
                    for m, pc in unext(blk, n):
                        arcs.append((i, m, pc, j))
    return Fsa(len(index), frozenset([0]), frozenset(finals), tuple(arcs), a.h)


def is_deterministic(a):
    if a.eps or len(a.starts) > 1:
        return False
    n = a.h.n
    for row in a.out():
        seen = 0
        for _, m, pc, _ in row:
            e = ext(m, pc, n)
            if seen & e:
                return False
            seen |= e
    return True


def complete(a, flags=(CONSUMER, PRODUCER)):
    """Add a nonfinal sink so that every state covers every label.

    ``flags`` selects which halves of the extended alphabet are completed;
    complementation completes over consumer labels only.
    """
    a = remove_epsilon(a)
    h = a.h
    n = h.n
    sink = a.n
    arcs = list(a.arcs)
    want = 0
    for pc in flags:
        want |= ext(h.full, pc, n)
    out = a.out()
    added = False
    for q in range(a.n + 1):
        have = 0
        if q < a.n:
            for _, m, pc, _ in out[q]:
                have |= ext(m, pc, n)
        missing = want & ~have
        for m, pc in unext(missing, n):
            arcs.append((q, m, pc, sink))
            added = True
    starts = a.starts if a.starts else frozenset([sink])
    if not added and a.starts:
        return a
    return Fsa(a.n + 1, starts, a.finals, tuple(arcs), h)


def atom_projection(a):
    """The same automaton with every arc turned into a consumer."""
    return with_flag(a, CONSUMER)


def complement(a):
    """Complement with respect to atom strings, ignoring flags.

    The result has consumer arcs only.  For all-consumer inputs this is the
    ordinary complement over the extended alphabet, so it is an involution
    there.
    """
    d = determinize(atom_projection(a), merge=True)
    c = complete(d, flags=(CONSUMER,))
    finals = frozenset(q for q in range(c.n) if q not in c.finals)
    return trim(Fsa(c.n, c.starts, finals, c.arcs, c.h))


def minimize(a):
    """Brzozowski minimization: determinize(reverse(determinize(reverse(a))))."""
    a = trim(a)
    if not a.finals:
        return empty(a.h)
    return trim(determinize(reverse(determinize(reverse(a), merge=True)), merge=True))


def equivalent(a, b):
    """Language equality over the extended alphabet."""
    _check(a, b)
    n = a.h.n
    da = determinize(a, merge=True)
    db = determinize(b, merge=True)
    oa, ob = da.out(), db.out()
    seen = {(0, 0)}
    queue = deque([(0, 0)])
    while queue:
        p, q = queue.popleft()
        fa = p is not None and p in da.finals
        fb = q is not None and q in db.finals
        if fa != fb:
            return False
        ta = [(ext(m, pc, n), d) for _, m, pc, d in oa[p]] if p is not None else []
        tb = [(ext(m, pc, n), d) for _, m, pc, d in ob[q]] if q is not None else []
        cover_a = 0
        for t, _ in ta:
            cover_a |= t
        cover_b = 0
        for t, _ in tb:
            cover_b |= t
        pairs = []
        for t, d in ta:
            for u, e in tb:
                if t & u:
                    pairs.append((d, e))
            if t & ~cover_b:
                pairs.append((d, None))
        for u, e in tb:
            if u & ~cover_a:
                pairs.append((None, e))
        for pr in pairs:
            if pr not in seen:
                seen.add(pr)
                queue.append(pr)
    return True


def closed_interpretation(a):
    """Keep only what survives closed-mode intersection with producer Sigma*."""
    c = intersect(a, sigma_star(a.h, PRODUCER), mode="closed")
    return trim(Fsa(c.n, c.starts, c.finals, tuple(x for x in c.arcs if x[2] == PRODUCER), c.h))


def is_acyclic(a):
    a = trim(a)
    out = a.out()
    color = [0] * a.n
    for s in range(a.n):
        if color[s]:
            continue
        stack = [(s, iter(out[s]))]
        color[s] = 1
        while stack:
            q, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[q] = 2
                stack.pop()
                continue
            d = nxt[3]
            if color[d] == 1:
                return False
            if color[d] == 0:
                color[d] = 1
                stack.append((d, iter(out[d])))
    return True


def paths(a, max_len):
    """All accepted label paths up to ``max_len`` arcs, as tuples of (atoms, pc).

    Meant for small automata in tests and diagnostics.
    """
    a = remove_epsilon(a)
    out = a.out()
    res = []
    stack = [(q, ()) for q in a.starts]
    while stack:
        q, p = stack.pop()
        if q in a.finals:
            res.append(p)
        if len(p) < max_len:
            for _, m, pc, d in out[q]:
                stack.append((d, p + ((m, pc),)))
    return res


def strings(a, max_len, extended=True):
    """Accepted strings up to ``max_len`` as tuples of atom indices.

    With ``extended`` each symbol is ``(atom, pc)``.  Exponential; for oracles.
    """
    a = remove_epsilon(a)
    out = a.out()
    res = set()
    frontier = {(q, ()) for q in a.starts}
    for _ in range(max_len + 1):
        nxt = set()
        for q, w in frontier:
            if q in a.finals:
                res.add(w)
            if len(w) == max_len:
                continue
            for _, m, pc, d in out[q]:
                for i in a.h.atom_indices(m):
                    nxt.add((d, w + (((i, pc) if extended else i),)))
        frontier = nxt
    return res


# output ---------------------------------------------------------------------

def to_table(a):
    h = a.h
    lines = []
    for s, m, pc, d in sorted(a.arcs, key=lambda x: (x[0], x[3], x[2], x[1])):
        lines.append(f"{s}\t{d}\t{h.render(m)}\t{'P' if pc else 'C'}")
    for f in sorted(a.finals):
        lines.append(f"{f}")
    return "\n".join(lines)


def from_table(h, text, start=0):
    """Inverse of :func:`to_table` (start state assumed to be ``start``)."""
    arcs, finals = [], []
    n = start + 1
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) == 1:
            finals.append(int(parts[0]))
            n = max(n, int(parts[0]) + 1)
        else:
            s, d, f, pc = parts
            arcs.append((int(s), h.compile_formula(f), PRODUCER if pc == "P" else CONSUMER, int(d)))
            n = max(n, int(s) + 1, int(d) + 1)
    return Fsa(n, frozenset([start]), frozenset(finals), tuple(arcs), h)


def to_dot(a, name="fsa"):
    h = a.h
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in range(a.n):
        shape = "doublecircle" if q in a.finals else "circle"
        lines.append(f"  {q} [shape={shape}];")
    for q in sorted(a.starts):
        lines.append(f"  start{q} [shape=point]; start{q} -> {q};")
    for s, m, pc, d in a.arcs:
        lab = h.render(m).replace('"', '\\"')
        style = "solid" if pc else "dashed"
        lines.append(f'  {s} -> {d} [label="{lab}", style={style}];')
    lines.append("}")
    return "\n".join(lines)
