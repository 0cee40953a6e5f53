"""Brute-force reference implementations used by the tests.

Everything here works on explicit strings over the extended alphabet of
``(atom, flag)`` pairs, never on set labels, so it shares no code paths
with the library beyond :func:`olpm.fsa.strings`-free enumeration.
"""

import itertools
import random

from olpm import fsa as F
from olpm.alphabet import CONSUMER, PRODUCER, define_hierarchy


def small_hierarchy():
    # 2 segments x 2 values + 2 technical symbols = 6 atoms
    return define_hierarchy(segments=["a", "b"], dimensions=[("x", ["p", "q"], "segment")])


def explicit_arcs(a):
    """Expand set-labelled arcs into single-symbol arcs (src, (atom, pc), dst)."""
    out = []
    for s, m, pc, d in a.arcs:
        for i in range(a.h.n):
            if m >> i & 1:
                out.append((s, (i, pc), d))
    return out


def language(a, max_len):
    """Extended strings of length <= max_len, by explicit NFA simulation."""
    arcs = explicit_arcs(a)
    eps = {}
    for s, d in a.eps:
        eps.setdefault(s, set()).add(d)

    def close(S):
        S = set(S)
        stack = list(S)
        while stack:
            q = stack.pop()
            for d in eps.get(q, ()):
                if d not in S:
                    S.add(d)
                    stack.append(d)
        return frozenset(S)

    res = set()
    frontier = {((), close(a.starts))}
    for _ in range(max_len + 1):
        nxt = {}
        for w, S in frontier:
            if S & a.finals:
                res.add(w)
            if len(w) == max_len:
                continue
            moves = {}
            for s, sym, d in arcs:
                if s in S:
                    moves.setdefault(sym, set()).add(d)
            for sym, D in moves.items():
                key = w + (sym,)
                nxt[key] = nxt.get(key, frozenset()) | close(D)
        frontier = set(nxt.items())
    return res


def atoms_only(L):
    return {tuple(i for i, _ in w) for w in L}


def all_atom_strings(n, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(range(n), repeat=k)


def classical_min_states(a):
    """Size of the trimmed minimal DFA over the extended alphabet (Moore refinement)."""
    a = F.remove_epsilon(a)
    arcs = explicit_arcs(a)
    syms = sorted({sym for _, sym, _ in arcs})
    start = frozenset(a.starts)
    index, todo, delta = {start: 0}, [start], {}
    while todo:
        S = todo.pop()
        for sym in syms:
            T = frozenset(d for s, x, d in arcs if s in S and x == sym)
            if T not in index:
                index[T] = len(index)
                todo.append(T)
            delta[(index[S], sym)] = index[T]
    finals = {index[S] for S in index if S & a.finals}
    states = list(range(len(index)))
    # co-reachable states only
    live = set(finals)
    changed = True
    while changed:
        changed = False
        for (q, sym), d in delta.items():
            if d in live and q not in live:
                live.add(q)
                changed = True
    if not live:
        return 0
    block = {q: (q in finals) for q in states}
    while True:
        sig = {q: (block[q],) + tuple(block[delta[(q, s)]] for s in syms) for q in states}
        ids = {v: i for i, v in enumerate(sorted(set(sig.values()), key=repr))}
        new = {q: ids[sig[q]] for q in states}
        if len(set(new.values())) == len(set(block.values())):
            block = new
            break
        block = new
    return len({block[q] for q in states if q in live})


def random_fsa(r: random.Random, h, max_states=5, max_arcs=8, pc_choices=(CONSUMER, PRODUCER), eps=True):
    n = r.randint(1, max_states)
    arcs = []
    for _ in range(r.randint(0, max_arcs)):
        arcs.append((r.randrange(n), r.randint(1, h.full), r.choice(pc_choices), r.randrange(n)))
    e = tuple((r.randrange(n), r.randrange(n)) for _ in range(r.randint(0, 2))) if eps else ()
    starts = frozenset(r.sample(range(n), r.randint(1, min(2, n))))
    finals = frozenset(q for q in range(n) if r.random() < 0.4)
    return F.Fsa(n, starts, finals, tuple(arcs), h, e)


def random_prosodic_tree(r: random.Random):
    """A random word tree over σ < Σ < Σ' < ω, with occasional ambisyllabic leaves."""
    from olpm.prosody import Node

    proms = (None, "s", "w")
    sylls, pos = [], 0
    for k in range(r.randint(1, 4)):
        size = r.randint(2, 3) if k else r.randint(1, 3)
        start = pos
        # share the previous syllable's last leaf when both are long enough
        if sylls and len(sylls[-1][1]) >= 2 and size >= 2 and r.random() < 0.3:
            start = pos - 1
        leaves = tuple(range(start, start + size))
        sylls.append((r.choice(proms), leaves))
        pos = start + size
    items = [Node("σ", p, lv) for p, lv in sylls]
    # group runs of syllables into feet
    feet, i = [], 0
    while i < len(items):
        if r.random() < 0.6:
            j = i + r.randint(1, 2)
            feet.append(Node("Σ", r.choice(proms), tuple(items[i:j])))
            i = j
        else:
            feet.append(items[i])
            i += 1
    # optionally wrap a run into a superfoot
    top, i = [], 0
    while i < len(feet):
        if r.random() < 0.3:
            j = i + r.randint(1, 2)
            top.append(Node("Σ'", r.choice(proms), tuple(feet[i:j])))
            i = j
        else:
            top.append(feet[i])
            i += 1
    root = Node("ω", r.choice(proms), tuple(top))
    segs = [(f"x{i}", r.choice(["O", "N", "C"])) for i in range(pos)]
    return segs, root


def weighted_hierarchy():
    """Six segments in three weight classes: a,b cost 0; c,d cost 1; e,f cost 2."""
    from olpm.blo import WeightScheme

    h = define_hierarchy(segments=list("abcdef"),
                         types=[("w0", ["a", "b"]), ("w1", ["c", "d"]), ("w2", ["e", "f"])])
    return h, WeightScheme(h, {"w0": 0, "w1": 1, "w2": 2})


def random_acyclic_dfa(r: random.Random, h, max_states=8, atoms="abcdef"):
    """A random minimal acyclic DFA over the given segment atoms."""
    seg = 0
    for c in atoms:
        seg |= h.mask(c)
    n = r.randint(2, max_states)
    arcs = []
    for s in range(n - 1):
        used = 0
        for _ in range(r.randint(1, 3)):
            m = r.randint(1, seg) & seg & ~used
            if not m:
                continue
            used |= m
            arcs.append((s, m, PRODUCER, r.randint(s + 1, n - 1)))
    finals = frozenset(q for q in range(n) if r.random() < 0.3) | {n - 1}
    return F.minimize(F.Fsa(n, frozenset([0]), finals, tuple(arcs), h))


def weighted_language(a, scheme, max_len=10):
    return {tuple((i, scheme.atom_weight(i)) for i, _ in w) for w in F.strings(a, max_len)}


def blo_mismatches(k, trials=200, seed=1):
    """Count automata where the automaton BLO and the language definition disagree."""
    from olpm.blo import blo, blo_language

    h, scheme = weighted_hierarchy()
    r = random.Random(seed)
    bad = done = 0
    while done < trials:
        a = random_acyclic_dfa(r, h)
        L = weighted_language(a, scheme)
        if len(L) > 3000:
            continue
        done += 1
        if weighted_language(blo(a, k, scheme), scheme) != set(blo_language(L, k)):
            bad += 1
    return bad


def intersect_language(la, lb, mode="open"):
    """Pairwise intersection of two explicit languages; flags combine per mode."""
    comb = (lambda x, y: x | y) if mode == "open" else (lambda x, y: x & y)
    by_atoms = {}
    for y in lb:
        by_atoms.setdefault(tuple(i for i, _ in y), []).append(y)
    out = set()
    for x in la:
        for y in by_atoms.get(tuple(i for i, _ in x), []):
            out.add(tuple((i, comb(p, q)) for (i, p), (_, q) in zip(x, y)))
    return out


def algebra_mismatches(trials=500, seed=2, max_len=3):
    """Check the set-label operations on ``trials`` random automata.

    Returns a list of ``(trial, operation)`` failures; empty means agreement.
    """
    h = small_hierarchy()
    r = random.Random(seed)
    universe = list(all_atom_strings(h.n, max_len))
    bad = []
    for t in range(trials):
        a, b = random_fsa(r, h), random_fsa(r, h)
        la, lb = language(a, max_len), language(b, max_len)
        for mode in ("open", "closed"):
            if language(F.intersect(a, b, mode), max_len) != intersect_language(la, lb, mode):
                bad.append((t, f"intersect/{mode}"))
        d = F.determinize(a)
        if not F.is_deterministic(d) or language(d, max_len) != la:
            bad.append((t, "determinize"))
        inside = atoms_only(la)
        want = {tuple((i, CONSUMER) for i in w) for w in universe if w not in inside}
        if language(F.complement(a), max_len) != want:
            bad.append((t, "complement"))
        c = F.with_flag(a, CONSUMER)
        if not F.equivalent(F.complement(F.complement(c)), c):
            bad.append((t, "involution"))
        m = F.minimize(a)
        if language(m, max_len) != la or not (m.n == classical_min_states(a) or (m.n == 1 and not m.finals)):
            bad.append((t, "minimize"))
        mm = F.minimize(m)
        if mm.n != m.n or not F.equivalent(mm, m):
            bad.append((t, "idempotence"))
    return bad
