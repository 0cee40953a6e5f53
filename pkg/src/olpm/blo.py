"""Bounded Local Optimization.

Two implementations live here.  :func:`blo_language` is a transcription of the
language-level definition, used as an oracle on small finite languages.
:func:`blo` is the breadth-first automaton algorithm that prunes choice arcs
not lying on a minimally weighted path of at most ``k`` arcs.  For ``k > 1``
an arc can carry both winning and losing strings, so the pruned automaton is
then intersected with :func:`window_filter`, which judges whole windows.

Weights are attached to types: a :class:`WeightScheme` maps type names to
costs and every atom gets the minimum cost of the weight types containing it,
or the default cost if none does.  ``-inf`` marks inert material that is never
pruned and never causes pruning.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .alphabet import HierarchyError
from .fsa import Fsa, FsaError, intersect, minimize, trim

NEG_INF = -math.inf


class BloError(FsaError):
    pass


# language level ------------------------------------------------------------

def weight_sum(pos: int, k: int, w) -> float:
    """Sum of the weights of ``w[pos:pos+k]``; missing positions count 0.

    ``w`` is a sequence of ``(symbol, weight)`` pairs.  The recursive step for
    ``k > 1`` advances the position, which is what makes a two-symbol window
    over ``<a,0><b,1>`` sum to 1.
    """
    if k < 1 or pos < 0:
        raise ValueError("need k >= 1 and pos >= 0")
    if k == 1:
        return 0 if pos >= len(w) else w[pos][1]
    return weight_sum(pos, 1, w) + weight_sum(pos + 1, k - 1, w)


def blo_language(L, k: int):
    """Keep every w for which no position admits a cheaper same-prefix rival."""
    L = [tuple(w) for w in L]
    keep = []
    for w in L:
        pruned = False
        for pos in range(0, len(w) - k + 1):
            prefix = w[:pos]
            mine = weight_sum(pos, k, w)
            for v in L:
                if len(v) >= pos and v[:pos] == prefix and weight_sum(pos, k, v) < mine:
                    pruned = True
                    break
            if pruned:
                break
        if not pruned:
            keep.append(w)
    return keep


# weights as types -----------------------------------------------------------------

@dataclass
class WeightScheme:
    h: object
    costs: dict = field(default_factory=dict)
    default: float = 0

    def __post_init__(self):
        for t in self.costs:
            if not self.h.has(t):
                raise HierarchyError(f"weight type {t} not declared")
        self._atom = []
        for i in range(self.h.n):
            c = [v for t, v in self.costs.items() if self.h.types[t] >> i & 1]
            self._atom.append(min(c) if c else self.default)

    def atom_weight(self, i: int) -> float:
        return self._atom[i]

    def classes(self, mask: int) -> dict:
        """Split ``mask`` into ``{weight: submask}``."""
        out = {}
        i = 0
        while mask:
            if mask & 1:
                w = self._atom[i]
                out[w] = out.get(w, 0) | (1 << i)
            mask >>= 1
            i += 1
        return out


def _window_sums(a: Fsa, scheme: WeightScheme, k: int):
    """``S(q, j)``: set of sums over maximal paths of at most j arcs from q.

    A path may stop early only at a final state, where the string may end.
    """
    out = a.out()
    memo = {}
    cls = {}

    def arc_classes(arc):
        key = arc[1]
        if key not in cls:
            cls[key] = scheme.classes(key)
        return cls[key]

    def S(q, j):
        key = (q, j)
        if key in memo:
            return memo[key]
        if j == 0:
            res = frozenset([(0, False)])
        else:
            res = set()
            if q in a.finals:
                res.add((0, True))
            for arc in out[q]:
                rest = S(arc[3], j - 1)
                for w in arc_classes(arc):
                    for s, short in rest:
                        res.add((w + s, short))
            res = frozenset(res)
        memo[key] = res
        return res

    return S, arc_classes


def next_arcs_on_minimal_paths(a: Fsa, q: int, k: int, scheme: WeightScheme, _cache=None):
    """Return ``(nextstates, nextarcs)`` for state ``q``.

    Every arc is split into weight classes.  A class survives if one of the
    windows it starts sums to -inf, or if its cheapest finite window equals
    the minimum over all finite windows from ``q`` (the empty window at a
    final state sums to 0).
    """
    S, arc_classes = _cache or _window_sums(a, scheme, k)
    out = a.out()[q]
    per_arc = []
    pool = [0] if q in a.finals else []
    for arc in out:
        rest = S(arc[3], k - 1)
        entries = []
        for w, sub in arc_classes(arc).items():
            sums = {(w + s, short) for s, short in rest}
            inert = any(x == NEG_INF for x, _ in sums)
            # a window cut short by the end of the string cannot be judged
            inert = inert or any(short for _, short in sums)
            finite = [x for x, _ in sums if x != NEG_INF]
            lo = min(finite) if finite else None
            if lo is not None:
                pool.append(lo)
            full = [x for x, short in sums if x != NEG_INF and not short]
            entries.append((sub, inert, min(full) if full else None))
        per_arc.append((arc, entries))
    m = min(pool) if pool else None
    nextarcs = []
    for arc, entries in per_arc:
        keep = 0
        for sub, inert, lo in entries:
            if inert or (lo is not None and lo == m):
                keep |= sub
        if keep:
            nextarcs.append((arc[0], keep, arc[2], arc[3]))
    return {arc[3] for arc in nextarcs}, nextarcs


def window_filter(alpha: Fsa, k: int, scheme: WeightScheme, cache=None) -> Fsa:
    """Strings of ``alpha`` whose every complete k-window is minimal for its prefix.

    ``alpha`` must be deterministic, so a prefix is identified with the state
    it reaches.  The product state carries one budget per window opened in
    the last ``k - 1`` steps: the minimum for the window's start state minus
    what the window has spent so far.  A window that reaches ``k`` arcs with a
    negative budget rejects the string.  Windows cut off by the end of the
    string are never judged.  Arcs are split into weight classes, so only the
    offending atoms of a mixed label are removed.
    """
    S, arc_classes = cache or _window_sums(alpha, scheme, k)
    out = alpha.out()

    def minimum(q):
        finite = [x for x, _ in S(q, k) if x != NEG_INF]
        return min(finite) if finite else math.inf

    mins = [minimum(q) for q in range(alpha.n)]
    (start,) = alpha.starts
    index = {(start, ()): 0}
    queue = deque([(start, ())])
    arcs, finals = [], []
    while queue:
        key = queue.popleft()
        q, budgets = key
        i = index[key]
        if q in alpha.finals:
            finals.append(i)
        for arc in out[q]:
            for w, sub in arc_classes(arc).items():
                nb = tuple(b - w for b in budgets) + (mins[q] - w,)
                if len(nb) == k:
                    if nb[0] < 0:
                        continue
                    nb = nb[1:]
                nkey = (arc[3], nb)
                j = index.get(nkey)
                if j is None:
                    j = index[nkey] = len(index)
                    queue.append(nkey)
                arcs.append((i, sub, arc[2], j))
    return trim(Fsa(len(index), frozenset([0]), frozenset(finals), tuple(arcs), alpha.h))


def _normalize(a: Fsa) -> Fsa:
    if a.eps:
        raise BloError("BLO input must be epsilon-free")
    m = minimize(a)
    if len(m.starts) != 1:
        raise BloError("BLO input must have a single start state")
    return m


def blo_trace(a: Fsa, k: int, scheme: WeightScheme, normalize=True):
    """Run BLO and return ``(result, visited_order, normalized_input)``."""
    if k < 1:
        raise BloError("look-ahead must be >= 1")
    alpha = _normalize(a) if normalize else a
    if len(alpha.starts) != 1:
        raise BloError("BLO input must have a single start state")
    cache = _window_sums(alpha, scheme, k)
    out = alpha.out()
    trans = []
    visited = set()
    order = []
    finals = set()
    states = deque(sorted(alpha.starts))
    queued = set(states)
    while states:
        q = states.popleft()
        visited.add(q)
        order.append(q)
        if out[q]:
            nextstates, nextarcs = next_arcs_on_minimal_paths(alpha, q, k, scheme, cache)
            for d in sorted(nextstates - visited):
                if d not in queued:
                    queued.add(d)
                    states.append(d)
            trans.extend(nextarcs)
        if q in alpha.finals:
            finals.add(q)
    beta = trim(Fsa(alpha.n, alpha.starts, frozenset(finals), tuple(trans), alpha.h))
    if k > 1:
        # arc pruning keeps an arc if any string through it survives; the
        # window filter removes the remaining strings with a losing window
        beta = intersect(beta, window_filter(alpha, k, scheme, cache))
    return beta, order, alpha


def blo(a: Fsa, k: int, scheme: WeightScheme) -> Fsa:
    return blo_trace(a, k, scheme)[0]
