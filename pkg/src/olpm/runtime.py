"""Generation and parsing on top of compiled grammars."""

from __future__ import annotations

from . import fsa as F
from .fsa import Fsa


def _surface_order(h):
    return {p: i for i, p in enumerate(h.segments + h.markers)}


def surface_strings(a: Fsa, max_count: int = 100, max_len: int = 40):
    """Distinct surface strings of ``a``, shortest first, then by symbol order.

    Technical symbols (``repeat``, ``skip``) are deleted and atoms are shown
    by their primary symbol.  ``max_len`` bounds the length of the underlying
    path, technical symbols included.
    """
    if max_count <= 0 or max_len <= 0:
        raise ValueError("limits must be positive")
    a = F.remove_epsilon(a)
    h = a.h
    tech = h.mask("technical")
    order = _surface_order(h)
    out = a.out()
    frontier = {(q, ()) for q in a.starts}
    seen = set(frontier)
    found = set()
    for _ in range(max_len + 1):
        nxt = set()
        for q, w in frontier:
            if q in a.finals:
                found.add(w)
            for _, m, pc, d in out[q]:
                if m & tech:
                    key = (d, w)
                    if key not in seen:
                        seen.add(key)
                        nxt.add(key)
                for p in h.primaries_in(m & ~tech):
                    key = (d, w + (p,))
                    if key not in seen:
                        seen.add(key)
                        nxt.add(key)
        frontier = nxt
        if not frontier:
            break
    ranked = sorted(found, key=lambda w: (len(w), [order[p] for p in w]))
    return ["".join(w) for w in ranked[:max_count]]


def _entry(g, macro):
    return g.fsa(macro) if isinstance(macro, str) else macro


def parse(g, macro, s: str) -> Fsa:
    """Annotated parses of the surface string ``s`` under ``macro``.

    Technical symbols may occur anywhere around the segments of ``s``; the
    result contains the grammar's full decoration of every matching string.
    """
    from .dsl import preprocessed

    return F.closed_interpretation(F.intersect(preprocessed(g, s), _entry(g, macro)))


def optimizing_parse(g, macro, s: str, k: int) -> Fsa:
    """Parse ``s`` and keep only readings that are also BLO-optimal.

    The parses are mapped through the grammar's ``extraction`` transducer
    (segments become underspecified, technical and categorial symbols stay),
    the result is intersected with the grammar, optimized with look-ahead
    ``k``, and compared with the parses again.  Several extracted hypotheses
    are handled together, so the result is their union.
    """
    from .blo import blo
    from . import fst as T

    grammar = _entry(g, macro)
    parses = parse(g, grammar, s)
    if not parses.finals:
        return parses
    hyp = T.output_projection(T.compose(T.identity(parses), g.expand("extraction")))
    cand = F.minimize(F.intersect(hyp, grammar))
    if not cand.finals:
        return cand
    best = blo(cand, k, g.scheme)
    return F.trim(F.intersect(best, parses))


def accepts(a: Fsa) -> bool:
    return bool(F.trim(a).finals)
