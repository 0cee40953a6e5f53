"""Representational enrichments: repeat arcs, skip arcs and self loops.

All transforms operate on a concrete automaton and never change its state
set.  Added arcs are consumers, so they only ever take part in a result when a
producer elsewhere (a reduplicative template, a truncation pattern, infixal
material) asks for them.
"""

from __future__ import annotations

from .alphabet import CONSUMER, PRODUCER
from .fsa import Fsa, remove_epsilon


def content_mask(h):
    return h.full & ~h.mask("technical")


def add_repeats(a: Fsa) -> Fsa:
    """One reverse ``repeat`` arc j->i per state pair joined by a content arc i->j."""
    a = remove_epsilon(a)
    content = content_mask(a.h)
    rep = a.h.mask("repeat")
    pairs = sorted({(s, d) for s, m, _, d in a.arcs if s != d and m & content})
    new = [(d, rep, CONSUMER, s) for s, d in pairs]
    return Fsa(a.n, a.starts, a.finals, a.arcs + tuple(new), a.h)


def add_skips(a: Fsa) -> Fsa:
    """Let every content position be realized as ``skip``.

    Consumer arcs get ``skip`` merged into their label; producer arcs get a
    parallel consumer ``skip`` arc, so the skip alternative is never imposed
    by the lexical item itself.
    """
    a = remove_epsilon(a)
    content = content_mask(a.h)
    skip = a.h.mask("skip")
    arcs = []
    extra = set()
    for s, m, pc, d in a.arcs:
        if m & content:
            if pc == CONSUMER:
                arcs.append((s, m | skip, pc, d))
                continue
            extra.add((s, skip, CONSUMER, d))
        arcs.append((s, m, pc, d))
    return Fsa(a.n, a.starts, a.finals, tuple(arcs) + tuple(sorted(extra)), a.h)


def _with_loops(a, where, loop=None):
    a = remove_epsilon(a)
    m = a.h.full if loop is None else loop
    if m == 0:
        return a
    new = tuple((q, m, CONSUMER, q) for q in sorted(where(a)))
    return Fsa(a.n, a.starts, a.finals, a.arcs + new, a.h)


def discontiguous(a: Fsa, loop: int | None = None) -> Fsa:
    """Consumer self loops on every state (optionally restricted to ``loop`` atoms)."""
    return _with_loops(a, lambda a: range(a.n), loop)


def internally_discontiguous(a: Fsa, loop: int | None = None) -> Fsa:
    """Self loops on states that are neither start nor final."""
    return _with_loops(a, lambda a: [q for q in range(a.n) if q not in a.starts and q not in a.finals], loop)


def contiguous(a: Fsa, loop: int | None = None) -> Fsa:
    """Self loops on start and final states only: material may precede or follow."""
    return _with_loops(a, lambda a: set(a.starts) | set(a.finals), loop)


def repeat_arc_count(a: Fsa) -> int:
    content = content_mask(a.h)
    return len({(s, d) for s, m, _, d in a.arcs if s != d and m & content})


__all__ = [
    "add_repeats",
    "add_skips",
    "discontiguous",
    "internally_discontiguous",
    "contiguous",
    "content_mask",
    "PRODUCER",
]
