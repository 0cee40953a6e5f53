"""Prosodic helpers: sonority-difference constraints and flattened constituency.

Sonority is encoded on each segment as a two-valued tag: ``up`` when the next
segment is strictly more sonorous, ``down`` otherwise (including the last
segment of a string).  The constraint automata below check that tagging
against a sonority scale given as a list of type masks, least sonorous first.

Constituency is flattened into one conjunction per segment: the segment, its
syllabic role and, for each prosodic level, whether it opens, continues or
closes a constituent at that level (or is not dominated by one).
"""

from __future__ import annotations

from dataclasses import dataclass

from .alphabet import CONSUMER
from .fsa import Fsa, FsaError, concat, star, symbol, union, epsilon


def _ranks(h, scale):
    seg = h.mask("segment")
    ranks = []
    covered = 0
    for m in scale:
        m &= seg & ~covered
        ranks.append(m)
        covered |= m
    if covered != seg:
        missing = h.primaries_in(seg & ~covered)
        raise FsaError(f"segments without a sonority rank: {' '.join(missing)}")
    return ranks


def plain_sonority_differences(h, scale) -> Fsa:
    """Segment strings whose up/down tags agree with the sonority scale.

    The state after a segment remembers its rank and tag, which restricts the
    rank of the following segment.  Every state is final: the tag of the last
    segment is left to :func:`boundary_conditions`.
    """
    up, down = h.mask("up"), h.mask("down")
    ranks = _ranks(h, scale)
    R = len(ranks)

    def state(r, t):
        return 1 + 2 * r + t

    arcs = []
    for src in [None] + [(r, t) for r in range(R) for t in (0, 1)]:
        s = 0 if src is None else state(*src)
        for r2 in range(R):
            if not ranks[r2]:
                continue
            if src is not None:
                r, t = src
                if t == 0 and not r2 > r:
                    continue
                if t == 1 and r2 > r:
                    continue
            for t2, tag in ((0, up), (1, down)):
                if ranks[r2] & tag:
                    arcs.append((s, ranks[r2] & tag, CONSUMER, state(r2, t2)))
    n = 1 + 2 * R
    return Fsa(n, frozenset([0]), frozenset(range(n)), tuple(arcs), h)


def boundary_conditions(h) -> Fsa:
    """The last segment (if any) is tagged ``down``."""
    seg = h.mask("segment")
    return union(epsilon(h), concat(star(symbol(h, seg, CONSUMER)), symbol(h, seg & h.mask("down"), CONSUMER)))


def sonority_tags(word, rank):
    """Reference tagging of a plain segment string: ``[(seg, 'up'|'down')]``."""
    out = []
    for i, s in enumerate(word):
        nxt = word[i + 1] if i + 1 < len(word) else None
        out.append((s, "up" if nxt is not None and rank[nxt] > rank[s] else "down"))
    return out


# constituency ------------------------------------------------------------------

LEVELS = ("σ", "Σ", "Σ'", "ω")


@dataclass(frozen=True)
class Node:
    cat: str
    prom: str | None
    children: tuple  # of Node or int (leaf index)

    def leaves(self):
        out = []
        for c in self.children:
            out.extend([c] if isinstance(c, int) else c.leaves())
        return out

    def span(self):
        lv = self.leaves()
        return min(lv), max(lv)


def _constituents(root):
    out = []

    def walk(n):
        out.append(n)
        for c in n.children:
            if isinstance(c, Node):
                walk(c)

    walk(root)
    return out


def check_tree(root: Node, n_leaves: int | None = None):
    """Raise ValueError unless every child is strictly lower in :data:`LEVELS`."""
    for n in _constituents(root):
        if n.cat not in LEVELS:
            raise ValueError(f"unknown category {n.cat}")
        if not n.children:
            raise ValueError(f"empty {n.cat}")
        rank = LEVELS.index(n.cat)
        for c in n.children:
            if isinstance(c, int):
                if rank != 0:
                    raise ValueError(f"{n.cat} dominates a segment directly")
            elif c.cat == n.cat:
                raise ValueError(f"literal recursion of {n.cat}")
            elif c.cat not in LEVELS or LEVELS.index(c.cat) >= rank:
                raise ValueError(f"{n.cat} cannot dominate {c.cat}")
    if n_leaves is not None:
        lv = root.leaves()
        if sorted(set(lv)) != list(range(n_leaves)):
            raise ValueError("tree leaves do not cover the segments")


def flatten(segments, root: Node):
    """One line per segment; ``segments`` is a list of ``(symbol, role)``."""
    check_tree(root, len(segments))
    nodes = _constituents(root)
    lines = []
    for i, (sym, role) in enumerate(segments):
        parts = [sym, f"[{role}]"]
        for lvl in LEVELS:
            here = [n for n in nodes if n.cat == lvl and n.span()[0] <= i <= n.span()[1]]
            if not here:
                parts.append("¬" + lvl)
                continue
            opens = [n for n in here if n.span()[0] == i]
            closes = [n for n in here if n.span()[1] == i]
            ref = opens[0] if opens else here[0]
            name = lvl + (f"_{ref.prom}" if ref.prom else "")
            parts.append(("[" if opens else "_") + name + ("]" if closes else "_"))
        lines.append(" ∧ ".join(parts))
    return lines


def unflatten(lines):
    """Inverse of :func:`flatten`: returns ``(segments, root)``."""
    rows = [ln.split(" ∧ ") for ln in lines]
    segments = []
    for r in rows:
        if len(r) != 2 + len(LEVELS):
            raise ValueError(f"malformed line: {' ∧ '.join(r)}")
        segments.append((r[0], r[1][1:-1]))
    spans = []  # (level index, start, end, prom)
    for li, lvl in enumerate(LEVELS):
        cur = None
        for i, r in enumerate(rows):
            tok = r[2 + li]
            if tok.startswith("¬"):
                if cur is not None:
                    raise ValueError(f"unterminated {lvl}")
                continue
            opens, closes = tok[0] == "[", tok[-1] == "]"
            body = tok[1:-1]
            prom = body[len(lvl) + 1:] if body != lvl else None
            if opens and closes and cur is not None:
                # shared segment: closes the current constituent, opens the next
                spans.append((li, cur[0], i, cur[1]))
                cur = (i, prom)
                continue
            if opens:
                if cur is not None:
                    raise ValueError(f"nested {lvl} at line {i}")
                cur = (i, prom)
            if closes:
                if cur is None:
                    raise ValueError(f"{lvl} closed but not open at line {i}")
                spans.append((li, cur[0], i, cur[1]))
                cur = None
        if cur is not None:
            raise ValueError(f"unterminated {lvl}")
    spans.sort(key=lambda s: (s[0], s[1]))
    built = {}

    def covered(sp, child):
        return sp[1] <= child[1] and child[2] <= sp[2]

    for sp in spans:
        li = sp[0]
        if li == 0:
            children = tuple(range(sp[1], sp[2] + 1))
        else:
            inner = [c for c in spans if c[0] < li and covered(sp, c)]
            maximal = [c for c in inner if not any(d[0] > c[0] and covered(d, c) for d in inner)]
            maximal.sort(key=lambda c: (c[1], c[2]))
            children = tuple(built[c] for c in maximal)
        built[sp] = Node(LEVELS[li], sp[3], children)
    tops = [sp for sp in spans if not any(d[0] > sp[0] and covered(d, sp) for d in spans)]
    if len(tops) != 1:
        raise ValueError("flattened structure has no single root")
    return segments, built[tops[0]]


def sensational():
    """The prosodic structure of 'sensational' used as a worked example."""
    segs = [("s", "O"), ("ɛ", "N"), ("n", "C"), ("s", "O"), ("ɛ", "N"), ("j", "C"),
            ("ʃ", "O"), ("ə", "N"), ("n", "CO"), ("ə", "N"), ("l", "C")]
    s1 = Node("σ", None, (0, 1, 2))
    s2 = Node("σ", "s", (3, 4, 5))
    s3 = Node("σ", "w", (6, 7, 8))
    s4 = Node("σ", "w", (8, 9, 10))
    f1 = Node("Σ", "w", (s1,))
    f2 = Node("Σ", "s", (s2, s3))
    f3 = Node("Σ'", "s", (f2, s4))
    return segs, Node("ω", None, (f1, f3))
