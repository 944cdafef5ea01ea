"""Path patterns, dominance, and vertex matching.

A simple pattern ``<A0, l0, A1, ..., l(n-1), An>`` is matched by a vertex
that is the source of a *walk* (vertices may repeat) whose i-th vertex holds
``Ai`` and whose i-th edge carries ``li``.  A reachability pattern
``<A0, l*, A1>`` is matched by a vertex holding ``A0`` from which some vertex
holding ``A1`` is reachable through one or more ``l``-edges; ``max_hops``
optionally caps that path length.

Canonical text: ``{a,b}-[l]->{c}`` for simple steps and ``{a}-[l*]->{c}``
for reachability; attributes inside a set are written in id order.
"""
from __future__ import annotations

import enum
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import PropertyGraph

__all__ = [
    "Kind",
    "PathPattern",
    "PatternSyntaxError",
    "dominates",
    "format_pattern",
    "parse_pattern",
    "vertex_matches",
    "match_set",
    "match_mask",
    "reach_closure",
]


class Kind(enum.Enum):
    SIMPLE = "simple"
    REACH = "reach"


def _canon(attrs: Iterable[int]) -> tuple[int, ...]:
    if type(attrs) is tuple and all(type(a) is int for a in attrs) and all(
            attrs[i] < attrs[i + 1] for i in range(len(attrs) - 1)):
        return attrs
    return tuple(sorted(set(int(a) for a in attrs)))


@dataclass(frozen=True)
class PathPattern:
    attrs: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    kind: Kind = Kind.SIMPLE

    def __post_init__(self):
        attrs = tuple(_canon(a) for a in self.attrs)
        labels = self.labels
        if type(labels) is not tuple or not all(type(x) is int for x in labels):
            labels = tuple(int(x) for x in labels)
        if any(not a for a in attrs):
            raise ValueError("attribute sets in a pattern must be non-empty")
        if len(attrs) != len(labels) + 1:
            raise ValueError("a pattern needs exactly one more attribute set than labels")
        if self.kind is Kind.REACH and len(labels) != 1:
            raise ValueError("a reachability pattern has exactly two attribute sets and one label")
        object.__setattr__(self, "attrs", attrs)
        object.__setattr__(self, "labels", labels)
        # patterns are dictionary keys in hot loops; hash once
        object.__setattr__(self, "_hash", hash((attrs, labels, self.kind.value)))

    def __hash__(self):
        return self._hash

    @classmethod
    def _raw(cls, attrs, labels, kind) -> "PathPattern":
        # attrs/labels are already canonical and consistent; skip validation
        p = object.__new__(cls)
        object.__setattr__(p, "attrs", attrs)
        object.__setattr__(p, "labels", labels)
        object.__setattr__(p, "kind", kind)
        object.__setattr__(p, "_hash", hash((attrs, labels, kind.value)))
        return p

    @classmethod
    def simple(cls, attrs: Sequence[Iterable[int]], labels: Sequence[int]) -> "PathPattern":
        return cls(tuple(tuple(a) for a in attrs), tuple(labels), Kind.SIMPLE)

    @classmethod
    def reach(cls, a0: Iterable[int], label: int, a1: Iterable[int]) -> "PathPattern":
        return cls((tuple(a0), tuple(a1)), (label,), Kind.REACH)

    @classmethod
    def attrset(cls, a0: Iterable[int]) -> "PathPattern":
        return cls((tuple(a0),), (), Kind.SIMPLE)

    @property
    def is_reach(self) -> bool:
        return self.kind is Kind.REACH

    @property
    def length(self) -> int:
        return len(self.labels)

    @property
    def n_attrs(self) -> int:
        return sum(len(a) for a in self.attrs)

    @property
    def is_unit(self) -> bool:
        return all(len(a) == 1 for a in self.attrs)

    def prefix(self, n: int) -> "PathPattern":
        if self.is_reach:
            raise ValueError("reachability patterns have no prefixes")
        if not 0 <= n <= self.length:
            raise ValueError(f"prefix length must be in [0, {self.length}]")
        return PathPattern._raw(self.attrs[: n + 1], self.labels[:n], Kind.SIMPLE)

    def extend(self, label: int, attrs: Iterable[int]) -> "PathPattern":
        if self.is_reach:
            raise ValueError("cannot append a step to a reachability pattern")
        a = _canon(attrs)
        if not a:
            raise ValueError("attribute sets in a pattern must be non-empty")
        return PathPattern._raw(self.attrs + (a,), self.labels + (int(label),), Kind.SIMPLE)

    def replace_attrs(self, i: int, attrs: Iterable[int]) -> "PathPattern":
        a = _canon(attrs)
        if not a:
            raise ValueError("attribute sets in a pattern must be non-empty")
        new = list(self.attrs)
        new[i] = a
        return PathPattern._raw(tuple(new), self.labels, self.kind)

    def reductions(self) -> list["PathPattern"]:
        """One-step generalisations: drop one attribute, or the last step.

        The last step is only dropped when its attribute set is a singleton
        and at least one edge remains, so that every pattern of length >= 1
        reduces, step by step, to a unit pattern of length 1.
        """
        out = []
        for i, a in enumerate(self.attrs):
            if len(a) > 1:
                for x in a:
                    out.append(self.replace_attrs(i, [y for y in a if y != x]))
        if not self.is_reach and self.length >= 2 and len(self.attrs[-1]) == 1:
            out.append(self.prefix(self.length - 1))
        return out

    def sort_key(self):
        return (self.kind is Kind.REACH, self.length, self.attrs, self.labels)


def dominates(p: PathPattern, q: PathPattern) -> bool:
    """True iff ``p`` dominates ``q`` (``p`` is at least as specific).

    Patterns of different kinds never dominate one another.
    """
    if p.kind is not q.kind:
        return False
    m = q.length
    if m > p.length or p.labels[:m] != q.labels:
        return False
    return all(set(q.attrs[i]) <= set(p.attrs[i]) for i in range(m + 1))


# -- text form -----------------------------------------------------------------


class PatternSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


def _fmt_set(attrs, g):
    return "{" + ",".join(g.attr_names[a] for a in attrs) + "}"


def format_pattern(p: PathPattern, g: PropertyGraph) -> str:
    parts = [_fmt_set(p.attrs[0], g)]
    star = "*" if p.is_reach else ""
    for lab, a in zip(p.labels, p.attrs[1:]):
        parts.append(f"-[{g.label_names[lab]}{star}]->{_fmt_set(a, g)}")
    return "".join(parts)


_SET = re.compile(r"\s*\{([^{}]*)\}\s*")
_STEP = re.compile(r"-\[([^\[\]]*?)(\*?)\]->")


def parse_pattern(text: str, g: PropertyGraph) -> PathPattern:
    """Parse the canonical text form; errors carry the offending position."""
    pos = 0
    sets: list[tuple[int, ...]] = []
    labels: list[int] = []
    stars: list[bool] = []
    while True:
        m = _SET.match(text, pos)
        if not m:
            raise PatternSyntaxError(text, pos, "expected '{attr,...}'")
        ids = []
        offset = m.start(1)
        for token in m.group(1).split(","):
            name = token.strip()
            if not name:
                raise PatternSyntaxError(text, offset, "empty attribute name")
            try:
                ids.append(g.attr_id(name))
            except KeyError:
                raise PatternSyntaxError(text, offset, f"unknown attribute {name!r}") from None
            offset += len(token) + 1
        sets.append(tuple(ids))
        pos = m.end()
        if pos == len(text):
            break
        m = _STEP.match(text, pos)
        if not m:
            raise PatternSyntaxError(text, pos, "expected '-[label]->' or '-[label*]->'")
        name = m.group(1).strip()
        try:
            labels.append(g.label_id(name))
        except KeyError:
            raise PatternSyntaxError(text, m.start(1), f"unknown label {name!r}") from None
        stars.append(bool(m.group(2)))
        pos = m.end()
    if any(stars):
        if len(labels) != 1:
            raise PatternSyntaxError(text, 0, "a reachability pattern has exactly one '-[label*]->' step")
        return PathPattern.reach(sets[0], labels[0], sets[1])
    return PathPattern.simple(sets, labels)


# -- matching ------------------------------------------------------------------


def _hops(max_hops) -> int:
    return 0 if max_hops is None else int(max_hops)


def vertex_matches(g: PropertyGraph, v: int, p: PathPattern, max_hops: int | None = None) -> bool:
    """Walk forward from ``v`` one frontier at a time."""
    if not set(p.attrs[0]) <= g.attr_set(v):
        return False
    if p.is_reach:
        lab, want = p.labels[0], set(p.attrs[1])
        seen: set[int] = set()
        frontier = {v}
        hop = 0
        while frontier and (max_hops is None or hop < max_hops):
            nxt = set()
            for u in frontier:
                labels, targets = g.out_edges(u)
                for t in targets[labels == lab].tolist():
                    if t not in seen:
                        seen.add(t)
                        nxt.add(t)
            if any(want <= g.attr_set(t) for t in nxt):
                return True
            frontier = nxt
            hop += 1
        return False
    frontier = {v}
    for lab, want in zip(p.labels, p.attrs[1:]):
        nxt = set()
        want = set(want)
        for u in frontier:
            labels, targets = g.out_edges(u)
            for t in targets[labels == lab].tolist():
                if want <= g.attr_set(t):
                    nxt.add(t)
        if not nxt:
            return False
        frontier = nxt
    return True


def match_mask(g: PropertyGraph, p: PathPattern, max_hops: int | None = None) -> np.ndarray:
    """Boolean mask of V(p), computed by propagating backwards from the end."""
    n = g.n_vertices
    if p.is_reach:
        lsrc, ldst = g.label_edges(p.labels[0])
        reached = kernels.backprop(lsrc, ldst, g.attr_mask(p.attrs[1]), n)
        frontier = reached
        hop = 1
        limit = _hops(max_hops)
        while frontier.any() and (limit <= 0 or hop < limit):
            new = kernels.backprop(lsrc, ldst, frontier, n) & ~reached
            reached = reached | new
            frontier = new
            hop += 1
        return reached & g.attr_mask(p.attrs[0])
    mask = g.attr_mask(p.attrs[-1])
    for i in range(p.length - 1, -1, -1):
        lsrc, ldst = g.label_edges(p.labels[i])
        mask = kernels.backprop(lsrc, ldst, mask, n) & g.attr_mask(p.attrs[i])
    return mask


def match_set(g: PropertyGraph, p: PathPattern, max_hops: int | None = None) -> np.ndarray:
    """Sorted vertex ids of V(p)."""
    return np.flatnonzero(match_mask(g, p, max_hops)).astype(np.int64)


def reach_closure(g: PropertyGraph, label: int, sources: Iterable[int],
                  k: int | None = None) -> dict[int, np.ndarray]:
    """Vertices reachable from each source over ``label``-edges only.

    The empty path does not count: a source appears in its own set only
    through an actual cycle.  ``k`` caps the number of hops (``None`` is
    unbounded).
    """
    srcs = np.unique(np.fromiter(sources, dtype=np.int64))
    lsrc, ldst = g.label_edges(label)
    ps, pt = kernels.reach_pairs(srcs, lsrc, ldst, _hops(k), g.n_vertices)
    cuts = np.searchsorted(ps, srcs)
    ends = np.searchsorted(ps, srcs, side="right")
    return {int(s): pt[a:b] for s, a, b in zip(srcs, cuts, ends)}
