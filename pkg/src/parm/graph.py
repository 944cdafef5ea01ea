"""In-memory property graph, its text formats, and the pruning indexes.

Vertices are dense ids ``0..n-1``.  Attribute and label strings are interned
to dense ids in order of first occurrence (or seeded from a dictionary
sidecar).  Everything is stored as flat ``int64`` arrays:

* ``attr_ptr``/``attr_ids`` -- per-vertex sorted attribute ids (CSR);
* ``src``/``lbl``/``dst`` -- unique edges sorted by (src, lbl, dst), with
  ``out_ptr`` indexing the per-source slices;
* ``lab_ptr``/``lab_src``/``lab_dst`` -- the same edges grouped by label,
  sorted by (src, dst) inside each label slice;
* ``avert_ptr``/``avert_ids`` -- per-attribute sorted vertex ids.

A graph is never mutated after construction and may be shared by threads.
"""
from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from functools import cached_property

import numpy as np

__all__ = [
    "GraphFormatError",
    "PropertyGraph",
    "GraphIndexes",
    "load_graph",
    "save_graph",
    "load_dictionary",
    "save_dictionary",
    "max_in_degree",
    "edge_set_size",
    "vertex_set_size",
]


class GraphFormatError(ValueError):
    def __init__(self, path, lineno, message):
        self.path = str(path)
        self.lineno = lineno
        where = f"{self.path}, line {lineno}" if lineno else self.path
        super().__init__(f"{where}: {message}")


def _ragged_positions(ptr, owners):
    """Concatenated CSR positions ``ptr[o]..ptr[o+1]`` for each owner."""
    starts = ptr[owners]
    lens = ptr[owners + 1] - starts
    total = int(lens.sum())
    offsets = np.cumsum(lens) - lens
    return np.repeat(starts - offsets, lens) + np.arange(total, dtype=np.int64), lens


_MASK_CACHE_SIZE = 1024


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class PropertyGraph:
    """Directed, edge-labelled graph with an attribute set on every vertex."""

    def __init__(
        self,
        n_vertices: int,
        vertex_attrs: Sequence[Iterable[int]],
        edges: Iterable[tuple[int, int, int]] | np.ndarray,
        n_labels: int,
        n_attrs: int,
        vertex_names: Sequence[str] | None = None,
        label_names: Sequence[str] | None = None,
        attr_names: Sequence[str] | None = None,
    ):
        if len(vertex_attrs) != n_vertices:
            raise ValueError("vertex_attrs must have one entry per vertex")
        self.n_vertices = int(n_vertices)
        self.n_labels = int(n_labels)
        self.n_attrs = int(n_attrs)
        self._mask_cache: dict[tuple[int, ...], np.ndarray] = {}
        self.vertex_names = tuple(vertex_names) if vertex_names is not None else tuple(
            f"v{i}" for i in range(n_vertices))
        self.label_names = tuple(label_names) if label_names is not None else tuple(
            f"l{i}" for i in range(n_labels))
        self.attr_names = tuple(attr_names) if attr_names is not None else tuple(
            f"a{i}" for i in range(n_attrs))
        if (len(self.vertex_names), len(self.label_names), len(self.attr_names)) != (
                self.n_vertices, self.n_labels, self.n_attrs):
            raise ValueError("name tables do not match the declared sizes")

        ptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        chunks = []
        for v, attrs in enumerate(vertex_attrs):
            a = np.unique(np.fromiter(attrs, dtype=np.int64))
            if a.shape[0] and (a[0] < 0 or a[-1] >= self.n_attrs):
                raise ValueError(f"vertex {v}: attribute id out of range")
            chunks.append(a)
            ptr[v + 1] = ptr[v] + a.shape[0]
        self.attr_ptr = _frozen(ptr)
        self.attr_ids = _frozen(np.concatenate(chunks) if chunks else np.zeros(0, np.int64))

        e = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
        if e.shape[0]:
            if e[:, [0, 2]].min() < 0 or e[:, [0, 2]].max() >= self.n_vertices:
                raise ValueError("edge endpoint out of range")
            if e[:, 1].min() < 0 or e[:, 1].max() >= self.n_labels:
                raise ValueError("edge label out of range")
            e = np.unique(e, axis=0)  # sorts by (src, lbl, dst) and drops duplicates
        self.src = _frozen(e[:, 0])
        self.lbl = _frozen(e[:, 1])
        self.dst = _frozen(e[:, 2])
        self.out_ptr = _frozen(np.searchsorted(self.src, np.arange(self.n_vertices + 1)))
        self.in_degree = _frozen(np.bincount(self.dst, minlength=self.n_vertices))

        order = np.lexsort((self.dst, self.src, self.lbl))
        self.lab_src = _frozen(self.src[order])
        self.lab_dst = _frozen(self.dst[order])
        self.lab_ptr = _frozen(np.searchsorted(self.lbl[order], np.arange(self.n_labels + 1)))

        owner = np.repeat(np.arange(self.n_vertices, dtype=np.int64), np.diff(self.attr_ptr))
        order = np.lexsort((owner, self.attr_ids))
        self.avert_ids = _frozen(owner[order])
        self.avert_ptr = _frozen(np.searchsorted(self.attr_ids[order], np.arange(self.n_attrs + 1)))

    # -- basic accessors ---------------------------------------------------

    @property
    def n_edges(self) -> int:
        return int(self.src.shape[0])

    def attrs(self, v: int) -> np.ndarray:
        return self.attr_ids[self.attr_ptr[v]:self.attr_ptr[v + 1]]

    def attr_set(self, v: int) -> frozenset[int]:
        return frozenset(self.attrs(v).tolist())

    def out_edges(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """(labels, targets) of the out-edges of ``v``."""
        lo, hi = self.out_ptr[v], self.out_ptr[v + 1]
        return self.lbl[lo:hi], self.dst[lo:hi]

    def label_edges(self, label: int) -> tuple[np.ndarray, np.ndarray]:
        """(sources, targets) of all edges with ``label``, sorted by source."""
        if not 0 <= label < self.n_labels:
            raise ValueError(f"unknown label id {label}")
        lo, hi = self.lab_ptr[label], self.lab_ptr[label + 1]
        return self.lab_src[lo:hi], self.lab_dst[lo:hi]

    def attr_vertices(self, a: int) -> np.ndarray:
        return self.avert_ids[self.avert_ptr[a]:self.avert_ptr[a + 1]]

    def attr_mask(self, attrs: Iterable[int]) -> np.ndarray:
        """Read-only boolean mask of vertices holding every attribute in ``attrs``.

        Recent masks are memoised; callers combine them into new arrays.
        """
        key = tuple(sorted(set(int(a) for a in attrs)))
        cache = self._mask_cache
        out = cache.get(key)
        if out is not None:
            return out
        if not key:
            out = np.ones(self.n_vertices, dtype=np.bool_)
        elif not all(0 <= a < self.n_attrs for a in key):
            out = np.zeros(self.n_vertices, dtype=np.bool_)
        else:
            out = np.zeros(self.n_vertices, dtype=np.bool_)
            out[self.attr_vertices(key[0])] = True
            for a in key[1:]:
                m = np.zeros(self.n_vertices, dtype=np.bool_)
                m[self.attr_vertices(a)] = True
                out &= m
        out.setflags(write=False)
        if len(cache) >= _MASK_CACHE_SIZE:
            cache.pop(next(iter(cache)))
        cache[key] = out
        return out

    def edge_triples(self) -> np.ndarray:
        return np.stack([self.src, self.lbl, self.dst], axis=1)

    def vertex_attr_lists(self) -> list[list[int]]:
        return [self.attrs(v).tolist() for v in range(self.n_vertices)]

    # -- id lookups ----------------------------------------------------------

    @cached_property
    def _attr_lookup(self):
        return {s: i for i, s in enumerate(self.attr_names)}

    @cached_property
    def _label_lookup(self):
        return {s: i for i, s in enumerate(self.label_names)}

    @cached_property
    def _vertex_lookup(self):
        return {s: i for i, s in enumerate(self.vertex_names)}

    def attr_id(self, name: str) -> int:
        return self._attr_lookup[name]

    def label_id(self, name: str) -> int:
        return self._label_lookup[name]

    def vertex_id(self, name: str) -> int:
        return self._vertex_lookup[name]

    @cached_property
    def indexes(self) -> "GraphIndexes":
        return GraphIndexes(self)

    def __repr__(self):
        return (f"PropertyGraph(|V|={self.n_vertices}, |E|={self.n_edges}, "
                f"|L|={self.n_labels}, |A|={self.n_attrs})")


class GraphIndexes:
    """Per (attribute, label) edge and vertex counts plus the max in-degree.

    ``edge_counts[a, l]`` is the number of ``l``-edges whose target holds
    ``a``; ``vertex_counts[a, l]`` the number of vertices holding ``a`` with
    an outgoing ``l``-edge.  Only single attributes are tabulated; sets are
    answered on demand by intersecting masks.
    """

    def __init__(self, g: PropertyGraph):
        self.graph = g
        self.d_m = int(g.in_degree.max()) if g.n_vertices and g.n_edges else 0
        nA, nL = g.n_attrs, g.n_labels

        pos, lens = _ragged_positions(g.attr_ptr, g.dst)
        keys = g.attr_ids[pos] * nL + np.repeat(g.lbl, lens)
        self.edge_counts = np.bincount(keys, minlength=nA * nL).reshape(nA, nL)

        if g.n_edges:
            first = np.ones(g.n_edges, dtype=np.bool_)
            first[1:] = (g.src[1:] != g.src[:-1]) | (g.lbl[1:] != g.lbl[:-1])
            vs, vl = g.src[first], g.lbl[first]
        else:
            vs = vl = np.zeros(0, dtype=np.int64)
        pos, lens = _ragged_positions(g.attr_ptr, vs)
        keys = g.attr_ids[pos] * nL + np.repeat(vl, lens)
        self.vertex_counts = np.bincount(keys, minlength=nA * nL).reshape(nA, nL)
        self.edge_counts.setflags(write=False)
        self.vertex_counts.setflags(write=False)
        self._out_masks: dict[int, np.ndarray] = {}
        self._sizes: dict[tuple, int] = {}

    def _has_out(self, label: int) -> np.ndarray:
        m = self._out_masks.get(label)
        if m is None:
            lsrc, _ = self.graph.label_edges(label)
            m = np.zeros(self.graph.n_vertices, dtype=np.bool_)
            m[lsrc] = True
            self._out_masks[label] = m
        return m

    def _check(self, attrs, label):
        if not 0 <= label < self.graph.n_labels:
            raise ValueError(f"unknown label id {label}")
        attrs = sorted(set(attrs))
        if not attrs:
            raise ValueError("attribute set must be non-empty")
        return attrs

    def edge_members(self, attrs: Iterable[int], label: int) -> np.ndarray:
        """Positions (inside the label slice) of edges in E(attrs, label)."""
        attrs = self._check(attrs, label)
        _, ldst = self.graph.label_edges(label)
        return np.flatnonzero(self.graph.attr_mask(attrs)[ldst])

    def vertex_members(self, attrs: Iterable[int], label: int) -> np.ndarray:
        """Sorted vertices in V(attrs, label)."""
        attrs = self._check(attrs, label)
        return np.flatnonzero(self.graph.attr_mask(attrs) & self._has_out(label))

    def edge_set_size(self, attrs: Iterable[int], label: int) -> int:
        attrs = self._check(attrs, label)
        if len(attrs) == 1:
            a = attrs[0]
            return int(self.edge_counts[a, label]) if a < self.graph.n_attrs else 0
        key = ("e", tuple(attrs), label)
        n = self._sizes.get(key)
        if n is None:
            n = self._sizes[key] = int(self.edge_members(attrs, label).shape[0])
        return n

    def vertex_set_size(self, attrs: Iterable[int], label: int) -> int:
        attrs = self._check(attrs, label)
        if len(attrs) == 1:
            a = attrs[0]
            return int(self.vertex_counts[a, label]) if a < self.graph.n_attrs else 0
        key = ("v", tuple(attrs), label)
        n = self._sizes.get(key)
        if n is None:
            n = self._sizes[key] = int(self.vertex_members(attrs, label).shape[0])
        return n


def max_in_degree(g: PropertyGraph) -> int:
    return g.indexes.d_m


def edge_set_size(g: PropertyGraph, attrs: Iterable[int], label: int) -> int:
    return g.indexes.edge_set_size(attrs, label)


def vertex_set_size(g: PropertyGraph, attrs: Iterable[int], label: int) -> int:
    return g.indexes.vertex_set_size(attrs, label)


# -- text formats -------------------------------------------------------------


class _Interner:
    def __init__(self, seed: Sequence[str] = ()):
        self.ids: dict[str, int] = {}
        self.names: list[str] = []
        for s in seed:
            self.get(s)

    def get(self, s: str) -> int:
        i = self.ids.get(s)
        if i is None:
            i = self.ids[s] = len(self.names)
            self.names.append(s)
        return i


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def _dict_paths(prefix) -> tuple[str, str]:
    prefix = os.fspath(prefix)
    return prefix + ".attrs.dict", prefix + ".labels.dict"


def _read_dict(path) -> list[str]:
    pairs = []
    for lineno, line in _data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[1].strip().lstrip("-").isdigit():
            raise GraphFormatError(path, lineno, "expected '<string>\\t<id>'")
        pairs.append((int(parts[1]), parts[0]))
    pairs.sort()
    if [i for i, _ in pairs] != list(range(len(pairs))):
        raise GraphFormatError(path, 0, "dictionary ids must be dense 0..n-1")
    return [s for _, s in pairs]


def load_dictionary(prefix) -> tuple[list[str], list[str]]:
    """Read ``<prefix>.attrs.dict`` and ``<prefix>.labels.dict``."""
    apath, lpath = _dict_paths(prefix)
    return _read_dict(apath), _read_dict(lpath)


def save_dictionary(g: PropertyGraph, prefix) -> tuple[str, str]:
    apath, lpath = _dict_paths(prefix)
    for path, names in ((apath, g.attr_names), (lpath, g.label_names)):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for i, s in enumerate(names):
                fh.write(f"{s}\t{i}\n")
    return apath, lpath


def load_graph(vertex_file, edge_file, dictionary=None) -> PropertyGraph:
    """Parse the vertex and edge files into a :class:`PropertyGraph`.

    Vertex lines are ``<vertex_id>\\t<attr>[,<attr>...]`` (the attribute
    list may be empty), edge lines ``<src>\\t<label>\\t<dst>``.  Blank and
    ``#`` lines are skipped.  ``dictionary`` is an optional sidecar prefix
    whose ids are reused so that interning is stable across runs.
    """
    attr_seed: Sequence[str] = ()
    label_seed: Sequence[str] = ()
    if dictionary is not None:
        attr_seed, label_seed = load_dictionary(dictionary)
    attrs_in = _Interner(attr_seed)
    labels_in = _Interner(label_seed)

    names: list[str] = []
    vid: dict[str, int] = {}
    vattrs: list[list[int]] = []
    for lineno, line in _data_lines(vertex_file):
        parts = line.split("\t")
        if len(parts) > 2 or not parts[0].strip():
            raise GraphFormatError(vertex_file, lineno, "expected '<vertex_id>\\t<attr>[,<attr>...]'")
        name = parts[0].strip()
        if name in vid:
            raise GraphFormatError(vertex_file, lineno, f"duplicate vertex id {name!r}")
        field = parts[1].strip() if len(parts) == 2 else ""
        tokens = [t.strip() for t in field.split(",")] if field else []
        if any(not t for t in tokens):
            raise GraphFormatError(vertex_file, lineno, "empty attribute name")
        vid[name] = len(names)
        names.append(name)
        vattrs.append([attrs_in.get(t) for t in tokens])

    edges: list[tuple[int, int, int]] = []
    for lineno, line in _data_lines(edge_file):
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 3 or not all(parts):
            raise GraphFormatError(edge_file, lineno, "expected '<src>\\t<label>\\t<dst>'")
        s, lab, d = parts
        for end in (s, d):
            if end not in vid:
                raise GraphFormatError(edge_file, lineno, f"dangling edge endpoint {end!r}")
        edges.append((vid[s], labels_in.get(lab), vid[d]))

    return PropertyGraph(
        len(names), vattrs, np.array(edges, dtype=np.int64).reshape(-1, 3),
        n_labels=len(labels_in.names), n_attrs=len(attrs_in.names),
        vertex_names=names, label_names=labels_in.names, attr_names=attrs_in.names,
    )


def save_graph(g: PropertyGraph, vertex_file, edge_file, dictionary=None) -> None:
    """Write ``g`` in the text formats; optionally also the dictionary sidecar."""
    with open(vertex_file, "w", encoding="utf-8", newline="\n") as fh:
        for v in range(g.n_vertices):
            attrs = ",".join(g.attr_names[a] for a in g.attrs(v))
            fh.write(f"{g.vertex_names[v]}\t{attrs}\n")
    with open(edge_file, "w", encoding="utf-8", newline="\n") as fh:
        vn, ln = g.vertex_names, g.label_names
        for s, lab, d in zip(g.src.tolist(), g.lbl.tolist(), g.dst.tolist()):
            fh.write(f"{vn[s]}\t{ln[lab]}\t{vn[d]}\n")
    if dictionary is not None:
        save_dictionary(g, dictionary)
