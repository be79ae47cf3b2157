"""Undirected simple graphs in compressed sparse row form.

A :class:`Graph` is immutable after construction: node ids are dense
``0..n-1``, neighbor lists are sorted ascending, and the original external
labels of parsed files are kept in ``labels`` (``labels[i]`` is the external
label of internal id ``i``). All algorithms in the package work on internal
ids; only the I/O layer translates labels.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import ParseError

__all__ = [
    "Graph",
    "NodeSet",
    "parse_edge_list",
    "largest_connected_component",
    "is_vertex_cover",
    "label_map_csv",
]


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph.

    Attributes:
        n: node count.
        m: edge count (each undirected edge counted once).
        adjacency: scipy CSR adjacency with unit weights; row i holds the
            sorted neighbor list of node i.
        degrees: per-node degree, ``degrees.sum() == 2*m``.
        labels: external label of each internal id, strictly ascending for
            parsed graphs, identity for generated ones.
        connected: whether the graph is connected.
    """

    n: int
    m: int
    adjacency: sp.csr_array = field(repr=False)
    degrees: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    connected: bool

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor ids of node i (a read-only view)."""
        a = self.adjacency
        return a.indices[a.indptr[i] : a.indptr[i + 1]]

    def label_of(self, internal: int) -> int:
        return int(self.labels[internal])

    def id_of(self, label: int) -> int:
        """Internal id of an external label; raises ParseError if unknown."""
        pos = int(np.searchsorted(self.labels, label))
        if pos >= self.n or self.labels[pos] != label:
            raise ParseError(f"unknown node label {label}")
        return pos

    def edge_array(self) -> tuple[np.ndarray, np.ndarray]:
        """(u, v) arrays of the m edges with u < v."""
        a = self.adjacency
        rows = np.repeat(np.arange(self.n), np.diff(a.indptr))
        keep = rows < a.indices
        return rows[keep], a.indices[keep]

    def check_nodes(self, ids: Iterable[int]) -> None:
        for i in ids:
            if not 0 <= i < self.n:
                raise ValueError(f"node id {i} out of range [0, {self.n})")


@dataclass(frozen=True)
class NodeSet:
    """Ordered set of internal node ids with O(1) membership.

    Order is meaningful (greedy selectors record pick order); duplicates are
    rejected. Range validation against a particular graph happens where the
    set is used.
    """

    members: tuple[int, ...]

    def __post_init__(self):
        lookup = frozenset(self.members)
        if len(lookup) != len(self.members):
            raise ValueError("duplicate node ids in NodeSet")
        if any(i < 0 for i in self.members):
            raise ValueError("negative node id in NodeSet")
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def of(cls, ids: Iterable[int]) -> "NodeSet":
        return cls(tuple(int(i) for i in ids))

    def __contains__(self, i: int) -> bool:
        return i in self._lookup

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def as_array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    def added(self, i: int) -> "NodeSet":
        return NodeSet(self.members + (int(i),))


def _build(edges_u: np.ndarray, edges_v: np.ndarray, labels: np.ndarray) -> Graph:
    """Assemble a Graph from deduplicated edges over dense internal ids."""
    n = labels.size
    m = edges_u.size
    rows = np.concatenate([edges_u, edges_v])
    cols = np.concatenate([edges_v, edges_u])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    indptr = np.cumsum(indptr)
    adjacency = sp.csr_array(
        (np.ones(2 * m, dtype=np.float64), cols, indptr), shape=(n, n)
    )
    degrees = np.diff(indptr).astype(np.int64)
    if n == 0:
        connected = False
    else:
        ncomp, _ = connected_components(adjacency, directed=False)
        connected = ncomp == 1
    return Graph(n=n, m=m, adjacency=adjacency, degrees=degrees,
                 labels=labels.astype(np.int64), connected=connected)


def from_edges(edges: Iterable[tuple[int, int]], labels: np.ndarray | None = None) -> Graph:
    """Graph from an iterable of (u, v) pairs over dense internal ids.

    Self-loops are dropped and duplicates collapsed. ``labels`` defaults to
    the identity map over the max id + 1 nodes.
    """
    arr = np.array([(u, v) for u, v in edges], dtype=np.int64).reshape(-1, 2)
    return _from_endpoint_arrays(arr[:, 0], arr[:, 1], labels)


def _from_endpoint_arrays(u: np.ndarray, v: np.ndarray,
                          labels: np.ndarray | None = None) -> Graph:
    keep = u != v
    u, v = u[keep], v[keep]
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    if labels is None:
        n = int(max(u.max(initial=-1), v.max(initial=-1))) + 1 if u.size else 0
        labels = np.arange(n, dtype=np.int64)
    n = labels.size
    packed = np.unique(lo.astype(np.int64) * n + hi)
    return _build(packed // n, packed % n, labels)


def parse_edge_list(source, comment_prefixes: tuple[str, ...] = ("#", "%"),
                    allow_weights: bool = True) -> Graph:
    """Parse a whitespace-separated edge list into a Graph.

    Each data line is ``u v`` or ``u v w`` with integer labels; the weight
    column, when present and permitted, is ignored (graphs are binary).
    Lines starting with a comment prefix are skipped, duplicate edges are
    collapsed, self-loops dropped, and labels remapped to dense internal ids
    (ascending label order).

    Args:
        source: a string, an open text file, or any iterable of lines.
        comment_prefixes: line prefixes treated as comments.
        allow_weights: when False, a third column is a parse error.

    Raises:
        ParseError: malformed token (with line number) or zero usable edges.
    """
    if isinstance(source, str):
        lines: Iterable[str] = io.StringIO(source)
    else:
        lines = source
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefixes):
            continue
        parts = line.split()
        if len(parts) == 3 and allow_weights:
            parts = parts[:2]
        if len(parts) != 2:
            raise ParseError(f"expected 'u v' pair, got {line!r}", line=lineno)
        try:
            us.append(int(parts[0]))
            vs.append(int(parts[1]))
        except ValueError:
            raise ParseError(f"non-integer node label in {line!r}", line=lineno) from None
    u = np.array(us, dtype=np.int64)
    v = np.array(vs, dtype=np.int64)
    keep = u != v
    u, v = u[keep], v[keep]
    if u.size == 0:
        raise ParseError("edge list contains no usable edges")
    labels, inverse = np.unique(np.concatenate([u, v]), return_inverse=True)
    return _from_endpoint_arrays(inverse[: u.size], inverse[u.size :], labels)


def parse_edge_list_path(path: str, **options) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_edge_list(f, **options)


def largest_connected_component(g: Graph) -> Graph:
    """Node-induced subgraph on the largest component, relabeled dense.

    Ties between equal-size components go to the one containing the smallest
    internal id. The returned graph's labels compose with the original's, so
    external labels survive extraction. Connected input is returned as is.
    """
    if g.connected:
        return g
    ncomp, comp = connected_components(g.adjacency, directed=False)
    sizes = np.bincount(comp, minlength=ncomp)
    # scipy assigns component ids in order of first node encountered, so the
    # smallest-numbered candidate component contains the smallest node id
    best = int(np.nonzero(sizes == sizes.max())[0][0])
    keep = np.nonzero(comp == best)[0]
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[keep] = np.arange(keep.size)
    u, v = g.edge_array()
    inside = comp[u] == best
    return _build(new_id[u[inside]], new_id[v[inside]], labels=g.labels[keep])


def is_vertex_cover(g: Graph, s: NodeSet) -> bool:
    """True iff every edge has at least one endpoint in ``s``.

    Equivalently, the complement of ``s`` is an independent set.
    """
    g.check_nodes(s)
    mask = np.zeros(g.n, dtype=bool)
    mask[list(s)] = True
    u, v = g.edge_array()
    return bool(np.all(mask[u] | mask[v]))


def label_map_csv(g: Graph) -> str:
    """Two-column CSV mapping external labels to internal ids."""
    out = ["external,internal"]
    out.extend(f"{int(lbl)},{i}" for i, lbl in enumerate(g.labels))
    return "\n".join(out) + "\n"
