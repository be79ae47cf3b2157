"""Seeded graph generators and small fixture builders.

All sampling is driven by :class:`groundsel.rng.SplitMix64`, so every
generator is bit-reproducible from its integer seed, independent of Python or
numpy versions.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError
from .graphs import Graph, from_edges, _from_endpoint_arrays
from .rng import SplitMix64, substream

__all__ = [
    "random_regular_graph",
    "gnp_random_graph",
    "gnm_random_graph",
    "path_graph",
    "complete_graph",
    "star_graph",
]


def path_graph(n: int) -> Graph:
    return from_edges([(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(n: int) -> Graph:
    """Star on n nodes: center 0 joined to leaves 1..n-1."""
    return from_edges([(0, i) for i in range(1, n)])


def random_regular_graph(n: int, d: int, seed: int, max_attempts: int = 2000) -> Graph:
    """Connected d-regular graph on n nodes via the pairing model.

    Stubs (d copies of each node) are shuffled and paired; any attempt that
    produces a self-loop, a duplicate edge, or a disconnected graph is
    rejected wholesale and retried with the next substream.

    Raises:
        ValueError: if n*d is odd or d >= n.
        ConvergenceError: if no valid pairing is found within the budget.
    """
    if d >= n:
        raise ValueError(f"degree {d} must be smaller than node count {n}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if d == 0:
        raise ValueError("degree must be positive")
    for attempt in range(max_attempts):
        rng = SplitMix64(substream(seed, attempt))
        stubs = [i for i in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for a, b in zip(stubs[::2], stubs[1::2]):
            if a == b:
                ok = False
                break
            key = (a, b) if a < b else (b, a)
            if key in edges:
                ok = False
                break
            edges.add(key)
        if not ok:
            continue
        g = from_edges(sorted(edges))
        if g.connected:
            return g
    raise ConvergenceError(
        f"pairing model produced no connected simple {d}-regular graph on "
        f"{n} nodes within {max_attempts} attempts"
    )


def gnp_random_graph(n: int, p: float, seed: int, connected: bool = False,
                     max_attempts: int = 200) -> Graph:
    """Erdos-Renyi G(n, p): each of the n(n-1)/2 pairs kept with probability p.

    With ``connected=True``, resamples with successive substreams until the
    result is connected.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    npairs = n * (n - 1) // 2
    iu, ju = np.triu_indices(n, k=1)
    for attempt in range(max_attempts):
        rng = SplitMix64(substream(seed, attempt) if connected else seed)
        draws = rng.fill_u64(npairs)
        if p >= 1.0:
            keep = np.ones(npairs, dtype=bool)
        else:
            keep = draws < np.uint64(int(p * (1 << 64)))
        g = _from_endpoint_arrays(iu[keep].astype(np.int64), ju[keep].astype(np.int64),
                                  labels=np.arange(n, dtype=np.int64))
        if not connected or g.connected:
            return g
    raise ConvergenceError(
        f"no connected G({n}, {p}) sample within {max_attempts} attempts"
    )


def gnm_random_graph(n: int, m: int, seed: int) -> Graph:
    """Erdos-Renyi G(n, m): m distinct uniform edges on n nodes.

    Batches of endpoint pairs are drawn (rejection-free modulo mapping via
    SplitMix64) and the first m distinct non-loop edges in draw order are
    kept. Suited to large sparse graphs; not guaranteed connected.
    """
    max_edges = n * (n - 1) // 2
    if m > max_edges:
        raise ValueError(f"requested {m} edges but K_{n} has only {max_edges}")
    rng = SplitMix64(seed)
    bound = np.uint64((1 << 64) - ((1 << 64) % n))
    chosen = np.empty(0, dtype=np.int64)
    while chosen.size < m:
        batch = max(4 * (m - chosen.size), 1024)
        draws = rng.fill_u64(2 * batch)
        draws = draws[draws < bound]
        if draws.size < 2:
            continue
        if draws.size % 2:
            draws = draws[:-1]
        u = (draws[: draws.size // 2] % np.uint64(n)).astype(np.int64)
        v = (draws[draws.size // 2 :] % np.uint64(n)).astype(np.int64)
        keep = u != v
        u, v = u[keep], v[keep]
        keys = np.minimum(u, v) * np.int64(n) + np.maximum(u, v)
        uniq, first = np.unique(np.concatenate([chosen, keys]), return_index=True)
        # preserve draw order so the prefix of size m is well defined
        chosen = uniq[np.argsort(first)]
    chosen = chosen[:m]
    return _from_endpoint_arrays(chosen // n, chosen % n,
                                 labels=np.arange(n, dtype=np.int64))
