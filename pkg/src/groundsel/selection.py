"""Grounded-node selection strategies.

All selectors return a :class:`SelectionResult` whose picks record the chosen
node, the smallest eigenvalue after that pick, and the wall time of the
iteration that produced it. Ties are always broken toward the smallest node
id, which makes every selector deterministic and regression-testable.

The empty-set convention: the smallest eigenvalue of the ungrounded Laplacian
is 0 with the uniform unit vector as eigenvector, so the first-round gap
estimate of node j reduces to ``2 d_j / n`` and the first greedy pick is a
maximum-degree node.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import numpy as np

from .errors import GuardError
from .graphs import Graph, NodeSet
from .spectral import (
    EigenPair,
    GroundedOperator,
    dense_oracle,
    smallest_eigenpair,
    smallest_eigenpair_lanczos,
)

__all__ = [
    "METHODS",
    "GapScore",
    "Pick",
    "SelectionResult",
    "gap_estimates",
    "fast_greedy",
    "naive_greedy",
    "brute_force_optimum",
    "baseline_select",
    "exact_gap",
]

METHODS = ("optimum", "naive", "fast", "degree", "eigenvector", "betweenness",
           "closeness")
BASELINE_METHODS = ("degree", "eigenvector", "betweenness", "closeness")

BRUTE_FORCE_MAX_CASES = 10**7
DENSE_EVAL_MAX_N = 2000

_EIGENSOLVERS = {
    "inverse_power": smallest_eigenpair,
    "lanczos": smallest_eigenpair_lanczos,
}


@dataclass(frozen=True)
class GapScore:
    """First-order estimate of the eigenvalue gain from grounding ``node``."""

    node: int
    score: float


@dataclass
class Pick:
    """One selection step: chosen node, eigenvalue after it, iteration time."""

    node: int
    lam: float
    ms: float


@dataclass(frozen=True)
class SelectionResult:
    method: str
    picks: list[Pick]
    final_lambda: float
    k: int
    eps: float
    seed: int | None = None

    @property
    def selected(self) -> list[int]:
        return [p.node for p in self.picks]


def _eigensolver(solver: str):
    try:
        return _EIGENSOLVERS[solver]
    except KeyError:
        raise ValueError(f"unknown eigensolver {solver!r}") from None


def _validate_k(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n - 1:
        raise GuardError(f"k must lie in [1, {g.n - 1}], got {k}")


def _uniform_pair_full(n: int) -> np.ndarray:
    return np.full(n, 1.0 / math.sqrt(n))


def _gap_scores_full(g: Graph, grounded_mask: np.ndarray,
                     u_full: np.ndarray) -> np.ndarray:
    """Scores 2*u_j*sum(u_i, i in N_j\\S) for all nodes; grounded get -inf.

    ``u_full`` must be the eigenvector scattered to all n nodes with zeros on
    the grounded set, so one adjacency product yields the neighbor sums.
    """
    sums = g.adjacency @ u_full
    scores = 2.0 * u_full * sums
    scores[grounded_mask] = -np.inf
    return scores


def gap_estimates(g: Graph, s: NodeSet, pair: EigenPair | None = None) -> list[GapScore]:
    """Per-candidate first-order gap estimates, one per node outside ``s``.

    ``pair`` must be the smallest eigenpair of L(S). For the empty set, pass
    ``pair=None``: the convention eigenpair (value 0, uniform vector) is used
    and the scores reduce to ``2 d_j / n``. Cost is O(m).

    Raises:
        ValueError: pair dimension does not match ``n - |s|`` (stale pair).
    """
    g.check_nodes(s)
    mask = np.zeros(g.n, dtype=bool)
    mask[list(s)] = True
    if len(s) == 0:
        u_full = _uniform_pair_full(g.n) if pair is None else pair.vector
        if u_full.shape != (g.n,):
            raise ValueError("stale eigenpair: dimension mismatch with grounded set")
    else:
        if pair is None:
            raise ValueError("a smallest eigenpair of L(S) is required when s is nonempty")
        if pair.vector.shape != (g.n - len(s),):
            raise ValueError("stale eigenpair: dimension mismatch with grounded set")
        u_full = np.zeros(g.n)
        u_full[~mask] = pair.vector
    scores = _gap_scores_full(g, mask, u_full)
    return [GapScore(node=int(j), score=float(scores[j]))
            for j in np.nonzero(~mask)[0]]


def fast_greedy(g: Graph, k: int, eps: float = 1e-3,
                solver: str = "inverse_power") -> SelectionResult:
    """Greedy selection scored by the first-order gap estimator.

    Each iteration computes the smallest eigenpair of the current L(S)
    (empty-set convention on the first), scores every candidate in O(m), and
    grounds the argmax (smallest id on ties). The reported eigenvalue after
    pick i comes from the next iteration's eigensolve; the final one is
    recomputed once at the end. Total cost: k eigensolves plus k adjacency
    products.
    """
    _validate_k(g, k)
    solve_pair = _eigensolver(solver)
    mask = np.zeros(g.n, dtype=bool)
    chosen: list[int] = []
    picks: list[Pick] = []
    u_full = _uniform_pair_full(g.n)
    for i in range(k):
        t0 = time.perf_counter()
        if i > 0:
            op = GroundedOperator(g, NodeSet.of(chosen))
            pair = solve_pair(op, eps)
            picks[-1].lam = pair.value
            u_full = op.scatter(pair.vector)
        scores = _gap_scores_full(g, mask, u_full)
        j = int(np.argmax(scores))
        chosen.append(j)
        mask[j] = True
        picks.append(Pick(node=j, lam=math.nan,
                          ms=(time.perf_counter() - t0) * 1e3))
    final = solve_pair(GroundedOperator(g, NodeSet.of(chosen)), eps)
    picks[-1].lam = final.value
    return SelectionResult(method="fast", picks=picks, final_lambda=final.value,
                           k=k, eps=eps)


def _lambda_dense(L: np.ndarray, free: np.ndarray) -> float:
    """Smallest eigenvalue of the principal submatrix of L on ``free``."""
    return float(np.linalg.eigvalsh(L[np.ix_(free, free)])[0])


def _dense_laplacian(g: Graph) -> np.ndarray:
    L = -g.adjacency.toarray()
    np.fill_diagonal(L, g.degrees.astype(np.float64))
    return L


def naive_greedy(g: Graph, k: int, eps: float = 1e-3,
                 solver: str = "inverse_power") -> SelectionResult:
    """Greedy selection by exact per-candidate eigenvalue gaps.

    Each iteration evaluates the true eigenvalue after grounding each
    candidate and keeps the largest gain (smallest id on ties). Candidate
    eigenvalues go through the dense path whenever n <= 2000 (exact, and
    faster at that scale); otherwise through the iterative solver at a
    tightened tolerance eps/10 so near-ties do not flip the argmax. The final
    eigenvalue is recomputed at tolerance eps like every other method.
    """
    _validate_k(g, k)
    solve_pair = _eigensolver(solver)
    use_dense = g.n <= DENSE_EVAL_MAX_N
    L = _dense_laplacian(g) if use_dense else None
    mask = np.zeros(g.n, dtype=bool)
    chosen: list[int] = []
    picks: list[Pick] = []
    for _ in range(k):
        t0 = time.perf_counter()
        best_lam = -np.inf
        best_node = -1
        for j in range(g.n):
            if mask[j]:
                continue
            if use_dense:
                mask[j] = True
                lam_j = _lambda_dense(L, np.nonzero(~mask)[0])
                mask[j] = False
            else:
                op = GroundedOperator(g, NodeSet.of(chosen + [j]))
                lam_j = solve_pair(op, eps / 10.0).value
            if lam_j > best_lam:
                best_lam = lam_j
                best_node = j
        chosen.append(best_node)
        mask[best_node] = True
        picks.append(Pick(node=best_node, lam=best_lam,
                          ms=(time.perf_counter() - t0) * 1e3))
    final = solve_pair(GroundedOperator(g, NodeSet.of(chosen)), eps)
    return SelectionResult(method="naive", picks=picks, final_lambda=final.value,
                           k=k, eps=eps)


def brute_force_optimum(g: Graph, k: int) -> SelectionResult:
    """Exact optimum by exhausting all k-subsets with the dense eigensolver.

    Guarded to C(n, k) <= 10^7 cases. Among eigenvalues tied within 1e-12 the
    lexicographically smallest subset wins (subsets are enumerated in lex
    order and only strict improvements replace the incumbent).
    """
    _validate_k(g, k)
    cases = math.comb(g.n, k)
    if cases > BRUTE_FORCE_MAX_CASES:
        raise GuardError(
            f"brute force over C({g.n}, {k}) = {cases} subsets exceeds the "
            f"{BRUTE_FORCE_MAX_CASES} cap"
        )
    t0 = time.perf_counter()
    L = _dense_laplacian(g)
    mask = np.ones(g.n, dtype=bool)
    best_lam = -np.inf
    best: tuple[int, ...] | None = None
    for subset in combinations(range(g.n), k):
        mask[list(subset)] = False
        lam = _lambda_dense(L, np.nonzero(mask)[0])
        mask[list(subset)] = True
        if lam > best_lam + 1e-12:
            best_lam = lam
            best = subset
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    # per-prefix eigenvalues for the picks record (cheap next to the search)
    picks = []
    for i in range(1, k + 1):
        mask[list(best[:i])] = False
        lam_prefix = _lambda_dense(L, np.nonzero(mask)[0])
        mask[list(best[:i])] = True
        picks.append(Pick(node=best[i - 1], lam=lam_prefix, ms=elapsed_ms / k))
    return SelectionResult(method="optimum", picks=picks, final_lambda=best_lam,
                           k=k, eps=0.0)


def _power_iteration_scores(g: Graph, tol: float = 1e-8,
                            max_iters: int = 100000) -> np.ndarray:
    """Leading eigenvector of the adjacency matrix by power iteration.

    Iterates with a +1 shift (A + I has the same leading eigenvector) so the
    method also converges on bipartite graphs, whose +/- eigenvalue symmetry
    makes the unshifted iteration oscillate.
    """
    v = np.full(g.n, 1.0 / math.sqrt(g.n))
    for _ in range(max_iters):
        w = g.adjacency @ v + v
        w /= np.linalg.norm(w)
        if np.linalg.norm(w - v) <= tol:
            return w
        v = w
    return v


def _centrality_scores(g: Graph, method: str) -> np.ndarray:
    if method == "degree":
        return g.degrees.astype(np.float64)
    if method == "eigenvector":
        return _power_iteration_scores(g)
    nxg = nx.from_scipy_sparse_array(g.adjacency)
    if method == "betweenness":
        scores = nx.betweenness_centrality(nxg, normalized=True)
    elif method == "closeness":
        scores = nx.closeness_centrality(nxg, wf_improved=False)
    else:
        raise ValueError(f"unknown baseline method {method!r}")
    return np.array([scores[i] for i in range(g.n)])


def baseline_select(g: Graph, k: int, method: str, eps: float = 1e-3,
                    solver: str = "inverse_power") -> SelectionResult:
    """Top-k nodes of a static centrality ranking, ties by smallest id.

    Methods: degree, eigenvector (power iteration on the adjacency matrix to
    relative tolerance 1e-8), betweenness (exact Brandes accumulation),
    closeness ((n-1) / sum of BFS distances). The eigenvalue after each
    prefix, including the final one, is recomputed with the eigensolver.
    """
    _validate_k(g, k)
    if method not in BASELINE_METHODS:
        raise ValueError(f"unknown baseline method {method!r}")
    solve_pair = _eigensolver(solver)
    t0 = time.perf_counter()
    scores = _centrality_scores(g, method)
    ranking = np.lexsort((np.arange(g.n), -scores))[:k]
    rank_ms = (time.perf_counter() - t0) * 1e3
    picks: list[Pick] = []
    final = None
    for i in range(1, k + 1):
        t1 = time.perf_counter()
        final = solve_pair(GroundedOperator(g, NodeSet.of(ranking[:i])), eps)
        ms = (time.perf_counter() - t1) * 1e3 + (rank_ms if i == 1 else 0.0)
        picks.append(Pick(node=int(ranking[i - 1]), lam=final.value, ms=ms))
    return SelectionResult(method=method, picks=picks, final_lambda=final.value,
                           k=k, eps=eps)


def exact_gap(g: Graph, s: NodeSet, j: int, eps: float = 1e-3) -> float:
    """Eigenvalue gain from grounding ``j`` on top of ``s``.

    Dense eigendecompositions when n <= 2000, the iterative solver otherwise.
    The empty-set eigenvalue is 0 by convention. Nonnegative up to float
    noise (interlacing).
    """
    g.check_nodes([j])
    if j in s:
        raise ValueError(f"candidate {j} is already grounded")
    if g.n <= DENSE_EVAL_MAX_N:
        L = _dense_laplacian(g)
        mask = np.ones(g.n, dtype=bool)
        mask[list(s)] = False
        lam_s = 0.0 if len(s) == 0 else _lambda_dense(L, np.nonzero(mask)[0])
        mask[j] = False
        lam_sj = _lambda_dense(L, np.nonzero(mask)[0])
        return lam_sj - lam_s
    lam_s = 0.0
    if len(s) > 0:
        lam_s = smallest_eigenpair(GroundedOperator(g, s), eps).value
    lam_sj = smallest_eigenpair(GroundedOperator(g, s.added(j)), eps).value
    return lam_sj - lam_s
