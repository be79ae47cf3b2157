"""Grounded-Laplacian operator and smallest-eigenpair solvers.

Grounding a nonempty node set S of a connected graph removes the rows and
columns of S from the Laplacian L = D - A; the remaining principal submatrix
L(S) is symmetric, diagonally dominant, and positive definite, and its
smallest eigenvalue has a nonnegative eigenvector. Three routes to that
eigenpair live here:

* :func:`smallest_eigenpair` -- inverse power iteration on top of a
  Jacobi-preconditioned conjugate-gradient solver (the workhorse, near-linear
  in edges on sparse graphs in practice).
* :func:`smallest_eigenpair_lanczos` -- Lanczos tridiagonalization with full
  reorthogonalization, extracting the smallest Ritz pair.
* :func:`dense_oracle` -- full dense symmetric eigendecomposition, exact up
  to LAPACK accuracy, for verification at small scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, GuardError, NumericalError
from .graphs import Graph, NodeSet

__all__ = [
    "GroundedOperator",
    "EigenPair",
    "solve",
    "smallest_eigenpair",
    "smallest_eigenpair_lanczos",
    "dense_oracle",
]

DENSE_ORACLE_MAX_DIM = 2000
INVERSE_POWER_MAX_OUTER = 500
LANCZOS_MAX_STEPS = 5000
_SIGN_CLAMP = 1e-12


@dataclass(frozen=True)
class EigenPair:
    """Smallest eigenvalue and its unit eigenvector over the free nodes.

    The vector is sign-normalized so the nonnegative orientation wins and
    entries in [-1e-12, 0) are clamped to 0; ``residual`` is the 2-norm of
    ``L(S) u - value * u`` as computed by the producing routine.
    """

    value: float
    vector: np.ndarray
    residual: float


class GroundedOperator:
    """Implicit L(S): matrix-vector products over V\\S, no submatrix built.

    For a free-node vector x, ``apply(x)[i] = d_i x_i - sum of x_j over
    neighbors j of i outside S``. Products go through the full-graph CSR
    adjacency (scatter, multiply, gather), so each costs O(m).
    """

    def __init__(self, graph: Graph, grounded: NodeSet):
        if not graph.connected:
            raise ValueError("grounded operators require a connected graph")
        graph.check_nodes(grounded)
        k = len(grounded)
        if k == 0:
            raise ValueError("grounded set must be nonempty (L(S) is singular otherwise)")
        if k >= graph.n:
            raise ValueError("cannot ground every node (empty matrix)")
        self.graph = graph
        self.grounded = grounded
        mask = np.ones(graph.n, dtype=bool)
        mask[list(grounded)] = False
        self.free_mask = mask
        self.free = np.nonzero(mask)[0]
        self.dim = self.free.size
        self.free_index = np.full(graph.n, -1, dtype=np.int64)
        self.free_index[self.free] = np.arange(self.dim)
        self.deg_free = graph.degrees[self.free].astype(np.float64)
        self._adj = graph.adjacency
        self._scratch = np.zeros(graph.n)

    def apply(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got {x.shape}")
        full = self._scratch
        full[self.free] = x
        y = self.deg_free * x - (self._adj @ full)[self.free]
        full[self.free] = 0.0
        return y

    def rayleigh(self, x: np.ndarray) -> float:
        """x.L(S)x / x.x for a nonzero vector x."""
        return float(x @ self.apply(x)) / float(x @ x)

    def scatter(self, x: np.ndarray) -> np.ndarray:
        """Embed a free-node vector into a full n-vector, zeros on S."""
        full = np.zeros(self.graph.n)
        full[self.free] = x
        return full

    def to_dense(self) -> np.ndarray:
        """Materialize L(S) densely (for oracles and small-scale work)."""
        sub = self._adj[self.free][:, self.free].toarray()
        dense = -sub
        np.fill_diagonal(dense, self.deg_free)
        return dense


def solve(op: GroundedOperator, b: np.ndarray, delta: float,
          x0: np.ndarray | None = None, max_iters: int | None = None) -> np.ndarray:
    """Solve L(S) x = b to relative residual ``delta``.

    Conjugate gradients with a Jacobi (diagonal) preconditioner; positive
    definiteness of L(S) makes this unconditionally applicable. Termination:
    ``||L(S)x - b||_2 <= delta * ||b||_2``.

    Args:
        op: positive-definite grounded operator.
        b: right-hand side over the free nodes.
        delta: relative residual tolerance in (0, 1).
        x0: optional initial guess (a good one saves most of the work when
            solving a sequence of nearby systems).
        max_iters: matrix-vector product cap, default ``10 * op.dim``.

    Raises:
        ConvergenceError: cap reached; carries the last residual norm.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if b.shape != (op.dim,):
        raise ValueError(f"expected rhs of length {op.dim}, got {b.shape}")
    norm_b = np.linalg.norm(b)
    if norm_b == 0.0:
        return np.zeros(op.dim)
    cap = 10 * op.dim if max_iters is None else max_iters
    inv_diag = 1.0 / op.deg_free
    x = np.zeros(op.dim) if x0 is None else x0.astype(np.float64, copy=True)
    r = b - op.apply(x)
    res = np.linalg.norm(r)
    target = delta * norm_b
    if res <= target:
        return x
    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    for _ in range(cap):
        ap = op.apply(p)
        alpha = rz / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        res = np.linalg.norm(r)
        if res <= target:
            if not np.isfinite(res):
                raise NumericalError("non-finite residual in linear solve")
            return x
        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise ConvergenceError(
        f"linear solve did not reach {delta:.1e} within {cap} iterations",
        residual=float(res),
    )


def _sign_normalize(v: np.ndarray) -> np.ndarray:
    """Orient v so its largest-magnitude entry is positive; clamp tiny negatives."""
    out = v.copy()
    if out[np.argmax(np.abs(out))] < 0:
        out = -out
    out[(out < 0.0) & (out >= -_SIGN_CLAMP)] = 0.0
    return out


def smallest_eigenpair(op: GroundedOperator, eps: float) -> EigenPair:
    """Smallest eigenpair of L(S) by inverse power iteration.

    Starting from the all-ones vector, repeatedly solves ``L(S) v_new = v``
    (same tolerance ``eps`` for the inner solver) and normalizes, stopping
    when the relative Rayleigh-quotient change drops to ``eps``::

        |v.L(S)v - v_new.L(S)v_new| / v_new.L(S)v_new <= eps

    Returns the Rayleigh quotient of the final iterate and the iterate
    itself, sign-normalized. The all-ones start overlaps the nonnegative
    eigenvector of every diagonal block, so the iteration finds the global
    smallest pair even when the free set is disconnected.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    v = np.full(op.dim, 1.0 / np.sqrt(op.dim))
    lv = op.apply(v)
    rq = float(v @ lv)
    for _ in range(INVERSE_POWER_MAX_OUTER):
        rq_prev = rq
        # the previous iterate scaled by 1/rq is an excellent warm start
        v_new = solve(op, v, eps, x0=v / rq if rq > 0 else None)
        norm = np.linalg.norm(v_new)
        if not np.isfinite(norm) or norm == 0.0:
            raise NumericalError("inverse power iterate degenerated")
        v = v_new / norm
        lv = op.apply(v)
        rq = float(v @ lv)
        if not np.isfinite(rq):
            raise NumericalError("non-finite Rayleigh quotient")
        if abs(rq_prev - rq) <= eps * rq:
            u = _sign_normalize(v)
            return EigenPair(value=rq, vector=u,
                             residual=float(np.linalg.norm(lv - rq * v)))
    raise ConvergenceError(
        f"inverse power iteration did not settle within "
        f"{INVERSE_POWER_MAX_OUTER} iterations"
    )


def smallest_eigenpair_lanczos(op: GroundedOperator, eps: float) -> EigenPair:
    """Smallest eigenpair of L(S) by Lanczos with full reorthogonalization.

    Builds the Krylov tridiagonalization of L(S) from the all-ones vector,
    reorthogonalizing each new basis vector against the whole basis, and
    tracks the smallest Ritz pair. Stops once the Ritz value's relative
    change is at most ``eps`` and the residual bound ``beta * |s_last|`` is
    at most ``eps`` times the Ritz value. Breakdown (zero beta before the
    space is exhausted) restarts the direction with a deterministic
    perturbation orthogonal to the current basis.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    from .rng import SplitMix64

    dim = op.dim
    max_steps = min(dim, LANCZOS_MAX_STEPS)
    # grow the stored basis geometrically; preallocating max_steps rows
    # would waste gigabytes on large graphs that converge in few steps
    basis = np.zeros((min(max_steps, 32), dim))
    alphas = np.zeros(max_steps)
    betas = np.zeros(max_steps)
    basis[0] = np.full(dim, 1.0 / np.sqrt(dim))
    prev_ritz = np.inf
    restarts = 0
    j = 0
    while True:
        w = op.apply(basis[j])
        alphas[j] = float(basis[j] @ w)
        # full reorthogonalization, applied twice for float safety
        for _ in range(2):
            w -= basis[: j + 1].T @ (basis[: j + 1] @ w)
        beta = float(np.linalg.norm(w))
        ritz, s = _smallest_ritz(alphas[: j + 1], betas[:j])
        converged = (
            abs(prev_ritz - ritz) <= eps * ritz
            and beta * abs(s[-1]) <= eps * ritz
        )
        exhausted = j + 1 >= dim
        if converged or exhausted:
            u = basis[: j + 1].T @ s
            u /= np.linalg.norm(u)
            lu = op.apply(u)
            rq = float(u @ lu)
            if not np.isfinite(rq):
                raise NumericalError("non-finite Ritz value in Lanczos")
            return EigenPair(value=rq, vector=_sign_normalize(u),
                             residual=float(np.linalg.norm(lu - rq * u)))
        prev_ritz = ritz
        if j + 1 >= max_steps:
            raise ConvergenceError(
                f"Lanczos did not converge within {max_steps} steps"
            )
        if j + 1 >= basis.shape[0]:
            grown = np.zeros((min(max_steps, 2 * basis.shape[0]), dim))
            grown[: basis.shape[0]] = basis
            basis = grown
        if beta <= 1e-12 * max(1.0, abs(alphas[j])):
            # Krylov breakdown: restart with a perturbed direction
            restarts += 1
            rng = SplitMix64(restarts)
            w = np.array([rng.random() - 0.5 for _ in range(dim)])
            for _ in range(2):
                w -= basis[: j + 1].T @ (basis[: j + 1] @ w)
            beta_r = float(np.linalg.norm(w))
            if beta_r <= 1e-12:
                raise NumericalError("Lanczos restart produced a null direction")
            betas[j] = 0.0
            basis[j + 1] = w / beta_r
        else:
            betas[j] = beta
            basis[j + 1] = w / beta
        j += 1


def _smallest_ritz(alphas: np.ndarray, betas: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenpair of the tridiagonal matrix with the given bands."""
    if alphas.size == 1:
        return float(alphas[0]), np.ones(1)
    vals, vecs = scipy.linalg.eigh_tridiagonal(
        alphas, betas, select="i", select_range=(0, 0)
    )
    return float(vals[0]), vecs[:, 0]


def dense_oracle(op: GroundedOperator) -> EigenPair:
    """Exact smallest eigenpair via dense symmetric eigendecomposition.

    Verification-grade path: materializes L(S) and runs a full LAPACK
    eigendecomposition. Guarded to free dimensions up to 2000.
    """
    if op.dim > DENSE_ORACLE_MAX_DIM:
        raise GuardError(
            f"dense oracle supports up to {DENSE_ORACLE_MAX_DIM} free nodes, "
            f"got {op.dim}"
        )
    dense = op.to_dense()
    vals, vecs = np.linalg.eigh(dense)
    u = _sign_normalize(vecs[:, 0])
    value = float(vals[0])
    residual = float(np.linalg.norm(dense @ u - value * u))
    return EigenPair(value=value, vector=u, residual=residual)
