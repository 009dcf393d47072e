"""Edge-coordinate realizations and their squared H2 norms.

Two output models share one state equation over the spanning-tree edge
states ``x_T``::

    dx_T/dt = -L^T R W R^T x_T + D_T^T E^{-1} omega - L^T R v

* ``"full"`` measures every edge, ``z = R^T x_T``;
* ``"tree"`` measures the tree edges only, ``z = x_T``.

With process noise ``Omega = sigma_omega E^{1/2}`` and edge noise
``Gamma = sigma_v W^{1/2}`` the controllability Gramian is known in closed
form, ``X* = (sigma_omega^2 (R W R^T)^{-1} + sigma_v^2 L^T) / 2``. Every
closed form here has a Lyapunov-equation counterpart for cross-checking.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapExceeded, Disconnected, GraphError
from .graph import (degrees, edge_laplacian, enumerate_spanning_trees, find_spanning_tree,
                    fundamental_basis, graph_laplacian, is_connected, sample_spanning_trees)
from .numerics import inverse, lyapunov_residual, lyapunov_solve

MODELS = ("full", "tree")


@dataclass(frozen=True)
class NoiseModel:
    """Noise intensities.

    ``omega`` (per vertex) and ``gamma`` (per edge, graph edge order) are the
    diagonals of general standard-deviation matrices; when given they replace
    the structured scaling of that channel and restrict evaluation to the
    Lyapunov path.
    """

    sigma_omega: float = 1.0
    sigma_v: float = 1.0
    omega: Optional[tuple] = None
    gamma: Optional[tuple] = None

    def __post_init__(self):
        for name in ("sigma_omega", "sigma_v"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")
            object.__setattr__(self, name, value)
        for name in ("omega", "gamma"):
            diag = getattr(self, name)
            if diag is not None:
                diag = tuple(float(x) for x in np.ravel(diag))
                if not all(np.isfinite(x) and x >= 0 for x in diag):
                    raise ValueError(f"{name} entries must be finite and nonnegative")
                object.__setattr__(self, name, diag)

    @property
    def structured(self):
        return self.omega is None and self.gamma is None

    def process_std(self, g):
        """Diagonal of Omega, vertex order."""
        if self.omega is None:
            return self.sigma_omega * np.sqrt(g.epsilons)
        if len(self.omega) != g.n:
            raise ValueError(f"omega has {len(self.omega)} entries, graph has {g.n} vertices")
        return np.array(self.omega)

    def edge_std(self, g):
        """Diagonal of Gamma, graph edge order."""
        if self.gamma is None:
            return self.sigma_v * np.sqrt(g.weights)
        if len(self.gamma) != g.m:
            raise ValueError(f"gamma has {len(self.gamma)} entries, graph has {g.m} edges")
        return np.array(self.gamma)

    def scaled(self, s):
        return NoiseModel(s * self.sigma_omega, s * self.sigma_v)


DEFAULT_NOISE = NoiseModel()


def _require_structured(noise):
    if not noise.structured:
        raise ValueError("closed forms need structured noise; use h2_lyapunov for general covariances")


def _check_model(model):
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")


def _resolve_tree(g, t):
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    if t is None:
        return find_spanning_tree(g)
    if t.graph != g:
        raise GraphError("spanning tree belongs to a different graph")
    return t


@dataclass(frozen=True)
class EdgeRealization:
    A: np.ndarray
    B_process: np.ndarray
    B_edge: np.ndarray
    C: np.ndarray
    model: str
    graph: object
    tree: object

    def input_matrix(self, noise):
        """``[B_process Omega, B_edge Gamma]``; edge columns in basis order."""
        g = self.graph
        omega = noise.process_std(g)
        gamma = noise.edge_std(g)[list(self.tree.order)]
        return np.hstack([self.B_process * omega, self.B_edge * gamma])

    def noise_covariance(self, noise):
        B = self.input_matrix(noise)
        return B @ B.T


@dataclass(frozen=True)
class H2Report:
    total_sq: float
    weight_term: Optional[float]
    timescale_term: Optional[float]
    model: str
    method: str
    stderr: Optional[float] = None

    def as_dict(self):
        return {"model": self.model, "total_sq": self.total_sq,
                "weight_term": self.weight_term, "timescale_term": self.timescale_term,
                "method": self.method}


def _basis_weights(g, t):
    return g.weights[list(t.order)]


def realization(g, t=None, model="full"):
    _check_model(model)
    t = _resolve_tree(g, t)
    basis = fundamental_basis(g, t)
    R = basis.R
    L_T = edge_laplacian(g, t.tree_edges)
    W = np.diag(_basis_weights(g, t))
    A = -L_T @ R @ W @ R.T
    B_process = basis.D_T.T @ np.diag(1.0 / g.epsilons)
    B_edge = -L_T @ R
    C = R.T.copy() if model == "full" else np.eye(g.n - 1)
    return EdgeRealization(A, B_process, B_edge, C, model, g, t)


def _tree_sums(g, noise):
    """Explicit sums valid when the graph is itself a tree (both models coincide)."""
    w_term = 0.5 * noise.sigma_omega**2 * float(np.sum(1.0 / g.weights))
    e_term = 0.5 * noise.sigma_v**2 * float(np.sum(degrees(g) / g.epsilons))
    return w_term, e_term


def _matrix_terms(g, t, noise, model):
    basis = fundamental_basis(g, t)
    R = basis.R
    W = np.diag(_basis_weights(g, t))
    M_inv = inverse(R @ W @ R.T)
    L_T = edge_laplacian(g, t.tree_edges)
    if model == "tree":
        w_tr = np.trace(M_inv)
        e_tr = np.trace(L_T)
    else:
        w_tr = np.trace(R.T @ M_inv @ R)
        e_tr = np.trace(R.T @ L_T @ R)
    return 0.5 * noise.sigma_omega**2 * float(w_tr), 0.5 * noise.sigma_v**2 * float(e_tr)


def h2_closed_form(g, t=None, noise=DEFAULT_NOISE, model="full"):
    """Squared H2 norm from the closed-form Gramian, split into weight and time-scale terms."""
    _check_model(model)
    _require_structured(noise)
    t = _resolve_tree(g, t)
    if g.m == g.n - 1:
        w_term, e_term = _tree_sums(g, noise)
    else:
        w_term, e_term = _matrix_terms(g, t, noise, model)
    return H2Report(w_term + e_term, w_term, e_term, model, "closed_form")


def closed_form_gramian(g, t=None, noise=DEFAULT_NOISE):
    _require_structured(noise)
    t = _resolve_tree(g, t)
    basis = fundamental_basis(g, t)
    R = basis.R
    W = np.diag(_basis_weights(g, t))
    M_inv = inverse(R @ W @ R.T)
    L_T = edge_laplacian(g, t.tree_edges)
    X = 0.5 * (noise.sigma_omega**2 * M_inv + noise.sigma_v**2 * L_T)
    return 0.5 * (X + X.T)


def gramian_residual(g, t=None, noise=DEFAULT_NOISE):
    """Relative residual of the closed-form Gramian in the Lyapunov equation."""
    r = realization(g, t)
    X = closed_form_gramian(g, r.tree, noise)
    return lyapunov_residual(r.A, X, r.noise_covariance(noise))


def _output_trace(r, noise):
    X = lyapunov_solve(r.A, r.noise_covariance(noise))
    return float(np.trace(r.C @ X @ r.C.T))


def h2_lyapunov(g, t=None, noise=DEFAULT_NOISE, model="full"):
    """Squared H2 norm by solving the Lyapunov equation for the realization.

    Under structured noise each channel is solved separately so the
    weight/time-scale split is available; the total is their sum.
    """
    r = realization(g, t, model)
    if not noise.structured:
        return H2Report(_output_trace(r, noise), None, None, model, "lyapunov")
    w_term = _output_trace(r, NoiseModel(noise.sigma_omega, 0.0))
    e_term = _output_trace(r, NoiseModel(0.0, noise.sigma_v))
    return H2Report(w_term + e_term, w_term, e_term, model, "lyapunov")


def h2_relation_check(g, t=None, noise=DEFAULT_NOISE):
    """Corrections taking the tree-output terms to the full-output terms.

    Returns ``(sigma_omega^2/2 tr[T^T (R W R^T)^{-1} T], sigma_v^2/2 tr[T^T L^T T])``.
    """
    _require_structured(noise)
    t = _resolve_tree(g, t)
    basis = fundamental_basis(g, t)
    T = basis.T_T
    if T.shape[1] == 0:
        return 0.0, 0.0
    W = np.diag(_basis_weights(g, t))
    M_inv = inverse(basis.R @ W @ basis.R.T)
    L_T = edge_laplacian(g, t.tree_edges)
    w_corr = 0.5 * noise.sigma_omega**2 * float(np.trace(T.T @ M_inv @ T))
    e_corr = 0.5 * noise.sigma_v**2 * float(np.trace(T.T @ L_T @ T))
    return w_corr, e_corr


@dataclass(frozen=True)
class SimilarityReport:
    transformed: np.ndarray
    expected_block: np.ndarray
    block_error: float
    consensus_error: float

    @property
    def ok(self):
        return self.block_error <= 1e-8 and self.consensus_error <= 1e-8


def verify_similarity(g, t=None):
    """Check that the node-to-edge change of coordinates block-diagonalizes ``E^{-1} L_G``.

    The last coordinate is the consensus direction; its row and column must
    vanish. Errors are relative to the norm of ``E^{-1} L_G``.
    """
    t = _resolve_tree(g, t)
    basis = fundamental_basis(g, t)
    E_inv = np.diag(1.0 / g.epsilons)
    L_T = edge_laplacian(g, t.tree_edges)
    S = np.hstack([E_inv @ basis.D_T @ inverse(L_T), np.ones((g.n, 1))])
    scaled = E_inv @ graph_laplacian(g)
    F = inverse(S) @ scaled @ S
    W = np.diag(_basis_weights(g, t))
    expected = L_T @ basis.R @ W @ basis.R.T
    scale = max(np.linalg.norm(scaled), 1.0)
    k = g.n - 1
    block_error = float(np.max(np.abs(F[:k, :k] - expected)) / scale)
    consensus_error = float(max(np.max(np.abs(F[k, :])), np.max(np.abs(F[:, k]))) / scale)
    return SimilarityReport(F, expected, block_error, consensus_error)


def _max_rel_dev(values):
    values = np.asarray(values, dtype=float)
    scale = np.max(np.abs(values))
    if scale == 0:
        return 0.0
    return float((values.max() - values.min()) / scale)


def tree_invariance_check(g, noise=DEFAULT_NOISE, cap=200, sample=10, seed=0):
    """Largest relative spread of the full-output norm over spanning-tree choices.

    Uses every spanning tree when there are at most ``cap``; otherwise a
    random sample of at least ``sample`` distinct trees.
    """
    _require_structured(noise)
    try:
        trees = enumerate_spanning_trees(g, cap=cap)
    except CapExceeded:
        trees = sample_spanning_trees(g, sample, np.random.default_rng(seed))
    reports = [h2_closed_form(g, t, noise, "full") for t in trees]
    return max(_max_rel_dev([r.total_sq for r in reports]),
               _max_rel_dev([r.weight_term for r in reports]),
               _max_rel_dev([r.timescale_term for r in reports]))
