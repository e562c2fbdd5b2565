"""Discrete sampling systems on the weighted polynomial subspaces.

A node set with nonnegative weights tau defines the semi-inner product
<f, g>_n = sum_x tau(x) f(x) g(x).  Its Gram (frame) matrix on the basis
h_0..h_n controls everything: the extreme eigenvalues a_n <= b_n are the
sampling constants, and solving the Gram system against the coefficient
vector of W yields generalized quadrature weights

    omega(x) = tau(x) * (S_n^{-1} W)(x)

which reduce to the Christoffel weights for exact Gauss nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh

from ._accum import comp_sum
from .errors import (
    CapacityError,
    GapViolationError,
    NotAFrameError,
    UnboundedTailError,
)
from .gaussquad import QuadratureRule
from .kernels import sup_envelope_constant, tail_index
from .orthopoly import FreudBasis, basis_matrix, mrs_number
from .spaces import SpaceWeight, lambda_of

__all__ = [
    "MZSystem",
    "build_system",
    "generalized_weights",
    "perturb_nodes",
    "support_check",
    "phi_lambda",
]


@dataclass(frozen=True)
class MZSystem:
    """Frame data of a weighted node set on span{h_0..h_n}.

    ``gram[j, k] = sum_x tau(x) h_j(x) h_k(x)``; ``s_w`` solves
    gram @ s_w = (1/c0, 0, ..., 0), the coefficient vector of W.
    """

    n: int
    nodes: np.ndarray
    tau: np.ndarray
    gram: np.ndarray
    a_n: float
    b_n: float
    s_w: np.ndarray

    def __post_init__(self):
        for arr in (self.nodes, self.tau, self.gram, self.s_w):
            arr.setflags(write=False)


def build_system(basis: FreudBasis, n: int, nodes, tau) -> MZSystem:
    """Assemble the Gram matrix and sampling constants for given nodes/tau.

    Fails with ``NotAFrameError`` when the smallest eigenvalue is at the
    numerical-rank floor (the node set cannot control all of Pi_n), and
    reports the near-null coefficient direction.
    """
    nodes = np.asarray(nodes, dtype=float).copy()
    tau = np.asarray(tau, dtype=float).copy()
    if nodes.ndim != 1 or nodes.shape != tau.shape:
        raise ValueError("nodes and tau must be 1-D arrays of equal length")
    if nodes.size < 1:
        raise ValueError("need at least one node")
    if np.unique(nodes).size != nodes.size:
        raise ValueError("nodes must be distinct")
    if np.any(tau < 0):
        raise ValueError("tau weights must be nonnegative")

    H = basis_matrix(basis, nodes, n)
    G = (H * tau) @ H.T
    G = 0.5 * (G + G.T)
    evals, evecs = eigh(G)
    a_n, b_n = float(evals[0]), float(evals[-1])
    if a_n <= 1e-12 * b_n:
        raise NotAFrameError(
            f"system is numerically degenerate on the subspace: a={a_n:.3e}, "
            f"b={b_n:.3e}",
            null_vector=evecs[:, 0].copy(),
        )
    rhs = np.zeros(n + 1)
    rhs[0] = 1.0 / basis.c0
    try:
        s_w = cho_solve(cho_factor(G), rhs)
    except np.linalg.LinAlgError as exc:
        raise NotAFrameError(
            f"Gram solve failed at condition estimate {b_n / a_n:.3e}: {exc}",
            null_vector=evecs[:, 0].copy(),
        ) from exc
    return MZSystem(n, nodes, tau, G, a_n, b_n, s_w)


def generalized_weights(system: MZSystem, basis: FreudBasis) -> np.ndarray:
    """omega_j = tau_j * (S_n^{-1} W)(node_j).

    By construction the resulting rule reproduces the integrals of
    h_0..h_n against W exactly (up to the solve residual).
    """
    H = basis_matrix(basis, system.nodes, system.n)
    return system.tau * (H.T @ system.s_w)


def _signs(mode: str, count: int, seed: int) -> np.ndarray:
    if mode == "random":
        rng = np.random.default_rng(seed)
        return rng.choice(np.array([-1.0, 1.0]), size=count)
    if mode == "alternating":
        return np.where(np.arange(count) % 2 == 0, 1.0, -1.0)
    if mode == "positive":
        return np.ones(count)
    raise ValueError(f"unknown sign mode {mode!r}")


def perturb_nodes(
    rule: QuadratureRule,
    eps_mag: float,
    sign_mode: str = "random",
    seed: int = 7,
    allow_reorder: bool = False,
):
    """Displace every node by +-eps_mag; tau is carried over unchanged.

    Rejects magnitudes of half the minimal node gap or more, since
    opposite displacements of adjacent nodes could then reorder them.
    ``allow_reorder=True`` skips that guard (the discrete system only
    needs distinct nodes, not sorted ones) and is what the figure
    experiments use at magnitudes comparable to the node spacing;
    coincident perturbed nodes still raise.
    """
    if eps_mag < 0:
        raise ValueError("perturbation magnitude must be >= 0")
    sg = _signs(sign_mode, rule.nodes.size, seed)
    if rule.nodes.size > 1:
        min_gap = float(np.min(np.diff(rule.nodes)))
        if not allow_reorder and eps_mag >= 0.5 * min_gap:
            raise GapViolationError(
                f"eps={eps_mag} >= half the minimal node gap {min_gap:.6f}; "
                "opposite shifts of adjacent nodes could reorder them"
            )
    nodes = rule.nodes + sg * eps_mag
    if np.unique(nodes).size != nodes.size:
        raise GapViolationError("perturbation produced coincident nodes")
    return nodes, rule.tau.copy()


def support_check(nodes, alpha: float, n: int, L: float = 3.0) -> bool:
    """True iff max |node| <= m_{n,alpha} (1 + L n^{-2/3})."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if L <= 0:
        raise ValueError("L must be > 0")
    limit = mrs_number(alpha, n) * (1.0 + L * n ** (-2.0 / 3.0))
    return bool(np.max(np.abs(np.asarray(nodes, dtype=float))) <= limit)


def phi_lambda(
    basis: FreudBasis,
    space: SpaceWeight,
    system: MZSystem,
    tol: float = 1e-12,
    k_max: int | None = None,
) -> float:
    """Tail error functional sum_{k>n} lambda_k^{-1} * ||h_k||_n^2.

    ``||h_k||_n^2 = sum_x tau(x) h_k(x)^2`` is evaluated by a rolling
    recurrence over the nodes.  With ``k_max`` the sum is taken exactly
    over k in (n, k_max]; otherwise the truncation index comes from the
    envelope tail bound with the measured sum of tau as multiplier,
    falling back to an empirical stop (consecutive terms below
    tol * accumulated) when the envelope bound is impractically deep.
    """
    n = system.n
    start = n + 1
    sum_tau = comp_sum(system.tau)

    if k_max is None:
        sup = sup_envelope_constant(basis) * sum_tau
        # rough scale from a short scan, then the sound envelope bound
        probe_end = start + 256
        acc_probe = _phi_partial(basis, space, system, start, probe_end)
        target = tol * max(acc_probe, 1e-300)
        try:
            K = tail_index(space, start, target, basis.alpha, sup)
        except UnboundedTailError:
            K = None
        if K is not None and K <= 500_000:
            return _phi_partial(basis, space, system, start, K)
        return _phi_empirical(basis, space, system, start, tol)
    return _phi_partial(basis, space, system, start, k_max)


def _phi_partial(basis, space, system, start, k_end) -> float:
    if k_end < start:
        return 0.0
    if k_end > basis.n_max:
        raise CapacityError(
            f"tail functional needs index {k_end}, capacity {basis.n_max}",
            required=k_end,
        )
    x = system.nodes
    tau = system.tau
    a = basis.coeffs
    h_prev = np.zeros_like(x)
    h_cur = basis.c0 * np.exp(-math.pi * np.abs(x) ** basis.alpha)
    lam = np.asarray(lambda_of(space, np.arange(start, k_end + 1)), dtype=float)
    terms = np.empty(k_end + 1 - start)
    for k in range(k_end + 1):
        if k >= start:
            terms[k - start] = float(np.dot(tau * h_cur, h_cur)) / lam[k - start]
        if k < k_end:
            am = a[k - 1] if k >= 1 else 0.0
            h_prev, h_cur = h_cur, (x * h_cur - am * h_prev) / a[k]
    return comp_sum(terms)


def _phi_empirical(basis, space, system, start, tol, block=2048, hard_cap=2_000_000):
    """Sum in blocks until a whole block is below tol * accumulated."""
    x = system.nodes
    tau = system.tau
    a = basis.coeffs
    h_prev = np.zeros_like(x)
    h_cur = basis.c0 * np.exp(-math.pi * np.abs(x) ** basis.alpha)
    acc = []
    total = 0.0
    k = 0
    while k < hard_cap:
        block_terms = []
        for _ in range(block):
            if k >= start:
                norm_sq = float(np.dot(tau * h_cur, h_cur))
                block_terms.append(norm_sq / float(lambda_of(space, k)))
            if k + 1 > basis.n_max:
                raise CapacityError(
                    f"empirical tail scan needs index {k + 1}, capacity {basis.n_max}",
                    required=k + 1,
                )
            h_prev, h_cur = h_cur, (x * h_cur - (a[k - 1] if k >= 1 else 0.0) * h_prev) / a[k]
            k += 1
        acc.extend(block_terms)
        total = comp_sum(acc)
        if block_terms and k > start + block and max(block_terms) < tol * max(total, 1e-300):
            return total
    raise UnboundedTailError(
        f"tail terms did not fall below {tol:.1e} of the accumulated value "
        f"within {hard_cap} indices"
    )
