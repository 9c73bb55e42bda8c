"""Entropy functionals in base-2 logarithms (bits).

``Bits`` is a plain float.  Relative entropy returns ``math.inf`` when the
first argument's support leaks outside the second's; everything else is
finite.  The eigenvalue floor below which a population contributes nothing
to a logarithm is 1e-15, well under any test tolerance.
"""

from __future__ import annotations

import math

import numpy as np

from .qmat import RANK_TOL, BipartiteState, DensityMatrix, dag, eigh, partial_trace

Bits = float

_LOG_FLOOR = 1e-15


def _xlog2x(lam: np.ndarray) -> np.ndarray:
    """Elementwise lambda * log2(lambda) with the 0 log 0 = 0 convention."""
    lam = np.asarray(lam, dtype=float)
    out = np.zeros_like(lam)
    big = lam > _LOG_FLOOR
    out[big] = lam[big] * np.log2(lam[big])
    return out


def entropy_of_spectrum(lam: np.ndarray) -> Bits:
    """-sum lambda log2 lambda over a spectrum (clamped at -1e-12 -> 0)."""
    s = -float(_xlog2x(lam).sum())
    return 0.0 if -1e-12 < s < 0.0 else s


def von_neumann(rho: DensityMatrix) -> Bits:
    """von Neumann entropy -tr(rho log2 rho), in [0, log2 dim]."""
    return entropy_of_spectrum(np.linalg.eigvalsh((rho.matrix + dag(rho.matrix)) / 2))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> Bits:
    """tr(rho log2 rho) - tr(rho log2 sigma), evaluated in sigma's eigenbasis.

    Returns ``math.inf`` when rho has weight above ``RANK_TOL`` on a
    direction where sigma's eigenvalue is at or below ``RANK_TOL``.
    """
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    mu, w = eigh(sigma.matrix)
    weights = np.einsum("ij,jk,ki->i", dag(w), rho.matrix, w).real
    null = mu <= RANK_TOL
    if np.any(weights[null] > RANK_TOL):
        return math.inf
    tr_rho_log_sigma = float(np.sum(weights[~null] * np.log2(mu[~null])))
    tr_rho_log_rho = float(_xlog2x(np.linalg.eigvalsh(rho.matrix)).sum())
    return tr_rho_log_rho - tr_rho_log_sigma


def conditional_entropy(rho: BipartiteState) -> Bits:
    """S(rho_AB) - S(rho_A); negative exactly for the quantumly correlated."""
    return von_neumann(rho.state) - von_neumann(partial_trace(rho, "A"))


def mutual_information(rho: BipartiteState) -> Bits:
    """S(rho_A) + S(rho_B) - S(rho_AB)."""
    return (
        von_neumann(partial_trace(rho, "A"))
        + von_neumann(partial_trace(rho, "B"))
        - von_neumann(rho.state)
    )


def shannon(probs) -> Bits:
    """Shannon entropy of a probability vector, in bits."""
    return entropy_of_spectrum(np.asarray(probs, dtype=float))
