"""Two-qubit entanglement of formation and the discord--EOF equality.

The closed form (Wootters) gives EOF through the concurrence; an
independent route minimizes the average marginal entropy over pure-state
decompositions parameterized by a unitary mixing of the eigendecomposition.
For an n_A x 2 state of rank at most 2, purifying with a qubit ancilla
makes the BC marginal two-qubit, and the Neumark-extended discord of AB
equals EOF(BC) + S(A) - S(AB); ``koashi_winter_residual`` measures how far
the two independently computed sides are apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discord import _ensemble_term, discord_P, discord_PE
from .entropy import von_neumann
from .optimize import OptimizationOutcome, OptimizerConfig, minimize_vector, unitary_from_vector
from .qmat import (
    RANK_TOL,
    BipartiteState,
    DensityMatrix,
    PureState,
    eigh,
    partial_trace,
)

_SIGMA_YY = np.kron(
    np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])
)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with endpoints mapped to 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1 - x) * np.log2(1 - x))


@dataclass(frozen=True)
class EntanglementResult:
    """Concurrence (two-qubit systems only) and EOF in bits."""

    concurrence: float | None
    eof: float
    method: str
    outcome: OptimizationOutcome | None = None


def concurrence_2q(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit state.

    The l_i are the decreasing square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy).
    """
    if rho.dim != 4:
        raise ValueError(f"concurrence needs a 4-dimensional state, got dim {rho.dim}")
    r = rho.matrix @ _SIGMA_YY @ rho.matrix.conj() @ _SIGMA_YY
    evals = np.linalg.eigvals(r).real
    lam = np.sqrt(np.sort(np.abs(evals))[::-1])
    return float(max(0.0, min(1.0, lam[0] - lam[1] - lam[2] - lam[3])))


def eof_2q(rho: DensityMatrix) -> EntanglementResult:
    """Two-qubit entanglement of formation h((1 + sqrt(1 - C^2))/2)."""
    c = concurrence_2q(rho)
    eof = binary_entropy((1 + np.sqrt(max(0.0, 1 - c * c))) / 2)
    return EntanglementResult(concurrence=c, eof=eof, method="wootters")


def eof_via_decomposition(
    rho: DensityMatrix,
    n_left: int,
    n_right: int,
    K: int = 4,
    cfg: OptimizerConfig | None = None,
) -> EntanglementResult:
    """EOF as a minimum over K-element pure-state decompositions.

    Decomposition vectors are phi_l = sum_i U_{li} sqrt(p_i) psi_i for
    U in U(K), with (p_i, psi_i) from the eigendecomposition (eigenvalues
    beyond the rank padded with zero).  The cost is the weighted entropy of
    the left marginals; the minimum over U is the EOF.  Independent of the
    discord machinery.
    """
    cfg = cfg or OptimizerConfig()
    if n_left * n_right != rho.dim:
        raise ValueError(f"{n_left} x {n_right} does not factor dim {rho.dim}")
    if K < rho.rank:
        raise ValueError(f"need at least rank = {rho.rank} decomposition elements, got {K}")
    evals, evecs = eigh(rho.matrix)
    keep = np.where(evals > RANK_TOL)[0][::-1]
    scaled = np.zeros((rho.dim, K), dtype=np.complex128)
    scaled[:, : len(keep)] = evecs[:, keep] * np.sqrt(evals[keep])

    def objective(x):
        u = unitary_from_vector(x, K)
        phi = scaled @ u.T  # column l = unnormalized decomposition vector l
        mats = phi.T.reshape(K, n_left, n_right)
        reds = mats @ mats.conj().transpose(0, 2, 1)  # left marginals, unnormalized
        return _ensemble_term(reds)

    out = minimize_vector(objective, K * K, cfg)
    conc = concurrence_2q(rho) if (n_left, n_right) == (2, 2) else None
    return EntanglementResult(
        concurrence=conc, eof=out.best_value, method="decomposition", outcome=out
    )


def purify_with_qubit_ancilla(rho: DensityMatrix) -> PureState:
    """Purification whose ancilla is a qubit (rank must be at most 2)."""
    if rho.rank > 2:
        raise ValueError(f"state rank {rho.rank} > 2; ancilla would exceed a qubit")
    evals, evecs = eigh(rho.matrix)
    keep = np.where(evals > RANK_TOL)[0][::-1]
    amps = np.zeros((rho.dim, 2), dtype=np.complex128)
    for anc, idx in enumerate(keep):
        amps[:, anc] = np.sqrt(evals[idx]) * evecs[:, idx]
    flat = amps.ravel()
    return PureState(dim_pair=(rho.dim, 2), amplitudes=flat / np.linalg.norm(flat))


def koashi_winter_residual(
    rho: BipartiteState,
    N: int | None = None,
    cfg: OptimizerConfig | None = None,
    via: str = "PE",
) -> float:
    """|discord(AB) - [EOF(BC) + S(A) - S(AB)]| through a qubit purification.

    Requires n_B = 2 and rank(rho_AB) <= 2 so that BC is two-qubit and the
    right-hand side comes from the closed-form EOF.  ``via`` selects the
    discord on the left: "PE" (extension dim N) or "P" (projective, which
    agrees whenever the optimal decomposition fits in n_A elements, e.g.
    for two-qubit states of rank <= 2).
    """
    if rho.n_B != 2:
        raise ValueError(f"n_B must be 2, got {rho.n_B}")
    psi = purify_with_qubit_ancilla(rho.state)  # raises for rank > 2
    # psi lives on (A)(BC) after regrouping the A-major index (a, b, c)
    regrouped = PureState(dim_pair=(rho.n_A, 2 * rho.n_B), amplitudes=psi.amplitudes)
    rho_bc = partial_trace(regrouped, "B")
    rhs = (
        eof_2q(rho_bc).eof
        + von_neumann(partial_trace(rho, "A"))
        - von_neumann(rho.state)
    )
    if via == "PE":
        lhs = discord_PE(rho, N, cfg).value
    elif via == "P":
        lhs = discord_P(rho, cfg).value
    else:
        raise ValueError(f"via must be 'PE' or 'P', got {via!r}")
    return abs(lhs - rhs)
