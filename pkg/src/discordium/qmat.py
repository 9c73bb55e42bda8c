"""Complex-matrix core: density matrices, tensor products, partial traces,
purification, Schmidt decomposition and standard state generators.

Conventions used throughout the package:

* all matrices are dense ``numpy`` arrays of ``complex128``;
* bipartite indices are A-major: basis vector ``|a>_A (x) |b>_B`` sits at
  row/column ``a * n_B + b``;
* entropies elsewhere are base-2, so eigenvalue handling here keeps the
  same tolerances everywhere (``RANK_TOL`` for numerical rank).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Entrywise tolerance for Hermiticity / trace / reconstruction checks.
HERM_TOL = 1e-10
# Eigenvalues at or below this are treated as zero for rank and purification.
RANK_TOL = 1e-9
# Norm tolerance for pure-state amplitudes.
NORM_TOL = 1e-12


def _as_complex(m) -> np.ndarray:
    return np.asarray(m, dtype=np.complex128)


def _frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only copy so stored arrays are safe to share."""
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def dag(m: np.ndarray) -> np.ndarray:
    """Hermitian adjoint."""
    return m.conj().T


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, positive-semidefinite, unit-trace matrix.

    Validation happens on construction; violations raise ``ValueError``
    naming the invariant and the measured residual.  ``rank`` is the
    numerical rank at ``RANK_TOL``.
    """

    matrix: np.ndarray
    dim: int = field(init=False)
    rank: int = field(init=False)

    def __post_init__(self):
        m = _as_complex(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        herm = np.abs(m - dag(m)).max()
        if herm > HERM_TOL:
            raise ValueError(f"not Hermitian: max |M - M^dag| = {herm:.3e} > {HERM_TOL}")
        tr = abs(np.trace(m) - 1.0)
        if tr > HERM_TOL:
            raise ValueError(f"trace not 1: |tr M - 1| = {tr:.3e} > {HERM_TOL}")
        evals = np.linalg.eigvalsh((m + dag(m)) / 2)
        if evals[0] < -HERM_TOL:
            raise ValueError(
                f"not positive semidefinite: min eigenvalue = {evals[0]:.3e} < -{HERM_TOL}"
            )
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dim", m.shape[0])
        object.__setattr__(self, "rank", int(np.count_nonzero(evals > RANK_TOL)))


@dataclass(frozen=True)
class BipartiteState:
    """A density matrix together with a factorization dim = n_A * n_B.

    The subsystem ordering is fixed A-major: index ``a * n_B + b``.
    """

    n_A: int
    n_B: int
    state: DensityMatrix

    def __post_init__(self):
        if self.n_A < 2 or self.n_B < 2:
            raise ValueError(f"subsystem dims must be >= 2, got ({self.n_A}, {self.n_B})")
        if self.n_A * self.n_B != self.state.dim:
            raise ValueError(
                f"n_A * n_B = {self.n_A * self.n_B} does not match state dim {self.state.dim}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix


@dataclass(frozen=True)
class PureState:
    """A unit vector on a bipartite factorization ``dim_pair = (n_A, n_B)``."""

    dim_pair: tuple[int, int]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _as_complex(self.amplitudes).ravel()
        n_A, n_B = self.dim_pair
        if amps.size != n_A * n_B:
            raise ValueError(f"amplitude length {amps.size} != {n_A}*{n_B}")
        norm = abs(np.vdot(amps, amps).real - 1.0)
        if norm > NORM_TOL:
            raise ValueError(f"not normalized: |<psi|psi> - 1| = {norm:.3e} > {NORM_TOL}")
        object.__setattr__(self, "amplitudes", _frozen(amps))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Biorthogonal form sum_i sqrt(p_i) |left_i> (x) |right_i>.

    ``coefficients`` are the nonincreasing positive sqrt(p_i); ``m`` is the
    Schmidt rank at ``RANK_TOL`` (applied to p_i, not sqrt(p_i)).
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray   # (m, n_A) rows
    right_vectors: np.ndarray  # (m, n_B) rows
    m: int


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product in the package's A-major ordering."""
    return np.kron(_as_complex(a), _as_complex(b))


def partial_trace(rho: BipartiteState | PureState, keep: str) -> DensityMatrix:
    """Reduced density matrix of the kept subsystem ('A' or 'B').

    Accepts a ``BipartiteState`` or, for convenience, the ``PureState``
    returned by :func:`purify`.
    """
    if keep not in ("A", "B"):
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    if isinstance(rho, PureState):
        n_A, n_B = rho.dim_pair
        psi = rho.amplitudes.reshape(n_A, n_B)
        if keep == "A":
            red = psi @ dag(psi)
        else:
            red = psi.T @ psi.conj()
        return DensityMatrix(red)
    n_A, n_B = rho.n_A, rho.n_B
    blocks = rho.matrix.reshape(n_A, n_B, n_A, n_B)
    axes = (1, 3) if keep == "A" else (0, 2)
    return DensityMatrix(np.trace(blocks, axis1=axes[0], axis2=axes[1]))


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Symmetrizes ``(M + M^dag)/2`` first, so 1e-12-scale drift in the input
    cannot leak into downstream entropies.  Eigenvalues come back
    nondecreasing; the columns of the returned matrix are the eigenvectors.
    """
    m = _as_complex(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"eigh needs a square matrix, got shape {m.shape}")
    herm = np.abs(m - dag(m)).max()
    if herm > HERM_TOL:
        raise ValueError(f"not Hermitian: max |M - M^dag| = {herm:.3e} > {HERM_TOL}")
    return np.linalg.eigh((m + dag(m)) / 2)


def purify(rho: DensityMatrix) -> PureState:
    """A pure state on (dim, rank) whose A-marginal reproduces ``rho``.

    Built as sum_i sqrt(p_i) |e_i> (x) |i> from the eigendecomposition,
    with eigenvalues at or below ``RANK_TOL`` dropped and the remaining
    ones listed in decreasing order.
    """
    evals, evecs = eigh(rho.matrix)
    keep = np.where(evals > RANK_TOL)[0][::-1]  # decreasing order
    rank = len(keep)
    amps = np.zeros((rho.dim, rank), dtype=np.complex128)
    for anc, idx in enumerate(keep):
        amps[:, anc] = np.sqrt(evals[idx]) * evecs[:, idx]
    amps = amps.ravel()
    amps = amps / np.linalg.norm(amps)  # absorb the dropped tail
    return PureState(dim_pair=(rho.dim, rank), amplitudes=amps)


def schmidt(psi: PureState) -> SchmidtDecomposition:
    """Schmidt decomposition via SVD of the amplitude matrix."""
    n_A, n_B = psi.dim_pair
    u, s, vh = np.linalg.svd(psi.amplitudes.reshape(n_A, n_B), full_matrices=False)
    m = int(np.count_nonzero(s**2 > RANK_TOL))
    return SchmidtDecomposition(
        coefficients=s[:m].copy(),
        left_vectors=u[:, :m].T.copy(),
        right_vectors=vh[:m, :].copy(),
        m=m,
    )


def schmidt_reassemble(sd: SchmidtDecomposition) -> np.ndarray:
    """Rebuild the amplitude vector sum_i c_i |left_i> (x) |right_i>."""
    return np.einsum("i,ia,ib->ab", sd.coefficients, sd.left_vectors, sd.right_vectors).ravel()


# -- state generators ---------------------------------------------------------

def bell_state() -> BipartiteState:
    """(|00> + |11>)/sqrt(2) as a 2x2 bipartite state."""
    psi = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    return BipartiteState(2, 2, DensityMatrix(np.outer(psi, psi.conj())))


def werner(p: float) -> BipartiteState:
    """p |Psi-><Psi-| + (1-p) I/4, with |Psi-> the two-qubit singlet."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"werner parameter must be in [0, 1], got {p}")
    singlet = np.array([0, 1, -1, 0], dtype=np.complex128) / np.sqrt(2)
    m = p * np.outer(singlet, singlet.conj()) + (1 - p) * np.eye(4) / 4
    return BipartiteState(2, 2, DensityMatrix(m))


def classical_state(probs, branch_states, basis=None) -> BipartiteState:
    """sum_a p_a |a><a| (x) rho_a with |a> the columns of ``basis``.

    ``basis`` defaults to the computational basis; ``branch_states`` is one
    B-side density matrix (array or DensityMatrix) per probability.
    """
    probs = np.asarray(probs, dtype=float)
    if abs(probs.sum() - 1.0) > 1e-10:
        raise ValueError(f"probabilities must sum to 1, got {probs.sum()!r}")
    if np.any(probs < 0):
        raise ValueError("probabilities must be nonnegative")
    if len(branch_states) != len(probs):
        raise ValueError("need one branch state per probability")
    branches = [
        b.matrix if isinstance(b, DensityMatrix) else _as_complex(b) for b in branch_states
    ]
    n_A = len(probs)
    n_B = branches[0].shape[0]
    basis = np.eye(n_A, dtype=np.complex128) if basis is None else _as_complex(basis)
    m = np.zeros((n_A * n_B, n_A * n_B), dtype=np.complex128)
    for a, (p, rho_b) in enumerate(zip(probs, branches)):
        ket = basis[:, a]
        m += p * tensor_product(np.outer(ket, ket.conj()), rho_b)
    return BipartiteState(n_A, n_B, DensityMatrix(m))


def product_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> BipartiteState:
    """rho_A (x) rho_B."""
    return BipartiteState(
        rho_a.dim, rho_b.dim, DensityMatrix(tensor_product(rho_a.matrix, rho_b.matrix))
    )


def ginibre_state(n_A: int, n_B: int, rank: int, seed: int) -> BipartiteState:
    """Random state G G^dag / tr(G G^dag) with G an (n_A n_B) x rank complex
    Gaussian matrix; the rank parameter controls the numerical rank."""
    dim = n_A * n_B
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ dag(g)
    return BipartiteState(n_A, n_B, DensityMatrix(m / np.trace(m).real))


def ginibre_density(dim: int, rank: int, rng: np.random.Generator) -> DensityMatrix:
    """Ginibre-ensemble density matrix of a bare system (no factorization)."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ dag(g)
    return DensityMatrix(m / np.trace(m).real)


def make_state(kind: str, seed: int = 0, **params) -> BipartiteState:
    """Dispatch to the named generator; used by the CLI.

    Kinds: ``bell``, ``werner(p)``, ``classical(probs, branch_states,
    basis)``, ``product(rho, sigma)``, ``ginibre(n_A, n_B, rank)``.
    """
    if kind == "bell":
        return bell_state()
    if kind == "werner":
        return werner(params["p"])
    if kind == "classical":
        return classical_state(
            params["probs"], params["branch_states"], params.get("basis")
        )
    if kind == "product":
        return product_state(params["rho"], params["sigma"])
    if kind == "ginibre":
        return ginibre_state(params["n_A"], params["n_B"], params["rank"], seed)
    raise ValueError(f"unknown state kind {kind!r}")
