"""One-sided measurement classes and their action on bipartite states.

Four families appear here:

* general Kraus sets {A_a} with sum A_a^dag A_a = I (the completeness
  convention used everywhere in this package);
* projective bases (columns of a unitary);
* rank-1 POVMs given by unnormalized vectors |g> with sum |g><g| = I;
* Neumark bases: an orthonormal basis of an N >= n_A dimensional
  direct-sum extension whose columns, truncated to the first n_A entries,
  form a rank-1 POVM.

A Kraus operator may be rectangular (n_out x n_A): that is how a Neumark
basis acts on a state living in the original space while producing output
in the extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qmat import HERM_TOL, BipartiteState, DensityMatrix, dag, eigh

# Rank-1 vectors with squared norm at or below this are dropped: restricted
# Neumark columns supported only on the extension contribute nothing.
ZERO_OUTCOME_TOL = 1e-12

UNITARY_TOL = 1e-10


def _as_complex(m) -> np.ndarray:
    return np.asarray(m, dtype=np.complex128)


@dataclass(frozen=True)
class KrausSet:
    """A one-sided general measurement {A_a} on an n_A-dimensional system.

    ``dim`` is the input dimension n_A; operators are (n_out x n_A) with a
    common n_out >= n_A.  Completeness sum A^dag A = I_{n_A} is validated.
    """

    dim: int
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(_as_complex(a) for a in self.operators)
        if not ops:
            raise ValueError("KrausSet needs at least one operator")
        n_out = ops[0].shape[0]
        for a in ops:
            if a.ndim != 2 or a.shape != (n_out, self.dim):
                raise ValueError(
                    f"operators must share shape (n_out, {self.dim}), got {a.shape}"
                )
        total = sum(dag(a) @ a for a in ops)
        resid = np.abs(total - np.eye(self.dim)).max()
        if resid > HERM_TOL:
            raise ValueError(f"not complete: max |sum A^dag A - I| = {resid:.3e} > {HERM_TOL}")
        frozen = []
        for a in ops:
            a = a.copy()
            a.setflags(write=False)
            frozen.append(a)
        object.__setattr__(self, "operators", tuple(frozen))

    @property
    def out_dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True)
class ProjectiveBasis:
    """An orthonormal measurement basis: the columns of a unitary."""

    dim: int
    basis: np.ndarray

    def __post_init__(self):
        u = _as_complex(self.basis)
        if u.shape != (self.dim, self.dim):
            raise ValueError(f"basis must be {self.dim}x{self.dim}, got {u.shape}")
        resid = np.abs(dag(u) @ u - np.eye(self.dim)).max()
        if resid > UNITARY_TOL:
            raise ValueError(f"not unitary: max |U^dag U - I| = {resid:.3e} > {UNITARY_TOL}")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "basis", u)


@dataclass(frozen=True)
class RankOnePOVM:
    """Unnormalized vectors |g> with sum_g |g><g| = I_{n_A}.

    ``weights`` stores p_g = <g|g>; zero-weight vectors are rejected rather
    than silently kept.
    """

    dim: int
    vectors: np.ndarray  # (k, n_A), one vector per row
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        v = np.atleast_2d(_as_complex(self.vectors))
        if v.shape[1] != self.dim:
            raise ValueError(f"vectors must have length {self.dim}, got {v.shape[1]}")
        w = np.einsum("ga,ga->g", v.conj(), v).real
        if np.any(w <= ZERO_OUTCOME_TOL):
            raise ValueError("zero-weight vector present; drop it before construction")
        total = np.einsum("ga,gb->ab", v, v.conj())
        resid = np.abs(total - np.eye(self.dim)).max()
        if resid > HERM_TOL:
            raise ValueError(f"not complete: max |sum |g><g| - I| = {resid:.3e} > {HERM_TOL}")
        v = v.copy()
        v.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "weights", w)

    @property
    def n_outcomes(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class NeumarkBasis:
    """Orthonormal basis of an N-dimensional extension of an n_A system.

    Truncating each column to its first n_A entries yields a rank-1 POVM on
    the original space; that is the measurement this basis realizes.
    """

    n_A: int
    N: int
    extension_basis: np.ndarray

    def __post_init__(self):
        if self.N < self.n_A:
            raise ValueError(f"extension dim {self.N} < system dim {self.n_A}")
        u = _as_complex(self.extension_basis)
        if u.shape != (self.N, self.N):
            raise ValueError(f"extension basis must be {self.N}x{self.N}, got {u.shape}")
        resid = np.abs(dag(u) @ u - np.eye(self.N)).max()
        if resid > UNITARY_TOL:
            raise ValueError(f"not unitary: max |U^dag U - I| = {resid:.3e} > {UNITARY_TOL}")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "extension_basis", u)


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Measurement branches (p_a, conditional B state), p_a summing to 1."""

    branches: tuple[tuple[float, DensityMatrix], ...]

    def __post_init__(self):
        total = sum(p for p, _ in self.branches)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"branch probabilities sum to {total!r}, not 1")


# -- constructors between families --------------------------------------------

def projective_kraus(pb: ProjectiveBasis) -> KrausSet:
    """Kraus operators |a><a| for each basis column."""
    cols = [pb.basis[:, k] for k in range(pb.dim)]
    return KrausSet(pb.dim, tuple(np.outer(c, c.conj()) for c in cols))


def rank_one_kraus(povm: RankOnePOVM) -> KrausSet:
    """Kraus operators |g><g| / sqrt(p_g)."""
    ops = [
        np.outer(v, v.conj()) / np.sqrt(w)
        for v, w in zip(povm.vectors, povm.weights)
    ]
    return KrausSet(povm.dim, tuple(ops))


def neumark_kraus(nb: NeumarkBasis) -> KrausSet:
    """Rectangular Kraus operators |g_bar><g| mapping H_A into the extension.

    Outcomes whose restriction vanishes are dropped; they never fire on a
    state supported in H_A.
    """
    ops = []
    for k in range(nb.N):
        col = nb.extension_basis[:, k]
        restricted = col[: nb.n_A]
        if np.vdot(restricted, restricted).real <= ZERO_OUTCOME_TOL:
            continue
        ops.append(np.outer(col, restricted.conj()))
    return KrausSet(nb.n_A, tuple(ops))


def from_neumark(nb: NeumarkBasis) -> RankOnePOVM:
    """Restrict the extension basis columns to the first n_A entries.

    Zero restrictions are dropped; completeness of the rest follows from
    unitarity of the extension basis.
    """
    vecs = nb.extension_basis[: nb.n_A, :].T  # (N, n_A), one vector per row
    norms = np.einsum("ga,ga->g", vecs.conj(), vecs).real
    return RankOnePOVM(nb.n_A, vecs[norms > ZERO_OUTCOME_TOL])


def embed_projective(pb: ProjectiveBasis) -> NeumarkBasis:
    """View a projective basis as the trivial N = n_A Neumark extension."""
    return NeumarkBasis(pb.dim, pb.dim, pb.basis)


# -- measurement action -------------------------------------------------------

def apply_one_sided(rho: BipartiteState, m: KrausSet) -> BipartiteState:
    """sum_a (A_a (x) I_B) rho (A_a (x) I_B)^dag.

    Preserves the trace and the B marginal; the output A dimension is the
    operators' output dimension (larger than n_A for Neumark sets).
    """
    if m.dim != rho.n_A:
        raise ValueError(f"measurement dim {m.dim} != n_A {rho.n_A}")
    blocks = rho.matrix.reshape(rho.n_A, rho.n_B, rho.n_A, rho.n_B)
    ops = np.stack(m.operators)
    out = np.einsum("gxa,aibj,gyb->xiyj", ops, blocks, ops.conj(), optimize=True)
    n_out = m.out_dim
    dm = DensityMatrix(out.reshape(n_out * rho.n_B, n_out * rho.n_B))
    return BipartiteState(n_out, rho.n_B, dm)


def branch_ensemble(rho: BipartiteState, m: KrausSet) -> ConditionalEnsemble:
    """Outcome probabilities and normalized conditional B states.

    Branch a carries p_a = tr[(A_a^dag A_a (x) I_B) rho] and the state
    tr_A(A_a rho A_a^dag) / p_a; branches with p_a <= 1e-12 are dropped.
    """
    if m.dim != rho.n_A:
        raise ValueError(f"measurement dim {m.dim} != n_A {rho.n_A}")
    blocks = rho.matrix.reshape(rho.n_A, rho.n_B, rho.n_A, rho.n_B)
    branches = []
    for a in m.operators:
        e = dag(a) @ a
        # tr_A(A rho A^dag)[i,j] = sum_{ab} (A^dag A)[b,a] rho[(a,i),(b,j)]
        cond = np.einsum("ba,aibj->ij", e, blocks, optimize=True)
        p = np.trace(cond).real
        if p <= 1e-12:
            continue
        branches.append((float(p), DensityMatrix(cond / p)))
    return ConditionalEnsemble(tuple(branches))


def rank_one_refine(m: KrausSet) -> RankOnePOVM:
    """Split each effect A^dag A into its rank-1 eigenpieces.

    The emitted vectors are sqrt(lambda_j) v_j from the eigendecomposition
    of each A_a^dag A_a; their union is again complete.  Degenerate
    eigenbases are fixed by the eigensolver's ascending order plus a phase
    convention (lowest nonzero component made real positive) so refinement
    of the same set is reproducible.
    """
    vectors = []
    for a in m.operators:
        evals, evecs = eigh(dag(a) @ a)
        for j in range(len(evals)):
            lam = evals[j]
            if lam <= ZERO_OUTCOME_TOL:
                continue
            v = evecs[:, j]
            nz = np.flatnonzero(np.abs(v) > 1e-8)[0]
            v = v * (np.abs(v[nz]) / v[nz])
            vectors.append(np.sqrt(lam) * v)
    return RankOnePOVM(m.dim, np.array(vectors))


def randomizing_measurement(n_A: int) -> KrausSet:
    """The n_A^2 Weyl (clock-and-shift) unitaries scaled by 1/n_A.

    Applying this set erases the A side: any input goes to I/n_A (x) rho_B.
    For a qubit these are the four Paulis over 2 (up to phase).
    """
    if n_A < 2:
        raise ValueError(f"n_A must be >= 2, got {n_A}")
    omega = np.exp(2j * np.pi / n_A)
    shift = np.roll(np.eye(n_A, dtype=np.complex128), 1, axis=0)  # X|j> = |j+1>
    clock = np.diag(omega ** np.arange(n_A))                      # Z|j> = w^j |j>
    ops = []
    for a in range(n_A):
        xa = np.linalg.matrix_power(shift, a)
        for b in range(n_A):
            ops.append(xa @ np.linalg.matrix_power(clock, b) / n_A)
    return KrausSet(n_A, tuple(ops))


def two_sided_apply(
    rho: BipartiteState, nb_a: NeumarkBasis, nb_b: NeumarkBasis
) -> BipartiteState:
    """Product measurement: the A extension on side A, the B extension on B.

    Output lives on (N_A', N_B') where the primes count outcomes with
    nonvanishing restriction; product inputs stay product.
    """
    if nb_a.n_A != rho.n_A or nb_b.n_A != rho.n_B:
        raise ValueError(
            f"extension dims ({nb_a.n_A}, {nb_b.n_A}) != state dims ({rho.n_A}, {rho.n_B})"
        )
    ka = neumark_kraus(nb_a)
    kb = neumark_kraus(nb_b)
    blocks = rho.matrix.reshape(rho.n_A, rho.n_B, rho.n_A, rho.n_B)
    ops_a = np.stack(ka.operators)
    ops_b = np.stack(kb.operators)
    out = np.einsum(
        "gxa,hyi,aibj,gzb,hwj->xyzw", ops_a, ops_b, blocks, ops_a.conj(), ops_b.conj(),
        optimize=True,
    )
    na, nb = ka.out_dim, kb.out_dim
    dm = DensityMatrix(out.reshape(na * nb, na * nb))
    return BipartiteState(na, nb, dm)


# -- random sampling (for property batteries) ---------------------------------

def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_projective(n: int, rng: np.random.Generator) -> ProjectiveBasis:
    return ProjectiveBasis(n, random_unitary(n, rng))


def random_neumark(n_A: int, N: int, rng: np.random.Generator) -> NeumarkBasis:
    return NeumarkBasis(n_A, N, random_unitary(N, rng))


def random_kraus(n_A: int, n_outcomes: int, rng: np.random.Generator) -> KrausSet:
    """Random general measurement: a Haar isometry cut into n_A x n_A blocks."""
    g = rng.standard_normal((n_outcomes * n_A, n_A)) + 1j * rng.standard_normal(
        (n_outcomes * n_A, n_A)
    )
    q, _ = np.linalg.qr(g)  # isometry, q^dag q = I_{n_A}
    return KrausSet(n_A, tuple(q[k * n_A : (k + 1) * n_A, :] for k in range(n_outcomes)))
