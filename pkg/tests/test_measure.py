import numpy as np
import pytest

from discordium.discord import ensemble_loss
from discordium.measure import (
    KrausSet,
    NeumarkBasis,
    ProjectiveBasis,
    RankOnePOVM,
    apply_one_sided,
    branch_ensemble,
    embed_projective,
    from_neumark,
    neumark_kraus,
    projective_kraus,
    randomizing_measurement,
    rank_one_kraus,
    rank_one_refine,
    random_kraus,
    random_neumark,
    random_projective,
    random_unitary,
    two_sided_apply,
)
from discordium.qmat import (
    bell_state,
    classical_state,
    ginibre_density,
    ginibre_state,
    partial_trace,
    product_state,
    tensor_product,
    werner,
)

PAULIS = [
    np.eye(2),
    np.array([[0, 1], [1, 0]]),
    np.array([[0, -1j], [1j, 0]]),
    np.diag([1, -1]),
]


def comp_basis(n):
    return ProjectiveBasis(n, np.eye(n))


def trine_neumark():
    # real rotation sending the standard basis to the symmetric trine:
    # restricted columns sqrt(2/3) (cos(2pi k/3), sin(2pi k/3)), third row 1/sqrt(3)
    u = np.zeros((3, 3))
    for k in range(3):
        angle = 2 * np.pi * k / 3
        u[0, k] = np.sqrt(2 / 3) * np.cos(angle)
        u[1, k] = np.sqrt(2 / 3) * np.sin(angle)
        u[2, k] = 1 / np.sqrt(3)
    return NeumarkBasis(2, 3, u)


class TestApplyOneSided:
    def test_identity_measurement(self):
        rho = ginibre_state(2, 3, 4, seed=1)
        out = apply_one_sided(rho, KrausSet(2, (np.eye(2),)))
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_classical_state_fixed(self):
        rho = classical_state([0.5, 0.5], [np.diag([1.0, 0]), np.diag([0.0, 1])])
        out = apply_one_sided(rho, projective_kraus(comp_basis(2)))
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_randomizing_erases_A(self):
        for seed in range(5):
            rho = ginibre_state(2, 3, 6, seed=seed)
            out = apply_one_sided(rho, randomizing_measurement(2))
            expected = tensor_product(np.eye(2) / 2, partial_trace(rho, "B").matrix)
            np.testing.assert_allclose(out.matrix, expected, atol=1e-10)

    def test_trace_preserved(self):
        rho = ginibre_state(3, 2, 4, seed=3)
        m = random_kraus(3, 3, np.random.default_rng(4))
        out = apply_one_sided(rho, m)
        assert abs(np.trace(out.matrix) - 1) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_one_sided(ginibre_state(3, 2, 2, seed=0), KrausSet(2, (np.eye(2),)))


class TestBranchEnsemble:
    def test_bell_computational(self):
        ens = branch_ensemble(bell_state(), projective_kraus(comp_basis(2)))
        assert len(ens.branches) == 2
        for p, dm in ens.branches:
            assert abs(p - 0.5) < 1e-12
            assert dm.rank == 1  # conditional states pure

    def test_product_branches(self):
        rng = np.random.default_rng(5)
        sigma = ginibre_density(2, 2, rng)
        rho = product_state(ginibre_density(2, 2, rng), sigma)
        ens = branch_ensemble(rho, projective_kraus(random_projective(2, rng)))
        for _, dm in ens.branches:
            np.testing.assert_allclose(dm.matrix, sigma.matrix, atol=1e-10)

    def test_isotropic_branches(self):
        ens = branch_ensemble(werner(0.0), projective_kraus(random_projective(2, np.random.default_rng(6))))
        for _, dm in ens.branches:
            np.testing.assert_allclose(dm.matrix, np.eye(2) / 2, atol=1e-10)


class TestNeumark:
    def test_identity_extension_is_projective(self):
        povm = from_neumark(NeumarkBasis(2, 2, np.eye(2)))
        assert povm.n_outcomes == 2
        np.testing.assert_allclose(povm.vectors, np.eye(2), atol=1e-15)

    def test_trine(self):
        povm = from_neumark(trine_neumark())
        assert povm.n_outcomes == 3
        np.testing.assert_allclose(povm.weights, [2 / 3] * 3, atol=1e-12)
        total = np.einsum("ga,gb->ab", povm.vectors, povm.vectors.conj())
        assert np.abs(total - np.eye(2)).max() <= 1e-12

    def test_random_extensions(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            povm = from_neumark(random_neumark(2, 4, rng))
            assert povm.n_outcomes <= 4
            total = np.einsum("ga,gb->ab", povm.vectors, povm.vectors.conj())
            assert np.abs(total - np.eye(2)).max() <= 1e-10

    def test_projective_embedding_roundtrip(self):
        pb = random_projective(3, np.random.default_rng(8))
        povm = from_neumark(embed_projective(pb))
        np.testing.assert_allclose(povm.vectors.T, pb.basis, atol=1e-15)

    def test_neumark_kraus_is_complete_and_rectangular(self):
        nb = random_neumark(2, 4, np.random.default_rng(9))
        m = neumark_kraus(nb)
        assert m.dim == 2 and m.out_dim == 4


class TestRefinement:
    def test_projective_unchanged(self):
        povm = rank_one_refine(projective_kraus(comp_basis(2)))
        mats = sorted(
            [np.outer(v, v.conj()) for v in povm.vectors], key=lambda m: -abs(m[0, 0])
        )
        np.testing.assert_allclose(mats[0], np.diag([1.0, 0]), atol=1e-12)
        np.testing.assert_allclose(mats[1], np.diag([0.0, 1]), atol=1e-12)

    def test_identity_splits_to_computational(self):
        povm = rank_one_refine(KrausSet(2, (np.eye(2),)))
        np.testing.assert_allclose(np.abs(povm.vectors), np.eye(2), atol=1e-12)

    def test_loss_never_increases(self):
        rng = np.random.default_rng(10)
        for k in range(100):
            rho = ginibre_state(2, 2, int(rng.integers(1, 5)), seed=k)
            m = random_kraus(2, 2, rng)
            refined = rank_one_kraus(rank_one_refine(m))
            assert ensemble_loss(rho, refined) <= ensemble_loss(rho, m) + 1e-9

    def test_deterministic(self):
        m = random_kraus(3, 2, np.random.default_rng(11))
        a = rank_one_refine(m)
        b = rank_one_refine(m)
        assert np.array_equal(a.vectors, b.vectors)


class TestRandomizing:
    def test_qubit_paulis(self):
        ops = randomizing_measurement(2).operators
        assert len(ops) == 4
        for op in ops:
            matches = 0
            for pauli in PAULIS:
                # equal up to global phase after the 1/2 scaling
                overlap = abs(np.trace(pauli.conj().T @ (2 * op))) / 2
                matches += abs(overlap - 1) < 1e-12
            assert matches == 1

    def test_bell_output(self):
        out = apply_one_sided(bell_state(), randomizing_measurement(2))
        np.testing.assert_allclose(out.matrix, np.eye(4) / 4, atol=1e-12)

    def test_qutrit_marginal(self):
        for seed in range(50):
            rho = ginibre_state(3, 2, int(np.random.default_rng(seed).integers(1, 7)), seed=seed)
            out = apply_one_sided(rho, randomizing_measurement(3))
            np.testing.assert_allclose(
                partial_trace(out, "A").matrix, np.eye(3) / 3, atol=1e-10
            )


class TestTwoSided:
    def test_classical_classical_fixed(self):
        rho = classical_state([0.5, 0.5], [np.diag([1.0, 0]), np.diag([0.0, 1])])
        ident = NeumarkBasis(2, 2, np.eye(2))
        out = two_sided_apply(rho, ident, ident)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_bell_dephasing(self):
        ident = NeumarkBasis(2, 2, np.eye(2))
        out = two_sided_apply(bell_state(), ident, ident)
        np.testing.assert_allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-12)

    def test_product_stays_product(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            a, b = ginibre_density(2, 2, rng), ginibre_density(2, 2, rng)
            rho = product_state(a, b)
            nb_a = random_neumark(2, int(rng.integers(2, 5)), rng)
            nb_b = random_neumark(2, int(rng.integers(2, 5)), rng)
            out = two_sided_apply(rho, nb_a, nb_b)
            rebuilt = tensor_product(
                partial_trace(out, "A").matrix, partial_trace(out, "B").matrix
            )
            np.testing.assert_allclose(out.matrix, rebuilt, atol=1e-10)


class TestMeasurementIdentities:
    def test_b_marginal_invariance_all_classes(self):
        rng = np.random.default_rng(13)
        from discordium.verify import _random_measurement

        for k in range(60):
            rho = ginibre_state(2, 3, int(rng.integers(1, 7)), seed=k)
            m = _random_measurement(rho, rng)
            before = partial_trace(rho, "B").matrix
            after = partial_trace(apply_one_sided(rho, m), "B").matrix
            assert np.abs(after - before).max() <= 1e-10

    def test_branch_marginal_identities(self):
        # tr_B of an unnormalized branch equals A rho_A A^dag, and the two
        # branch traces agree
        rng = np.random.default_rng(14)
        rho = ginibre_state(2, 2, 4, seed=15)
        rho_a = partial_trace(rho, "A").matrix
        blocks = rho.matrix.reshape(2, 2, 2, 2)
        m = random_kraus(2, 3, rng)
        post_a = np.zeros((2, 2), dtype=complex)
        for a in m.operators:
            branch_ab = np.einsum("xa,aibj,yb->xiyj", a, blocks, a.conj())
            branch_a = np.trace(branch_ab, axis1=1, axis2=3)
            np.testing.assert_allclose(branch_a, a @ rho_a @ a.conj().T, atol=1e-12)
            branch_b = np.trace(branch_ab, axis1=0, axis2=2)
            assert abs(np.trace(branch_a) - np.trace(branch_b)) < 1e-12
            post_a += branch_a
        np.testing.assert_allclose(
            post_a,
            sum(a @ rho_a @ a.conj().T for a in m.operators),
            atol=1e-12,
        )


class TestValidation:
    def test_incomplete_kraus_rejected(self):
        with pytest.raises(ValueError, match="complete"):
            KrausSet(2, (np.eye(2) / 2,))

    def test_non_unitary_basis_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            ProjectiveBasis(2, np.ones((2, 2)))

    def test_povm_completeness_rejected(self):
        with pytest.raises(ValueError, match="complete"):
            RankOnePOVM(2, np.array([[1.0, 0.0]]))

    def test_povm_zero_vector_rejected(self):
        vecs = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="zero-weight"):
            RankOnePOVM(2, vecs)

    def test_neumark_too_small(self):
        with pytest.raises(ValueError):
            NeumarkBasis(3, 2, np.eye(2))

    def test_random_unitary_is_unitary(self):
        rng = np.random.default_rng(16)
        for n in (2, 3, 4):
            u = random_unitary(n, rng)
            np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-12)
