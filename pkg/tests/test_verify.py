import numpy as np
import pytest

from discordium.discord import ensemble_loss
from discordium.measure import ProjectiveBasis, projective_kraus
from discordium.qmat import bell_state, ginibre_density, ginibre_state, product_state, werner
from discordium.verify import (
    BATTERY_NAMES,
    BATTERY_TOLERANCES,
    grid_discord_qubit,
    grid_discord_two_sided,
    random_classical,
    run_battery,
)


class TestGridOracle:
    def test_product_state_zero(self):
        rng = np.random.default_rng(0)
        rho = product_state(ginibre_density(2, 2, rng), ginibre_density(3, 3, rng))
        assert abs(grid_discord_qubit(rho, 30)) < 1e-9

    def test_bell_basis_independent(self):
        assert abs(grid_discord_qubit(bell_state(), 12) - 1.0) < 1e-9

    def test_refinement_monotone(self):
        # doubling the resolution yields a superset grid, so the minimum
        # cannot increase
        for seed in range(5):
            rho = ginibre_state(2, 2, int(seed % 4) + 1, seed=seed)
            coarse = grid_discord_qubit(rho, 24)
            fine = grid_discord_qubit(rho, 48)
            assert fine <= coarse + 1e-12

    def test_upper_bounds_any_grid_basis(self):
        # the oracle minimum is at most the loss of explicit grid bases
        rho = werner(0.7)
        val = grid_discord_qubit(rho, 50)
        comp = ensemble_loss(rho, projective_kraus(ProjectiveBasis(2, np.eye(2))))
        assert val <= comp + 1e-12

    def test_requires_qubit_A(self):
        with pytest.raises(ValueError):
            grid_discord_qubit(ginibre_state(3, 2, 2, seed=1), 10)

    def test_two_sided_bell(self):
        assert abs(grid_discord_two_sided(bell_state(), 12) - 1.0) < 1e-9

    def test_two_sided_product_zero(self):
        rng = np.random.default_rng(2)
        rho = product_state(ginibre_density(2, 2, rng), ginibre_density(2, 2, rng))
        assert abs(grid_discord_two_sided(rho, 12)) < 1e-9

    def test_deterministic(self):
        rho = ginibre_state(2, 2, 3, seed=3)
        assert grid_discord_qubit(rho, 40) == grid_discord_qubit(rho, 40)


class TestBatteries:
    def test_registry(self):
        assert set(BATTERY_NAMES) == set(BATTERY_TOLERANCES)
        with pytest.raises(ValueError, match="unknown battery"):
            run_battery("bogus", 3)

    def test_unknown_tolerance_defaulted(self):
        rep = run_battery("marginal_invariance", 10, seed=1)
        assert rep.failures == 0
        assert rep.worst_violation <= BATTERY_TOLERANCES["marginal_invariance"]

    @pytest.mark.parametrize(
        "name,trials",
        [
            ("nonnegativity", 40),
            ("marginal_invariance", 25),
            ("refinement_monotonicity", 25),
            ("relative_entropy_monotonicity", 25),
            ("inequality_chain", 3),
            ("mutual_info_bound", 3),
            ("koashi_winter", 3),
        ],
    )
    def test_batteries_pass(self, name, trials):
        rep = run_battery(name, trials, seed=7)
        assert rep.trials == trials
        assert rep.failures == 0, f"{name}: worst violation {rep.worst_violation}"
        assert rep.seeds_of_failures == ()

    def test_reproducible(self):
        a = run_battery("nonnegativity", 12, seed=11)
        b = run_battery("nonnegativity", 12, seed=11)
        assert a == b

    def test_classical_states_have_zero_discord(self):
        # zero-discord characterization on random classical states
        from discordium.discord import discord_P
        from discordium.optimize import OptimizerConfig

        cfg = OptimizerConfig(restarts=6, max_iters=1200)
        for seed in range(5):
            rho = random_classical(2, 2, np.random.default_rng(seed))
            assert discord_P(rho, cfg).value <= 1e-5
