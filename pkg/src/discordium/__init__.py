"""Quantum discord of bipartite density matrices under projective, rank-1
POVM, Neumark-extended and two-sided measurement classes, two-qubit
entanglement of formation, and machine-checked theorem batteries."""

__version__ = "0.1.0"

from .discord import (
    DiscordResult,
    discord_P,
    discord_PE,
    discord_R,
    discord_two_sided,
    ensemble_loss,
    evaluate_measurement,
    is_classical,
    loss_functional,
    two_sided_loss,
)
from .entangle import (
    EntanglementResult,
    concurrence_2q,
    eof_2q,
    eof_via_decomposition,
    koashi_winter_residual,
)
from .entropy import (
    conditional_entropy,
    mutual_information,
    relative_entropy,
    von_neumann,
)
from .measure import (
    ConditionalEnsemble,
    KrausSet,
    NeumarkBasis,
    ProjectiveBasis,
    RankOnePOVM,
    apply_one_sided,
    branch_ensemble,
    from_neumark,
    randomizing_measurement,
    rank_one_refine,
    two_sided_apply,
)
from .optimize import (
    OptimizationOutcome,
    OptimizerConfig,
    UnitaryParams,
    minimize,
    to_unitary,
)
from .qmat import (
    BipartiteState,
    DensityMatrix,
    PureState,
    SchmidtDecomposition,
    bell_state,
    classical_state,
    eigh,
    ginibre_state,
    make_state,
    partial_trace,
    product_state,
    purify,
    schmidt,
    tensor_product,
    werner,
)
from .verify import BatteryReport, grid_discord_qubit, grid_discord_two_sided, run_battery

__all__ = [
    "__version__",
    "BatteryReport",
    "BipartiteState",
    "ConditionalEnsemble",
    "DensityMatrix",
    "DiscordResult",
    "EntanglementResult",
    "KrausSet",
    "NeumarkBasis",
    "OptimizationOutcome",
    "OptimizerConfig",
    "ProjectiveBasis",
    "PureState",
    "RankOnePOVM",
    "SchmidtDecomposition",
    "UnitaryParams",
    "apply_one_sided",
    "bell_state",
    "branch_ensemble",
    "classical_state",
    "concurrence_2q",
    "conditional_entropy",
    "discord_P",
    "discord_PE",
    "discord_R",
    "discord_two_sided",
    "eigh",
    "ensemble_loss",
    "eof_2q",
    "eof_via_decomposition",
    "evaluate_measurement",
    "from_neumark",
    "ginibre_state",
    "grid_discord_qubit",
    "grid_discord_two_sided",
    "is_classical",
    "koashi_winter_residual",
    "loss_functional",
    "make_state",
    "minimize",
    "mutual_information",
    "partial_trace",
    "product_state",
    "purify",
    "randomizing_measurement",
    "rank_one_refine",
    "relative_entropy",
    "run_battery",
    "schmidt",
    "tensor_product",
    "to_unitary",
    "two_sided_apply",
    "two_sided_loss",
    "von_neumann",
    "werner",
]
