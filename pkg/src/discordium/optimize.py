"""Minimization over the unitary group U(N).

The group is parameterized surjectively as U = exp(iH) with H Hermitian,
assembled from N^2 real angles (N diagonal entries, then the upper
triangle as re/im pairs row by row).  Objectives built on eigenvalue
entropies have kinks at spectral degeneracies, so the search is
derivative-free: multi-restart Nelder-Mead, each restart re-anchoring its
simplex at the incumbent until the improvement drops below f_tol.
Everything is deterministic for a fixed seed; the first restart always
starts at the zero vector (the identity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from ._parallel import run_indexed
from .qmat import dag

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class UnitaryParams:
    """N^2 real angles encoding an N x N unitary via exp(iH)."""

    N: int
    params: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.params, dtype=float).ravel()
        if p.size != self.N * self.N:
            raise ValueError(f"need {self.N * self.N} parameters, got {p.size}")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "params", p)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iters: int = 2000
    f_tol: float = 1e-9
    x_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.f_tol <= 0 or self.x_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class OptimizationOutcome:
    """Best restart of a multi-restart search.

    ``best_params`` is a ``UnitaryParams`` for single-group searches and a
    raw parameter vector for product searches (two-sided measurements).
    """

    best_value: float
    best_params: "UnitaryParams | np.ndarray"
    evaluations: int
    restart_values: tuple[float, ...]
    converged: bool


_TRIU_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _TRIU_CACHE:
        _TRIU_CACHE[n] = np.triu_indices(n, k=1)
    return _TRIU_CACHE[n]


def to_hermitian(params: np.ndarray, n: int) -> np.ndarray:
    """Assemble the Hermitian generator from n^2 reals: n diagonal entries,
    then the strict upper triangle row by row as (re, im) pairs."""
    h = np.zeros((n, n), dtype=np.complex128)
    h[np.diag_indices(n)] = params[:n]
    rows, cols = _triu_indices(n)
    off = params[n::2] + 1j * params[n + 1 :: 2]
    h[rows, cols] = off
    h[cols, rows] = off.conj()
    return h


def to_unitary(p: UnitaryParams) -> np.ndarray:
    """exp(iH) for the Hermitian H encoded by the parameters."""
    return unitary_from_vector(p.params, p.N)


def unitary_from_vector(params: np.ndarray, n: int) -> np.ndarray:
    params = np.asarray(params, dtype=float).ravel()
    if params.size != n * n:
        raise ValueError(f"need {n * n} parameters, got {params.size}")
    h = to_hermitian(params, n)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(1j * evals)) @ dag(evecs)


def _start_point(seed: int, restart: int, n_params: int) -> np.ndarray:
    if restart == 0:
        return np.zeros(n_params)
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, restart])
    return np.random.default_rng(ss).uniform(-np.pi, np.pi, n_params)


def _local_search(objective, x0: np.ndarray, cfg: OptimizerConfig):
    """One restart: chained Nelder-Mead runs until improvement < f_tol.

    Re-anchoring a fresh simplex at the incumbent escapes the stagnation
    plateaus Nelder-Mead hits in >10 dimensions; the chain stops once a
    run no longer improves by more than f_tol, or the iteration budget for
    this restart is spent.
    """
    x, fx = x0, objective(x0)
    evals, iters_left, converged = 1, cfg.max_iters, False
    chain_cap = max(200, 70 * len(x0))
    while iters_left > 0:
        res = _scipy_minimize(
            objective,
            x,
            method="Nelder-Mead",
            options={
                "maxiter": min(iters_left, chain_cap),
                "fatol": cfg.f_tol,
                "xatol": cfg.x_tol,
                "adaptive": True,
            },
        )
        evals += res.nfev
        iters_left -= res.nit
        improved = fx - res.fun
        if res.fun < fx:
            x, fx = res.x, res.fun
        if res.success:
            converged = True
        if improved <= cfg.f_tol:
            break
    return float(fx), x, evals, converged


def minimize_vector(objective, n_params: int, cfg: OptimizerConfig) -> OptimizationOutcome:
    """Multi-restart Nelder-Mead over a flat real parameter vector.

    Restart k's start point depends only on (cfg.seed, k), so adding
    restarts can only improve the result; ties go to the lowest index.
    """
    def one(k: int):
        return _local_search(objective, _start_point(cfg.seed, k, n_params), cfg)

    results = run_indexed(one, cfg.restarts)
    values = tuple(r[0] for r in results)
    best = int(np.argmin(values))
    return OptimizationOutcome(
        best_value=values[best],
        best_params=results[best][1],
        evaluations=sum(r[2] for r in results),
        restart_values=values,
        converged=results[best][3],
    )


def minimize(objective, N: int, cfg: OptimizerConfig) -> OptimizationOutcome:
    """Minimize a real objective of a unitary over U(N)."""
    out = minimize_vector(lambda x: objective(UnitaryParams(N, x)), N * N, cfg)
    return OptimizationOutcome(
        best_value=out.best_value,
        best_params=UnitaryParams(N, out.best_params),
        evaluations=out.evaluations,
        restart_values=out.restart_values,
        converged=out.converged,
    )
