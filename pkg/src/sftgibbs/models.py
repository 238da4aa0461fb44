"""Canonical models and potentials used by tests, docs, and fixtures."""

from __future__ import annotations

from .potentials import FiniteRangePotential, finite_range_potential, zero_potential
from .sft import SftModel, admissible_words, validate_sft


def full_shift(n: int = 2) -> SftModel:
    """Every transition allowed."""
    return validate_sft(n, [[1] * n for _ in range(n)])


def golden_mean() -> SftModel:
    """Two symbols, the word 1,1 forbidden."""
    return validate_sft(2, [[1, 1], [1, 0]])


def pair_product_potential(model: SftModel, weight: float = 1.0) -> FiniteRangePotential:
    """Range-2 potential weight * x0 * x1 (an Ising-style pair interaction)."""
    table = {w: weight * w[0] * w[1] for w in admissible_words(model, 2)}
    return finite_range_potential(model, 2, table)


def first_coordinate_potential(model: SftModel, weight: float = 1.0) -> FiniteRangePotential:
    """Range-1 potential weight * x0; its Gibbs measure on the full shift is i.i.d."""
    table = {w: weight * w[0] for w in admissible_words(model, 1)}
    return finite_range_potential(model, 1, table)


def golden_mean_weighted() -> tuple[SftModel, FiniteRangePotential]:
    """Golden mean shift with a non-trivial range-2 potential."""
    model = golden_mean()
    table = {(0, 0): 0.2, (0, 1): -0.1, (1, 0): 0.4}
    return model, finite_range_potential(model, 2, table)


def homology_triple(model: SftModel):
    """(phi, psi, u) with psi = phi + u - u o shift.

    phi(x) = x0, u(x) = x0, so psi(x) = 2 x0 - x1 as a range-2 table.
    """
    phi = first_coordinate_potential(model)
    u = first_coordinate_potential(model)
    psi_table = {w: 2.0 * w[0] - w[1] for w in admissible_words(model, 2)}
    psi = finite_range_potential(model, 2, psi_table)
    return phi, psi, u


def parry_potential(model: SftModel) -> FiniteRangePotential:
    """The zero potential; its Gibbs measure is the measure of maximal entropy."""
    return zero_potential(model, 1)
