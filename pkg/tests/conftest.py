"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from gaussum.core import random_pure_description
from gaussum.superposition import GaussianSuperposition, exact_norm


def complex_in_disc(rng: np.random.Generator, radius: float) -> complex:
    """One complex number uniform (Lebesgue) in the disc |z| ≤ radius."""
    r = radius * np.sqrt(rng.random())
    phi = 2.0 * np.pi * rng.random()
    return r * np.exp(1j * phi)


def random_superposition(
    seed,
    n: int = 1,
    chi: int = 2,
    z_max: float = 1.0,
    alpha_max: float = 1.0,
    normalize: bool = False,
) -> GaussianSuperposition:
    """Random superposition with seeded coefficients and pure branches."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    coeffs = (rng.standard_normal(chi) + 1j * rng.standard_normal(chi)) / np.sqrt(chi)
    descriptions = tuple(
        random_pure_description(n, z_max, rng, alpha_max=alpha_max)
        for _ in range(chi))
    psi = GaussianSuperposition(coeffs, descriptions)
    if normalize:
        psi = GaussianSuperposition(coeffs / exact_norm(psi), descriptions)
    return psi
