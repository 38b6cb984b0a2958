"""Heterodyne measurement of the leading modes of a Gaussian description.

Measuring modes 1..k of an n-mode pure Gaussian state against the coherent
outcome |β⟩ has the Gaussian outcome density

    p(β) = exp(-(d̂(β) - s_A)ᵀ (Γ_A + I)⁻¹ (d̂(β) - s_A)) / (πᵏ √det((Γ_A+I)/2))

where Γ_A, s_A are the measured block of the covariance and center.  The
conditioned state is again a pure Gaussian: the measured modes collapse to
|β⟩ and the remaining block picks up the Schur complement of Γ_A + I.  Its
reference phase is recovered through the anchored triple-overlap identity,
using the original state and the outcome's coherent state as anchors.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DensityFloorError,
    GaussianDescription,
    ValidationError,
    hat_d,
    hat_d_inv,
)
from .overlaps import overlaptriple

#: Densities below this are numerically indistinguishable from zero and
#: make phase recovery for the conditioned state meaningless.
DENSITY_FLOOR = 1e-280


def _measured_blocks(delta: GaussianDescription, outcome: np.ndarray):
    outcome = np.asarray(outcome, dtype=complex).reshape(-1)
    k = outcome.size
    if not 1 <= k <= delta.n:
        raise ValidationError(
            f"outcome has {k} modes, state has {delta.n}; need 1 ≤ k ≤ n")
    ga = delta.gamma[: 2 * k, : 2 * k]
    minv = np.linalg.inv(ga + np.eye(2 * k))
    return outcome, k, ga, minv


def heterodyne_density(delta: GaussianDescription, outcome: np.ndarray) -> float:
    """Outcome density for heterodyning the leading len(outcome) modes."""
    outcome, k, ga, minv = _measured_blocks(delta, outcome)
    diff = hat_d(outcome) - delta.d[: 2 * k]
    sign, logdet = np.linalg.slogdet((ga + np.eye(2 * k)) / 2)
    if sign <= 0:
        raise ValidationError("measured covariance block is not positive definite")
    expo = -(diff @ minv @ diff) - 0.5 * logdet - k * np.log(np.pi)
    return float(np.exp(expo))


def postmeasure(
    delta: GaussianDescription, outcome: np.ndarray
) -> tuple[GaussianDescription, float]:
    """Condition the state on a heterodyne outcome for the leading modes.

    Args:
        delta: the pre-measurement description.
        outcome: coherent outcome labels β for modes 1..k.

    Returns:
        (post-measurement description, outcome density p).  The measured
        modes are left in |β⟩; the full mode count is preserved.

    Raises:
        DensityFloorError: the outcome density underflows the floor below
            which the conditioned phase cannot be recovered.
    """
    outcome, k, ga, minv = _measured_blocks(delta, outcome)
    n = delta.n
    p = heterodyne_density(delta, outcome)
    if p < DENSITY_FLOOR:
        raise DensityFloorError(
            f"outcome density {p:.3e} below floor {DENSITY_FLOOR:.0e}")
    gab = delta.gamma[: 2 * k, 2 * k:]
    gb = delta.gamma[2 * k:, 2 * k:]
    sa, sb = delta.d[: 2 * k], delta.d[2 * k:]
    gamma_new = np.eye(2 * n)
    schur = gb - gab.T @ minv @ gab
    gamma_new[2 * k:, 2 * k:] = 0.5 * (schur + schur.T)
    db = hat_d(outcome)
    d_new = np.concatenate([db, sb + gab.T @ minv @ (db - sa)])
    alpha_new = hat_d_inv(d_new)
    # anchors: u = ⟨α', D(α - α')ψ⟩ via the Weyl phase on r, and
    # v = ⟨ψ, ψ'⟩ = ‖Π_β ψ‖ = (πᵏ p)^{1/2} since Π_β is a projector
    u = complex(np.exp(1j * np.imag(alpha_new @ np.conj(delta.alpha)))) * delta.r
    v = float(np.sqrt(np.pi ** k * p))
    r_new = np.conj(overlaptriple(
        delta.gamma, delta.d,
        gamma_new, d_new,
        np.eye(2 * n), d_new,
        u, v, delta.alpha - alpha_new))
    return GaussianDescription(gamma_new, alpha_new, r_new), p
