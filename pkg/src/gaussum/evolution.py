"""Gate action on Gaussian descriptions, including the reference phase.

Covariances transform as Γ → SΓSᵀ under the gate's symplectic matrix and
coherent labels follow the gate's closed-form label map.  The reference
overlap r = ⟨α, ψ⟩ needs no recomputation for displacements (a Weyl phase)
or passive gates (they map coherent states to coherent states with no
extra phase), but squeezing changes it nontrivially; there it is recovered
through the anchored triple-overlap identity with the squeezed coherent
state as the bridge.
"""

from __future__ import annotations

import numpy as np

from .core import (
    Beamsplitter,
    Displacement,
    GaussianDescription,
    Gate,
    PhaseShift,
    Squeeze,
    ValidationError,
    gate_symplectic,
    hat_d,
)
from .overlaps import overlaptriple


def _symmetrized(gamma: np.ndarray) -> np.ndarray:
    return 0.5 * (gamma + gamma.T)


def apply_displacement(delta: GaussianDescription, beta: np.ndarray) -> GaussianDescription:
    """D(β): Γ is unchanged, α → α - β, and r picks up the Weyl phase.

    r' = ⟨α - β, D(β)ψ⟩ = e^{i·Im(αᵀβ̄)} · r.
    """
    beta = np.asarray(beta, dtype=complex).reshape(-1)
    if beta.size != delta.n:
        raise ValidationError(
            f"displacement label has {beta.size} modes, state has {delta.n}")
    phase = complex(np.exp(1j * np.imag(delta.alpha @ np.conj(beta))))
    return GaussianDescription(delta.gamma, delta.alpha - beta, delta.r * phase)


def apply_phaseshift(delta: GaussianDescription, phi: float, j: int) -> GaussianDescription:
    """Phase shift on mode j: α_j → e^{-iφ}α_j; r is unchanged."""
    gate = PhaseShift(float(phi), j)
    s, _ = gate_symplectic(gate, delta.n)
    alpha = delta.alpha.copy()
    alpha[j - 1] *= np.exp(-1j * gate.phi)
    return GaussianDescription(_symmetrized(s @ delta.gamma @ s.T), alpha, delta.r)


def apply_beamsplitter(delta: GaussianDescription, omega: float, j: int, k: int) -> GaussianDescription:
    """Beamsplitter on modes (j, k): labels mix as α_j → α_j·cos ω - i·α_k·sin ω.

    The coherent-to-coherent label map carries no extra phase, so r is
    unchanged.
    """
    gate = Beamsplitter(float(omega), j, k)
    s, _ = gate_symplectic(gate, delta.n)
    c, sn = np.cos(gate.omega), np.sin(gate.omega)
    alpha = delta.alpha.copy()
    aj, ak = alpha[j - 1], alpha[k - 1]
    alpha[j - 1] = c * aj - 1j * sn * ak
    alpha[k - 1] = c * ak - 1j * sn * aj
    return GaussianDescription(_symmetrized(s @ delta.gamma @ s.T), alpha, delta.r)


def apply_squeeze(delta: GaussianDescription, z: float, j: int) -> GaussianDescription:
    """Squeeze mode j by log-factor z: α_j → α_j·cosh z - ᾱ_j·sinh z.

    The new reference overlap r' = ⟨α', S_j(z)ψ⟩ is recovered from the
    triple (S_j(z)|α⟩, |α'⟩, S_j(z)ψ) with no displacement: the anchors are
    ⟨S_j(z)ψ, S_j(z)|α⟩⟩ = r̄ (unitary invariance) and
    ⟨S_j(z)|α⟩, |α'⟩⟩ = 1/√cosh z (the squeezed coherent state keeps the
    mapped center, so only the width mismatch contributes).
    """
    gate = Squeeze(float(z), j)
    n = delta.n
    s, _ = gate_symplectic(gate, n)
    gamma_new = _symmetrized(s @ delta.gamma @ s.T)
    alpha = delta.alpha.copy()
    alpha[j - 1] = alpha[j - 1] * np.cosh(gate.z) - np.conj(alpha[j - 1]) * np.sinh(gate.z)
    d_new = hat_d(alpha)
    u = np.conj(delta.r)
    v = 1.0 / np.sqrt(np.cosh(gate.z))
    r_new = overlaptriple(
        _symmetrized(s @ s.T), d_new,
        np.eye(2 * n), d_new,
        gamma_new, d_new,
        u, v, np.zeros(n, dtype=complex))
    return GaussianDescription(gamma_new, alpha, r_new)


def apply_unitary(delta: GaussianDescription, g: Gate) -> GaussianDescription:
    """Apply any supported gate to a description."""
    if isinstance(g, Displacement):
        return apply_displacement(delta, g.alpha)
    if isinstance(g, PhaseShift):
        return apply_phaseshift(delta, g.phi, g.mode)
    if isinstance(g, Beamsplitter):
        return apply_beamsplitter(delta, g.omega, g.mode1, g.mode2)
    if isinstance(g, Squeeze):
        return apply_squeeze(delta, g.z, g.mode)
    raise ValidationError(f"unsupported gate: {g!r}")
