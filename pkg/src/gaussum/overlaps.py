"""Inner products between pure Gaussian states from their descriptions.

The centerpiece is a closed form for the product of the three overlaps
around a triple of pure Gaussian states, one of them displaced:

    T = ⟨ψ₃, D(α)ψ₁⟩ · ⟨ψ₁, ψ₂⟩ · ⟨ψ₂, ψ₃⟩

T is computable from the covariance matrices and centers alone, because
every unknown global phase appears once as a bra and once as a ket and
cancels.  Dividing T by two known anchor overlaps then recovers the third
overlap, phase included; this is how descriptions propagate their
reference overlap r = ⟨α, ψ⟩ through squeezing and measurement, and how
pairwise superposition overlaps are evaluated.

Complex square roots of determinants are branch-tracked by deforming the
matrix from its real part along M(t) = A + itB and following the
eigenvalue phases of each step's multiplicative update, starting from the
positive root at t = 0.
"""

from __future__ import annotations

import numpy as np

from .core import (
    BranchPathError,
    GaussianDescription,
    PhaseRecoveryError,
    ValidationError,
    hat_d,
    symplectic_form,
)

#: Anchor overlaps smaller than this cannot be divided out reliably.
ANCHOR_FLOOR = 1e-12

#: Smallest step of the determinant branch deformation before giving up.
_MIN_BRANCH_STEP = 2.0 ** -20


def coherent_overlap(a: np.ndarray, b: np.ndarray) -> complex:
    """⟨a, b⟩ for coherent states, antilinear in the first argument."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size != b.size:
        raise ValidationError("coherent labels have different mode counts")
    return complex(np.exp(-0.5 * (a @ np.conj(a)).real - 0.5 * (b @ np.conj(b)).real
                          + np.conj(a) @ b))


def pair_fidelity(delta1: GaussianDescription, delta2: GaussianDescription) -> float:
    """|⟨ψ₁, ψ₂⟩|² from covariances and centers only.

    F = 2ⁿ · exp(-δᵀ(Γ₁+Γ₂)⁻¹δ) / √det(Γ₁+Γ₂) with δ = d₁ - d₂; no phase
    data is needed, which makes this an independent cross-check on the
    phase-tracking overlap.
    """
    if delta1.n != delta2.n:
        raise ValidationError("descriptions have different mode counts")
    n = delta1.n
    total = delta1.gamma + delta2.gamma
    diff = delta1.d - delta2.d
    sign, logdet = np.linalg.slogdet(total)
    if sign <= 0:
        raise ValidationError("covariance sum is not positive definite")
    expo = n * np.log(2.0) - diff @ np.linalg.solve(total, diff) - 0.5 * logdet
    return float(np.exp(expo))


def branched_sqrt_det(m: np.ndarray) -> complex:
    """√det(M) on the branch reached continuously from the real part of M.

    Deforms along M(t) = A + itB for t ∈ [0, 1], accumulating the principal
    log-eigenvalues of each step's multiplier M(t)⁻¹M(t+h); a step is
    accepted only when every eigenvalue phase stays strictly inside
    (-π/2, π/2), so the accumulated log never jumps branches.  The start
    value at t = 0 is the positive root of det(A).

    Args:
        m: square matrix whose real part is positive definite.

    Raises:
        BranchPathError: real part not positive definite, the deformation
            stalls, or the accumulated determinant drifts from det(M).
    """
    m = np.asarray(m, dtype=complex)
    a, b = m.real, m.imag
    sign, logdet = np.linalg.slogdet(a)
    if sign <= 0:
        raise BranchPathError("real part of the matrix is not positive definite")
    if np.abs(b).max() <= 1e-14 * max(1.0, np.abs(a).max()):
        return complex(np.exp(0.5 * logdet))
    total = complex(logdet)
    t, step = 0.0, 0.5
    while t < 1.0:
        t2 = min(1.0, t + step)
        ratio = np.linalg.solve(a + 1j * t * b, a + 1j * t2 * b)
        mu = np.linalg.eigvals(ratio)
        if np.abs(np.angle(mu)).max() > 0.4999 * np.pi:
            step *= 0.5
            if step < _MIN_BRANCH_STEP:
                raise BranchPathError("determinant branch deformation stalled")
            continue
        total += np.log(mu).sum()
        t, step = t2, min(0.5, 2.0 * step)
    # guard against accumulation drift: the value (not the branch) must
    # match a direct determinant; compare in log space to avoid overflow
    dsign, dlogabs = np.linalg.slogdet(m)
    if (abs(total.real - dlogabs) > 1e-7 * max(1.0, abs(dlogabs))
            or abs(np.exp(1j * total.imag) - dsign) > 1e-7):
        raise BranchPathError("branch deformation drifted from the determinant value")
    return complex(np.exp(0.5 * total))


def triple_overlap_product(
    gamma1: np.ndarray, d1: np.ndarray,
    gamma2: np.ndarray, d2: np.ndarray,
    gamma3: np.ndarray, d3: np.ndarray,
    alpha: np.ndarray,
) -> complex:
    """⟨ψ₃, D(α)ψ₁⟩ · ⟨ψ₁, ψ₂⟩ · ⟨ψ₂, ψ₃⟩ for pure Gaussian ψ_i.

    Args:
        gamma1, d1: covariance and center of ψ₁ (likewise 2, 3).
        alpha: complex displacement label of length n.

    The result is independent of the global phases of the ψ_i.
    """
    n = gamma1.shape[0] // 2
    om = symplectic_form(n)
    iom = 1j * om
    eye = np.eye(2 * n)
    x = np.linalg.inv(gamma2 + gamma3)
    g4 = gamma3 - (gamma3 + iom) @ x @ (gamma3 - iom)
    w1 = np.linalg.inv(gamma1 + g4)
    g5 = 0.25 * gamma1 - 0.25 * (gamma1 - iom) @ w1 @ (gamma1 + iom)
    w2 = x + x @ (gamma3 - iom) @ w1 @ (gamma3 + iom) @ x
    w3 = 2.0 * w1 @ (gamma3 + iom) @ x
    w4 = eye - (gamma1 - iom) @ w1
    w5 = (gamma1 - iom) @ w1 @ (gamma3 + iom) @ x
    dp1 = d1 - d3
    dp2 = d2 - d3
    oda = om @ hat_d(alpha)
    expo = -(dp1 @ w1 @ dp1) - (dp2 @ w2 @ dp2) + (dp1 @ w3 @ dp2)
    expo -= oda @ g5 @ oda
    expo -= 1j * (oda @ (w4 @ dp1 + w5 @ dp2 + d3))
    den = (branched_sqrt_det((gamma2 + gamma3) / 2)
           * branched_sqrt_det((gamma1 + g4) / 2))
    return complex(np.exp(expo) / den)


def overlaptriple(
    gamma1: np.ndarray, d1: np.ndarray,
    gamma2: np.ndarray, d2: np.ndarray,
    gamma3: np.ndarray, d3: np.ndarray,
    u: complex, v: complex,
    lam: np.ndarray,
) -> complex:
    """Recover ⟨ψ₂, ψ₃⟩ from the triple product and two known anchors.

    Args:
        gamma1 .. d3: covariances and centers of the triple (ψ₁, ψ₂, ψ₃).
        u: the known overlap ⟨ψ₃, D(λ)ψ₁⟩.
        v: the known overlap ⟨ψ₁, ψ₂⟩.
        lam: displacement label λ.

    Raises:
        PhaseRecoveryError: an anchor overlap is too small to divide out.
    """
    if abs(u) < ANCHOR_FLOOR or abs(v) < ANCHOR_FLOOR:
        raise PhaseRecoveryError(
            f"anchor overlaps too small to recover a phase: |u|={abs(u):.3e}, "
            f"|v|={abs(v):.3e}")
    t = triple_overlap_product(gamma1, d1, gamma2, d2, gamma3, d3, lam)
    return complex(t / (u * v))


def overlap(delta1: GaussianDescription, delta2: GaussianDescription) -> complex:
    """⟨ψ(Δ₁), ψ(Δ₂)⟩, phase included.

    Uses the triple (|α₁⟩, ψ(Δ₁), ψ(Δ₂)) with displacement λ = α₁ - α₂:
    both anchor overlaps are then known from the reference overlaps r₁, r₂
    and a Weyl phase, and the remaining factor is the wanted one.
    """
    if delta1.n != delta2.n:
        raise ValidationError("descriptions have different mode counts")
    n = delta1.n
    a1, a2 = delta1.alpha, delta2.alpha
    u = complex(np.exp(-1j * np.imag(a1 @ np.conj(a2)))) * np.conj(delta2.r)
    return overlaptriple(
        np.eye(2 * n), delta1.d,
        delta1.gamma, delta1.d,
        delta2.gamma, delta2.d,
        u, delta1.r, a1 - a2)
