"""Superpositions of pure Gaussian states and their norms and densities.

A superposition Ψ = Σ_j c_j ψ(Δ_j) is stored as coefficients plus one
description per branch.  Norms come in two flavors:

* exact_norm evaluates the full χ×χ Gram matrix of branch overlaps,
  phases included: O(χ²) overlap evaluations.
* fast_norm is a randomized estimator: it samples coherent probes uniformly
  from a phase-space ball whose radius comes from an energy bound, and
  averages the heterodyne density of the probes against Ψ.  Each sample
  touches every branch once, so the cost is O(χ) per sample, and the
  estimate lands within (1±ε)·‖Ψ‖² with probability at least 1-p_fail.

Sampling uses one counter-based generator per sample index, so results are
bit-identical for a fixed seed no matter how samples are split across
workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    DensityFloorError,
    Displacement,
    Gate,
    NumericError,
    Squeeze,
    ValidationError,
    coherent_description,
    energy_of_gaussian,
    hat_d,
)
from .measurement import postmeasure
from .overlaps import overlap

#: Tolerated imaginary residue of the Gram quadratic form, relative to its
#: real part (the squared norm).
GRAM_IMAG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class GaussianSuperposition:
    """Ψ = Σ_j c_j ψ(Δ_j), not necessarily normalized.

    Attributes:
        coeffs: complex branch coefficients c_j.
        descriptions: one Gaussian description per branch, all on the same
            mode count.
        dropped_weight: Σ|c_j|² of branches discarded upstream (by a
            measurement whose outcome density underflowed); kept as a
            record of how much weight the stored branches are missing.
    """

    coeffs: np.ndarray
    descriptions: tuple
    dropped_weight: float = 0.0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        descriptions = tuple(self.descriptions)
        if coeffs.size == 0 or coeffs.size != len(descriptions):
            raise ValidationError(
                f"need matching coefficients and descriptions, got "
                f"{coeffs.size} and {len(descriptions)}")
        n = descriptions[0].n
        for d in descriptions:
            if d.n != n:
                raise ValidationError("branches have different mode counts")
        if not np.all(np.isfinite(coeffs)):
            raise ValidationError("coefficients must be finite")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "descriptions", descriptions)
        object.__setattr__(self, "dropped_weight", float(self.dropped_weight))

    @property
    def n(self) -> int:
        return self.descriptions[0].n

    @property
    def chi(self) -> int:
        return self.coeffs.size

    @property
    def terms(self) -> list:
        return list(zip(self.coeffs, self.descriptions))


def exact_norm(psi: GaussianSuperposition) -> float:
    """‖Ψ‖ from the full Gram matrix of branch overlaps.

    The quadratic form Σ_jk c̄_k c_j ⟨ψ_k, ψ_j⟩ is evaluated over all χ²
    pairs; its imaginary part must vanish up to numerical residue, which is
    checked rather than silently discarded.

    Raises:
        NumericError: the imaginary residue exceeds its tolerance, which
            signals inconsistent branch phases.
    """
    c = psi.coeffs
    ds = psi.descriptions
    total = 0.0 + 0.0j
    for k in range(psi.chi):
        for j in range(psi.chi):
            total += np.conj(c[k]) * c[j] * overlap(ds[k], ds[j])
    if abs(total.imag) > GRAM_IMAG_TOL * max(1.0, abs(total.real)):
        raise NumericError(
            f"Gram form has imaginary residue {total.imag:.3e} "
            f"against real part {total.real:.3e}")
    return float(np.sqrt(max(total.real, 0.0)))


class FastNormParameters(NamedTuple):
    """Probe-ball radius and sample count of the randomized norm estimator."""

    radius: float
    samples: int


def fast_norm_parameters(energy_bound: float, epsilon: float, p_fail: float) -> FastNormParameters:
    """R = √(E/ε) and L = ⌈E/(4π·p_fail·ε³)⌉ for the estimator's guarantee."""
    if energy_bound <= 0 or epsilon <= 0 or not 0 < p_fail < 1:
        raise ValidationError("need energy_bound > 0, epsilon > 0, 0 < p_fail < 1")
    radius = float(np.sqrt(energy_bound / epsilon))
    samples = int(math.ceil(energy_bound / (4.0 * np.pi * p_fail * epsilon ** 3)))
    return FastNormParameters(radius, samples)


def _probe_value(psi: GaussianSuperposition, seed: int, index: int,
                 radius: float, weight: float) -> float:
    """One estimator sample: X_ℓ = w · |⟨α_ℓ, Ψ⟩|² with α_ℓ uniform in B_R."""
    n = psi.n
    rng = np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))
    g = rng.standard_normal(2 * n)
    u = rng.random()
    alpha = (g[0::2] + 1j * g[1::2]) / np.linalg.norm(g)
    alpha *= radius * u ** (1.0 / (2 * n))
    probe = coherent_description(alpha)
    amp = 0.0 + 0.0j
    for c, d in zip(psi.coeffs, psi.descriptions):
        amp += c * overlap(probe, d)
    return weight * float(abs(amp) ** 2)


def fast_norm(psi: GaussianSuperposition, epsilon: float, p_fail: float,
              energy_bound: float, seed: int, workers: int = 1) -> float:
    """Randomized estimate of ‖Ψ‖², within (1±ε)·‖Ψ‖² w.p. ≥ 1 - p_fail.

    Args:
        psi: the superposition; cost is O(χ) per sample.
        epsilon: relative accuracy target.
        p_fail: allowed failure probability of the accuracy guarantee.
        energy_bound: upper bound on ⟨H⟩ of the normalized state, with
            H = Σ_j(Q_j² + P_j² + 1); it fixes the probe-ball radius and
            the sample count.
        seed: integer key of the counter-based generator.  Sample ℓ draws
            from its own stream, so the result is bit-identical for any
            worker count.
        workers: threads filling disjoint sample ranges.

    Returns:
        The estimate of the squared norm (not the norm).
    """
    if not isinstance(seed, (int, np.integer)):
        raise ValidationError("fast_norm needs an integer seed")
    radius, samples = fast_norm_parameters(energy_bound, epsilon, p_fail)
    weight = radius ** (2 * psi.n) / math.factorial(psi.n)
    values = np.empty(samples, dtype=float)

    def fill(lo: int, hi: int) -> None:
        for ell in range(lo, hi):
            values[ell] = _probe_value(psi, int(seed), ell, radius, weight)

    workers = max(1, int(workers))
    if workers == 1 or samples < 2 * workers:
        fill(0, samples)
    else:
        bounds = np.linspace(0, samples, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fill, int(lo), int(hi))
                       for lo, hi in zip(bounds[:-1], bounds[1:])]
            for f in futures:
                f.result()
    # fixed-order reduction keeps the result independent of the worker split
    return float(np.sum(values) / samples)


def post_measurement_superposition(
    psi: GaussianSuperposition, outcome: np.ndarray
) -> GaussianSuperposition:
    """Unnormalized post-measurement superposition Σ_j c_j √(πᵏ p_j) ψ(Δ'_j).

    Branch weights are chosen so that ‖result‖²/πᵏ is the outcome density
    of Ψ.  Branches whose individual outcome density underflows the
    recovery floor are dropped and recorded in dropped_weight.

    Raises:
        DensityFloorError: every branch underflowed.
    """
    outcome = np.asarray(outcome, dtype=complex).reshape(-1)
    k = outcome.size
    coeffs = []
    descriptions = []
    dropped = psi.dropped_weight
    for c, d in zip(psi.coeffs, psi.descriptions):
        try:
            d_post, p = postmeasure(d, outcome)
        except DensityFloorError:
            dropped += float(abs(c) ** 2)
            continue
        coeffs.append(c * np.sqrt(np.pi ** k * p))
        descriptions.append(d_post)
    if not coeffs:
        raise DensityFloorError(
            "every branch's outcome density underflowed the recovery floor")
    return GaussianSuperposition(np.array(coeffs), tuple(descriptions), dropped)


def measureprob_exact(psi: GaussianSuperposition, outcome: np.ndarray) -> float:
    """Heterodyne outcome density of Ψ at the given outcome, exactly.

    p(β) = ‖Π_β Ψ‖² / πᵏ, evaluated through the post-measurement
    superposition and the exact Gram norm: O(χ²) overlaps.
    """
    outcome = np.asarray(outcome, dtype=complex).reshape(-1)
    post = post_measurement_superposition(psi, outcome)
    return float(exact_norm(post) ** 2 / np.pi ** outcome.size)


def measureprob_approx(psi: GaussianSuperposition, outcome: np.ndarray,
                       epsilon: float, p_fail: float, energy_bound: float,
                       seed: int, workers: int = 1) -> float:
    """Heterodyne outcome density of Ψ, by the randomized norm estimator.

    energy_bound must bound ⟨H⟩ of the normalized post-measurement state;
    see typical_parameters for deriving one from a pre-measurement bound.
    """
    outcome = np.asarray(outcome, dtype=complex).reshape(-1)
    post = post_measurement_superposition(psi, outcome)
    value = fast_norm(post, epsilon, p_fail, energy_bound, seed, workers=workers)
    return float(value / np.pi ** outcome.size)


class TypicalParameters(NamedTuple):
    """Post-measurement energy bound and outcome-ball radius."""

    e_tilde: float
    radius: float


def typical_parameters(energy_bound: float, delta: float) -> TypicalParameters:
    """Bounds that hold for all but a δ-fraction of heterodyne outcomes.

    With ⟨H⟩ ≤ E before measuring, all outcomes except a set of total
    probability δ satisfy: the outcome lies in a ball of radius √(E/δ),
    and the conditioned state has energy at most Ẽ = 2(E+1)/δ.
    """
    if energy_bound <= 0 or not 0 < delta < 1:
        raise ValidationError("need energy_bound > 0 and 0 < delta < 1")
    return TypicalParameters(2.0 * (energy_bound + 1.0) / delta,
                             float(np.sqrt(energy_bound / delta)))


def circuit_energy_bound(mean_photons: float, gates: Sequence[Gate],
                         tight: bool = False, heterodyne_steps: int = 0) -> float:
    """Upper bound on the mean photon number after a gate sequence.

    Every gate scales the bound by e² except squeezing, which scales it by
    e^{2|z|}; a displacement additionally folds its amplitude into the
    bound via N → (√N + ‖d̂(α)‖)².  With tight=True the blanket e² factors
    are dropped (valid for passive gates, which preserve photon number,
    and for displacements, whose growth the fold already covers).  Each
    heterodyne step adds 2 at the end.

    Args:
        mean_photons: mean photon number N of the input state.
        gates: the gate sequence, in order.
        tight: drop the per-gate e² factors.
        heterodyne_steps: number of heterodyne measurements to budget for.
    """
    if mean_photons < 0:
        raise ValidationError("mean photon number must be nonnegative")
    n_bound = float(mean_photons)
    for g in gates:
        if isinstance(g, Squeeze):
            n_bound *= float(np.exp(2.0 * abs(g.z)))
            continue
        if not tight:
            n_bound *= float(np.e ** 2)
        if isinstance(g, Displacement):
            n_bound = (np.sqrt(n_bound) + float(np.linalg.norm(hat_d(g.alpha)))) ** 2
    return n_bound + 2.0 * int(heterodyne_steps)


def superposition_energy_exact(psi: GaussianSuperposition) -> float:
    """⟨H⟩ of the normalized superposition, H = Σ_j(Q_j² + P_j² + 1).

    For n ≤ 2 this is evaluated exactly in a truncated number basis.  For
    larger systems the cross terms are not available from descriptions
    alone, and the certified bound (Σ_j |c_j| √E_j)² / ‖Ψ‖² is returned
    instead, with E_j the branch energies.
    """
    if psi.n <= 2:
        from . import fock  # oracle backend, deliberately not a module-level import

        state = fock.fock_from_superposition(psi.terms)
        return float(fock.fock_energy(state))
    amplitude = 0.0
    for c, d in zip(psi.coeffs, psi.descriptions):
        amplitude += abs(c) * np.sqrt(energy_of_gaussian(d.gamma, d.d))
    return float(amplitude ** 2 / exact_norm(psi) ** 2)
