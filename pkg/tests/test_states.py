"""Unit tests for the named-state library."""

from __future__ import annotations

import numpy as np
import pytest

from gaussum.core import ValidationError, validate_description
from gaussum.fock import fock_from_superposition, fock_moments
from gaussum.overlaps import overlap
from gaussum.states import appendix_d_state, cat_state, gkp_comb
from gaussum.superposition import exact_norm, post_measurement_superposition


class TestCatState:
    """Normalized two-branch coherent superpositions."""

    def test_even_coefficients_frozen(self):
        cat = cat_state(1.0)
        expected = 1.0 / np.sqrt(2.0 * (1.0 + np.exp(-2.0)))
        assert abs(cat.coeffs[0] - expected) < 1e-14
        assert abs(cat.coeffs[0] - 0.66360) < 1e-4, f"N₊ = {cat.coeffs[0]}"
        assert abs(cat.coeffs[1] - cat.coeffs[0]) < 1e-14, "even: equal signs"

    def test_normalized(self):
        for alpha, parity in [(0.5, "even"), (1.0, "odd"), (1.5 + 0.5j, "even")]:
            cat = cat_state(alpha, parity)
            assert abs(exact_norm(cat) - 1.0) < 1e-10, f"({alpha}, {parity})"

    def test_branch_labels(self):
        cat = cat_state(0.7 + 0.2j, "odd")
        assert cat.descriptions[0].alpha[0] == 0.7 + 0.2j
        assert cat.descriptions[1].alpha[0] == -(0.7 + 0.2j)
        assert cat.coeffs[1] == -cat.coeffs[0]

    def test_parity_aliases(self):
        assert np.array_equal(cat_state(1.0, 1).coeffs, cat_state(1.0, "even").coeffs)
        assert np.array_equal(cat_state(1.0, -1).coeffs, cat_state(1.0, "odd").coeffs)

    def test_large_alpha_limit(self):
        cat = cat_state(6.0, "even")
        assert abs(cat.coeffs[0] - 1.0 / np.sqrt(2.0)) < 1e-12

    def test_errors(self):
        with pytest.raises(ValidationError):
            cat_state(1.0, "both")
        with pytest.raises(ValidationError):
            cat_state(0.0, "odd")


class TestGkpComb:
    """Finite combs of displaced squeezed states."""

    def test_single_tooth(self):
        comb = gkp_comb(0.8, 0, 1.0, 1.0)
        assert comb.chi == 1
        assert np.allclose(comb.descriptions[0].gamma,
                           np.diag([np.exp(-1.6), np.exp(1.6)]), atol=1e-14)
        assert np.allclose(comb.descriptions[0].alpha, 0.0)
        assert abs(comb.coeffs[0] - 1.0) < 1e-12

    def test_branch_count_and_label_set(self):
        comb = gkp_comb(0.5, 2, 1.3, 1.5)
        assert comb.chi == 5
        labels = sorted(float(d.alpha[0].real) for d in comb.descriptions)
        assert np.allclose(labels, [-2.6, -1.3, 0.0, 1.3, 2.6], atol=1e-12)
        assert all(abs(d.alpha[0].imag) < 1e-15 for d in comb.descriptions)

    def test_normalized(self):
        for z, m, step, width in [(0.5, 1, 1.0, 1.0), (0.8, 2, 1.5, 2.0),
                                  (1.0, 3, 2.0, 1.2)]:
            comb = gkp_comb(z, m, step, width)
            assert abs(exact_norm(comb) - 1.0) < 1e-9, f"(z={z}, m={m})"

    def test_envelope_ratios(self):
        width = 1.4
        comb = gkp_comb(0.6, 2, 1.0, width)
        center = comb.coeffs[2]
        for offset in (1, 2):
            expected = np.exp(-offset ** 2 / (2.0 * width ** 2))
            assert abs(comb.coeffs[2 + offset] / center - expected) < 1e-12
            assert abs(comb.coeffs[2 - offset] / center - expected) < 1e-12

    def test_errors(self):
        with pytest.raises(ValidationError):
            gkp_comb(0.0, 1, 1.0, 1.0)
        with pytest.raises(ValidationError):
            gkp_comb(0.5, -1, 1.0, 1.0)
        with pytest.raises(ValidationError):
            gkp_comb(0.5, 1.5, 1.0, 1.0)
        with pytest.raises(ValidationError):
            gkp_comb(0.5, 1, 1.0, 0.0)


class TestAppendixDState:
    """Vacuum plus i-weighted bright coherent-squeezed branch on two modes."""

    def test_normalized_for_all_weights(self):
        for p in (0.1, 0.25, 0.5, 0.9):
            psi = appendix_d_state(p, 1.2, 0.8)
            assert abs(exact_norm(psi) - 1.0) < 1e-12, f"p = {p}"

    def test_cross_term_vanishes(self):
        psi = appendix_d_state(0.3, 1.0, 0.7)
        cross = np.conj(psi.coeffs[0]) * psi.coeffs[1] * overlap(
            psi.descriptions[0], psi.descriptions[1])
        assert abs(cross.real) < 1e-12, f"Re cross-term {cross.real}"
        assert abs(cross.imag) > 1e-6, "cross term should be purely imaginary"

    def test_boundary_weights(self):
        flat = appendix_d_state(0.0, 1.0, 0.5)
        assert flat.chi == 1 and np.allclose(flat.descriptions[0].gamma, np.eye(4))
        bright = appendix_d_state(1.0, 1.0, 0.5)
        assert bright.chi == 1
        assert bright.coeffs[0] == 1.0j
        assert bright.descriptions[0].alpha[0] == 1.0

    def test_branches_valid(self):
        psi = appendix_d_state(0.4, 0.9, 1.1)
        for d in psi.descriptions:
            assert validate_description(d).ok

    def test_weight_domain(self):
        with pytest.raises(ValidationError):
            appendix_d_state(-0.1, 1.0, 0.5)
        with pytest.raises(ValidationError):
            appendix_d_state(1.1, 1.0, 0.5)

    @staticmethod
    def _post_moments(p, r, z):
        psi = appendix_d_state(p, r, z)
        post = post_measurement_superposition(psi, np.array([complex(r)]))
        assert post.chi == 2
        weights = np.abs(post.coeffs) ** 2
        a_sq = (1.0 - p) * np.exp(-r ** 2) / ((1.0 - p) * np.exp(-r ** 2) + p)
        assert abs(weights[0] / weights.sum() - a_sq) < 1e-12, "branch weights"
        d_post, gamma_post = fock_moments(
            fock_from_superposition(post.terms, n_max=256, tail_tol=1e-12,
                                    cap=256))
        convex = a_sq * np.eye(4) + (1.0 - a_sq) * np.diag(
            [1.0, 1.0, np.exp(-2.0 * z), np.exp(2.0 * z)])
        return a_sq, d_post, gamma_post, convex

    def test_post_measurement_convex_covariance(self):
        # In the regime the construction targets (outcome amplitude large
        # enough that the surviving branches barely overlap) the conditioned
        # covariance is the branch-weighted convex combination
        # Γ' = a²·I + b²·(I ⊕ diag(e^{-2z}, e^{2z})), d' = (√2·r, 0, 0, 0).
        p, r, z = 0.25, 7.0, 1.0
        _, d_post, gamma_post, convex = self._post_moments(p, r, z)
        expected_d = np.array([np.sqrt(2.0) * r, 0.0, 0.0, 0.0])
        assert np.max(np.abs(d_post - expected_d)) < 1e-9, f"centers {d_post}"
        assert np.max(np.abs(gamma_post - convex)) < 1e-9, (
            f"covariance defect {np.max(np.abs(gamma_post - convex))}")

    @pytest.mark.parametrize("p,r,z", [(0.25, 0.6, 1.0), (0.6, 1.1, 1.25)])
    def test_post_measurement_moments_moderate_overlap(self, p, r, z):
        # At moderate amplitudes the per-quadrature variances still follow
        # the convex combination exactly, but branch interference adds a
        # QP correlation on the unmeasured mode:
        # Γ'_QP = -2ab·tanh(z)/(√cosh(z)·(a² + b²)) with a = √(1-p)e^{-r²/2},
        # b = √p; every other off-diagonal entry vanishes.
        a_sq, d_post, gamma_post, convex = self._post_moments(p, r, z)
        expected_d = np.array([np.sqrt(2.0) * r, 0.0, 0.0, 0.0])
        assert np.max(np.abs(d_post - expected_d)) < 1e-9, f"centers {d_post}"
        assert np.max(np.abs(np.diag(gamma_post) - np.diag(convex))) < 1e-9, (
            "diagonal variances must follow the convex combination")
        a = np.sqrt(1.0 - p) * np.exp(-r ** 2 / 2.0)
        b = np.sqrt(p)
        cross = -2.0 * a * b * np.tanh(z) / (np.sqrt(np.cosh(z)) * (a ** 2 + b ** 2))
        expected = convex.copy()
        expected[2, 3] = expected[3, 2] = cross
        assert np.max(np.abs(gamma_post - expected)) < 1e-9, (
            f"interference defect {np.max(np.abs(gamma_post - expected))}")
