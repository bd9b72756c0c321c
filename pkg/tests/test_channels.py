"""Channel fidelities: closed forms, universality, and the two numeric oracles.

Frozen constants come from 40-digit mpmath evaluation of the closed forms.
"""

import math

import numpy as np
import pytest

from photonmedium import (
    CompletelyDephasing,
    Depolarizing,
    Erasure,
    FidelityPoint,
    fidelity_dephasing_uniform,
    fidelity_depolarizing_uniform,
    fidelity_erasure_uniform,
    normalized_fidelity,
    numeric_overlap_dephasing,
    numeric_overlap_fidelity,
    weight_N,
)
from photonmedium.channels import QuarticGrid, RuleTooCoarseError, dephasing_prefactor
from photonmedium.quadrature import make_sphere_rule

N_G1 = 0.62126781251816648676
DEPOL_NORM_G1 = 0.69701425001453318941  # p = 0.5, alpha = 4
SWEEP_GBARS = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]

COARSE_GRID = QuarticGrid(r_max=200.0, dr=0.2, polar_points=96)


class TestChannelSpecs:
    def test_validation(self):
        with pytest.raises(ValueError):
            Erasure(p=1.5)
        with pytest.raises(ValueError):
            CompletelyDephasing(volume=0.0)
        with pytest.raises(ValueError):
            Depolarizing(p=0.5, alpha=0.0)
        with pytest.raises(ValueError):
            Depolarizing(p=-0.1, alpha=4.0)

    def test_labels_are_csv_safe(self):
        for ch in (Erasure(0.3), CompletelyDephasing(), Depolarizing(0.5, 4.0)):
            assert "," not in ch.label()


class TestErasureUniform:
    def test_baseline(self, medium, wavepacket):
        assert fidelity_erasure_uniform(0.0, 0.7, medium, wavepacket) == pytest.approx(0.7, abs=0)

    def test_weighted_value(self, medium, wavepacket):
        assert fidelity_erasure_uniform(1.0, 1.0, medium, wavepacket) == pytest.approx(
            N_G1, abs=1e-15
        )

    def test_strong_coupling_floor(self, medium, wavepacket):
        assert fidelity_erasure_uniform(1e3, 1.0, medium, wavepacket) == pytest.approx(
            0.5, abs=1e-3
        )

    def test_monotone_decreasing(self, medium, wavepacket):
        vals = [fidelity_erasure_uniform(g, 0.8, medium, wavepacket) for g in SWEEP_GBARS]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestDephasingUniform:
    def test_normalized_is_weight(self, medium, wavepacket, rule30):
        f0 = fidelity_dephasing_uniform(0.0, medium, wavepacket, rule30)
        f1 = fidelity_dephasing_uniform(1.0, medium, wavepacket, rule30)
        # the g-independent prefactor cancels algebraically
        assert f1 / f0 == pytest.approx(N_G1, rel=1e-13)

    def test_baseline_is_prefactor_times_integral(self, medium, wavepacket, rule30):
        f0 = fidelity_dephasing_uniform(0.0, medium, wavepacket, rule30)
        assert f0 == pytest.approx(
            dephasing_prefactor(wavepacket)
            * 2938975.7267994660355,  # I_1^+ at ratio sqrt(2)*2 = 8 pi^2 Shi(16)/8, mpmath
            rel=1e-12,
        )
        assert 0.0 < f0 <= 1.0

    def test_matches_position_basis_oracle(self, medium, wavepacket, rule30):
        f0 = fidelity_dephasing_uniform(0.0, medium, wavepacket, rule30)
        oracle = numeric_overlap_dephasing(0.0, medium, wavepacket)
        assert oracle == pytest.approx(f0, rel=1e-4)

    def test_g1_value_is_product(self, medium, wavepacket, rule30):
        f0 = fidelity_dephasing_uniform(0.0, medium, wavepacket, rule30)
        f1 = fidelity_dephasing_uniform(1.0, medium, wavepacket, rule30)
        assert f1 == pytest.approx(N_G1 * f0, rel=1e-13)

    def test_baseline_depends_on_scale_ratio_only(self, medium, rule30):
        # joint rescale (lam, sigma) -> (t lam, t sigma) leaves F(0) unchanged
        from photonmedium import WavepacketSpec

        a = WavepacketSpec(k0_mag=0.5, sigma=0.25)
        b = WavepacketSpec(k0_mag=0.25, sigma=0.125)
        fa = fidelity_dephasing_uniform(0.0, medium, a, rule30)
        fb = fidelity_dephasing_uniform(0.0, medium, b, rule30)
        assert fb == pytest.approx(fa, rel=1e-12)


class TestDepolarizingUniform:
    def test_baseline(self, medium, wavepacket):
        assert fidelity_depolarizing_uniform(0.0, 0.5, 4.0, medium, wavepacket) == pytest.approx(
            0.625, abs=0
        )

    def test_normalized_deviates_from_weight(self, medium, wavepacket):
        ch = Depolarizing(p=0.5, alpha=4.0)
        norm = normalized_fidelity(ch, 1.0, medium, wavepacket)
        assert norm == pytest.approx(DEPOL_NORM_G1, abs=1e-15)
        assert norm - N_G1 > 0.07

    def test_alpha_limit_restores_universality(self, medium, wavepacket):
        for g in (0.5, 1.0, 5.0):
            n = weight_N(wavepacket.k0_mag, g, medium)
            gaps = []
            for alpha in (1e2, 1e4, 1e6):
                ch = Depolarizing(p=0.5, alpha=alpha)
                gap = normalized_fidelity(ch, g, medium, wavepacket) - n
                baseline = 0.5 + 0.5 / alpha
                assert 0.0 < gap <= 0.5 / (alpha * baseline) + 1e-15
                gaps.append(gap)
            slope = np.polyfit(np.log([1e2, 1e4, 1e6]), np.log(gaps), 1)[0]
            assert slope == pytest.approx(-1.0, abs=0.05)


class TestNormalizedFidelity:
    @pytest.mark.parametrize("p", [0.3, 0.5, 1.0])
    def test_erasure_p_cancels(self, medium, wavepacket, p):
        assert normalized_fidelity(Erasure(p), 1.0, medium, wavepacket) == pytest.approx(
            N_G1, abs=1e-15
        )

    def test_dephasing_equals_erasure(self, medium, wavepacket):
        for g in SWEEP_GBARS:
            n_erasure = normalized_fidelity(Erasure(0.3), g, medium, wavepacket)
            n_dephasing = normalized_fidelity(CompletelyDephasing(), g, medium, wavepacket)
            n_exact = weight_N(wavepacket.k0_mag, g, medium)
            assert n_erasure == n_exact
            assert n_dephasing == n_exact

    def test_universal_bounds(self, medium, wavepacket):
        for g in SWEEP_GBARS:
            n = normalized_fidelity(CompletelyDephasing(), g, medium, wavepacket)
            assert 0.5 < n <= 1.0

    def test_depolarizing_sits_above_weight(self, medium, wavepacket):
        ch = Depolarizing(p=0.5, alpha=4.0)
        for g in SWEEP_GBARS[1:]:
            n = weight_N(wavepacket.k0_mag, g, medium)
            assert normalized_fidelity(ch, g, medium, wavepacket) > n

    def test_monotone_decreasing_all_channels(self, medium, wavepacket):
        for ch in (Erasure(0.8), CompletelyDephasing(), Depolarizing(0.5, 4.0)):
            vals = [normalized_fidelity(ch, g, medium, wavepacket) for g in SWEEP_GBARS]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_zero_baseline_rejected(self, medium, wavepacket):
        with pytest.raises(ValueError, match="baseline"):
            normalized_fidelity(Erasure(0.0), 1.0, medium, wavepacket)


class TestOverlapOracle:
    def test_self_overlap(self, medium, wavepacket, rule30):
        assert numeric_overlap_fidelity(0.0, medium, wavepacket, rule30) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_reproduces_weight(self, medium, wavepacket, rule30):
        got = numeric_overlap_fidelity(1.0, medium, wavepacket, rule30)
        assert got == pytest.approx(N_G1, abs=1e-6)

    def test_strong_coupling(self, medium, wavepacket, rule30):
        assert numeric_overlap_fidelity(1e3, medium, wavepacket, rule30) == pytest.approx(
            0.5, abs=1e-3
        )

    def test_universality_within_tolerance(self, medium, wavepacket, rule30):
        for g in SWEEP_GBARS:
            got = numeric_overlap_fidelity(g, medium, wavepacket, rule30)
            assert got == pytest.approx(weight_N(wavepacket.k0_mag, g, medium), abs=1e-6)

    def test_rule_too_coarse_raises(self, medium, wavepacket):
        with pytest.raises(RuleTooCoarseError):
            numeric_overlap_fidelity(1.0, medium, wavepacket, make_sphere_rule(4))


class TestDephasingOracle:
    def test_ratio_reproduces_weight(self, medium, wavepacket):
        f0 = numeric_overlap_dephasing(0.0, medium, wavepacket, grid=COARSE_GRID)
        for g in (0.5, 1.0, 5.0):
            fg = numeric_overlap_dephasing(g, medium, wavepacket, grid=COARSE_GRID)
            assert fg / f0 == pytest.approx(weight_N(wavepacket.k0_mag, g, medium), abs=1e-6)

    def test_monotone_decreasing(self, medium, wavepacket):
        vals = [
            numeric_overlap_dephasing(g, medium, wavepacket, grid=COARSE_GRID)
            for g in SWEEP_GBARS
        ]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_volume_cancels(self, medium, wavepacket):
        a = numeric_overlap_dephasing(
            1.0, medium, wavepacket, channel=CompletelyDephasing(volume=1.0), grid=COARSE_GRID
        )
        b = numeric_overlap_dephasing(
            1.0, medium, wavepacket, channel=CompletelyDephasing(volume=37.0), grid=COARSE_GRID
        )
        assert b == pytest.approx(a, rel=1e-12)


class TestFidelityPoint:
    def test_valid_point(self):
        FidelityPoint(g=1.0, channel="erasure(p=1)", medium_kind="uniform",
                      fidelity=0.6, normalized=0.62)

    def test_uniform_fidelity_bounded(self):
        with pytest.raises(ValueError):
            FidelityPoint(g=1.0, channel="x", medium_kind="uniform",
                          fidelity=1.5, normalized=0.9)

    def test_diffusion_fidelity_may_exceed_one(self):
        # raw diffusion averages scale with |log eps| and are only physical
        # after normalization
        FidelityPoint(g=1.0, channel="x", medium_kind="random-diffusion",
                      fidelity=9.7, normalized=0.62, epsilon_used=1e-3)

    def test_normalized_bounds(self):
        with pytest.raises(ValueError):
            FidelityPoint(g=1.0, channel="x", medium_kind="uniform",
                          fidelity=0.5, normalized=0.0)
        with pytest.raises(ValueError):
            FidelityPoint(g=1.0, channel="x", medium_kind="bad-kind",
                          fidelity=0.5, normalized=0.5)
