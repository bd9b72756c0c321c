"""Diffusion-approximation average fidelities for the white-noise medium."""

import math

import pytest

from photonmedium import (
    AngularIntegralSpec,
    DisorderSpec,
    avg_fidelity_dephasing_diffusion,
    avg_fidelity_erasure_diffusion,
    integral_I,
    integral_I_monte_carlo,
    weight_N,
)

GBARS = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]


class TestDisorderSpec:
    def test_white_noise_only(self):
        DisorderSpec()
        with pytest.raises(ValueError):
            DisorderSpec(model="gaussian-correlated")
        with pytest.raises(ValueError):
            DisorderSpec(c0=-1.0)

    def test_c0_does_not_enter_the_averages(self, medium, wavepacket, rule30):
        # C0 is absent from the final formulas; the averages depend only on
        # the wavepacket, the coupling and the cutoff
        a = avg_fidelity_erasure_diffusion(1.0, 1.0, medium, wavepacket, rule30)
        assert a == avg_fidelity_erasure_diffusion(1.0, 1.0, medium, wavepacket, rule30)


class TestErasureDiffusion:
    def test_normalized_is_weight_exactly(self, medium, wavepacket, rule30):
        f0 = avg_fidelity_erasure_diffusion(0.0, 1.0, medium, wavepacket, rule30)
        for g in GBARS[1:]:
            fg = avg_fidelity_erasure_diffusion(g, 1.0, medium, wavepacket, rule30)
            assert fg / f0 == pytest.approx(weight_N(wavepacket.k0_mag, g, medium), rel=1e-13)

    def test_p_linearity(self, medium, wavepacket, rule30):
        half = avg_fidelity_erasure_diffusion(0.7, 0.4, medium, wavepacket, rule30)
        full = avg_fidelity_erasure_diffusion(0.7, 0.8, medium, wavepacket, rule30)
        assert full == pytest.approx(2.0 * half, rel=1e-14)

    def test_baseline_assembly_and_mc_cross_check(self, medium, wavepacket, rule30):
        eps = 1e-3
        ratio = wavepacket.lam_over_sigma
        spec = AngularIntegralSpec(
            n=2, sign="-", lambda_over_sigma=ratio, k0_hat=wavepacket.k0_hat, cutoff_eps=eps
        )
        i2m = integral_I(spec, rule30)
        mc = integral_I_monte_carlo(spec, samples=10**6, seed=20260801)
        assert abs(i2m - mc.estimate) < 3.0 * mc.std_error
        c = ratio * ratio
        prefactor = ratio * ratio / (4.0 * math.pi) * math.exp(-2.0 * c) / (1.0 - math.exp(-4.0 * c))
        got = avg_fidelity_erasure_diffusion(0.0, 1.0, medium, wavepacket, rule30, cutoff_eps=eps)
        assert got == pytest.approx(prefactor * i2m, rel=1e-13)

    def test_monotone_decreasing(self, medium, wavepacket, rule30):
        vals = [
            avg_fidelity_erasure_diffusion(g, 1.0, medium, wavepacket, rule30) for g in GBARS
        ]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestDephasingDiffusion:
    def test_normalized_is_weight_exactly(self, medium, wavepacket, rule30):
        f0 = avg_fidelity_dephasing_diffusion(0.0, medium, wavepacket, rule30)
        for g in GBARS[1:]:
            fg = avg_fidelity_dephasing_diffusion(g, medium, wavepacket, rule30)
            assert fg / f0 == pytest.approx(weight_N(wavepacket.k0_mag, g, medium), rel=1e-13)

    def test_constant_ratio_to_erasure(self, medium, wavepacket, rule30):
        # <F_dephasing>/<F_erasure,p> = 4 pi / (p (2 pi)^6), independent of g
        p = 0.6
        expected = 4.0 * math.pi / (p * (2.0 * math.pi) ** 6)
        for g in GBARS:
            fc = avg_fidelity_dephasing_diffusion(g, medium, wavepacket, rule30)
            fe = avg_fidelity_erasure_diffusion(g, p, medium, wavepacket, rule30)
            assert fc / fe == pytest.approx(expected, rel=1e-12)

    def test_monotone_decreasing(self, medium, wavepacket, rule30):
        vals = [avg_fidelity_dephasing_diffusion(g, medium, wavepacket, rule30) for g in GBARS]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestCutoffDependence:
    def test_normalized_is_cutoff_independent(self, medium, wavepacket, rule30):
        for eps in (1e-2, 1e-3, 1e-4):
            f0 = avg_fidelity_erasure_diffusion(
                0.0, 1.0, medium, wavepacket, rule30, cutoff_eps=eps
            )
            f1 = avg_fidelity_erasure_diffusion(
                1.0, 1.0, medium, wavepacket, rule30, cutoff_eps=eps
            )
            assert f1 / f0 == pytest.approx(
                weight_N(wavepacket.k0_mag, 1.0, medium), rel=1e-12
            )

    def test_raw_values_are_cutoff_sensitive(self, medium, wavepacket, rule30):
        coarse = avg_fidelity_erasure_diffusion(
            1.0, 1.0, medium, wavepacket, rule30, cutoff_eps=1e-2
        )
        fine = avg_fidelity_erasure_diffusion(
            1.0, 1.0, medium, wavepacket, rule30, cutoff_eps=1e-3
        )
        assert fine > coarse  # more of the log-divergent core is included
        assert abs(fine / coarse - 1.0) > 0.01


def test_baseline_depends_on_scale_ratio_only(medium, rule30):
    # joint rescale (lam, sigma) -> (t lam, t sigma) leaves the g = 0 average unchanged
    from photonmedium import WavepacketSpec

    a = WavepacketSpec(k0_mag=0.5, sigma=0.25)
    b = WavepacketSpec(k0_mag=0.25, sigma=0.125)
    fa = avg_fidelity_dephasing_diffusion(0.0, medium, a, rule30)
    fb = avg_fidelity_dephasing_diffusion(0.0, medium, b, rule30)
    assert fb == pytest.approx(fa, rel=1e-12)
