"""Dispersion, photon weight and excitation probability.

Frozen expected values were computed independently with mpmath at 40 digits
from the closed forms (and cross-checked against the algebraic identity
N = 1/2 + delta / (2 sqrt(delta^2 + 4 g^2 n0)), delta = omega - c k).
"""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonmedium import (
    BranchDomainWarning,
    MediumParams,
    WavepacketSpec,
    dispersion,
    dispersion_omega,
    excitation_probability,
    weight_N,
)

# mpmath-frozen references (kmag = 0.5, g = 1, c = omega = n0 = 1)
OMEGA_HALF_G1 = -0.28077640640441513746
N_HALF_G1 = 0.62126781251816648676
EXC_HALF_G1 = 0.37873218748183351324
N_HALF_G10 = 0.51249609558010153443
N_HALF_G1000 = 0.50012499999609375018


class TestDispersionOmega:
    def test_zero_coupling_consistency(self):
        assert dispersion_omega(0.5, 0.0) == pytest.approx(0.5, abs=1e-15)

    def test_closed_form_value(self):
        assert dispersion_omega(0.5, 1.0) == pytest.approx(OMEGA_HALF_G1, abs=1e-15)
        # the printed form, evaluated directly
        assert dispersion_omega(0.5, 1.0) == pytest.approx((1.5 - math.sqrt(4.25)) / 2, abs=0)

    def test_strong_coupling_asymptote(self):
        # omega - Omega ~ -g sqrt(n0) at leading order
        g = 1e3
        detune = dispersion_omega(0.5, g) - 1.0
        assert abs(detune / (-g) - 1.0) < 1e-2

    def test_zero_coupling_consistency_across_band(self):
        for kmag in np.linspace(0.01, 0.99, 23):
            w = dispersion_omega(float(kmag), 0.0)
            assert abs(w - kmag) <= 4 * np.finfo(float).eps

    def test_rejects_negative_inputs(self):
        with pytest.raises(ValueError):
            dispersion_omega(-0.1, 1.0)
        with pytest.raises(ValueError):
            dispersion_omega(0.5, -1.0)

    def test_warns_beyond_resonance(self):
        with pytest.warns(BranchDomainWarning):
            dispersion_omega(1.5, 0.5)
        with pytest.warns(BranchDomainWarning):
            dispersion_omega(1.0, 0.5)  # boundary included

    def test_no_warning_inside_domain(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            dispersion_omega(0.5, 2.0)


class TestWeightN:
    def test_unit_weight_without_coupling(self):
        assert weight_N(0.5, 0.0) == 1.0

    def test_frozen_value(self):
        assert weight_N(0.5, 1.0) == pytest.approx(N_HALF_G1, abs=1e-15)

    def test_identity_form(self):
        # N = 1/2 + delta/(2 sqrt(delta^2 + 4 g^2 n0)) on the validated domain
        for g in [1e-3, 0.3, 1.0, 7.0, 1e3]:
            delta = 0.5
            expected = 0.5 + delta / (2.0 * math.sqrt(delta * delta + 4.0 * g * g))
            assert weight_N(0.5, g) == pytest.approx(expected, rel=1e-14)

    def test_strong_coupling_floor(self):
        assert abs(weight_N(0.5, 1e3) - 0.5) < 1e-3
        assert weight_N(0.5, 1e3) == pytest.approx(N_HALF_G1000, rel=1e-14)

    def test_monotone_decreasing_on_geometric_grid(self):
        gs = np.geomspace(1e-3, 1e3, 121)
        ns = [weight_N(0.5, float(g)) for g in gs]
        assert all(a > b for a, b in zip(ns, ns[1:]))

    def test_bounds(self):
        for g in np.geomspace(1e-4, 1e4, 33):
            n = weight_N(0.5, float(g))
            assert 0.5 < n <= 1.0

    def test_rejects_resonant_frequency(self):
        # c k = omega puts omega(k, 0) exactly on resonance
        with pytest.warns(BranchDomainWarning):
            with pytest.raises(ValueError, match="resonance"):
                weight_N(1.0, 0.0)

    def test_scale_invariance(self):
        # g -> g/s, n0 -> s^2 n0 leaves N unchanged
        for s in [0.5, 2.0, 7.0]:
            n_ref = weight_N(0.5, 1.3, MediumParams(n0=1.0))
            n_scaled = weight_N(0.5, 1.3 / s, MediumParams(n0=s * s))
            assert n_scaled == pytest.approx(n_ref, abs=1e-12)


class TestExcitationProbability:
    def test_zero_at_zero_coupling(self):
        assert excitation_probability(0.5, 0.0) == 0.0

    def test_frozen_value(self):
        assert excitation_probability(0.5, 1.0) == pytest.approx(EXC_HALF_G1, abs=1e-15)

    def test_strong_coupling_limit(self):
        assert excitation_probability(0.5, 1e3) == pytest.approx(0.5, abs=1e-3)

    def test_conservation(self):
        for g in [0.0, 0.1, 1.0, 10.0, 1e3]:
            total = weight_N(0.5, g) + excitation_probability(0.5, g)
            assert abs(total - 1.0) <= 2 * np.finfo(float).eps


@given(
    kmag=st.floats(min_value=1e-3, max_value=0.99),
    g=st.floats(min_value=0.0, max_value=1e3),
)
@settings(max_examples=200, deadline=None)
def test_weight_properties(kmag, g):
    res = dispersion(kmag, g)
    assert 0.5 < res.n_weight <= 1.0
    if g == 0.0:
        assert res.n_weight == 1.0
    elif g > 1e-6:  # below that, g^2 n0 underflows next to |omega-Omega|^2
        assert res.n_weight < 1.0
    exc = excitation_probability(kmag, g)
    assert abs(res.n_weight + exc - 1.0) <= 2 * np.finfo(float).eps


class TestTypes:
    def test_medium_validation(self):
        with pytest.raises(ValueError):
            MediumParams(c=0.0)
        with pytest.raises(ValueError):
            MediumParams(n0=-1.0)
        assert MediumParams.from_dimensionless_density(2.0).n0 == 2.0

    def test_gbar_conversion(self):
        m = MediumParams(n0=4.0)
        assert m.gbar_to_g(1.0) == pytest.approx(0.5)
        # N depends on g only through g^2 n0, so equal gbar means equal N
        assert weight_N(0.5, m.gbar_to_g(1.0), m) == pytest.approx(
            weight_N(0.5, 1.0, MediumParams()), rel=1e-14
        )

    def test_wavepacket_validation(self):
        with pytest.raises(ValueError):
            WavepacketSpec(k0_hat=(1.0, 0.1, 0.0))
        with pytest.raises(ValueError):
            WavepacketSpec(sigma=0.0)
        with pytest.raises(ValueError):
            WavepacketSpec(k0_mag=-0.5)
        wp = WavepacketSpec()
        assert wp.lam == wp.k0_mag
        assert wp.lam_over_sigma == pytest.approx(2.0)

    def test_dispersion_result_fields(self):
        res = dispersion(0.5, 1.0)
        assert res.omega == pytest.approx(OMEGA_HALF_G1, abs=1e-15)
        assert res.a_ratio == pytest.approx(1.0 / (OMEGA_HALF_G1 - 1.0), rel=1e-14)
