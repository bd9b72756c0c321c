"""Average fidelities for a statistically homogeneous random medium.

White-noise density fluctuations, treated in the diffusion approximation.
The averages factor into the same photon weight N(g) as the uniform medium
times a g-independent angular integral:

    <F_erasure>(g)   = (p r^2 / 4 pi) e^{-2c}/(1 - e^{-4c}) N(g) I_2^-(lam)
    <F_dephasing>(g) = (r^2 / (2 pi)^6) e^{-2c}/(1 - e^{-4c}) N(g) I_2^-(lam)

with r = lam/sigma and c = r^2.  I_2^- is log-divergent at coincident
directions and is regularized by the chord cutoff eps, which therefore
rescales the raw averages (they are reported together with eps and may
exceed 1); the normalized fidelity <F>(g)/<F>(0) = N(g) is exactly
eps-independent.  The correlation amplitude C0 does not appear in the final
formulas; it is retained in :class:`DisorderSpec` for forward compatibility
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import MediumParams, WavepacketSpec, weight_N
from .quadrature import AngularIntegralSpec, SphereRule, integral_I

__all__ = [
    "DisorderSpec",
    "avg_fidelity_erasure_diffusion",
    "avg_fidelity_dephasing_diffusion",
    "diffusion_angular_integral",
]


@dataclass(frozen=True)
class DisorderSpec:
    """White-noise disorder with delta-correlated density fluctuations."""

    model: str = "white-noise"
    c0: float = 0.0

    def __post_init__(self):
        if self.model != "white-noise":
            raise ValueError(f"only the white-noise model is supported, got {self.model!r}")
        if self.c0 < 0:
            raise ValueError(f"correlation amplitude C0 must be nonnegative, got {self.c0}")


def diffusion_angular_integral(
    wavepacket: WavepacketSpec, rule: SphereRule, cutoff_eps: float
) -> float:
    """I_2^- at ratio lam/sigma with the explicit chord cutoff."""
    spec = AngularIntegralSpec(
        n=2,
        sign="-",
        lambda_over_sigma=wavepacket.lam_over_sigma,
        k0_hat=wavepacket.k0_hat,
        cutoff_eps=cutoff_eps,
    )
    return integral_I(spec, rule)


def _diffusion_prefactor(wavepacket: WavepacketSpec) -> float:
    r = wavepacket.lam_over_sigma
    c = r * r
    return r * r * math.exp(-2.0 * c) / (1.0 - math.exp(-4.0 * c))


def avg_fidelity_erasure_diffusion(
    g: float,
    p: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
    rule: SphereRule,
    cutoff_eps: float = 1e-3,
) -> float:
    """Disorder-averaged erasure fidelity; linear in p, proportional to N(g)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"transmission rate p must be in [0, 1], got {p}")
    i2m = diffusion_angular_integral(wavepacket, rule, cutoff_eps)
    return p / (4.0 * math.pi) * _diffusion_prefactor(wavepacket) * weight_N(
        wavepacket.k0_mag, g, medium
    ) * i2m


def avg_fidelity_dephasing_diffusion(
    g: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
    rule: SphereRule,
    cutoff_eps: float = 1e-3,
) -> float:
    """Disorder-averaged dephasing fidelity; a fixed multiple of the erasure average."""
    i2m = diffusion_angular_integral(wavepacket, rule, cutoff_eps)
    return (
        1.0 / (2.0 * math.pi) ** 6
        * _diffusion_prefactor(wavepacket)
        * weight_N(wavepacket.k0_mag, g, medium)
        * i2m
    )
