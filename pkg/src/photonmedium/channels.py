"""Quantum channels acting on the medium-dressed photon state, uniform medium.

For a Gaussian wavepacket on the shell |k| = lam propagating through a
uniform medium, the mode shape is independent of the coupling g; only the
photon weight N(g) changes.  Closed forms:

    erasure       F(g) = p N(g)
    dephasing     F(g) = N(g) (lam/sigma)^5 (2 pi)^-5 e^{-4c}/(1-e^{-4c})^2 I_1^+(sqrt2 lam)
    depolarizing  F(g) = p N(g) + (1 - p)/alpha

with c = lam^2/sigma^2 and I_1^+ evaluated at ratio sqrt(2) lam/sigma.  The
normalized fidelity F(g)/F(0) equals N(g) for erasure and dephasing (any p),
while depolarizing deviates through its mixed-state floor and only recovers
N(g) as alpha -> infinity.

Two independent numeric oracles re-derive these from discretizations that do
not share code with the closed forms: a mode-sum overlap on sphere-rule nodes
(:func:`numeric_overlap_fidelity`) and a real-space quartic integral on an
(r, cos theta) grid (:func:`numeric_overlap_dephasing`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import simpson

from .core import MediumParams, WavepacketSpec, weight_N
from .quadrature import AngularIntegralSpec, SphereRule, integral_I

__all__ = [
    "Erasure",
    "CompletelyDephasing",
    "Depolarizing",
    "ChannelSpec",
    "FidelityPoint",
    "RuleTooCoarseError",
    "QuarticGrid",
    "fidelity_erasure_uniform",
    "fidelity_dephasing_uniform",
    "fidelity_depolarizing_uniform",
    "normalized_fidelity",
    "numeric_overlap_fidelity",
    "numeric_overlap_dephasing",
    "dephasing_prefactor",
]


class RuleTooCoarseError(RuntimeError):
    """The sphere rule fails to reproduce the analytic wavepacket norm."""


@dataclass(frozen=True)
class Erasure:
    """Transmit with probability p, otherwise output vacuum."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"transmission rate p must be in [0, 1], got {self.p}")

    def label(self) -> str:
        return f"erasure(p={self.p:g})"


@dataclass(frozen=True)
class CompletelyDephasing:
    """Remove all position-basis off-diagonals.

    ``volume`` is the quantization volume appearing in the channel
    definition; it cancels against the state normalization in every fidelity
    and is carried only for interface completeness.
    """

    volume: float = 1.0

    def __post_init__(self):
        if not self.volume > 0:
            raise ValueError(f"volume must be positive, got {self.volume}")

    def label(self) -> str:
        return "dephasing"


@dataclass(frozen=True)
class Depolarizing:
    """Transmit with probability p, otherwise output the band-limited mixed state.

    ``alpha`` is the trace of the band-limited identity (the dimension count
    of the mixed state); ``band_limit_length`` fixes the wavenumber ceiling
    2 pi / band_limit_length and is used by the capacity grid, not by the
    fidelity, where only alpha enters.
    """

    p: float
    alpha: float
    band_limit_length: float = 4.0 * math.pi

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"transmission rate p must be in [0, 1], got {self.p}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.band_limit_length > 0:
            raise ValueError(f"band_limit_length must be positive, got {self.band_limit_length}")

    def label(self) -> str:
        return f"depolarizing(p={self.p:g};alpha={self.alpha:g})"


ChannelSpec = Union[Erasure, CompletelyDephasing, Depolarizing]


@dataclass(frozen=True)
class FidelityPoint:
    """One sweep sample: raw and normalized fidelity of a channel at coupling g."""

    g: float
    channel: str
    medium_kind: str
    fidelity: float
    normalized: float
    epsilon_used: float | None = None

    def __post_init__(self):
        if self.medium_kind not in ("uniform", "random-diffusion"):
            raise ValueError(f"unknown medium_kind {self.medium_kind!r}")
        if self.fidelity < 0:
            raise ValueError(f"fidelity must be nonnegative, got {self.fidelity}")
        # The [0,1] bound is provable for the uniform medium.  Diffusion
        # averages carry an arbitrary log(eps) factor and are only physical
        # after normalization, so we do not bound them.
        if self.medium_kind == "uniform" and self.fidelity > 1.0 + 1e-12:
            raise ValueError(f"uniform-medium fidelity exceeds 1: {self.fidelity}")
        if not 0.0 < self.normalized <= 1.0 + 1e-12:
            raise ValueError(f"normalized fidelity must be in (0, 1], got {self.normalized}")


def _wavepacket_c(wavepacket: WavepacketSpec) -> float:
    r = wavepacket.lam_over_sigma
    return r * r


def fidelity_erasure_uniform(
    g: float, p: float, medium: MediumParams, wavepacket: WavepacketSpec
) -> float:
    """Erasure-channel fidelity p * N(g); at p = 1 this is the identity-channel fidelity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"transmission rate p must be in [0, 1], got {p}")
    return p * weight_N(wavepacket.k0_mag, g, medium)


def dephasing_prefactor(wavepacket: WavepacketSpec) -> float:
    """g-independent prefactor of the dephasing fidelity (everything except N and I_1^+)."""
    ratio = wavepacket.lam_over_sigma
    c = ratio * ratio
    e4 = math.exp(-4.0 * c)
    return ratio**5 / (2.0 * math.pi) ** 5 * e4 / (1.0 - e4) ** 2


def fidelity_dephasing_uniform(
    g: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
    rule: SphereRule,
    cutoff_eps: float = 0.0,
) -> float:
    """Dephasing-channel fidelity: N(g) times a fixed overlap of the wavepacket with itself.

    The angular integral is I_1^+ at ratio sqrt(2) * lam/sigma (the doubled
    exponent of the squared amplitudes).
    """
    spec = AngularIntegralSpec(
        n=1,
        sign="+",
        lambda_over_sigma=math.sqrt(2.0) * wavepacket.lam_over_sigma,
        k0_hat=wavepacket.k0_hat,
        cutoff_eps=cutoff_eps,
    )
    i1p = integral_I(spec, rule)
    return weight_N(wavepacket.k0_mag, g, medium) * dephasing_prefactor(wavepacket) * i1p


def fidelity_depolarizing_uniform(
    g: float,
    p: float,
    alpha: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
) -> float:
    """Depolarizing-channel fidelity p * N(g) + (1 - p)/alpha."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"transmission rate p must be in [0, 1], got {p}")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return p * weight_N(wavepacket.k0_mag, g, medium) + (1.0 - p) / alpha


def normalized_fidelity(
    channel: ChannelSpec,
    g: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
) -> float:
    """F(g)/F(0), computed analytically per channel (never as a quotient of quadratures).

    Erasure and dephasing collapse onto the photon weight N(g) exactly; the
    depolarizing channel keeps its mixed-state floor:

        (p N(g) + (1-p)/alpha) / (p + (1-p)/alpha)
    """
    n = weight_N(wavepacket.k0_mag, g, medium)
    if isinstance(channel, Erasure):
        if channel.p == 0.0:
            raise ValueError("erasure with p = 0 has zero baseline fidelity")
        return n
    if isinstance(channel, CompletelyDephasing):
        return n
    if isinstance(channel, Depolarizing):
        baseline = channel.p + (1.0 - channel.p) / channel.alpha
        if baseline == 0.0:
            raise ValueError("depolarizing baseline fidelity is zero")
        return (channel.p * n + (1.0 - channel.p) / channel.alpha) / baseline
    raise TypeError(f"unknown channel {channel!r}")


# ---------------------------------------------------------------------------
# numeric oracles
# ---------------------------------------------------------------------------

def _shell_norm_integral(c: float) -> float:
    """Analytic angular norm of the shell amplitude: int dkhat e^{2c(u-1)} = pi (1-e^{-4c})/c."""
    if c == 0.0:
        return 4.0 * math.pi
    return math.pi * (1.0 - math.exp(-4.0 * c)) / c


def numeric_overlap_fidelity(
    g: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
    rule: SphereRule,
    norm_tol: float = 1e-8,
) -> float:
    """Identity-channel fidelity |sum_i w_i psi_0(khat_i) psi_g(khat_i)|^2 on rule nodes.

    Node amplitudes are scaled by the analytic norm so that
    sum_i w_i |psi_g|^2 = N(g) up to rule error; if the discrete norm misses
    N(g) by more than ``norm_tol`` the rule is rejected as too coarse.  For
    the uniform medium the mode shape is g-independent, so the result must
    reproduce N(g); the residual measures pure discretization error.
    """
    c = _wavepacket_c(wavepacket)
    mu = rule.nodes @ wavepacket.direction()
    shape = np.exp(c * (mu - 1.0))
    n_g = weight_N(wavepacket.k0_mag, g, medium)
    norm = _shell_norm_integral(c)
    psi_0 = np.sqrt(1.0 / norm) * shape           # N(0) = 1
    psi_g = np.sqrt(n_g / norm) * shape
    discrete = float(rule.weights @ (psi_g * psi_g))
    if abs(discrete - n_g) > norm_tol:
        raise RuleTooCoarseError(
            f"rule order {rule.order}: discrete wavepacket norm {discrete!r} misses "
            f"N(g) = {n_g!r} by {abs(discrete - n_g):.3e} (> {norm_tol:.1e})"
        )
    overlap = float(rule.weights @ (psi_0 * psi_g))
    return overlap * overlap


@dataclass(frozen=True)
class QuarticGrid:
    """Real-space grid for the quartic position integral.

    ``r_max`` truncates the radial integral (an analytic oscillation-averaged
    O(1/r_max) tail is added back); ``dr`` must resolve the radial
    oscillation of wavelength pi/lam; ``polar_points`` is the Gauss-Legendre
    count in cos(theta).
    """

    r_max: float = 800.0
    dr: float = 0.1
    polar_points: int = 160

    def __post_init__(self):
        if not (self.r_max > 0 and self.dr > 0 and self.polar_points >= 8):
            raise ValueError("invalid quartic grid")


def _shell_field(r: np.ndarray, u: np.ndarray, c: float, lam: float) -> np.ndarray:
    """Wavepacket field E(x) = int dkhat e^{c(khat.k0hat - 1)} e^{i lam khat.x}.

    Closed shell integral: 4 pi e^{-c} sinh(W)/W with
    W = sqrt(c^2 - lam^2 r^2 + 2 i c lam r u); evaluated exp-scaled so the
    e^{-c} damping never overflows.
    """
    rr, uu = np.meshgrid(r, u, indexing="ij")
    w2 = (c * c - lam * lam * rr * rr).astype(complex)
    w2 += 2j * c * lam * rr * uu
    w = np.sqrt(w2)
    small = np.abs(w) < 1e-8
    safe_w = np.where(small, 1.0, w)
    series = np.exp(-c) * (1.0 + w2 / 6.0)       # sinh(W)/W ~ 1 + W^2/6 near 0
    full = (np.exp(w - c) - np.exp(-w - c)) / (2.0 * safe_w)
    return 4.0 * np.pi * np.where(small, series, full)


def _quartic_tail(c: float, lam: float, r_max: float) -> float:
    """Oscillation-averaged tail of int d3x |E|^4 beyond r_max.

    Large-r asymptotics: |E|^2 -> (4 pi)^2 e^{-2c} (sinh^2(cu) + sin^2(lam r)) / (lam r)^2,
    and the phase average of (sinh^2 + sin^2)^2 is sinh^4 + sinh^2 + 3/8.
    """
    def cosh_int(k: float) -> float:
        return 2.0 * math.sinh(k) / k if k != 0 else 2.0

    i_s2 = 0.5 * (cosh_int(2.0 * c) - 2.0)
    i_s4 = (cosh_int(4.0 * c) - 4.0 * cosh_int(2.0 * c) + 6.0) / 8.0
    angular = i_s4 + i_s2 + 0.75
    return 2.0 * math.pi * (4.0 * math.pi) ** 4 * math.exp(-4.0 * c) / lam**4 * angular / r_max


def quartic_position_integral(
    wavepacket: WavepacketSpec, grid: QuarticGrid = QuarticGrid()
) -> float:
    """int d3x |E(x)|^4 for the shell wavepacket, by (r, cos theta) quadrature."""
    c = _wavepacket_c(wavepacket)
    lam = wavepacket.lam
    u, wu = np.polynomial.legendre.leggauss(grid.polar_points)
    nr = int(round(grid.r_max / grid.dr))
    r = np.linspace(0.0, grid.r_max, nr + 1)
    e = _shell_field(r, u, c, lam)
    quart = np.abs(e) ** 4
    radial = 2.0 * math.pi * r * r * (quart @ wu)
    return float(simpson(radial, x=r)) + _quartic_tail(c, lam, grid.r_max)


def numeric_overlap_dephasing(
    g: float,
    medium: MediumParams,
    wavepacket: WavepacketSpec,
    channel: CompletelyDephasing = CompletelyDephasing(),
    grid: QuarticGrid = QuarticGrid(),
) -> float:
    """Dephasing fidelity from the position-basis integral (V/(2 pi)^3) int |psi_0|^2 |psi_g|^2.

    The photon amplitude is psi_g(x) = sqrt(N(g)) C E(x) with the
    delta-normalized-state convention C^2 = lam^4 / (sqrt(V) sigma^{5/2}
    (2 pi)^3 (1 - e^{-4c})); the channel volume V then cancels exactly, which
    is why the closed form carries no V.  Completely independent of the
    sphere-quadrature route: the only shared ingredient is the wavepacket
    itself.
    """
    c = _wavepacket_c(wavepacket)
    lam = wavepacket.lam
    volume = channel.volume
    n_g = weight_N(wavepacket.k0_mag, g, medium)
    quart = quartic_position_integral(wavepacket, grid)
    c_sq = lam**4 / (
        math.sqrt(volume) * wavepacket.sigma**2.5 * (2.0 * math.pi) ** 3 * (1.0 - math.exp(-4.0 * c))
    )
    return volume / (2.0 * math.pi) ** 3 * n_g * c_sq * c_sq * quart
