"""Dimensionless model of a photon coupled to a two-level atomic medium.

Everything is expressed in units with c = Omega = 1 by default; the medium
is characterized by the mean atomic density n0 (set through c^3 n0 / Omega^3)
and the light-matter coupling g.  The single-excitation eigenproblem for a
plane-wave mode of wavenumber k has the lower-branch eigenfrequency

    omega(k, g) = (Omega + c k - sqrt((Omega - c k)^2 + 4 g^2 n0)) / 2

and the probability that the excitation resides in the field (rather than in
the atoms) is

    N(g) = |omega - Omega|^2 / (|omega - Omega|^2 + g^2 n0).

N(g) is the quantity all normalized channel fidelities collapse onto.  For
c k < Omega it decreases strictly from 1 (at g = 0) towards the strong
coupling floor 1/2 and never reaches it at finite g.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BranchDomainWarning",
    "MediumParams",
    "WavepacketSpec",
    "DispersionResult",
    "dispersion",
    "dispersion_omega",
    "weight_N",
    "excitation_probability",
]


class BranchDomainWarning(UserWarning):
    """The lower dispersion branch loses its g -> 0 consistency for c*k >= Omega.

    On that side the closed form returns Omega instead of c*k at zero
    coupling.  Results are still the literal formula; they are just outside
    the validated domain.
    """


@dataclass(frozen=True)
class MediumParams:
    """Atomic medium constants: speed of light, resonance frequency, density."""

    c: float = 1.0
    omega: float = 1.0
    n0: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and self.omega > 0 and self.n0 > 0):
            raise ValueError(
                f"medium parameters must be positive, got c={self.c}, "
                f"omega={self.omega}, n0={self.n0}"
            )

    @classmethod
    def from_dimensionless_density(cls, c3_n0_over_omega3: float) -> "MediumParams":
        """Build the c = omega = 1 medium with n0 fixed by c^3 n0 / omega^3."""
        if c3_n0_over_omega3 <= 0:
            raise ValueError("c^3 n0 / omega^3 must be positive")
        return cls(c=1.0, omega=1.0, n0=float(c3_n0_over_omega3))

    def gbar_to_g(self, gbar: float) -> float:
        """Convert the sweep parameter gbar = g sqrt(n0)/omega to a raw coupling."""
        return gbar * self.omega / math.sqrt(self.n0)


@dataclass(frozen=True)
class WavepacketSpec:
    """Gaussian wavepacket restricted to the shell |k| = k0_mag.

    The restriction makes the angular amplitude exp(-(lam^2/sigma^2)(1 - khat.k0hat))
    with the prefactor scale lam pinned to k0_mag; only the ratio lam/sigma
    enters any observable.
    """

    k0_hat: tuple[float, float, float] = (1.0, 0.0, 0.0)
    k0_mag: float = 0.5
    sigma: float = 0.25

    def __post_init__(self):
        h = np.asarray(self.k0_hat, dtype=float)
        if h.shape != (3,):
            raise ValueError("k0_hat must be a 3-vector")
        if abs(np.linalg.norm(h) - 1.0) > 1e-12:
            raise ValueError(f"k0_hat must be a unit vector, |k0_hat| = {np.linalg.norm(h)!r}")
        if not self.k0_mag > 0:
            raise ValueError("k0_mag must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        object.__setattr__(self, "k0_hat", (float(h[0]), float(h[1]), float(h[2])))

    @property
    def lam(self) -> float:
        """Prefactor scale, fixed equal to the shell radius k0_mag."""
        return self.k0_mag

    @property
    def lam_over_sigma(self) -> float:
        return self.k0_mag / self.sigma

    def direction(self) -> np.ndarray:
        return np.asarray(self.k0_hat, dtype=float)


@dataclass(frozen=True)
class DispersionResult:
    """Lower-branch eigenfrequency with its photon/atom excitation split."""

    omega: float
    n_weight: float
    a_ratio: float = field(default=float("nan"))


def _validate_inputs(kmag: float, g: float) -> None:
    if kmag < 0:
        raise ValueError(f"kmag must be nonnegative, got {kmag}")
    if g < 0:
        raise ValueError(f"g must be nonnegative, got {g}")


def dispersion_omega(kmag: float, g: float, medium: MediumParams = MediumParams()) -> float:
    """Lower-branch eigenfrequency omega(k, g).

    Warns with :class:`BranchDomainWarning` for c*kmag >= omega, where the
    zero-coupling limit of this branch is omega rather than c*kmag.
    """
    _validate_inputs(kmag, g)
    ck = medium.c * kmag
    if ck >= medium.omega:
        warnings.warn(
            f"c*kmag = {ck} >= omega = {medium.omega}: lower branch loses the "
            "omega(k, 0) = c|k| consistency on this side",
            BranchDomainWarning,
            stacklevel=2,
        )
    disc = (medium.omega - ck) ** 2 + 4.0 * g * g * medium.n0
    return 0.5 * (medium.omega + ck - math.sqrt(disc))


def dispersion(kmag: float, g: float, medium: MediumParams = MediumParams()) -> DispersionResult:
    """Eigenfrequency together with the photon weight N and the atomic ratio a/psi."""
    w = dispersion_omega(kmag, g, medium)
    detune = w - medium.omega
    if detune == 0.0:
        # Only reachable at g = 0 with c*kmag = omega; the photon/atom split
        # is ambiguous there.
        raise ValueError("omega coincides with the atomic resonance; weight undefined")
    a2 = detune * detune
    b2 = g * g * medium.n0
    n_weight = a2 / (a2 + b2)
    return DispersionResult(omega=w, n_weight=n_weight, a_ratio=g / detune)


def weight_N(kmag: float, g: float, medium: MediumParams = MediumParams()) -> float:
    """Photon-sector weight N(g) = |omega - Omega|^2 / (|omega - Omega|^2 + g^2 n0).

    Equals the normalized fidelity of the erasure and completely dephasing
    channels; bounded by 1/2 < N <= 1 on the validated domain c*kmag < omega.
    """
    return dispersion(kmag, g, medium).n_weight


def excitation_probability(kmag: float, g: float, medium: MediumParams = MediumParams()) -> float:
    """Probability g^2 n0 / (|omega - Omega|^2 + g^2 n0) that the atoms hold the excitation.

    Complements weight_N so the pair sums to 1 (probability conservation).
    """
    w = dispersion_omega(kmag, g, medium)
    detune = w - medium.omega
    if detune == 0.0:
        raise ValueError("omega coincides with the atomic resonance; weight undefined")
    a2 = detune * detune
    b2 = g * g * medium.n0
    return b2 / (a2 + b2)
