"""Holevo-information capacity estimates on a discretized wave-vector grid.

The continuum photon state space is truncated to d single-photon modes with
wavenumbers inside the band limit, plus the vacuum level, giving a
(d+1)-dimensional Hilbert space with basis ordering (mode_1, ..., mode_d,
vacuum).  The medium interaction damps each mode amplitude by
sqrt(N_k(g)) (mode-dependent photon weight) and routes the lost population
to the vacuum; the three channels act on top of that.  Capacity is estimated
by maximizing Holevo information over the probabilities of a fixed candidate
ensemble of basis states (a restricted-ensemble lower bound, reported as
such) with a Blahut-Arimoto-style multiplicative update.

By default the candidate alphabet is the d mode states only: the vacuum is
the erasure flag and keeping it out of the signal set reproduces the
standard erasure capacity p log2(d).  Setting
``CapacityConfig.include_vacuum_symbol`` adds the vacuum as a (d+1)-th
symbol (at g = 0 the dephasing channel then distinguishes d+1 symbols
perfectly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelSpec, CompletelyDephasing, Depolarizing, Erasure
from .core import MediumParams, dispersion

__all__ = [
    "ModeGrid",
    "DensityMatrix",
    "Ensemble",
    "CapacityConfig",
    "CapacityResult",
    "medium_map",
    "apply_channel",
    "von_neumann_entropy",
    "holevo_information",
    "maximize_holevo",
]

_TRACE_TOL = 1e-10
_HERMITIAN_TOL = 1e-12
_EIG_FLOOR = -1e-10


@dataclass(frozen=True)
class ModeGrid:
    """d photon modes inside the band limit, plus an implicit vacuum level."""

    kmags: tuple[float, ...]

    def __post_init__(self):
        k = tuple(float(v) for v in self.kmags)
        if len(k) < 1:
            raise ValueError("grid needs at least one mode")
        if any(b <= a for a, b in zip(k, k[1:])):
            raise ValueError("kmags must be strictly increasing")
        if k[0] <= 0:
            raise ValueError("kmags must be positive")
        object.__setattr__(self, "kmags", k)

    @classmethod
    def from_band_limit(
        cls, d: int, band_limit_length: float, medium: MediumParams = MediumParams()
    ) -> "ModeGrid":
        """Equally spaced modes on (0, 2 pi / band_limit_length], all below resonance."""
        if d < 1:
            raise ValueError("d must be >= 1")
        kmax = 2.0 * math.pi / band_limit_length
        if not kmax * medium.c < medium.omega:
            raise ValueError(
                f"band limit {kmax} reaches the resonance (c k >= omega); "
                "increase band_limit_length"
            )
        return cls(kmags=tuple(kmax * (i + 1) / d for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.kmags)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension including the vacuum level."""
        return self.d + 1

    def validate_against(self, medium: MediumParams) -> None:
        for k in self.kmags:
            if not medium.c * k < medium.omega:
                raise ValueError(f"mode kmag {k} violates c k < omega")


@dataclass(frozen=True)
class DensityMatrix:
    """Dense Hermitian unit-trace matrix on the (d+1)-dimensional mode space."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > _HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise ValueError(f"density matrix trace {np.trace(m)} is not 1 within 1e-10")
        if np.min(np.linalg.eigvalsh(m)) < _EIG_FLOOR:
            raise ValueError("density matrix has an eigenvalue below -1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure_mode(cls, grid: ModeGrid, index: int) -> "DensityMatrix":
        """Basis state |mode_index><mode_index| (0-based; index d is the vacuum)."""
        if not 0 <= index < grid.dim:
            raise ValueError(f"index {index} outside grid dimension {grid.dim}")
        m = np.zeros((grid.dim, grid.dim), dtype=complex)
        m[index, index] = 1.0
        return cls(m)

    @classmethod
    def vacuum(cls, grid: ModeGrid) -> "DensityMatrix":
        return cls.pure_mode(grid, grid.d)


@dataclass(frozen=True)
class Ensemble:
    """Input ensemble: probability simplex over a list of states."""

    probabilities: np.ndarray
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 1 or len(p) != len(self.states):
            raise ValueError("probabilities/states length mismatch")
        if np.any(p < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1 within 1e-12")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    def average_state(self) -> DensityMatrix:
        avg = sum(
            p * s.matrix for p, s in zip(self.probabilities, self.states)
        )
        return DensityMatrix(avg)


def medium_map(
    rho: DensityMatrix, g: float, medium: MediumParams, grid: ModeGrid
) -> DensityMatrix:
    """Interaction with the medium: damp mode k by sqrt(N_k(g)), dump the rest on vacuum.

    Kraus form K0 = diag(sqrt(N_k), 1), K_k = sqrt(1 - N_k) |vac><k|; trace
    preserving and completely positive, identity at g = 0.
    """
    if rho.dim != grid.dim:
        raise ValueError(f"state dimension {rho.dim} does not match grid dimension {grid.dim}")
    grid.validate_against(medium)
    n_k = np.array([dispersion(k, g, medium).n_weight for k in grid.kmags] + [1.0])
    scale = np.sqrt(n_k)
    out = rho.matrix * np.outer(scale, scale)
    lost = float(np.real(np.diag(rho.matrix)[: grid.d]) @ (1.0 - n_k[: grid.d]))
    out = out.copy()
    out[grid.d, grid.d] += lost
    return DensityMatrix(out)


def apply_channel(channel: ChannelSpec, rho: DensityMatrix) -> DensityMatrix:
    """Discretized channel action on the (d+1)-dimensional space.

    Erasure mixes towards the vacuum projector; dephasing zeroes all
    off-diagonals in the grid basis; depolarizing mixes towards the uniform
    state over the d grid modes, i.e. the band-limited identity with
    alpha = d.
    """
    m = rho.matrix
    d = rho.dim - 1
    if isinstance(channel, Erasure):
        out = channel.p * m
        out = out.copy()
        out[d, d] += 1.0 - channel.p
        return DensityMatrix(out)
    if isinstance(channel, CompletelyDephasing):
        return DensityMatrix(np.diag(np.diag(m)))
    if isinstance(channel, Depolarizing):
        if d < 1:
            raise ValueError("depolarizing needs at least one grid mode besides the vacuum")
        mixed = np.zeros_like(m)
        for i in range(d):
            mixed[i, i] = 1.0 / d
        return DensityMatrix(channel.p * m + (1.0 - channel.p) * mixed)
    raise TypeError(f"unknown channel {channel!r}")


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum lam log2 lam over the eigenvalues, with 0 log 0 = 0.

    Eigenvalues in [-1e-10, 0) are clamped to 0; anything lower is an invalid
    state and raises.
    """
    ev = np.linalg.eigvalsh(rho.matrix)
    if ev.min() < _EIG_FLOOR:
        raise ValueError(f"eigenvalue {ev.min()} below -1e-10: not a density matrix")
    ev = np.clip(ev, 0.0, None)
    nz = ev[ev > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def holevo_information(ensemble: Ensemble, total_map) -> float:
    """chi = S(sum_i p_i M(rho_i)) - sum_i p_i S(M(rho_i)) for a channel callable M."""
    outputs = [total_map(s) for s in ensemble.states]
    avg = sum(p * o.matrix for p, o in zip(ensemble.probabilities, outputs))
    chi = von_neumann_entropy(DensityMatrix(avg)) - float(
        sum(
            p * von_neumann_entropy(o)
            for p, o in zip(ensemble.probabilities, outputs)
            if p > 0.0
        )
    )
    return chi


@dataclass(frozen=True)
class CapacityConfig:
    tol_bits: float = 1e-6
    max_iterations: int = 10_000
    include_vacuum_symbol: bool = False

    def __post_init__(self):
        if not self.tol_bits > 0:
            raise ValueError("tol_bits must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    ensemble: Ensemble
    iterations: int
    converged: bool


def _relative_entropy_bits(sigma: np.ndarray, log2_avg: np.ndarray) -> float:
    """Tr sigma (log2 sigma - log2 avg); sigma's support is inside avg's by construction."""
    ev, vec = np.linalg.eigh(sigma)
    ev = np.clip(ev, 0.0, None)
    nz = ev > 1e-300
    tr_s_log_s = float((ev[nz] * np.log2(ev[nz])).sum())
    return tr_s_log_s - float(np.real(np.trace(sigma @ log2_avg)))


def maximize_holevo(
    channel: ChannelSpec,
    g: float,
    grid: ModeGrid,
    medium: MediumParams = MediumParams(),
    config: CapacityConfig = CapacityConfig(),
) -> CapacityResult:
    """Restricted-ensemble capacity estimate for channel after the medium interaction.

    Candidate states are the grid-mode basis states (plus the vacuum if
    configured); their channel outputs are fixed, and the input probabilities
    follow the multiplicative update p_i <- p_i 2^{D(sigma_i || sigma_bar)}
    until the Holevo information changes by less than ``tol_bits`` or the
    iteration cap is hit (reported via ``converged``).  Deterministic:
    uniform initialization, no randomness.
    """
    grid.validate_against(medium)
    symbols = list(range(grid.d)) + ([grid.d] if config.include_vacuum_symbol else [])
    states = tuple(DensityMatrix.pure_mode(grid, i) for i in symbols)
    outputs = [
        apply_channel(channel, medium_map(s, g, medium, grid)).matrix for s in states
    ]
    m = len(outputs)
    probs = np.full(m, 1.0 / m)

    chi = 0.0
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        avg = sum(p * o for p, o in zip(probs, outputs))
        ev, vec = np.linalg.eigh(avg)
        ev = np.clip(ev, 1e-300, None)
        log2_avg = (vec * np.log2(ev)) @ vec.conj().T
        rel = np.array([_relative_entropy_bits(o, log2_avg) for o in outputs])
        new_chi = float(probs @ rel)
        if iterations > 1 and abs(new_chi - chi) < config.tol_bits:
            chi = new_chi
            converged = True
            break
        chi = new_chi
        weights = probs * np.exp2(rel - rel.max())
        probs = weights / weights.sum()

    return CapacityResult(
        capacity_bits=max(chi, 0.0),
        ensemble=Ensemble(probabilities=probs, states=states),
        iterations=iterations,
        converged=converged,
    )
