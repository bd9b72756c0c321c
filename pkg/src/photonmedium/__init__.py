"""Fidelity and Holevo capacity of single-photon channels in a two-level atomic medium.

The package computes how the erasure, completely dephasing and depolarizing
channels degrade a single-photon Gaussian wavepacket that propagates through
a coupled atomic medium (uniform or white-noise disordered), exposes the
universal collapse of the normalized fidelity onto the photon weight N(g),
and estimates channel capacities on a discretized mode grid.
"""

__version__ = "0.1.0"

from .capacity import (
    CapacityConfig,
    CapacityResult,
    DensityMatrix,
    Ensemble,
    ModeGrid,
    apply_channel,
    holevo_information,
    maximize_holevo,
    medium_map,
    von_neumann_entropy,
)
from .channels import (
    ChannelSpec,
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
)
from .core import (
    BranchDomainWarning,
    DispersionResult,
    MediumParams,
    WavepacketSpec,
    dispersion,
    dispersion_omega,
    excitation_probability,
    weight_N,
)
from .disorder import (
    DisorderSpec,
    avg_fidelity_dephasing_diffusion,
    avg_fidelity_erasure_diffusion,
)
from .quadrature import (
    AngularIntegralSpec,
    MonteCarloEstimate,
    QuadratureConvergenceError,
    SphereRule,
    integral_I,
    integral_I_checked,
    integral_I_monte_carlo,
    integral_I_product,
    make_sphere_rule,
)

__all__ = [
    "__version__",
    "AngularIntegralSpec",
    "BranchDomainWarning",
    "CapacityConfig",
    "CapacityResult",
    "ChannelSpec",
    "CompletelyDephasing",
    "DensityMatrix",
    "Depolarizing",
    "DisorderSpec",
    "DispersionResult",
    "Ensemble",
    "Erasure",
    "FidelityPoint",
    "MediumParams",
    "ModeGrid",
    "MonteCarloEstimate",
    "QuadratureConvergenceError",
    "SphereRule",
    "WavepacketSpec",
    "apply_channel",
    "avg_fidelity_dephasing_diffusion",
    "avg_fidelity_erasure_diffusion",
    "dispersion",
    "dispersion_omega",
    "excitation_probability",
    "fidelity_dephasing_uniform",
    "fidelity_depolarizing_uniform",
    "fidelity_erasure_uniform",
    "holevo_information",
    "integral_I",
    "integral_I_checked",
    "integral_I_monte_carlo",
    "integral_I_product",
    "make_sphere_rule",
    "maximize_holevo",
    "medium_map",
    "normalized_fidelity",
    "numeric_overlap_dephasing",
    "numeric_overlap_fidelity",
    "von_neumann_entropy",
    "weight_N",
]
