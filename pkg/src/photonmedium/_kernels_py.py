"""Pure-numpy implementations of the pairwise integrand kernels.

Reference implementations for the compiled extension in ``_kernels.pyx``;
selected automatically when the extension is unavailable (see
:mod:`photonmedium.kernels`).  Both backends evaluate

    f(khat, shat) = exp(coef * (khat + shat) . k0hat) / |khat + sign*shat|^n

with pairs at chord distance <= eps contributing zero.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

# chunk rows so the (chunk x M) pair matrices stay cache/memory friendly
_CHUNK = 256


def pair_product_sum(
    nodes_k: np.ndarray,
    weights_k: np.ndarray,
    nodes_s: np.ndarray,
    weights_s: np.ndarray,
    coef: float,
    k0_hat: np.ndarray,
    n_exp: int,
    sign: float,
    eps: float,
) -> float:
    """Tensor-product quadrature sum over all node pairs of the two spheres."""
    dot_k = nodes_k @ k0_hat
    dot_s = nodes_s @ k0_hat
    ws_exp = weights_s * np.exp(coef * dot_s)
    total = 0.0
    for lo in range(0, len(nodes_k), _CHUNK):
        hi = min(lo + _CHUNK, len(nodes_k))
        diff = nodes_k[lo:hi, None, :] + sign * nodes_s[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        d = np.sqrt(d2)
        denom = d if n_exp == 1 else d2
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(d > eps, 1.0 / denom, 0.0)
        row = vals @ ws_exp
        total += float(np.dot(weights_k[lo:hi] * np.exp(coef * dot_k[lo:hi]), row))
    return total


def pair_values(
    dirs_k: np.ndarray,
    dirs_s: np.ndarray,
    coef: float,
    k0_hat: np.ndarray,
    n_exp: int,
    sign: float,
    eps: float,
) -> np.ndarray:
    """Elementwise integrand over paired direction samples (Monte Carlo use)."""
    diff = dirs_k + sign * dirs_s
    d2 = np.einsum("ij,ij->i", diff, diff)
    d = np.sqrt(d2)
    ex = np.exp(coef * ((dirs_k + dirs_s) @ k0_hat))
    denom = d if n_exp == 1 else d2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d > eps, ex / denom, 0.0)
