"""Configuration, sweep orchestration and CSV output.

Single JSON config document (all defaults visible via ``print-config``),
three table-producing subcommands::

    photonmedium fidelity   --config cfg.json --output fidelity.csv
    photonmedium capacity   --config cfg.json --output capacity.csv
    photonmedium integrals  --config cfg.json --output integrals.csv --seed 7
    photonmedium print-config

Numbers are rendered with 17 significant digits so identical config + seed
reproduces byte-identical files.  Sweep points are independent pure
computations; capacity points are dispatched to a thread pool and the rows
are emitted in sorted order regardless of completion order.  Exit codes:
0 success (including partial results with non-converged rows flagged),
1 config validation error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable

import numpy as np

from . import __version__
from .capacity import CapacityConfig, CapacityResult, ModeGrid, maximize_holevo
from .channels import (
    ChannelSpec,
    CompletelyDephasing,
    Depolarizing,
    Erasure,
    FidelityPoint,
    dephasing_prefactor,
    fidelity_depolarizing_uniform,
    fidelity_erasure_uniform,
    normalized_fidelity,
)
from .core import MediumParams, WavepacketSpec, weight_N
from .disorder import avg_fidelity_dephasing_diffusion, avg_fidelity_erasure_diffusion
from .quadrature import (
    AngularIntegralSpec,
    default_cutoff,
    integral_I,
    integral_I_checked,
    integral_I_monte_carlo,
    make_sphere_rule,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "default_config",
    "load_config",
    "canonical_json",
    "run_fidelity_sweep",
    "run_capacity_sweep",
    "run_integral_table",
    "main",
]

FIDELITY_HEADER = "gbar,channel,medium_kind,fidelity,normalized,epsilon"
CAPACITY_HEADER = "gbar,channel,d,capacity_bits,iterations,converged"
INTEGRALS_HEADER = "n,sign,lambda_over_sigma,epsilon,quadrature,mc_estimate,mc_stderr"


class ConfigError(ValueError):
    """Invalid configuration; message carries the offending key path."""


def default_config() -> dict:
    """The complete default configuration (every knob explicit)."""
    return {
        "medium": {"c3_n0_over_omega3": 1.0},
        "wavepacket": {
            "k0_over_omega": 0.5,
            "sigma_over_omega": 0.25,
            "direction": [1.0, 0.0, 0.0],
        },
        "channels": [
            {"type": "erasure", "p": 1.0},
            {"type": "erasure", "p": 0.3},
            {"type": "dephasing", "volume": 1.0},
            {
                "type": "depolarizing",
                "p": 0.5,
                "alpha": 4.0,
                "band_limit_length": 4.0 * math.pi,
            },
        ],
        "medium_kinds": ["uniform", "random-diffusion"],
        "sweep": {"gbar_min": 0.01, "gbar_max": 10.0, "points": 201, "include_zero": True},
        "quadrature": {"order": 30, "epsilon": 1e-3, "rtol": 1e-8},
        "capacity": {
            "d": 4,
            "band_limit_length": 4.0 * math.pi,
            "tol_bits": 1e-6,
            "max_iterations": 10000,
            "include_vacuum_symbol": False,
        },
        "integrals": {"ratios": [0.0, 0.5, 1.0, 2.0], "mc_samples": 1_000_000},
        "seed": 20260801,
        "output": None,
    }


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = dict(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"{where}: unknown configuration key")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


def _require(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"{where}: {message}")


def _parse_channel(entry: Any, where: str) -> ChannelSpec:
    _require(isinstance(entry, dict), where, "channel entry must be an object")
    kind = entry.get("type")
    try:
        if kind == "erasure":
            extra = set(entry) - {"type", "p"}
            _require(not extra, where, f"unknown keys {sorted(extra)}")
            return Erasure(p=float(entry["p"]))
        if kind == "dephasing":
            extra = set(entry) - {"type", "volume"}
            _require(not extra, where, f"unknown keys {sorted(extra)}")
            return CompletelyDephasing(volume=float(entry.get("volume", 1.0)))
        if kind == "depolarizing":
            extra = set(entry) - {"type", "p", "alpha", "band_limit_length"}
            _require(not extra, where, f"unknown keys {sorted(extra)}")
            return Depolarizing(
                p=float(entry["p"]),
                alpha=float(entry["alpha"]),
                band_limit_length=float(entry.get("band_limit_length", 4.0 * math.pi)),
            )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}.type: expected erasure|dephasing|depolarizing, got {kind!r}")


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration built from the JSON document."""

    medium: MediumParams
    wavepacket: WavepacketSpec
    channels: tuple[ChannelSpec, ...]
    medium_kinds: tuple[str, ...]
    gbar_grid: tuple[float, ...]
    quad_order: int
    quad_epsilon: float
    quad_rtol: float
    capacity_d: int
    capacity_band_limit_length: float
    capacity_tol_bits: float
    capacity_max_iterations: int
    capacity_include_vacuum: bool
    integral_ratios: tuple[float, ...]
    mc_samples: int
    seed: int
    output: str | None
    raw: dict

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        cfg = _merge(default_config(), data)
        try:
            medium = MediumParams.from_dimensionless_density(
                float(cfg["medium"]["c3_n0_over_omega3"])
            )
        except ValueError as exc:
            raise ConfigError(f"medium.c3_n0_over_omega3: {exc}") from exc
        wp = cfg["wavepacket"]
        try:
            direction = np.asarray(wp["direction"], dtype=float)
            norm = np.linalg.norm(direction)
            _require(norm > 0, "wavepacket.direction", "must be a nonzero 3-vector")
            wavepacket = WavepacketSpec(
                k0_hat=tuple(direction / norm),
                k0_mag=float(wp["k0_over_omega"]),
                sigma=float(wp["sigma_over_omega"]),
            )
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"wavepacket: {exc}") from exc
        _require(
            medium.c * wavepacket.k0_mag < medium.omega,
            "wavepacket.k0_over_omega",
            "validated domain requires c k0 < omega",
        )
        channels = tuple(
            _parse_channel(entry, f"channels[{i}]") for i, entry in enumerate(cfg["channels"])
        )
        _require(len(channels) > 0, "channels", "need at least one channel")
        kinds = tuple(cfg["medium_kinds"])
        for i, kind in enumerate(kinds):
            _require(
                kind in ("uniform", "random-diffusion"),
                f"medium_kinds[{i}]",
                f"expected uniform|random-diffusion, got {kind!r}",
            )
        sweep = cfg["sweep"]
        try:
            gmin, gmax = float(sweep["gbar_min"]), float(sweep["gbar_max"])
            points = int(sweep["points"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sweep: {exc}") from exc
        _require(0 < gmin < gmax, "sweep", "need 0 < gbar_min < gbar_max")
        _require(points >= 2, "sweep.points", "need at least 2 points")
        grid = list(np.geomspace(gmin, gmax, points))
        if bool(sweep["include_zero"]):
            grid = [0.0] + grid
        quad = cfg["quadrature"]
        _require(2 <= int(quad["order"]) <= 256, "quadrature.order", "must be in [2, 256]")
        _require(0 < float(quad["epsilon"]) < 2, "quadrature.epsilon", "must be in (0, 2)")
        _require(float(quad["rtol"]) > 0, "quadrature.rtol", "must be positive")
        cap = cfg["capacity"]
        _require(int(cap["d"]) >= 1, "capacity.d", "must be >= 1")
        _require(float(cap["tol_bits"]) > 0, "capacity.tol_bits", "must be positive")
        _require(int(cap["max_iterations"]) >= 1, "capacity.max_iterations", "must be >= 1")
        integrals = cfg["integrals"]
        ratios = tuple(float(r) for r in integrals["ratios"])
        _require(all(r >= 0 for r in ratios), "integrals.ratios", "must be nonnegative")
        _require(int(integrals["mc_samples"]) >= 10**4, "integrals.mc_samples", "must be >= 1e4")
        return cls(
            medium=medium,
            wavepacket=wavepacket,
            channels=channels,
            medium_kinds=kinds,
            gbar_grid=tuple(float(g) for g in grid),
            quad_order=int(quad["order"]),
            quad_epsilon=float(quad["epsilon"]),
            quad_rtol=float(quad["rtol"]),
            capacity_d=int(cap["d"]),
            capacity_band_limit_length=float(cap["band_limit_length"]),
            capacity_tol_bits=float(cap["tol_bits"]),
            capacity_max_iterations=int(cap["max_iterations"]),
            capacity_include_vacuum=bool(cap["include_vacuum_symbol"]),
            integral_ratios=ratios,
            mc_samples=int(integrals["mc_samples"]),
            seed=int(cfg["seed"]),
            output=cfg["output"],
            raw=cfg,
        )


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig.from_dict({})
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return RunConfig.from_dict(data)


def canonical_json(cfg: dict) -> str:
    """Normal form used for round-trip checks: sorted keys, two-space indent."""
    return json.dumps(cfg, indent=2, sort_keys=True) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _metadata_line(config: RunConfig, subcommand: str) -> str:
    """One '#' comment line so any row can be reproduced from its file alone."""
    from .kernels import backend_name

    wp = config.wavepacket
    parts = [
        f"photonmedium v{__version__}",
        subcommand,
        f"c3_n0_over_omega3={_fmt(config.medium.n0)}"
        f" k0_over_omega={_fmt(wp.k0_mag)} sigma_over_omega={_fmt(wp.sigma)}"
        f" direction=({_fmt(wp.k0_hat[0])};{_fmt(wp.k0_hat[1])};{_fmt(wp.k0_hat[2])})",
        f"quadrature_order={config.quad_order} rtol={_fmt(config.quad_rtol)}",
    ]
    if subcommand == "capacity":
        parts.append(
            f"band_limit_length={_fmt(config.capacity_band_limit_length)}"
            f" tol_bits={_fmt(config.capacity_tol_bits)}"
            f" max_iterations={config.capacity_max_iterations}"
            f" include_vacuum_symbol={'true' if config.capacity_include_vacuum else 'false'}"
        )
    if subcommand == "integrals":
        parts.append(f"mc_samples={config.mc_samples} seed={config.seed}")
    parts.append(f"kernel_backend={backend_name()}")
    return "# " + " | ".join(parts)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _cached_rule(order: int):
    return make_sphere_rule(order)


@lru_cache(maxsize=256)
def _cached_integral(
    n: int, sign: str, ratio: float, eps: float, order: int, k0_hat: tuple
) -> float:
    spec = AngularIntegralSpec(
        n=n, sign=sign, lambda_over_sigma=ratio, k0_hat=k0_hat, cutoff_eps=eps
    )
    return integral_I(spec, _cached_rule(order))


def _fidelity_point(
    channel: ChannelSpec,
    kind: str,
    gbar: float,
    config: RunConfig,
) -> FidelityPoint | None:
    """One validated sweep sample, or None where the combination is undefined."""
    medium, wavepacket = config.medium, config.wavepacket
    g = medium.gbar_to_g(gbar)
    fid: float
    eps: float | None
    if kind == "uniform":
        if isinstance(channel, Erasure):
            fid = fidelity_erasure_uniform(g, channel.p, medium, wavepacket)
            eps = None
        elif isinstance(channel, CompletelyDephasing):
            eps = default_cutoff(1)
            i1p = _cached_integral(
                1,
                "+",
                math.sqrt(2.0) * wavepacket.lam_over_sigma,
                eps,
                config.quad_order,
                wavepacket.k0_hat,
            )
            fid = weight_N(wavepacket.k0_mag, g, medium) * dephasing_prefactor(wavepacket) * i1p
        elif isinstance(channel, Depolarizing):
            fid = fidelity_depolarizing_uniform(g, channel.p, channel.alpha, medium, wavepacket)
            eps = None
        else:
            raise ValueError(f"unknown channel {channel!r}")
    elif kind == "random-diffusion":
        # The diffusion approximation is derived for erasure and dephasing
        # only; the depolarizing average has no formula and is skipped.
        if isinstance(channel, Depolarizing):
            return None
        eps = config.quad_epsilon
        i2m = _cached_integral(
            2, "-", wavepacket.lam_over_sigma, eps, config.quad_order, wavepacket.k0_hat
        )
        n = weight_N(wavepacket.k0_mag, g, medium)
        ratio = wavepacket.lam_over_sigma
        pref = ratio * ratio * math.exp(-2.0 * ratio * ratio) / (
            1.0 - math.exp(-4.0 * ratio * ratio)
        )
        if isinstance(channel, Erasure):
            fid = channel.p / (4.0 * math.pi) * pref * n * i2m
        else:
            fid = 1.0 / (2.0 * math.pi) ** 6 * pref * n * i2m
    else:
        raise ValueError(f"unknown medium kind {kind!r}")
    return FidelityPoint(
        g=g,
        channel=channel.label(),
        medium_kind=kind,
        fidelity=fid,
        normalized=normalized_fidelity(channel, g, medium, wavepacket),
        epsilon_used=eps,
    )


def _prewarm_integrals(config: RunConfig) -> None:
    """Evaluate the g-independent angular integrals once, before dispatch."""
    wavepacket = config.wavepacket
    if any(isinstance(ch, CompletelyDephasing) for ch in config.channels):
        if "uniform" in config.medium_kinds:
            _cached_integral(
                1,
                "+",
                math.sqrt(2.0) * wavepacket.lam_over_sigma,
                default_cutoff(1),
                config.quad_order,
                wavepacket.k0_hat,
            )
    if "random-diffusion" in config.medium_kinds:
        _cached_integral(
            2, "-", wavepacket.lam_over_sigma, config.quad_epsilon,
            config.quad_order, wavepacket.k0_hat,
        )


def run_fidelity_sweep(config: RunConfig) -> list[str]:
    """CSV lines of the fidelity sweep, sorted by (channel, medium kind, gbar).

    Cells are dispatched to a thread pool; the rows are buffered and written
    in sorted order whatever the completion order.
    """
    for i, channel in enumerate(config.channels):
        if isinstance(channel, Erasure) and channel.p == 0.0:
            raise ConfigError(
                f"channels[{i}].p: the fidelity sweep needs p > 0 for erasure "
                "(zero baseline leaves the normalized fidelity undefined)"
            )
    _prewarm_integrals(config)
    cells = []
    for channel in config.channels:
        for kind in config.medium_kinds:
            for gbar in config.gbar_grid:
                cells.append((channel.label(), kind, gbar, channel))
    cells.sort(key=lambda cell: (cell[0], cell[1], cell[2]))

    def compute(cell):
        _label, kind, gbar, channel = cell
        return _fidelity_point(channel, kind, gbar, config)

    with ThreadPoolExecutor() as pool:
        points = list(pool.map(compute, cells))

    lines = [_metadata_line(config, "fidelity"), FIDELITY_HEADER]
    for (_label, _kind, gbar, _channel), point in zip(cells, points):
        if point is None:
            continue
        eps_str = "" if point.epsilon_used is None else _fmt(point.epsilon_used)
        lines.append(
            f"{_fmt(gbar)},{point.channel},{point.medium_kind},"
            f"{_fmt(point.fidelity)},{_fmt(point.normalized)},{eps_str}"
        )
    return lines


def run_capacity_sweep(config: RunConfig) -> list[str]:
    """CSV lines of the capacity sweep; non-converged optimizations are flagged, not fatal."""
    grid = ModeGrid.from_band_limit(
        config.capacity_d, config.capacity_band_limit_length, config.medium
    )
    cap_cfg = CapacityConfig(
        tol_bits=config.capacity_tol_bits,
        max_iterations=config.capacity_max_iterations,
        include_vacuum_symbol=config.capacity_include_vacuum,
    )

    points = [
        (channel.label(), gbar, channel)
        for channel in config.channels
        for gbar in config.gbar_grid
    ]
    points.sort(key=lambda item: (item[0], item[1]))

    def solve(item) -> tuple[str, float, CapacityResult]:
        label, gbar, channel = item
        res = maximize_holevo(
            channel, config.medium.gbar_to_g(gbar), grid, config.medium, cap_cfg
        )
        return label, gbar, res

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(solve, points))

    lines = [_metadata_line(config, "capacity"), CAPACITY_HEADER]
    for label, gbar, res in results:
        lines.append(
            f"{_fmt(gbar)},{label},{grid.d},{_fmt(res.capacity_bits)},"
            f"{res.iterations},{'true' if res.converged else 'false'}"
        )
    return lines


def run_integral_table(config: RunConfig) -> list[str]:
    """CSV lines cross-tabulating quadrature vs Monte Carlo over the ratio grid."""
    lines = [_metadata_line(config, "integrals"), INTEGRALS_HEADER]
    rule = _cached_rule(config.quad_order)
    for n in (1, 2):
        for sign in ("+", "-"):
            for ratio in config.integral_ratios:
                eps = default_cutoff(n) if n == 1 else config.quad_epsilon
                spec = AngularIntegralSpec(
                    n=n,
                    sign=sign,
                    lambda_over_sigma=ratio,
                    k0_hat=config.wavepacket.k0_hat,
                    cutoff_eps=eps,
                )
                checked = integral_I_checked(
                    spec, rule, rtol=config.quad_rtol, raise_on_failure=False
                )
                if not checked.converged:
                    print(
                        f"warning: I_{n}^{sign}(ratio={ratio}) not converged at orders "
                        f"{checked.orders} (rel change {checked.rel_change:.2e})",
                        file=sys.stderr,
                    )
                mc = integral_I_monte_carlo(spec, samples=config.mc_samples, seed=config.seed)
                lines.append(
                    f"{n},{sign},{_fmt(ratio)},{_fmt(eps)},{_fmt(checked.value)},"
                    f"{_fmt(mc.estimate)},{_fmt(mc.std_error)}"
                )
    return lines


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _write_lines(lines: Iterable[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonmedium",
        description="Fidelity and capacity sweeps for single-photon channels in an atomic medium",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("fidelity", "coupling sweep of raw and normalized channel fidelities"),
        ("capacity", "coupling sweep of restricted-ensemble Holevo capacity estimates"),
        ("integrals", "two-sphere angular integrals: quadrature vs Monte Carlo"),
        ("print-config", "print the fully-expanded configuration and exit"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="JSON configuration file (defaults used when omitted)")
        p.add_argument("--output", help="output path (stdout when omitted)")
        p.add_argument("--seed", type=int, help="override the configured RNG seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            merged = dict(config.raw)
            merged["seed"] = args.seed
            config = RunConfig.from_dict(merged)
        output = args.output if args.output is not None else config.output
        if args.command == "print-config":
            cfg = dict(config.raw)
            _write_lines(canonical_json(cfg).splitlines(), output)
            return 0
        if args.command == "fidelity":
            _write_lines(run_fidelity_sweep(config), output)
            return 0
        if args.command == "capacity":
            _write_lines(run_capacity_sweep(config), output)
            return 0
        if args.command == "integrals":
            _write_lines(run_integral_table(config), output)
            return 0
        raise AssertionError(f"unhandled command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
