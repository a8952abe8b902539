"""Command-line front end: run every chamber experiment and export data.

Each experiment resolves its configuration from built-in defaults, an
optional JSON config file, and explicit flags (in that order), writes
CSV data plus a self-contained JSON summary, and is byte-reproducible
for a fixed (config, seed) pair.  The built-in defaults pin the
canonical one-hour scenario: calibrated sample, 1 g mirror with a
Bohr-radius initial spread, and the default optical table.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import difflib
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .constants import BOHR_RADIUS, HOUR, SECONDS_PER_YEAR
from . import decay, density, interferometer, overlap, wavepacket
from .branching import (
    DetectorModel,
    OUTCOME_CSV_HEADER,
    collapse_run,
    prepare,
    unitary_evolve,
    branch_snapshot,
)
from .decay import DecayLaw, Sample
from .interferometer import OpticalConfig, screen_offsets, visibility
from .wavepacket import GaussianPacket, Trajectory

__all__ = ["main", "run", "validate", "ConfigError", "NumericalError", "EXPERIMENTS"]


class ConfigError(Exception):
    """Invalid run configuration; maps to exit code 2."""


class NumericalError(Exception):
    """Numerical failure during a run; maps to exit code 3."""


# ---------------------------------------------------------------------------
# Value parsers

def _parse_int(text):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise ConfigError(f"expected an integer, got {text!r}")


def _parse_float(text):
    if isinstance(text, str):
        text = text.strip()
        for suffix in ("cm", "g", "s"):
            if text.endswith(suffix) and text != suffix:
                try:
                    return float(text[: -len(suffix)])
                except ValueError:
                    pass
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number, got {text!r}")


def _parse_length(text):
    """Float with the named constant 'bohr' accepted."""
    if isinstance(text, str) and text.strip().lower() == "bohr":
        return BOHR_RADIUS
    return _parse_float(text)


def _parse_optional_float(text):
    if text is None or (isinstance(text, str) and text.strip().lower() in ("", "none", "auto")):
        return None
    return _parse_float(text)


def _parse_choice(*choices):
    def parse(text):
        if text not in choices:
            raise ConfigError(f"expected one of {choices}, got {text!r}")
        return text
    return parse


# ---------------------------------------------------------------------------
# Schemas

@dataclass(frozen=True)
class Param:
    default: object
    parse: object
    constraint: str = ""
    check: object = None


def _positive(v):
    return v is None or v > 0


def _at_least_one(v):
    return v >= 1


def _probability(v):
    return 0.0 <= v <= 1.0


def _non_negative(v):
    return v >= 0


_GEOMETRY = {
    "wavelength": Param(interferometer.OpticalConfig().wavelength, _parse_float, "wavelength > 0", _positive),
    "half_width": Param(2.0, _parse_float, "half_width > 0", _positive),
    "n_points": Param(2001, _parse_int, "n_points >= 2", lambda v: v >= 2),
}

_MIRROR = {
    "mirror_mass": Param(1.0, _parse_float, "mirror_mass > 0", _positive),
    "sigma0": Param(BOHR_RADIUS, _parse_length, "sigma0 > 0", _positive),
    "mirror_lift": Param(1.0, _parse_float, "mirror_lift > 0", _positive),
    "transit": Param(0.1, _parse_float, "transit > 0", _positive),
}

_SAMPLE = {
    "n_nuclei": Param(1000, _parse_int, "n_nuclei >= 1", _at_least_one),
    "mean_life": Param(None, _parse_optional_float, "mean_life > 0 (or auto to calibrate)", _positive),
    "hours": Param(1.0, _parse_float, "hours > 0", _positive),
}

_DETECTOR = {
    "efficiency": Param(1.0, _parse_float, "0 <= efficiency <= 1", _probability),
    "delay": Param(1e-3, _parse_float, "delay >= 0", _non_negative),
}

SCHEMAS = {
    "decay-stats": {
        **_SAMPLE,
        "trials": Param(10000, _parse_int, "trials >= 1", _at_least_one),
        "seed": Param(0, _parse_int),
    },
    "packet-spread": {
        "mass": Param(1.0, _parse_float, "mass > 0", _positive),
        "sigma0": Param(BOHR_RADIUS, _parse_length, "sigma0 > 0", _positive),
        "t_max": Param(HOUR, _parse_float, "t_max > 0", _positive),
        "n_times": Param(101, _parse_int, "n_times >= 2", lambda v: v >= 2),
        "seed": Param(0, _parse_int),
    },
    "overlap-scan": {
        "bound_extent": Param(1e-12, _parse_float, "bound_extent > 0", _positive),
        "spread_extent": Param(1e2, _parse_float, "spread_extent > 0", _positive),
        "max_separation": Param(None, _parse_optional_float, "max_separation > 0", _positive),
        "n_points": Param(101, _parse_int, "n_points >= 2", lambda v: v >= 2),
        "seed": Param(0, _parse_int),
    },
    "interfere": {
        "mode": Param("unitary", _parse_choice("unitary", "collapse", "half")),
        **_SAMPLE,
        **_MIRROR,
        **_DETECTOR,
        **_GEOMETRY,
        "phase_policy": Param("zero", _parse_choice("zero", "random")),
        "trials": Param(10000, _parse_int, "trials >= 1", _at_least_one),
        "seed": Param(0, _parse_int),
    },
    "montecarlo": {
        **_SAMPLE,
        **_MIRROR,
        **_DETECTOR,
        "trials": Param(10000, _parse_int, "trials >= 1", _at_least_one),
        "seed": Param(0, _parse_int),
    },
    "density": {
        "members": Param(1000, _parse_int, "1 <= members <= 4096",
                         lambda v: 1 <= v <= density.MAX_MEMBERS),
        "mode": Param("unitary", _parse_choice("unitary", "collapsed")),
        **_SAMPLE,
        **_MIRROR,
        **_GEOMETRY,
        "seed": Param(0, _parse_int),
    },
    "neutron": {
        "mean_life": Param(887.0, _parse_float, "mean_life > 0", _positive),
        "time": Param(600.0, _parse_float, "time >= 0", _non_negative),
        "seed": Param(0, _parse_int),
    },
}

EXPERIMENTS = tuple(SCHEMAS)


def validate(experiment: str, raw: dict) -> dict:
    """Resolve a raw key/value mapping against the experiment schema.

    Unknown keys are rejected with a nearest-key hint; every diagnostic
    names the offending key and its constraint.  Defaults are injected
    so the result is self-contained.
    """
    if experiment not in SCHEMAS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from {EXPERIMENTS}")
    schema = SCHEMAS[experiment]
    resolved = {key: spec.default for key, spec in schema.items()}
    for key, value in raw.items():
        if key not in schema:
            hint = difflib.get_close_matches(key, schema, n=1)
            suffix = f"; did you mean {hint[0]!r}?" if hint else ""
            raise ConfigError(f"unknown key {key!r} for {experiment}{suffix}")
        spec = schema[key]
        try:
            parsed = spec.parse(value)
        except ConfigError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from None
        if spec.check is not None and not spec.check(parsed):
            raise ConfigError(f"key {key!r} violates constraint: {spec.constraint}")
        resolved[key] = parsed
    return resolved


# ---------------------------------------------------------------------------
# Shared builders

def _resolve_sample(cfg) -> tuple[Sample, float]:
    horizon = cfg["hours"] * HOUR
    if cfg["mean_life"] is None:
        law = decay.calibrate_mean_life(cfg["n_nuclei"], horizon)
    else:
        law = DecayLaw(cfg["mean_life"])
    return Sample(cfg["n_nuclei"], law), horizon


def _mirror_and_trajectory(cfg, config: OpticalConfig):
    packet = GaussianPacket(
        mass=cfg["mirror_mass"],
        dk=wavepacket.momentum_spread_for_width(cfg["sigma0"]),
        center=config.m2,
    )
    lifted = config.m2 + np.array([0.0, 0.0, cfg["mirror_lift"]])
    return packet, Trajectory(config.m2, lifted, cfg["transit"])


def _optical_config(cfg) -> OpticalConfig:
    return OpticalConfig(wavelength=cfg["wavelength"])


# ---------------------------------------------------------------------------
# Output helpers

def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_summary(path: Path, experiment, cfg, seed, results):
    summary = {
        "experiment": experiment,
        "version": __version__,
        "seed": seed,
        "config": cfg,
        "results": results,
    }
    path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# Experiment runners (each returns {filename: written Path} implicitly via out dir)

def _run_decay_stats(cfg, out: Path):
    sample, horizon = _resolve_sample(cfg)
    seeds = np.random.SeedSequence(cfg["seed"]).generate_state(cfg["trials"], dtype=np.uint64)
    rows = []
    n_any = 0
    for i, s in enumerate(seeds):
        times = decay.sample_decay_events(sample, horizon, int(s))
        if times.size:
            n_any += 1
        rows.append((i, times.size, times[0] if times.size else ""))
    n1, n2 = decay.sample_branch_norms(sample, horizon)
    fraction = n_any / cfg["trials"]
    _write_csv(out / "decay_stats.csv", ["trial", "n_decays", "first_decay_time"], rows)
    return {
        "survival_norm": n1,
        "decayed_norm": n2,
        "mc_decay_fraction": fraction,
        "mc_binomial_sigma": math.sqrt(n1 * n2 / cfg["trials"]),
        "mean_life": sample.law.mean_life,
        "horizon": horizon,
    }


def _run_packet_spread(cfg, out: Path):
    dk = wavepacket.momentum_spread_for_width(cfg["sigma0"])
    packet = GaussianPacket(cfg["mass"], dk, np.zeros(3))
    times = np.linspace(0.0, cfg["t_max"], cfg["n_times"])
    widths = [wavepacket.spread_width(packet, t) for t in times]
    _write_csv(out / "spread.csv", ["t", "sigma"], zip(times, widths))
    t_double = wavepacket.doubling_time(cfg["mass"], cfg["sigma0"])
    return {
        "dk": dk,
        "sigma0": cfg["sigma0"],
        "doubling_time_s": t_double,
        "doubling_time_years": t_double / SECONDS_PER_YEAR,
        "width_ratio_at_t_max": widths[-1] / cfg["sigma0"],
    }


def _run_overlap_scan(cfg, out: Path):
    regions = overlap.RegionPair(cfg["bound_extent"], cfg["spread_extent"])
    max_sep = cfg["max_separation"]
    if max_sep is None:
        max_sep = 4.0 * cfg["spread_extent"]
    seps = np.linspace(0.0, max_sep, cfg["n_points"])
    values = [
        overlap.gaussian_branch_overlap(cfg["bound_extent"], cfg["spread_extent"], s)
        for s in seps
    ]
    _write_csv(out / "overlap_scan.csv", ["separation", "overlap"], zip(seps, values))
    return {
        "ratio_cubed": overlap.ratio_overlap(regions),
        "gaussian_zero_separation": values[0],
    }


def _unitary_state(cfg, sample, mirror, trajectory, horizon, rng):
    state = prepare(sample, mirror, trajectory)
    policy = cfg["phase_policy"]
    return unitary_evolve(state, horizon, phase_policy=policy, rng=rng)


def _run_interfere(cfg, out: Path):
    optics = _optical_config(cfg)
    sample, horizon = _resolve_sample(cfg)
    mirror, trajectory = _mirror_and_trajectory(cfg, optics)
    points = screen_offsets(cfg["half_width"], cfg["n_points"])
    results = {"mode": cfg["mode"], "horizon": horizon, "mean_life": sample.law.mean_life}
    if cfg["mode"] == "half":
        pattern = interferometer.pattern_half_silvered(optics, points)
    elif cfg["mode"] == "unitary":
        rng = np.random.default_rng(cfg["seed"])
        state = _unitary_state(cfg, sample, mirror, trajectory, horizon, rng)
        pattern = interferometer.pattern_unitary(optics, state.branches, points)
        intact, decayed = state.branch("intact"), state.branch("decayed")
        results["branch_norms"] = [intact.norm, decayed.norm]
        results["branch_phases"] = [intact.phase, decayed.phase]
        results["overlap_log_modulus"] = wavepacket.overlap_log_modulus(
            branch_snapshot(intact, horizon), branch_snapshot(decayed, horizon), horizon
        )
    else:
        detector = DetectorModel(cfg["efficiency"], cfg["delay"])
        seeds = np.random.SeedSequence(cfg["seed"]).generate_state(cfg["trials"], dtype=np.uint64)
        outcomes = [
            collapse_run(sample, mirror, trajectory, detector, horizon, int(s))
            for s in seeds
        ]
        pattern = interferometer.pattern_collapsed(optics, outcomes, points)
        collapsed = sum(o.collapsed for o in outcomes)
        results["collapsed_fraction"] = collapsed / len(outcomes)
        results["trials"] = len(outcomes)
    results["visibility"] = visibility(pattern)
    _write_csv(out / "pattern.csv", ["position", "intensity"],
               zip(pattern.positions, pattern.intensities))
    return results


def _run_montecarlo(cfg, out: Path):
    sample, horizon = _resolve_sample(cfg)
    mirror, trajectory = _mirror_and_trajectory(cfg, OpticalConfig())
    detector = DetectorModel(cfg["efficiency"], cfg["delay"])
    seeds = np.random.SeedSequence(cfg["seed"]).generate_state(cfg["trials"], dtype=np.uint64)
    outcomes = [
        collapse_run(sample, mirror, trajectory, detector, horizon, int(s))
        for s in seeds
    ]
    _write_csv(out / "outcomes.csv", OUTCOME_CSV_HEADER,
               (o.to_csv_row() for o in outcomes))
    n = len(outcomes)
    configs = [o.final_config for o in outcomes]
    return {
        "trials": n,
        "collapsed_fraction": sum(o.collapsed for o in outcomes) / n,
        "fraction_up": configs.count("up") / n,
        "fraction_down": configs.count("down") / n,
        "fraction_moving": configs.count("moving") / n,
        "mean_life": sample.law.mean_life,
        "horizon": horizon,
    }


def _run_density(cfg, out: Path):
    optics = _optical_config(cfg)
    sample, horizon = _resolve_sample(cfg)
    mirror, trajectory = _mirror_and_trajectory(cfg, optics)
    state = unitary_evolve(prepare(sample, mirror, trajectory), horizon)
    rng = np.random.default_rng(cfg["seed"])
    ensemble = density.random_phase_ensemble(state, cfg["members"], rng)
    points = screen_offsets(cfg["half_width"], cfg["n_points"])
    pattern = density.pattern_mixed(ensemble, optics, points, mode=cfg["mode"])
    _write_csv(out / "mixed_pattern.csv", ["position", "intensity"],
               zip(pattern.positions, pattern.intensities))
    return {
        "members": cfg["members"],
        "mode": cfg["mode"],
        "visibility": visibility(pattern),
        "branch_expectation_intact": list(density.branch_expectation(ensemble, "intact")),
        "branch_expectation_decayed": list(density.branch_expectation(ensemble, "decayed")),
    }


def _run_neutron(cfg, out: Path):
    law = DecayLaw(cfg["mean_life"])
    survival = decay.survival_single(law, cfg["time"])
    decayed = decay.decayed_single(law, cfg["time"])
    _write_csv(out / "neutron.csv", ["time", "survival", "decayed"],
               [(cfg["time"], survival, decayed)])
    return {"survival": survival, "decayed": decayed, "mean_life": cfg["mean_life"]}


_RUNNERS = {
    "decay-stats": _run_decay_stats,
    "packet-spread": _run_packet_spread,
    "overlap-scan": _run_overlap_scan,
    "interfere": _run_interfere,
    "montecarlo": _run_montecarlo,
    "density": _run_density,
    "neutron": _run_neutron,
}


def run(experiment: str, cfg: dict, out_dir) -> dict:
    """Execute one validated experiment; returns the summary results."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        results = _RUNNERS[experiment](cfg, out)
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        raise NumericalError(f"{experiment}: {exc}") from exc
    _write_summary(out / "summary.json", experiment, cfg, cfg.get("seed", 0), results)
    return results


# ---------------------------------------------------------------------------
# Argument parsing

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chamber",
        description="Closed-chamber decay-triggered interferometer simulator.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for experiment, schema in SCHEMAS.items():
        p = sub.add_parser(experiment, help=f"run the {experiment} experiment")
        p.add_argument("--config", help="JSON config file (flags override it)")
        p.add_argument("--out", default=None,
                       help="output directory (default $CHAMBER_OUT or '.')")
        for key in schema:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)
    return parser


def _gather_raw(args, schema) -> dict:
    raw = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigError("config file must contain a JSON object")
        raw.update(loaded)
    for key in schema:
        value = getattr(args, key)
        if value is not None:
            raw[key] = value
    return raw


def main(argv=None) -> int:
    import os

    args = _build_parser().parse_args(argv)
    experiment = args.experiment
    try:
        raw = _gather_raw(args, SCHEMAS[experiment])
        cfg = validate(experiment, raw)
        out_dir = args.out or os.environ.get("CHAMBER_OUT", ".")
        results = run(experiment, cfg, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    for key in sorted(results):
        print(f"{key}: {results[key]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
