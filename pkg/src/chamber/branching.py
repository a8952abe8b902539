"""The two rival dynamics applied to the whole inside system.

Unitary mode keeps both branches (intact / decayed) coherently, with
norms taken from the decay statistics and the mirror packet of the
decayed branch riding its trajectory from an effective decay time.

Collapse mode runs stochastic trials: a first decay time is sampled,
the detector registers it (with its efficiency, after its delay), and
the state is abruptly reduced to a single branch; undetected or
no-decay runs end with the intact branch renormalized to 1.

States are immutable snapshots; evolution returns new states, and Monte
Carlo trials are independent given their seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .decay import Sample, sample_branch_norms
from .wavepacket import GaussianPacket, Trajectory, trajectory_position

__all__ = [
    "Branch",
    "SystemState",
    "DetectorModel",
    "TrialOutcome",
    "prepare",
    "unitary_evolve",
    "collapse_run",
    "inject_test_particle",
    "branch_position",
    "branch_snapshot",
    "OUTCOME_CSV_HEADER",
]

PHASE_POLICIES = ("zero", "fixed", "random")


@dataclass(frozen=True)
class DetectorModel:
    """Registration efficiency and discharge delay of the counter."""

    efficiency: float = 1.0
    delay: float = 1e-3

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency must be in [0, 1], got {self.efficiency}")
        if self.delay < 0.0:
            raise ValueError(f"delay must be >= 0, got {self.delay}")


@dataclass(frozen=True)
class Branch:
    """One term of the decomposed state: intact or decayed.

    ``decay_time`` is the absolute time the branch's trajectory clock
    starts (None for intact branches, whose trajectory is degenerate).
    """

    kind: str  # "intact" | "decayed"
    norm: float
    phase: float
    packet: GaussianPacket
    trajectory: Trajectory
    decay_time: float | None = None

    def __post_init__(self):
        if self.kind not in ("intact", "decayed"):
            raise ValueError(f"unknown branch kind {self.kind!r}")
        if not 0.0 <= self.norm <= 1.0 + 1e-12:
            raise ValueError(f"norm must be in [0, 1], got {self.norm}")
        if self.kind == "intact" and not np.array_equal(
            self.trajectory.start, self.trajectory.end
        ):
            raise ValueError("intact branch must have a degenerate trajectory")


@dataclass(frozen=True)
class SystemState:
    """Branching state of the whole inside system at one instant.

    Carries the sample and the decayed-branch trajectory template so the
    state can be evolved further without re-supplying the preparation.
    """

    branches: tuple[Branch, ...]
    time: float
    mode: str  # "unitary" | "collapse"
    sample: Sample
    decay_trajectory: Trajectory

    def __post_init__(self):
        if self.mode not in ("unitary", "collapse"):
            raise ValueError(f"unknown mode {self.mode!r}")
        total = sum(b.norm for b in self.branches)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"branch norms must sum to 1, got {total}")

    def branch(self, kind: str) -> Branch:
        for b in self.branches:
            if b.kind == kind:
                return b
        raise KeyError(f"no {kind!r} branch present")


def branch_position(branch: Branch, t: float) -> np.ndarray:
    """Mirror center-of-mass expectation of one branch at absolute time t."""
    clock_start = branch.decay_time if branch.decay_time is not None else 0.0
    return trajectory_position(branch.trajectory, max(t - clock_start, 0.0))


def branch_snapshot(branch: Branch, t: float) -> GaussianPacket:
    """Packet snapshot at absolute time t: current center, branch phase."""
    return replace(
        branch.packet,
        center=branch_position(branch, t),
        global_phase=branch.phase,
    )


def _intact_branch(mirror: GaussianPacket, trajectory: Trajectory, norm: float, phase: float) -> Branch:
    still = Trajectory(trajectory.start, trajectory.start, trajectory.transit_time)
    return Branch("intact", norm, phase, mirror, still)


def prepare(sample: Sample, mirror: GaussianPacket, trajectory: Trajectory,
            mode: str = "unitary") -> SystemState:
    """Factorized initial condition: one intact branch of norm 1 at t = 0."""
    branch = _intact_branch(mirror, trajectory, 1.0, 0.0)
    return SystemState((branch,), 0.0, mode, sample, trajectory)


def _median_first_decay(sample: Sample, t: float) -> float:
    """Median of the first decay time conditioned on >= 1 decay in [0, t]."""
    rate = sample.n_nuclei / sample.law.mean_life
    p = -math.expm1(-rate * t)
    return -math.log1p(-0.5 * p) / rate


def _draw_phases(phase_policy, phases, rng) -> tuple[float, float]:
    if phase_policy == "zero":
        return 0.0, 0.0
    if phase_policy == "fixed":
        if phases is None:
            raise ValueError("phase_policy 'fixed' requires explicit phases")
        return float(phases[0]), float(phases[1])
    if phase_policy == "random":
        rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        drawn = rng.uniform(0.0, 2.0 * math.pi, size=2)
        return float(drawn[0]), float(drawn[1])
    raise ValueError(f"unknown phase_policy {phase_policy!r}; choose from {PHASE_POLICIES}")


def unitary_evolve(state: SystemState, t_target: float, phase_policy: str = "zero",
                   phases=None, rng=None) -> SystemState:
    """Linear evolution to t_target: both branches kept coherently.

    Branch norms come from the sample statistics; the decayed branch's
    trajectory clock starts at the median conditional decay time (the
    late-time observables are insensitive to this choice because the
    transit is much shorter than the horizon).  Phases are drawn once
    per call according to the phase policy.
    """
    if state.mode != "unitary":
        raise ValueError("unitary_evolve requires a unitary-mode state")
    if t_target < state.time:
        raise ValueError(f"cannot evolve backwards: {t_target} < {state.time}")
    if t_target == state.time:
        return state
    n1, n2 = sample_branch_norms(state.sample, t_target)
    mirror = state.branches[0].packet
    phi1, phi2 = _draw_phases(phase_policy, phases, rng)
    intact = _intact_branch(mirror, state.decay_trajectory, n1, phi1)
    t_dec = _median_first_decay(state.sample, t_target)
    decayed = Branch(
        "decayed", n2, phi2,
        replace(mirror, born_at=t_dec),
        state.decay_trajectory,
        decay_time=t_dec,
    )
    return replace(state, branches=(intact, decayed), time=t_target)


@dataclass(frozen=True)
class TrialOutcome:
    """Result of one stochastic collapse trial."""

    seed: int
    collapsed: bool
    decay_time: float | None
    detect_time: float | None
    final_config: str  # "up" | "down" | "moving"
    state: SystemState

    def to_csv_row(self) -> list[str]:
        fmt = lambda v: "" if v is None else f"{v:.17g}"
        return [
            str(self.seed),
            "1" if self.collapsed else "0",
            fmt(self.decay_time),
            fmt(self.detect_time),
            self.final_config,
        ]


OUTCOME_CSV_HEADER = ["seed", "decayed", "decay_time", "detect_time", "final_config"]


def _collapsed_state(sample, mirror, trajectory, decay_time, horizon) -> SystemState:
    branch = Branch(
        "decayed", 1.0, 0.0,
        replace(mirror, born_at=decay_time),
        trajectory,
        decay_time=decay_time,
    )
    return SystemState((branch,), horizon, "collapse", sample, trajectory)


def _intact_state(sample, mirror, trajectory, horizon) -> SystemState:
    branch = _intact_branch(mirror, trajectory, 1.0, 0.0)
    return SystemState((branch,), horizon, "collapse", sample, trajectory)


def _mirror_config(detect_time, transit_time, horizon) -> str:
    move_start = detect_time
    if horizon >= move_start + transit_time:
        return "up"
    if horizon > move_start:
        return "moving"
    return "down"


def collapse_run(sample: Sample, mirror: GaussianPacket, trajectory: Trajectory,
                 detector: DetectorModel, horizon: float, rng_seed: int) -> TrialOutcome:
    """One stochastic trial under the collapse rule.

    The first decay of the sample is exponential with mean
    mean_life / n_nuclei.  A decay within the horizon registers with
    probability ``efficiency`` after ``delay``; registration reduces the
    state to the single decayed branch and the relay starts moving the
    mirror.  Everything else ends as a renormalized intact state.
    """
    if horizon < 0.0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    rng = np.random.default_rng(rng_seed)
    first = rng.exponential(sample.law.mean_life / sample.n_nuclei)
    decayed = first <= horizon
    registered = decayed and rng.random() < detector.efficiency
    if registered:
        detect_time = first + detector.delay
        if detect_time <= horizon:
            state = _collapsed_state(sample, mirror, trajectory, first, horizon)
            config = _mirror_config(detect_time, trajectory.transit_time, horizon)
            return TrialOutcome(rng_seed, True, first, detect_time, config, state)
    state = _intact_state(sample, mirror, trajectory, horizon)
    return TrialOutcome(rng_seed, False, first if decayed else None, None, "down", state)


def inject_test_particle(state: SystemState, detector: DetectorModel, at: float,
                         rng=None) -> SystemState:
    """Force a calibration particle through the counter at time ``at``.

    With probability ``efficiency`` the counter discharges at
    ``at + delay`` and the state collapses to a single decayed branch;
    otherwise the state is returned unchanged.
    """
    state.branch("intact")  # precondition: an intact branch exists
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    if rng.random() < detector.efficiency:
        mirror = state.branch("intact").packet
        return _collapsed_state(state.sample, mirror, state.decay_trajectory,
                                at, max(state.time, at + detector.delay))
    return state
