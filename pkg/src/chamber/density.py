"""Mixed-state mode: weighted ensembles of pure branching states.

The density operator is represented extensionally as a weighted list of
pure SystemStates.  Every quantity consumed downstream (branch position
expectations, screen amplitudes) is affine in the ensemble weights, so
this representation is exact rather than an approximation.

The key demonstration lives in ``pattern_mixed``: averaging members with
independent random relative branch phases suppresses the interference
cross-term at rate 1/sqrt(members) — decoherence — while the two-branch
decomposition itself survives mixing untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .branching import SystemState, branch_position
from .interferometer import OpticalConfig, ScreenPattern, branch_amplitude

__all__ = [
    "Ensemble",
    "branch_expectation",
    "pattern_mixed",
    "random_phase_ensemble",
]

MAX_MEMBERS = 4096

_BRANCH_TO_PATH = {"intact": "down", "decayed": "up"}


@dataclass(frozen=True)
class Ensemble:
    """Weighted pure states; weights sum to 1.

    Every member must carry the same branch kinds at the same time, so
    branch-wise quantities are well defined across the ensemble.
    """

    members: tuple  # of (weight, SystemState)

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("ensemble must have at least one member")
        if len(members) > MAX_MEMBERS:
            raise ValueError(f"ensemble capped at {MAX_MEMBERS} members")
        if any(w < 0.0 for w, _ in members):
            raise ValueError("weights must be >= 0")
        total = math.fsum(w for w, _ in members)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total}")
        kinds = frozenset(b.kind for b in members[0][1].branches)
        times = {s.time for _, s in members}
        if len(times) != 1:
            raise ValueError("all members must share a common evolution time")
        for _, s in members[1:]:
            if frozenset(b.kind for b in s.branches) != kinds:
                raise ValueError("all members must decompose into the same branch kinds")

    @property
    def time(self) -> float:
        return self.members[0][1].time


def branch_expectation(ensemble: Ensemble, kind: str) -> np.ndarray:
    """Weight-averaged mirror position expectation of one branch kind."""
    t = ensemble.time
    total = np.zeros(3)
    for w, state in ensemble.members:
        total += w * branch_position(state.branch(kind), t)
    return total


def pattern_mixed(ensemble: Ensemble, config: OpticalConfig, screen_points,
                  mode: str = "unitary") -> ScreenPattern:
    """Screen pattern of the mixed state.

    unitary:   I = |g_down + g_up|**2 with g_path the weight-averaged
               branch amplitudes across members.
    collapsed: member-and-branch incoherent average, i.e. each member
               contributes its norm-weighted single-path intensities.

    A single-member ensemble reduces exactly to the pure-state results.
    """
    if mode not in ("unitary", "collapsed"):
        raise ValueError(f"unknown mode {mode!r}")
    screen_points = np.asarray(screen_points, dtype=float)
    if mode == "unitary":
        gamma = np.zeros(len(screen_points), dtype=complex)
        for w, state in ensemble.members:
            for b in state.branches:
                gamma += w * branch_amplitude(
                    config, _BRANCH_TO_PATH[b.kind], screen_points,
                    extra_phase=b.phase, weight=b.norm,
                )
        return ScreenPattern(screen_points, np.abs(gamma) ** 2)
    intensity = np.zeros(len(screen_points))
    for w, state in ensemble.members:
        for b in state.branches:
            amp = branch_amplitude(
                config, _BRANCH_TO_PATH[b.kind], screen_points, weight=b.norm,
            )
            intensity += w * np.abs(amp) ** 2
    return ScreenPattern(screen_points, intensity)


def random_phase_ensemble(state: SystemState, n_members: int, rng) -> Ensemble:
    """Equal-weight copies of ``state`` with random decayed-branch phases.

    Models environmental dephasing: each member keeps the intact branch
    phase and draws an independent uniform relative phase for the
    decayed branch.
    """
    if n_members < 1:
        raise ValueError("n_members must be >= 1")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    members = []
    for _ in range(n_members):
        phases = rng.uniform(0.0, 2.0 * math.pi)
        branches = tuple(
            replace(b, phase=phases) if b.kind == "decayed" else b
            for b in state.branches
        )
        members.append((1.0 / n_members, replace(state, branches=branches)))
    return Ensemble(tuple(members))
