"""Scalar wave optics of the laser / two-mirror / screen table.

The beam reaches the screen by one of two classical paths:

* ``up``   — the switching mirror has moved out of the beam; the laser
  illuminates the screen directly.
* ``down`` — the switching mirror deflects the beam to the fixed mirror
  and from there to the screen.

Amplitudes are spherical scalar waves exp(i 2 pi L / lambda) / L; the
mirror's quantum packet width (~ Bohr radius) is negligible against the
wavelength, so each branch uses its classical path and enters only
through its norm and phase.  Branch kinds map intact -> down path and
decayed -> up path.

The default geometry is chosen so the window holds O(10-100) well
resolved fringes: fixed mirror offset 0.5 cm below the switch site,
screen 10 m downstream, sampled over +-2 cm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import HENE_WAVELENGTH

__all__ = [
    "OpticalConfig",
    "ScreenPattern",
    "screen_offsets",
    "path_length",
    "branch_amplitude",
    "pattern_unitary",
    "pattern_collapsed",
    "pattern_half_silvered",
    "visibility",
]

_BRANCH_TO_PATH = {"intact": "down", "decayed": "up"}


def _vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class OpticalConfig:
    """Positions [cm] of laser, mirrors and screen, plus the wavelength.

    The screen is parameterized by a scalar offset along ``screen_axis``
    from ``screen_origin``; ``m2_state`` records which mirror is in the
    beam for bookkeeping (the pattern functions select paths themselves).
    """

    laser: np.ndarray = field(default_factory=lambda: np.zeros(3))
    m2: np.ndarray = field(default_factory=lambda: np.array([10.0, 0.0, 0.0]))
    m1: np.ndarray = field(default_factory=lambda: np.array([10.0, -0.5, 0.0]))
    screen_origin: np.ndarray = field(default_factory=lambda: np.array([1010.0, 0.0, 0.0]))
    screen_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0, 0.0]))
    wavelength: float = HENE_WAVELENGTH
    m2_state: str = "down_full"

    def __post_init__(self):
        for name in ("laser", "m2", "m1", "screen_origin", "screen_axis"):
            object.__setattr__(self, name, _vec3(getattr(self, name)))
        if self.wavelength <= 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.m2_state not in ("down_full", "up", "down_half"):
            raise ValueError(f"unknown m2_state {self.m2_state!r}")
        axis_len = float(np.linalg.norm(self.screen_axis))
        if axis_len == 0.0:
            raise ValueError("screen_axis must be non-zero")
        object.__setattr__(self, "screen_axis", self.screen_axis / axis_len)
        for a, b, what in (
            (self.laser, self.m2, "laser-m2"),
            (self.m2, self.m1, "m2-m1"),
            (self.m1, self.screen_origin, "m1-screen"),
            (self.laser, self.screen_origin, "laser-screen"),
        ):
            if np.linalg.norm(b - a) == 0.0:
                raise ValueError(f"degenerate geometry: zero-length {what} segment")


@dataclass(frozen=True)
class ScreenPattern:
    """Sampled intensity along the screen (arbitrary units)."""

    positions: np.ndarray
    intensities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=float))
        object.__setattr__(self, "intensities", np.asarray(self.intensities, dtype=float))
        if self.positions.shape != self.intensities.shape:
            raise ValueError("positions and intensities must have equal length")
        if np.any(self.intensities < 0.0):
            raise ValueError("intensities must be >= 0")


def screen_offsets(half_width: float = 2.0, n_points: int = 2001) -> np.ndarray:
    """Evenly spaced screen coordinates over [-half_width, half_width]."""
    if half_width <= 0.0 or n_points < 2:
        raise ValueError("need half_width > 0 and n_points >= 2")
    return np.linspace(-half_width, half_width, n_points)


def _screen_point(config: OpticalConfig, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return config.screen_origin + np.multiply.outer(s, config.screen_axis)


def path_length(config: OpticalConfig, branch_kind: str, s):
    """Optical path length [cm] to screen offset(s) s for one path."""
    point = _screen_point(config, s)
    if branch_kind == "up":
        return np.linalg.norm(point - config.laser, axis=-1)
    if branch_kind == "down":
        fixed = np.linalg.norm(config.m2 - config.laser) + np.linalg.norm(
            config.m1 - config.m2
        )
        return fixed + np.linalg.norm(point - config.m1, axis=-1)
    raise ValueError(f"unknown branch_kind {branch_kind!r}")


def branch_amplitude(config: OpticalConfig, branch_kind: str, s,
                     extra_phase: float = 0.0, weight: float = 1.0):
    """Spherical-wave amplitude sqrt(w) e^{i phi} e^{i 2 pi L/lambda} / L."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight must be in [0, 1], got {weight}")
    length = path_length(config, branch_kind, s)
    phase = extra_phase + 2.0 * math.pi * length / config.wavelength
    return math.sqrt(weight) * np.exp(1j * phase) / length


def pattern_unitary(config: OpticalConfig, branches, screen_points) -> ScreenPattern:
    """Coherent two-branch pattern: I = |A_down + A_up|**2.

    ``branches`` must contain exactly one intact and one decayed branch
    (from a unitary-mode state); their norms weight and their phases
    shift the respective path amplitudes.
    """
    branches = tuple(branches)
    if len(branches) != 2 or {b.kind for b in branches} != {"intact", "decayed"}:
        raise ValueError("pattern_unitary needs exactly one intact and one decayed branch")
    total = np.zeros(len(screen_points), dtype=complex)
    for b in branches:
        total += branch_amplitude(
            config, _BRANCH_TO_PATH[b.kind], screen_points,
            extra_phase=b.phase, weight=b.norm,
        )
    return ScreenPattern(screen_points, np.abs(total) ** 2)


def pattern_half_silvered(config: OpticalConfig, screen_points) -> ScreenPattern:
    """Reference pattern of a physical half-silvered switch mirror."""
    total = branch_amplitude(config, "down", screen_points, weight=0.5)
    total = total + branch_amplitude(config, "up", screen_points, weight=0.5)
    return ScreenPattern(screen_points, np.abs(total) ** 2)


def pattern_collapsed(config: OpticalConfig, outcomes, screen_points,
                      include_moving: bool = False) -> ScreenPattern:
    """Trial-averaged pattern of collapsed single-branch runs.

    Each trial contributes the incoherent single-path intensity of its
    final mirror configuration.  Mid-transit ("moving") trials are
    excluded by default; with ``include_moving`` they are attributed to
    the configuration the mirror is committed to (up).
    """
    outcomes = list(outcomes)
    if not outcomes:
        raise ValueError("pattern_collapsed needs at least one outcome")
    counts = {"up": 0, "down": 0}
    for o in outcomes:
        config_name = o.final_config
        if config_name == "moving":
            if not include_moving:
                continue
            config_name = "up"
        counts[config_name] += 1
    used = counts["up"] + counts["down"]
    if used == 0:
        raise ValueError("no usable outcomes (all trials mid-transit)")
    intensity = np.zeros(len(screen_points))
    for path, count in counts.items():
        if count:
            amp = branch_amplitude(config, path, screen_points)
            intensity += (count / used) * np.abs(amp) ** 2
    return ScreenPattern(screen_points, intensity)


def visibility(pattern: ScreenPattern, window=None) -> float:
    """Fringe visibility (Imax - Imin)/(Imax + Imin) over an index window."""
    values = pattern.intensities if window is None else pattern.intensities[window]
    if values.size == 0:
        raise ValueError("visibility window is empty")
    hi, lo = float(np.max(values)), float(np.min(values))
    if hi + lo == 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)
