"""Free-evolution Gaussian model of the switching mirror's center of mass.

A minimum-uncertainty packet of mass m and momentum spread dk starts with
position spread sigma0 = hbar/(2 dk) and spreads as

    sigma(t) = sqrt(sigma0**2 + (dk * t / m)**2).

The full amplitude carries the standard free-particle quadratic chirp
phase, obtained from the complex width s(t)**2 = sigma0**2 + i hbar t/(2m):

    psi(x, t) = (2 pi)**(-3/4) * (s(t)**2 / sigma0)**(-3/2)
                * exp(-(x - y(t))**2 / (4 s(t)**2)) * exp(-i phi)

which is exactly the textbook hbar = 1 form when hbar is set to 1 (the
tests pin that regression).  For a 1 g mirror with sigma0 of one Bohr
radius the doubling time 2*sqrt(3)*m*sigma0**2/hbar is ~9.2e10 s, i.e.
the packet is classical over any laboratory hour.

All times handed to the functions here are *elapsed* times since the
packet's birth (its ``born_at`` label is bookkeeping for callers that
track an absolute clock).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR

__all__ = [
    "GaussianPacket",
    "Trajectory",
    "spread_width",
    "doubling_time",
    "momentum_spread_for_width",
    "trajectory_position",
    "evaluate",
    "overlap",
    "overlap_log_modulus",
]


def _vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class GaussianPacket:
    """Spreading Gaussian wave packet for a massive body.

    mass [g], dk [g cm/s] momentum spread, center [cm] 3-vector,
    global_phase [rad], born_at [s] absolute birth time.
    """

    mass: float
    dk: float
    center: np.ndarray
    global_phase: float = 0.0
    born_at: float = 0.0

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if self.dk <= 0.0:
            raise ValueError(f"dk must be > 0, got {self.dk}")
        object.__setattr__(self, "center", _vec3(self.center))

    def sigma0(self, hbar: float = HBAR) -> float:
        """Initial (minimum-uncertainty) position spread hbar/(2 dk)."""
        return hbar / (2.0 * self.dk)


@dataclass(frozen=True)
class Trajectory:
    """Smooth monotone path of the packet center: start -> end.

    Position is clamped to ``end`` for parameters >= transit_time; the
    interpolation is a quintic smoothstep, so it is C2-continuous and
    each coordinate is monotone.
    """

    start: np.ndarray
    end: np.ndarray
    transit_time: float

    def __post_init__(self):
        if self.transit_time <= 0.0:
            raise ValueError(f"transit_time must be > 0, got {self.transit_time}")
        object.__setattr__(self, "start", _vec3(self.start))
        object.__setattr__(self, "end", _vec3(self.end))


def trajectory_position(trajectory: Trajectory, elapsed: float) -> np.ndarray:
    """Packet center after ``elapsed`` seconds along the trajectory."""
    if elapsed < 0.0:
        raise ValueError(f"elapsed must be >= 0, got {elapsed}")
    u = min(elapsed / trajectory.transit_time, 1.0)
    s = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    return trajectory.start + s * (trajectory.end - trajectory.start)


def spread_width(packet: GaussianPacket, t: float, hbar: float = HBAR) -> float:
    """Position spread sigma(t) after elapsed time t."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    s0 = packet.sigma0(hbar)
    return math.hypot(s0, packet.dk * t / packet.mass)


def doubling_time(mass: float, sigma0: float, hbar: float = HBAR) -> float:
    """Time for the spread to reach 2*sigma0: 2*sqrt(3)*m*sigma0**2/hbar."""
    return 2.0 * math.sqrt(3.0) * mass * sigma0 * sigma0 / hbar


def momentum_spread_for_width(sigma0: float, hbar: float = HBAR) -> float:
    """Momentum spread dk of a minimum-uncertainty packet of width sigma0."""
    return hbar / (2.0 * sigma0)


def _complex_width_sq(packet: GaussianPacket, t: float, hbar: float) -> complex:
    s0 = packet.sigma0(hbar)
    return s0 * s0 + 0.5j * hbar * t / packet.mass


def evaluate(
    packet: GaussianPacket,
    trajectory: Trajectory | None,
    t: float,
    x,
    norm: float = 1.0,
    hbar: float = HBAR,
):
    """Complex amplitude at position(s) x after elapsed time t.

    ``x`` may be a single 3-vector or an (n, 3) array.  The amplitude is
    normalized so that the squared modulus integrates to ``norm``.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    center = packet.center if trajectory is None else trajectory_position(trajectory, t)
    xs = np.asarray(x, dtype=float)
    r2 = np.sum((xs - center) ** 2, axis=-1)
    s2 = _complex_width_sq(packet, t, hbar)
    w = s2 / packet.sigma0(hbar)
    prefactor = (2.0 * math.pi) ** -0.75 * w ** -1.5
    return (
        math.sqrt(norm)
        * prefactor
        * np.exp(-r2 / (4.0 * s2))
        * cmath.exp(-1j * packet.global_phase)
    )


def _check_same_mirror(p1: GaussianPacket, p2: GaussianPacket) -> None:
    if p1.mass != p2.mass or p1.dk != p2.dk:
        raise ValueError("overlap requires packets of the same physical body (equal mass and dk)")


def _overlap_parts(p1, p2, t, hbar, include_chirp):
    """Common machinery: returns (log_modulus, phase) of the overlap."""
    _check_same_mirror(p1, p2)
    for p in (p1, p2):
        if t < p.born_at:
            raise ValueError("t precedes a packet's birth time")
    d2 = float(np.sum((p1.center - p2.center) ** 2))
    rel_phase = p1.global_phase - p2.global_phase
    if include_chirp:
        s1 = _complex_width_sq(p1, t - p1.born_at, hbar)
        s2 = _complex_width_sq(p2, t - p2.born_at, hbar)
        s0 = p1.sigma0(hbar)
        w1, w2 = s1 / s0, s2 / s0
        a = 1.0 / (4.0 * s1.conjugate())
        b = 1.0 / (4.0 * s2)
        log_pref = (
            -1.5 * math.log(2.0 * math.pi)
            - 1.5 * cmath.log(w1.conjugate() * w2)
            + 1.5 * cmath.log(math.pi / (a + b))
        )
        log_ov = log_pref - (a * b / (a + b)) * d2
        return log_ov.real, log_ov.imag + rel_phase
    # envelope-only variant: real widths sigma(t), no oscillatory cross-term
    sa = spread_width(p1, t - p1.born_at, hbar)
    sb = spread_width(p2, t - p2.born_at, hbar)
    log_mod = 1.5 * math.log(2.0 * sa * sb / (sa * sa + sb * sb)) - d2 / (
        4.0 * (sa * sa + sb * sb)
    )
    return log_mod, rel_phase


def overlap(
    p1: GaussianPacket,
    p2: GaussianPacket,
    t: float,
    hbar: float = HBAR,
    include_chirp: bool = True,
) -> complex:
    """Closed-form inner product <p1|p2> of two packets at absolute time t.

    Includes the relative global phase and, unless ``include_chirp`` is
    False, the chirp cross-term that suppresses the overlap below the
    envelope-only value.  Modulus is <= 1 for unit-norm packets and may
    underflow to exactly 0.0 for macroscopic separations (use
    ``overlap_log_modulus`` for the honest exponent).
    """
    log_mod, phase = _overlap_parts(p1, p2, t, hbar, include_chirp)
    if log_mod < -745.0:  # exp underflows to 0.0 anyway
        return 0.0 + 0.0j
    return cmath.exp(log_mod + 1j * phase)


def overlap_log_modulus(
    p1: GaussianPacket,
    p2: GaussianPacket,
    t: float,
    hbar: float = HBAR,
    include_chirp: bool = True,
) -> float:
    """Natural log of |<p1|p2>|; finite even when the overlap underflows."""
    log_mod, _ = _overlap_parts(p1, p2, t, hbar, include_chirp)
    return log_mod
