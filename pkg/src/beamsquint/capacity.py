"""Channel capacity of a squinting beam, capacity thresholds, and the
geometry of gain-constrained angle regions.

Two capacities are compared throughout: the per-subcarrier average seen by a
phase-shifter beam (each subcarrier's gain is taken at its squinted angle)
and the ideal value a true-time-delay implementation would give, where every
subcarrier sees the carrier-frequency pattern.  Capacities are in bit/s when
the band carries an absolute bandwidth and per unit bandwidth otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .array_model import ArrayConfig, _ratio_array, gain_mag, subcarrier_grid
from .errors import ConfigError, DomainError, InfeasibleError
from .roots import bisect_decreasing

ArrayLike = Union[float, np.ndarray]

# Gain-region thresholds below this would admit sidelobes (their peak sits
# near 0.217*sqrt(N)); only the main lobe is modelled.
MIN_REGION_R = 0.25

_REL_TOL_B = 1e-12


@dataclass(frozen=True)
class BandConfig:
    """OFDM band: fractional bandwidth, subcarrier count and linear SNR.

    ``snr`` is the ratio of total received power to in-band noise power,
    P/(B*sigma^2).  When ``bandwidth_hz`` is absent all capacities are
    reported per unit bandwidth.  If both absolute frequencies are given
    they must be consistent with ``b``.
    """

    b: float
    n_f: int
    snr: float
    bandwidth_hz: float | None = None
    carrier_hz: float | None = None

    def __post_init__(self):
        if self.snr <= 0.0:
            raise ConfigError(f"snr must be positive, got {self.snr}")
        # Delegates the b / n_f checks (also warms the ratio cache).
        subcarrier_grid(self.b, self.n_f)
        if self.bandwidth_hz is not None and self.bandwidth_hz <= 0:
            raise ConfigError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")
        if self.carrier_hz is not None and self.carrier_hz <= 0:
            raise ConfigError(f"carrier_hz must be positive, got {self.carrier_hz}")
        if self.bandwidth_hz is not None and self.carrier_hz is not None:
            implied = self.bandwidth_hz / self.carrier_hz
            if abs(implied - self.b) > _REL_TOL_B * max(abs(self.b), implied):
                raise ConfigError(
                    f"b={self.b} inconsistent with bandwidth_hz/carrier_hz={implied}")

    @classmethod
    def from_hz(cls, bandwidth_hz: float, carrier_hz: float, n_f: int,
                snr: float) -> "BandConfig":
        """Build a band from absolute frequencies; b = bandwidth/carrier."""
        if carrier_hz <= 0:
            raise ConfigError(f"carrier_hz must be positive, got {carrier_hz}")
        return cls(b=bandwidth_hz / carrier_hz, n_f=n_f, snr=snr,
                   bandwidth_hz=bandwidth_hz, carrier_hz=carrier_hz)

    @property
    def bandwidth(self) -> float:
        """Absolute bandwidth, or 1.0 in dimensionless mode."""
        return self.bandwidth_hz if self.bandwidth_hz is not None else 1.0

    @property
    def ratios(self) -> np.ndarray:
        """Subcarrier frequency ratios (read-only, cached)."""
        return _ratio_array(self.b, self.n_f)


@dataclass(frozen=True)
class GainRegion:
    """Angle interval around ``psi_f`` where the carrier gain stays at or
    above ``r`` times the peak, clipped to the visible region [-1, 1]."""

    psi_f: float
    r: float
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo


def capacity_bs(psi_f: float, psi: ArrayLike, band: BandConfig,
                arr: ArrayConfig) -> float | np.ndarray:
    """Channel capacity of a squinting beam focused on ``psi_f`` at arrival
    angle ``psi``.

    Averages the per-subcarrier Shannon rates, each evaluated at its
    squinted angle.  ``psi`` may be an array, in which case one capacity
    per entry is returned.  At zero fractional bandwidth the subcarrier
    grid collapses and this is exactly :func:`capacity_nbs`.
    """
    if band.b == 0.0:
        return capacity_nbs(psi_f, psi, band, arr)
    xi = band.ratios
    ps = np.asarray(psi, dtype=float)
    scale = band.bandwidth / band.n_f
    if ps.ndim == 0:
        g2 = gain_mag(xi * float(ps) - psi_f, arr) ** 2
        return float(scale * np.sum(np.log2(1.0 + band.snr * g2)))
    g2 = gain_mag(xi[np.newaxis, :] * ps[:, np.newaxis] - psi_f, arr) ** 2
    return scale * np.sum(np.log2(1.0 + band.snr * g2), axis=1)


def capacity_nbs(psi_f: float, psi: ArrayLike, band: BandConfig,
                 arr: ArrayConfig) -> float | np.ndarray:
    """Capacity without squint: every subcarrier sees the carrier pattern."""
    ps = np.asarray(psi, dtype=float)
    g2 = gain_mag(ps - psi_f, arr) ** 2
    out = band.bandwidth * np.log2(1.0 + band.snr * g2)
    if ps.ndim == 0:
        return float(out)
    return out


def spectral_efficiency_bs(psi_f: float, psi: ArrayLike, band: BandConfig,
                           arr: ArrayConfig) -> float | np.ndarray:
    """Squinted capacity per unit bandwidth (bit/s/Hz)."""
    return capacity_bs(psi_f, psi, band, arr) / band.bandwidth


def capacity_threshold(r: float, band: BandConfig, arr: ArrayConfig) -> float:
    """No-squint capacity at the edge of the gain region for ratio ``r``.

    This is the natural benchmark for a per-beam capacity floor:
    B*log2(1 + r^2*N*snr).  ``r = sqrt(2)/2`` gives the 3 dB variant, see
    :func:`capacity_threshold_3db`.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must be in (0, 1), got {r}")
    return band.bandwidth * math.log2(1.0 + r * r * arr.n_antennas * band.snr)


def capacity_threshold_3db(band: BandConfig, arr: ArrayConfig) -> float:
    """The r = sqrt(2)/2 capacity threshold (gain 3 dB below peak)."""
    return capacity_threshold(math.sqrt(2.0) / 2.0, band, arr)


@lru_cache(maxsize=4096)
def _gain_halfwidth(r: float, n: int) -> float:
    """Half-width of the main-lobe interval where gain >= r*sqrt(N)."""
    cfg = ArrayConfig(n)
    target = r * cfg.peak_gain
    return bisect_decreasing(lambda w: gain_mag(w, cfg) - target,
                             0.0, cfg.main_lobe_half_span)


def gain_region(psi_f: float, r: float, arr: ArrayConfig) -> GainRegion:
    """Main-lobe interval around ``psi_f`` with carrier gain >= r*sqrt(N).

    The half-width solves gain(w) = r*sqrt(N) by bisection within the main
    lobe; the interval is then clipped to the visible region.  ``r`` below
    0.25 is rejected: sidelobes would start to qualify and are out of
    scope for this model.
    """
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must be in (0, 1), got {r}")
    if r < MIN_REGION_R:
        raise ConfigError(
            f"r={r} is below {MIN_REGION_R}; sidelobes would qualify and only the "
            "main lobe is modelled")
    w = _gain_halfwidth(float(r), arr.n_antennas)
    return GainRegion(psi_f=psi_f, r=r,
                      lo=max(psi_f - w, -1.0), hi=min(psi_f + w, 1.0))


def beamwidth_nbs(c_t: float, band: BandConfig, arr: ArrayConfig) -> float:
    """Width of the angle interval where the no-squint capacity meets ``c_t``.

    Focus-independent: it equals the width of the gain region at the
    equivalent gain ratio r = sqrt((2^(c_t/B) - 1)/(N*snr)).

    Raises
    ------
    InfeasibleError
        If ``c_t`` is at or above the peak no-squint capacity.
    """
    n = arr.n_antennas
    peak = band.bandwidth * math.log2(1.0 + n * band.snr)
    if c_t >= peak:
        raise InfeasibleError(
            f"threshold {c_t} is not below the peak no-squint capacity {peak}")
    if c_t <= 0.0:
        raise DomainError(f"c_t must be positive, got {c_t}")
    r = math.sqrt((2.0 ** (c_t / band.bandwidth) - 1.0) / (n * band.snr))
    if r < MIN_REGION_R:
        raise ConfigError(
            f"threshold {c_t} maps to gain ratio {r:.4f} below {MIN_REGION_R}; "
            "only main-lobe beamwidths are modelled")
    return 2.0 * _gain_halfwidth(r, n)


def squint_safe_range(psi_f: float, b: float, arr: ArrayConfig) -> tuple[float, float]:
    """Arrival-angle interval on which squint can only reduce capacity.

    Inside the returned interval every subcarrier's squinted angle
    ``xi*psi`` stays within the concave span of the main lobe around
    ``psi_f``, for all ratios xi in [1 - b/2, 1 + b/2].  Which band edge
    binds depends on the sign of psi, hence the piecewise division.  The
    result is not clipped to the visible region and may be empty
    (lo > hi) when ``psi_f`` sits too far out for the given ``b``.
    """
    c = arr.concave_half_span
    lo_y = psi_f - c
    hi_y = psi_f + c
    lo = lo_y / (1.0 - b / 2.0) if lo_y >= 0.0 else lo_y / (1.0 + b / 2.0)
    hi = hi_y / (1.0 + b / 2.0) if hi_y >= 0.0 else hi_y / (1.0 - b / 2.0)
    return lo, hi
