"""Capacity-constrained beam coverage and minimum-size codebook synthesis.

A beam focused on psi_F covers the angles where its squinted capacity stays
at or above a threshold c_t.  Because squint narrows coverage away from
broadside, codebooks that tile [-psi_m, psi_m] cannot use a fixed beam
pitch; instead beams are chained outward one by one, each new beam's left
coverage edge abutting the previous beam's right edge.  Both a broadside-
centred (odd-size) and an edge-started (even-size) chain are built and the
smaller codebook wins.

Coverage edges and focus angles have no closed form; each is the root of a
monotone capacity equation on a bracket of half the no-squint beamwidth and
is found by bisection.  When the capacity at a required focus cannot reach
the threshold, no codebook exists for that fractional bandwidth; the
largest workable bandwidth is itself located by bisection on feasibility.

Synthesis is sequential per codebook; distinct designs share no mutable
state and may run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .array_model import ArrayConfig, PhaseVector, steering_phases
from .capacity import (BandConfig, beamwidth_nbs, capacity_bs, capacity_threshold,
                       gain_region)
from .errors import ConfigError, DomainError, InfeasibleError
from .roots import bisect_decreasing, bisect_increasing

# A solved beam narrower than this cannot make progress at the solver's
# 1e-10 angular resolution; the design is declared infeasible.
_MIN_BEAM_WIDTH = 1e-9

# Hard cap on beams per chain; the count grows without bound only in the
# immediate neighbourhood of the feasibility boundary.
_MAX_BEAMS = 100_000


@dataclass(frozen=True)
class Beam:
    """One codebook entry: focus angle, phases and solved coverage edges."""

    focus: float
    phases: PhaseVector
    left: float
    right: float
    width: float


@dataclass(frozen=True)
class Codebook:
    """Ordered beams whose coverages jointly span [-psi_m, psi_m]."""

    beams: tuple[Beam, ...]
    psi_m: float
    c_t: float
    parity: str
    size: int


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of one codebook design attempt."""

    n: int
    b: float
    feasible: bool
    failing_focus: float | None = None
    size_if_feasible: int | None = None


@dataclass(frozen=True)
class BsupFit:
    """Inverse-law fit of the bandwidth limit across array sizes."""

    a: float
    mean_deviation: float
    max_deviation: float
    bsup_by_n: dict[int, float]


def solve_right_edge(psi_f: float, c_t: float, band: BandConfig,
                     arr: ArrayConfig) -> float:
    """Right coverage edge of a beam focused on ``psi_f``.

    The squinted capacity decreases from its value at the focus through
    c_t somewhere inside half a no-squint beamwidth; bisection finds that
    crossing.  With zero fractional bandwidth the edge sits exactly on the
    no-squint bracket boundary.

    Raises
    ------
    InfeasibleError
        If the capacity at the focus itself is already below ``c_t`` (the
        local signal that the fractional bandwidth is too large).
    """
    half = beamwidth_nbs(c_t, band, arr) / 2.0
    if capacity_bs(psi_f, psi_f, band, arr) < c_t:
        raise InfeasibleError(
            f"capacity at focus {psi_f} is below the threshold", psi_f)
    return bisect_decreasing(
        lambda psi: capacity_bs(psi_f, psi, band, arr) - c_t, psi_f, psi_f + half)


def solve_left_edge(psi_f: float, c_t: float, band: BandConfig,
                    arr: ArrayConfig) -> float:
    """Left coverage edge of a beam focused on ``psi_f``; mirror of
    :func:`solve_right_edge`."""
    half = beamwidth_nbs(c_t, band, arr) / 2.0
    if capacity_bs(psi_f, psi_f, band, arr) < c_t:
        raise InfeasibleError(
            f"capacity at focus {psi_f} is below the threshold", psi_f)
    return bisect_increasing(
        lambda psi: capacity_bs(psi_f, psi, band, arr) - c_t, psi_f - half, psi_f)


def solve_focus_from_left(psi_l: float, c_t: float, band: BandConfig,
                          arr: ArrayConfig) -> float:
    """Focus angle whose coverage starts exactly at ``psi_l``.

    As the focus moves right of ``psi_l`` the capacity delivered at
    ``psi_l`` falls; the focus is the point where it hits c_t, bracketed
    within half a no-squint beamwidth of ``psi_l``.

    Raises
    ------
    InfeasibleError
        If even a beam focused on ``psi_l`` itself cannot reach ``c_t``
        there (no bracketed root exists).
    """
    half = beamwidth_nbs(c_t, band, arr) / 2.0
    if capacity_bs(psi_l, psi_l, band, arr) < c_t:
        raise InfeasibleError(
            f"no focus can deliver the threshold at left edge {psi_l}", psi_l)
    return bisect_decreasing(
        lambda pf: capacity_bs(pf, psi_l, band, arr) - c_t, psi_l, psi_l + half)


def _grow_chain(start_right: float, psi_m: float, c_t: float, band: BandConfig,
                arr: ArrayConfig, max_beams: int) -> list[tuple[float, float, float]]:
    """Chain (focus, left, right) triples rightward until psi_m is covered."""
    out: list[tuple[float, float, float]] = []
    right = start_right
    while right < psi_m:
        left = right
        focus = solve_focus_from_left(left, c_t, band, arr)
        edge = solve_right_edge(focus, c_t, band, arr)
        if edge - left < _MIN_BEAM_WIDTH:
            raise InfeasibleError(
                f"beam coverage collapsed below solver resolution at focus {focus}",
                focus)
        out.append((focus, left, edge))
        right = edge
        if len(out) > max_beams:
            raise InfeasibleError(
                f"beam count exceeded {max_beams} before reaching {psi_m}", focus)
    return out


def _assemble(positives: list[tuple[float, float, float]],
              centre: tuple[float, float, float] | None,
              psi_m: float, c_t: float, arr: ArrayConfig, parity: str) -> Codebook:
    """Mirror the positive-side chain about broadside and build the codebook."""
    def beam(focus: float, left: float, right: float) -> Beam:
        return Beam(focus=focus, phases=PhaseVector(steering_phases(focus, arr), focus),
                    left=left, right=right, width=right - left)

    # 0.0 - x rather than -x keeps a 0.0 edge from turning into -0.0.
    mirrored = [beam(0.0 - f, 0.0 - r, 0.0 - l) for f, l, r in reversed(positives)]
    middle = [beam(*centre)] if centre is not None else []
    ordered = mirrored + middle + [beam(*t) for t in positives]
    return Codebook(beams=tuple(ordered), psi_m=psi_m, c_t=c_t,
                    parity=parity, size=len(ordered))


def design_codebook(psi_m: float, c_t: float, band: BandConfig, arr: ArrayConfig,
                    max_beams: int = _MAX_BEAMS) -> Codebook:
    """Smallest broadside-symmetric codebook covering [-psi_m, psi_m].

    Runs two constructions and keeps the smaller:

    * odd size: a beam centred on broadside, then symmetric pairs chained
      outward from its right edge;
    * even size: the first positive-side beam's coverage starts at 0, so
      beams straddle broadside in pairs.

    The final chained beam may overshoot ``psi_m``; it is kept exactly as
    solved.  On a tie the odd construction is returned.

    Raises
    ------
    InfeasibleError
        When either edge or focus solving breaks down in both
        constructions: no codebook exists at this fractional bandwidth.
    """
    if not 0.0 < psi_m <= 1.0:
        raise DomainError(f"psi_m must be in (0, 1], got {psi_m}")

    odd: Codebook | None = None
    even: Codebook | None = None
    odd_failure: InfeasibleError | None = None

    try:
        r0 = solve_right_edge(0.0, c_t, band, arr)
        chain = _grow_chain(r0, psi_m, c_t, band, arr, max_beams)
        odd = _assemble(chain, (0.0, 0.0 - r0, r0), psi_m, c_t, arr, "odd")
    except InfeasibleError as exc:
        odd_failure = exc

    try:
        chain = _grow_chain(0.0, psi_m, c_t, band, arr, max_beams)
        even = _assemble(chain, None, psi_m, c_t, arr, "even")
    except InfeasibleError as exc:
        if odd is None:
            failure = odd_failure if odd_failure is not None else exc
            raise InfeasibleError(
                f"no codebook exists: {failure}", failure.failing_focus) from exc

    if odd is None:
        return even
    if even is None or odd.size <= even.size:
        return odd
    return even


def assess_feasibility(psi_m: float, c_t: float, band: BandConfig,
                       arr: ArrayConfig) -> FeasibilityReport:
    """Attempt a design and report the outcome instead of raising."""
    try:
        cb = design_codebook(psi_m, c_t, band, arr)
    except InfeasibleError as exc:
        return FeasibilityReport(n=arr.n_antennas, b=band.b, feasible=False,
                                 failing_focus=exc.failing_focus)
    return FeasibilityReport(n=arr.n_antennas, b=band.b, feasible=True,
                             size_if_feasible=cb.size)


def _capacity_at(psi_f: float, points: np.ndarray, band: BandConfig,
                 arr: ArrayConfig, chunk: int = 2048) -> np.ndarray:
    """Squinted capacity at many arrival angles, chunked to bound memory."""
    if len(points) <= chunk:
        return np.atleast_1d(capacity_bs(psi_f, points, band, arr))
    parts = [capacity_bs(psi_f, points[i:i + chunk], band, arr)
             for i in range(0, len(points), chunk)]
    return np.concatenate([np.atleast_1d(p) for p in parts])


def coverage_check(cb: Codebook, band: BandConfig, arr: ArrayConfig,
                   grid_step: float, tol: float = 1e-6) -> bool:
    """Independently verify that the codebook covers [-psi_m, psi_m].

    True iff every grid angle has at least one beam whose squinted capacity
    meets ``c_t - tol`` there.  Each point is first tested against the beam
    with the nearest focus (a speed heuristic only); points that fail fall
    back to an exhaustive scan over all beams.
    """
    if grid_step <= 0.0:
        raise ConfigError(f"grid_step must be positive, got {grid_step}")
    grid = np.arange(-cb.psi_m, cb.psi_m + grid_step / 2.0, grid_step)
    foci = np.array([beam.focus for beam in cb.beams])
    floor = cb.c_t - tol

    idx = np.clip(np.searchsorted(foci, grid), 0, len(foci) - 1)
    left = np.clip(idx - 1, 0, len(foci) - 1)
    nearest = np.where(np.abs(foci[left] - grid) <= np.abs(foci[idx] - grid),
                       left, idx)

    unresolved: list[float] = []
    for i in range(len(cb.beams)):
        pts = grid[nearest == i]
        if pts.size == 0:
            continue
        caps = _capacity_at(cb.beams[i].focus, pts, band, arr)
        unresolved.extend(pts[caps < floor])

    for psi in unresolved:
        if not any(capacity_bs(beam.focus, psi, band, arr) >= floor
                   for beam in cb.beams):
            return False
    return True


def traditional_min_capacity(psi_f: float, r: float, band: BandConfig,
                             arr: ArrayConfig) -> float:
    """Worst squinted capacity over a squint-ignoring beam's assigned region.

    A conventional codebook assigns the beam the gain region for ratio
    ``r`` computed at the carrier only.  With squint the capacity sags
    toward the region edges; the minimum is taken over the two (clipped)
    edges.
    """
    region = gain_region(psi_f, r, arr)
    if region.lo > region.hi:
        raise DomainError(f"gain region at psi_f={psi_f} is empty")
    return min(capacity_bs(psi_f, region.lo, band, arr),
               capacity_bs(psi_f, region.hi, band, arr))


def improvement_ratio(psi_f: float, r: float, band: BandConfig,
                      arr: ArrayConfig) -> float:
    """Relative capacity gained by enforcing the threshold instead of using
    a squint-ignoring beam: (C_t - C_min) / C_min."""
    c_min = traditional_min_capacity(psi_f, r, band, arr)
    if c_min <= 0.0:
        raise DomainError(
            f"squinted capacity vanished at the region edge for psi_f={psi_f}")
    return (capacity_threshold(r, band, arr) - c_min) / c_min


def improvement_max(r: float, band: BandConfig, arr: ArrayConfig,
                    grid_step: float = 0.01) -> float:
    """Largest improvement ratio over all focus angles.

    The ratio is invariant under focus reflection, so only [0, 1] is
    scanned; the maximum sits at (or within a grid step of) endfire.
    """
    grid = np.arange(0.0, 1.0 + grid_step / 2.0, grid_step)
    return max(improvement_ratio(float(pf), r, band, arr) for pf in grid)


def estimate_bsup(arr: ArrayConfig, r: float, snr: float, psi_m: float = 1.0,
                  tol_b: float = 1e-6, n_f: int = 2048,
                  max_iter: int = 60) -> float:
    """Largest fractional bandwidth at which a codebook still exists.

    Bisects feasibility of :func:`design_codebook` over b in [0, 2); zero
    bandwidth is always feasible.  Feasibility is monotone in b across the
    sampled parameter space, which the test suite checks empirically.
    """
    if tol_b <= 0.0:
        raise ConfigError(f"tol_b must be positive, got {tol_b}")

    def feasible(b: float) -> bool:
        band = BandConfig(b=b, n_f=n_f, snr=snr)
        c_t = capacity_threshold(r, band, arr)
        try:
            design_codebook(psi_m, c_t, band, arr)
        except InfeasibleError:
            return False
        return True

    lo, hi = 0.0, 2.0
    for _ in range(max_iter):
        if hi - lo <= tol_b:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def fit_bsup_constant(n_values: Sequence[int], r: float, snr: float,
                      psi_m: float = 1.0, tol_b: float = 1e-6, n_f: int = 2048,
                      bsup_values: Sequence[float] | None = None) -> BsupFit:
    """Fit the inverse law bandwidth-limit ~ a/N across array sizes.

    Least squares on bsup(N)*N reduces to its mean; the per-N absolute
    deviations from ``a`` quantify how well the inverse law holds.  Pass
    ``bsup_values`` to fit precomputed estimates instead of re-running the
    feasibility bisections.
    """
    ns = list(n_values)
    if len(set(ns)) < 3:
        raise ConfigError(f"need at least 3 distinct array sizes, got {ns}")
    if bsup_values is None:
        bsup = [estimate_bsup(ArrayConfig(n), r, snr, psi_m, tol_b, n_f) for n in ns]
    else:
        bsup = list(bsup_values)
        if len(bsup) != len(ns):
            raise ConfigError("bsup_values length must match n_values")
    products = np.array([n * v for n, v in zip(ns, bsup)])
    a = float(np.mean(products))
    dev = np.abs(products - a)
    return BsupFit(a=a, mean_deviation=float(np.mean(dev)),
                   max_deviation=float(np.max(dev)),
                   bsup_by_n={n: v for n, v in zip(ns, bsup)})
