"""Minimum-total-bandwidth search over a discrete allocation grid.

The search space is the lattice {x : x_j = c * step, 0 <= x_j <= B_j}. A
grid point is a member of the target set when its predicted response
reaches the QoS target, which by the half-up rounding rule is exactly
y* >= target - 1/2. Among members the search returns the allocation with
the smallest total bandwidth, breaking ties by highest y* and then by
lexicographically smallest allocation. Enumeration is exhaustive and
row-major over link indices, so results are deterministic.

membership_c_form() evaluates the same predicate in an algebraically
rearranged form, C1 + C2 >= C3, that groups kernel weights by response
level. It exists as an independent cross-check of the membership math: each
term is a sum of non-negative contributions, which is what makes the
membership set grow when positive records arrive and shrink when negative
ones do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .predictor import EmptyProfileError, GrnnPredictor, KernelParams, Prediction, predict
from .profile import Profile

# Tolerance used when mapping per-link maxima onto step counts, so a
# maximum that is an exact multiple of the step (up to float noise) still
# includes its endpoint.
_GRID_EPS = 1e-9


@dataclass(frozen=True)
class SearchGrid:
    """Discrete allocation search space.

    Attributes
    ----------
    step : float
        Grid step in Mbps; > 0.
    max_per_link : tuple of float
        Per-link maxima B_j; the grid holds every x_j = c * step <= B_j.
    """

    step: float
    max_per_link: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "max_per_link", tuple(float(b) for b in self.max_per_link))
        if not (self.step > 0.0) or not math.isfinite(self.step):
            raise ValueError(f"step must be positive and finite, got {self.step}")
        if len(self.max_per_link) == 0:
            raise ValueError("grid needs at least one link")
        if any(b < 0.0 or not math.isfinite(b) for b in self.max_per_link):
            raise ValueError(f"per-link maxima must be finite and >= 0: {self.max_per_link}")

    @property
    def link_count(self) -> int:
        return len(self.max_per_link)

    @property
    def steps_per_link(self) -> tuple[int, ...]:
        return tuple(int(math.floor(b / self.step + _GRID_EPS)) for b in self.max_per_link)

    @property
    def size(self) -> int:
        n = 1
        for c in self.steps_per_link:
            n *= c + 1
        return n

    def counts(self) -> np.ndarray:
        """Integer step counts of every grid point, shape (size, n), row-major."""
        axes = [np.arange(c + 1) for c in self.steps_per_link]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1).reshape(-1, self.link_count)

    def points(self) -> np.ndarray:
        """Grid allocations in Mbps, shape (size, n), row-major."""
        return self.counts() * self.step


@dataclass(frozen=True)
class AllocationResult:
    """Outcome of one grid search.

    feasible_found is True when some grid point was predicted to meet the
    target; allocation is then the cheapest such point. Otherwise
    allocation is the grid point with the highest predicted response, so a
    controller always has something to apply.
    """

    allocation: tuple[float, ...]
    total: float
    prediction: Prediction
    feasible_found: bool


def total_bandwidth(allocation: Sequence[float]) -> float:
    """|x|: summed per-link bandwidth."""
    return float(np.asarray(allocation, dtype=float).sum())


def membership(
    x: Sequence[float], profile: Profile, kernel: KernelParams, target: int
) -> bool:
    """True when x is predicted to meet the QoS target (y* >= target - 1/2)."""
    return predict(x, profile, kernel).y_star >= target - 0.5


def membership_c_form(
    x: Sequence[float], profile: Profile, kernel: KernelParams, target: int
) -> tuple[float, float, float, bool]:
    """Membership via the level-grouped form; returns (C1, C2, C3, member).

    C1 collects (u - target) * weight over records at levels u >= target,
    C2 is half the total weight, C3 collects (target - u) * weight over
    records below the target. Membership holds iff C1 + C2 >= C3. Agrees
    with membership() up to float re-association at the set boundary.
    """
    if profile.size == 0:
        raise EmptyProfileError("cannot evaluate membership against an empty profile")
    xv = np.asarray(x, dtype=float)
    allocs = profile.allocation_matrix()
    responses = profile.response_vector()
    if xv.shape != (profile.link_count,):
        raise ValueError(f"allocation must have {profile.link_count} links, got {xv.shape}")
    d2 = ((allocs - xv) ** 2).sum(axis=1)
    weights = np.exp(-d2 / kernel.sigma2)
    c1 = 0.0
    for u in range(target, profile.level_count + 1):
        for i in np.flatnonzero(responses == u):
            c1 += (u - target) * float(weights[i])
    c2 = 0.0
    for i in range(profile.size):
        c2 += float(weights[i])
    c2 *= 0.5
    c3 = 0.0
    for u in range(1, target):
        for i in np.flatnonzero(responses == u):
            c3 += (target - u) * float(weights[i])
    return c1, c2, c3, bool(c1 + c2 >= c3)


def search(
    grid: SearchGrid,
    profile: Profile,
    kernel: KernelParams | None,
    target: int,
    predictor=None,
) -> AllocationResult:
    """Exhaustively search the grid for the cheapest allocation meeting target.

    Ties on total bandwidth go to the highest predicted y*, then to the
    lexicographically smallest allocation. When no grid point is predicted
    feasible the result carries feasible_found=False and the point with the
    highest y* (ties lexicographic). The predictor argument swaps in a
    baseline predictor; by default a kernel-regression predictor built from
    `kernel` is used.
    """
    if predictor is None:
        predictor = GrnnPredictor(kernel)
    if grid.link_count != profile.link_count:
        raise ValueError(
            f"grid has {grid.link_count} links but profile has {profile.link_count}"
        )
    counts = grid.counts()
    pts = counts * grid.step
    y_star, _ = predictor.predict_batch(pts, profile)
    members = y_star >= target - 0.5
    if members.any():
        total_c = counts.sum(axis=1)
        best_total = total_c[members].min()
        cand = members & (total_c == best_total)
        best_y = y_star[cand].max()
        cand &= y_star == best_y
        idx = int(np.argmax(cand))  # first hit = lexicographically smallest
        feasible = True
    else:
        idx = int(np.argmax(y_star))
        feasible = False
    allocation = tuple(float(v) for v in pts[idx])
    return AllocationResult(
        allocation=allocation,
        total=total_bandwidth(allocation),
        prediction=predictor.predict(allocation, profile),
        feasible_found=feasible,
    )
