"""Discrete-epoch simulator of a multi-link delivery path.

Per-link traffic shaping is abstracted to a per-epoch rate clamp: a link
delivers at most its allocated (token) rate, and never more than the
capacity left over after background traffic and earlier services. The
measured ERAB of an epoch is computed from the effective (clamped)
allocation total, so contention shows up as negative responses in the
control loop. There is no packet-level modeling; the QoS loop operates per
transmission epoch, and rate-level clamping is all it can observe.

Multiple services on shared links are resolved in service-index order: each
service's effective allocation is clamped against capacity minus background
minus the effective allocations already granted this epoch. The simulator
owns the epoch clock; controllers are advanced one step per epoch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .controller import QosController, TransmissionOutcome, compute_erab


class EndOfRun(Exception):
    """A rate or background trace has no value for the requested epoch."""


@dataclass(frozen=True)
class LinkSpec:
    """One physical link: capacity and the background load it carries.

    background may be a constant (Mbps) or a per-epoch sequence; a trace
    shorter than the run ends it.
    """

    capacity: float
    background: float | tuple[float, ...] = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.background, (int, float)):
            if not 0.0 <= float(self.background) <= self.capacity:
                raise ValueError(
                    f"background {self.background} outside [0, capacity={self.capacity}]"
                )
        else:
            object.__setattr__(self, "background", tuple(float(b) for b in self.background))
            for b in self.background:
                if not 0.0 <= b <= self.capacity:
                    raise ValueError(
                        f"background {b} outside [0, capacity={self.capacity}]"
                    )
        if self.capacity < 0.0:
            raise ValueError(f"capacity must be >= 0, got {self.capacity}")

    def background_at(self, epoch: int) -> float:
        if isinstance(self.background, tuple):
            if epoch >= len(self.background):
                raise EndOfRun(f"background trace exhausted at epoch {epoch}")
            return self.background[epoch]
        return float(self.background)


@dataclass(frozen=True)
class ServiceSpec:
    """One service: its per-epoch source rates and requested QoS level."""

    rate_trace: tuple[float, ...]
    qos_level: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rate_trace", tuple(float(r) for r in self.rate_trace))
        if any(r < 0.0 for r in self.rate_trace):
            raise ValueError("source rates must be >= 0")

    def rate_at(self, epoch: int) -> float:
        if epoch >= len(self.rate_trace):
            raise EndOfRun(f"rate trace exhausted at epoch {epoch}")
        return self.rate_trace[epoch]


def distribute_rate(source_rate: float, allocation: Sequence[float]) -> np.ndarray:
    """Split a source rate across links proportionally to the allocation.

    r_j = R * x_j / |x|, so the per-link rates sum back to R. A zero
    allocation with positive R is a degenerate epoch: nothing can be sent,
    every rate is zero, and the caller logs the epoch as total loss.
    """
    x = np.asarray(allocation, dtype=float)
    if source_rate < 0.0:
        raise ValueError(f"source rate must be >= 0, got {source_rate}")
    total = x.sum()
    if source_rate == 0.0 or total <= 0.0:
        return np.zeros_like(x)
    # divide before scaling: the shares are well-conditioned in [0, 1]
    return source_rate * (x / total)


def effective_allocation(allocation: Sequence[float], headroom: Sequence[float]) -> np.ndarray:
    """Clamp a nominal allocation to the per-link headroom (>= 0)."""
    x = np.asarray(allocation, dtype=float)
    h = np.maximum(np.asarray(headroom, dtype=float), 0.0)
    return np.minimum(x, h)


def transmit(links: Sequence[LinkSpec], allocation: Sequence[float], source_rate: float,
             epoch: int = 0) -> float:
    """Measured ERAB for one service alone on the given links.

    The effective per-link allocation is min(x_j, capacity_j - background_j);
    the ERAB is the effective total minus the source rate. With ample
    capacity the clamp is inactive and the measurement is exactly |x| - R.
    """
    x = np.asarray(allocation, dtype=float)
    if len(links) != x.shape[0]:
        raise ValueError(f"{len(links)} links but allocation has {x.shape[0]} entries")
    headroom = np.array([l.capacity - l.background_at(epoch) for l in links])
    eff = effective_allocation(x, headroom)
    return compute_erab(float(eff.sum()), source_rate)


class Simulator:
    """Epoch-stepped closed loop over shared links.

    Services and controllers are index-aligned. Optional additive Gaussian
    measurement noise on the ERAB (default 0) supports robustness
    experiments; it is applied after clamping, from a dedicated generator,
    so runs stay reproducible under a fixed seed.
    """

    def __init__(
        self,
        links: Sequence[LinkSpec],
        services: Sequence[ServiceSpec],
        controllers: Sequence[QosController],
        noise_std: float = 0.0,
        rng: np.random.Generator | None = None,
    ):
        if len(services) != len(controllers):
            raise ValueError(
                f"{len(services)} services but {len(controllers)} controllers"
            )
        for ctrl in controllers:
            if ctrl.config.grid.link_count != len(links):
                raise ValueError(
                    f"controller grid has {ctrl.config.grid.link_count} links, "
                    f"simulator has {len(links)}"
                )
        if noise_std < 0.0:
            raise ValueError(f"noise_std must be >= 0, got {noise_std}")
        if noise_std > 0.0 and rng is None:
            raise ValueError("measurement noise requires an explicit rng")
        self.links = tuple(links)
        self.services = tuple(services)
        self.controllers = tuple(controllers)
        self.noise_std = noise_std
        self.rng = rng
        self.epoch = 0

    def run_epoch(self) -> list[TransmissionOutcome]:
        """Advance every service by one epoch; returns their outcomes.

        Raises EndOfRun before touching any state when a trace is
        exhausted, so a partially advanced epoch can never occur.
        """
        t = self.epoch
        rates = [svc.rate_at(t) for svc in self.services]
        backgrounds = np.array([link.background_at(t) for link in self.links])
        capacities = np.array([link.capacity for link in self.links])
        used = np.zeros(len(self.links))
        outcomes: list[TransmissionOutcome] = []
        for rate, ctrl in zip(rates, self.controllers):
            x = np.asarray(ctrl.current_allocation, dtype=float)
            eff = effective_allocation(x, capacities - backgrounds - used)
            used += eff
            erab = compute_erab(float(eff.sum()), rate)
            if self.noise_std > 0.0:
                erab += self.noise_std * self.rng.standard_normal()
            _, outcome = ctrl.step(erab, source_rate=rate)
            outcomes.append(outcome)
        self.epoch += 1
        return outcomes

    def run(self, epochs: int) -> list[list[TransmissionOutcome]]:
        """Run a fixed number of epochs, collecting per-epoch outcomes."""
        return [self.run_epoch() for _ in range(epochs)]
