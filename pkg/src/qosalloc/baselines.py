"""Comparison predictors that plug into the same search and controller.

Two baselines are provided: a k-nearest-neighbor response predictor (mean
of the k closest records' responses) and the unbounded variant of the
kernel-regression predictor whose profile grows with every transmission
instead of replacing records at a capacity. Only the predictor and the
profile-growth policy differ; the allocation search and the control loop
are reused unchanged.

The kNN predictor with k = p is the plain mean of all responses, which is
not the same thing as the kernel-weighted mean; no equivalence between the
two predictors holds or is tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .predictor import EmptyProfileError, Prediction, round_response
from .profile import Profile

GRNN_BOUNDED = "grnn_bounded"
GRNN_UNBOUNDED = "grnn_unbounded"
KNN = "knn"

PREDICTOR_KINDS = (GRNN_BOUNDED, GRNN_UNBOUNDED, KNN)


@dataclass(frozen=True)
class PredictorKind:
    """Selects a predictor/profile-policy pair for a scenario run."""

    tag: str = GRNN_BOUNDED
    knn_k: int = 5

    def __post_init__(self) -> None:
        if self.tag not in PREDICTOR_KINDS:
            raise ValueError(f"unknown predictor tag {self.tag!r}; use one of {PREDICTOR_KINDS}")
        if self.knn_k < 1:
            raise ValueError(f"knn_k must be >= 1, got {self.knn_k}")

    @property
    def bounded(self) -> bool:
        """Whether the profile store evicts at capacity under this kind."""
        return self.tag == GRNN_BOUNDED

    @property
    def label(self) -> str:
        return f"{self.tag}_k{self.knn_k}" if self.tag == KNN else self.tag


def knn_predict(x: Sequence[float], profile: Profile, k_neighbors: int) -> Prediction:
    """Mean response of the k records nearest to x.

    Distance ties are broken toward the lowest record index. The rounding
    and clamping of the integer prediction match the kernel predictor's.
    kernel_sum reports k (each selected neighbor carries unit weight).
    """
    if profile.size == 0:
        raise EmptyProfileError("cannot predict against an empty profile")
    if not 1 <= k_neighbors <= profile.size:
        raise ValueError(
            f"k_neighbors must be in [1, {profile.size}], got {k_neighbors}"
        )
    xs = np.asarray(x, dtype=float).reshape(1, -1)
    y_star, _ = _knn_batch(xs, profile, k_neighbors)
    ys = float(y_star[0])
    return Prediction(y_star=ys, y_hat=round_response(ys, profile.level_count),
                      kernel_sum=float(k_neighbors))


def _knn_batch(xs: np.ndarray, profile: Profile, k: int) -> tuple[np.ndarray, np.ndarray]:
    allocs = profile.allocation_matrix()
    responses = profile.response_vector().astype(float)
    if xs.ndim != 2 or xs.shape[1] != profile.link_count:
        raise ValueError(
            f"candidate array must have shape (m, {profile.link_count}), got {xs.shape}"
        )
    d2 = ((xs[:, None, :] - allocs[None, :, :]) ** 2).sum(axis=2)  # (m, p)
    # stable sort keeps the lowest record index on distance ties
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    y_star = responses[order].mean(axis=1)
    return y_star, np.full(xs.shape[0], float(k))


class KnnPredictor:
    """k-nearest-neighbor predictor with the search-facing interface."""

    kind = KNN

    def __init__(self, k_neighbors: int = 5):
        if k_neighbors < 1:
            raise ValueError(f"k_neighbors must be >= 1, got {k_neighbors}")
        self.k_neighbors = k_neighbors

    def predict(self, x: Sequence[float], profile: Profile) -> Prediction:
        return knn_predict(x, profile, self.k_neighbors)

    def predict_batch(self, xs: np.ndarray, profile: Profile) -> tuple[np.ndarray, np.ndarray]:
        if profile.size == 0:
            raise EmptyProfileError("cannot predict against an empty profile")
        if self.k_neighbors > profile.size:
            raise ValueError(
                f"k_neighbors must be in [1, {profile.size}], got {self.k_neighbors}"
            )
        return _knn_batch(np.asarray(xs, dtype=float), profile, self.k_neighbors)


def unbounded_update(profile: Profile, allocation: Sequence[float], response: int) -> None:
    """Append-only profile growth: the no-eviction policy.

    The profile must have been built with capacity=None; the record count
    then grows with every transmission, and with it the per-prediction
    cost.
    """
    if profile.capacity is not None:
        raise ValueError("unbounded_update requires a profile with capacity=None")
    profile.append(allocation, response)
