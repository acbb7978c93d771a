"""Fuzzy C-means clustering and membership-function calibration.

Clustering the observed feature vectors with three clusters per dimension
yields data-driven peaks for the Small/Medium/Large terms of the fuzzy
classifier.  Initialization draws seed centers from the lexicographically
sorted distinct points, so results do not depend on input ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import VigilError
from .features import FeatureVector

FEATURE_NAMES = ("arousal", "valence", "dominance")


class EmptyInput(VigilError):
    """No points supplied."""


class DegenerateInput(VigilError):
    """Fewer distinct points than requested clusters."""


@dataclass(frozen=True)
class FcmConfig:
    c: int = 3
    m: float = 2.0
    tol: float = 1e-6
    max_iter: int = 300
    seed: int = 0
    zscore: bool = False

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("cluster count must be >= 1")
        if not self.m > 1:
            raise ValueError("fuzzifier m must be > 1")
        if self.tol < 0:
            raise ValueError("tol must be non-negative")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True, eq=False)
class FcmResult:
    centers: np.ndarray
    memberships: np.ndarray
    objective: float
    iterations: int
    objective_history: tuple[float, ...]


def _memberships(sqdist: np.ndarray, m: float) -> np.ndarray:
    """Inverse-distance-ratio membership update; rows sum to 1.

    A point coincident with a center gets full membership in the nearest
    coincident center.
    """
    n, c = sqdist.shape
    u = np.zeros((n, c))
    zero_rows = (sqdist <= 0.0).any(axis=1)
    if zero_rows.any():
        hit = np.argmin(sqdist[zero_rows], axis=1)
        u[np.nonzero(zero_rows)[0], hit] = 1.0
    regular = ~zero_rows
    if regular.any():
        d = sqdist[regular]
        ratio = (d[:, :, None] / d[:, None, :]) ** (1.0 / (m - 1.0))
        u[regular] = 1.0 / ratio.sum(axis=2)
    return u


def _sqdist(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def fcm_cluster(
    points,
    cfg: FcmConfig = FcmConfig(),
    on_iteration: Callable[[int, np.ndarray, np.ndarray, float], None] | None = None,
) -> FcmResult:
    """Fuzzy C-means by alternating center/membership optimization.

    Stops when the objective changes by at most ``cfg.tol`` or after
    ``cfg.max_iter`` iterations.  ``on_iteration(i, centers, memberships,
    objective)`` is invoked after every iteration when supplied.
    """
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if X.size == 0:
        raise EmptyInput("no points to cluster")
    if cfg.zscore:
        mean, std = X.mean(axis=0), X.std(axis=0)
        std[std == 0] = 1.0
        work = (X - mean) / std
    else:
        mean, std = 0.0, 1.0
        work = X

    distinct = np.unique(work, axis=0)  # sorted lexicographically
    if len(distinct) < cfg.c:
        raise DegenerateInput(
            f"{len(distinct)} distinct points cannot seed {cfg.c} clusters"
        )
    rng = np.random.default_rng(cfg.seed)
    centers = distinct[rng.choice(len(distinct), size=cfg.c, replace=False)].copy()

    u = _memberships(_sqdist(work, centers), cfg.m)
    objective = float(np.sum(u**cfg.m * _sqdist(work, centers)))
    history = [objective]
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        um = u**cfg.m
        weight = um.sum(axis=0)
        # A cluster starved of membership keeps its previous center.
        fresh = (um.T @ work) / np.where(weight > 0, weight, 1.0)[:, None]
        centers = np.where((weight > 0)[:, None], fresh, centers)
        u = _memberships(_sqdist(work, centers), cfg.m)
        new_objective = float(np.sum(u**cfg.m * _sqdist(work, centers)))
        history.append(new_objective)
        if on_iteration is not None:
            on_iteration(iterations, centers * std + mean, u, new_objective)
        if abs(objective - new_objective) <= cfg.tol:
            objective = new_objective
            break
        objective = new_objective

    return FcmResult(
        centers=centers * std + mean,
        memberships=u,
        objective=objective,
        iterations=iterations,
        objective_history=tuple(history),
    )


@dataclass(frozen=True)
class VariableCalibration:
    """Universe bounds and Small/Medium/Large peaks for one fuzzy variable."""

    lo: float
    hi: float
    peaks: tuple[float, float, float]


def calibrate_universes(
    features: Sequence[FeatureVector],
    cfg: FcmConfig = FcmConfig(c=3),
) -> dict[str, VariableCalibration]:
    """Derive fuzzy-term peaks from the data via 3-cluster FCM.

    The three cluster-center projections per feature dimension, sorted
    ascending, become the Small/Medium/Large peaks; universe bounds pad
    the observed range by 5% of its span.  Useful calibration needs at
    least three distinct values per dimension; a dimension without them
    yields coincident peaks, which the fuzzy builder rejects.
    """
    if cfg.c != 3:
        raise ValueError("calibration requires exactly 3 clusters")
    if not features:
        raise EmptyInput("no feature vectors to calibrate from")
    X = np.array([[f.arousal, f.valence, f.dominance] for f in features])
    result = fcm_cluster(X, cfg)

    out = {}
    for dim, name in enumerate(FEATURE_NAMES):
        peaks = tuple(sorted(float(v) for v in result.centers[:, dim]))
        vals = X[:, dim]
        span = float(vals.max() - vals.min())
        pad = 0.05 * span if span > 0 else 0.5
        out[name] = VariableCalibration(
            lo=float(vals.min()) - pad,
            hi=float(vals.max()) + pad,
            peaks=peaks,
        )
    return out


def calibration_to_json(calibration: dict[str, VariableCalibration]) -> str:
    obj = {
        name: {"universe": [cal.lo, cal.hi], "peaks": list(cal.peaks)}
        for name, cal in calibration.items()
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def calibration_from_json(text: str | bytes) -> dict[str, VariableCalibration]:
    obj = json.loads(text)
    out = {}
    for name, entry in obj.items():
        lo, hi = (float(v) for v in entry["universe"])
        p1, p2, p3 = (float(v) for v in entry["peaks"])
        out[name] = VariableCalibration(lo, hi, (p1, p2, p3))
    return out
