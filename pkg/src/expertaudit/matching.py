"""Pairing of algorithmically indistinguishable records.

Records are matched on min-max scaled features with a global greedy rule:
every candidate pair is sorted by Euclidean distance (ties broken by the
index pair), and pairs are accepted in that order when both members are
still unused.  An optional stratum label acts as an exact-match constraint.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import InsufficientRecords, ValidationError

DEFAULT_DISTANCE_CEILING = 0.5


@dataclass(frozen=True)
class AuditRecord:
    id: Any
    features: Sequence[float]
    action: int
    outcome: int
    stratum: Any = None


@dataclass(frozen=True, eq=False)
class AuditDataset:
    ids: np.ndarray
    features: np.ndarray
    actions: np.ndarray
    outcomes: np.ndarray
    strata: np.ndarray | None = None
    feature_names: tuple[str, ...] = ()

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim == 1:
            feats = feats.reshape(-1, 1)
        n = feats.shape[0]
        acts = np.asarray(self.actions)
        outs = np.asarray(self.outcomes)
        for name, arr in (("actions", acts), ("outcomes", outs)):
            if arr.shape != (n,):
                raise ValidationError(f"{name} has shape {arr.shape}, expected ({n},)")
            if not np.isin(arr, (0, 1)).all():
                raise ValidationError(f"{name} must be 0/1")
        ids = np.asarray(self.ids) if self.ids is not None else np.arange(n)
        if ids.shape != (n,):
            raise ValidationError("ids must have one entry per record")
        strata = None if self.strata is None else np.asarray(self.strata)
        if strata is not None and strata.shape != (n,):
            raise ValidationError("strata must have one entry per record")
        names = tuple(self.feature_names) or tuple(f"x{i}" for i in range(feats.shape[1]))
        if len(names) != feats.shape[1]:
            raise ValidationError("feature_names length does not match the feature count")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "actions", acts.astype(np.uint8))
        object.__setattr__(self, "outcomes", outs.astype(np.uint8))
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "strata", strata)
        object.__setattr__(self, "feature_names", names)

    def __len__(self):
        return self.features.shape[0]

    @classmethod
    def from_records(cls, records: Iterable[AuditRecord], feature_names: Sequence[str] = ()) -> "AuditDataset":
        records = list(records)
        if not records:
            raise ValidationError("dataset is empty")
        widths = {len(r.features) for r in records}
        if len(widths) != 1:
            raise ValidationError(f"feature vectors have differing lengths {sorted(widths)}")
        strata = [r.stratum for r in records]
        return cls(
            ids=np.array([r.id for r in records], dtype=object),
            features=np.array([list(r.features) for r in records], dtype=np.float64),
            actions=np.array([r.action for r in records]),
            outcomes=np.array([r.outcome for r in records]),
            strata=None if all(s is None for s in strata) else np.array(strata, dtype=object),
            feature_names=tuple(feature_names),
        )

    def with_actions(self, actions: np.ndarray) -> "AuditDataset":
        return replace(self, actions=actions)


def scale_features(dataset: AuditDataset) -> AuditDataset:
    """Min-max scale each column to [0, 1]; constant columns become 0."""
    if len(dataset) == 0:
        raise ValidationError("dataset is empty")
    f = dataset.features
    lo = f.min(axis=0)
    span = f.max(axis=0) - lo
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (f - lo) / safe, 0.0)
    return replace(dataset, features=scaled)


@dataclass(frozen=True, eq=False)
class PairSet:
    """Disjoint index pairs in acceptance order (distances nondecreasing)."""

    first: np.ndarray
    second: np.ndarray
    distances: np.ndarray

    def __len__(self):
        return len(self.first)

    def __iter__(self):
        return iter(zip(self.first.tolist(), self.second.tolist(), self.distances.tolist()))

    @property
    def pairs(self) -> list[tuple[int, int, float]]:
        return list(self)

    @property
    def max_distance(self) -> float:
        return float(self.distances.max()) if len(self) else 0.0

    def validate(self, n: int) -> None:
        idx = np.concatenate([self.first, self.second])
        if len(idx) and (idx.min() < 0 or idx.max() >= n):
            raise ValidationError("pair index out of range")
        if len(np.unique(idx)) != len(idx):
            raise ValidationError("pairs are not disjoint")

    def head(self, L: int) -> "PairSet":
        return PairSet(self.first[:L], self.second[:L], self.distances[:L])

    def to_dict(self) -> dict:
        return {
            "pairs": [[i, j, d] for i, j, d in self],
            "max_distance": self.max_distance,
        }


def _candidate_edges(features: np.ndarray, members: np.ndarray):
    i, j = np.triu_indices(len(members), k=1)
    gi, gj = members[i], members[j]
    d = np.sqrt(((features[gi] - features[gj]) ** 2).sum(axis=1))
    return gi, gj, d


def greedy_pair(
    dataset: AuditDataset,
    L: int,
    stratum_constraint: bool = True,
    scale: bool = True,
) -> PairSet:
    """Accept the ``L`` closest disjoint pairs in global sorted-edge order."""
    if L < 1:
        raise ValidationError("L must be at least 1")
    n = len(dataset)
    data = scale_features(dataset) if scale else dataset
    if stratum_constraint and data.strata is not None:
        _, codes = np.unique(data.strata.astype(str), return_inverse=True)
        groups = [np.flatnonzero(codes == c) for c in range(codes.max() + 1)]
    else:
        groups = [np.arange(n)]
    capacity = sum(len(g) // 2 for g in groups)
    if capacity < L:
        raise InsufficientRecords(
            f"{L} pairs requested but at most {capacity} can be formed from {n} records"
        )

    parts = [_candidate_edges(data.features, g) for g in groups if len(g) > 1]
    gi = np.concatenate([p[0] for p in parts])
    gj = np.concatenate([p[1] for p in parts])
    dist = np.concatenate([p[2] for p in parts])
    order = np.lexsort((gj, gi, dist))

    used = np.zeros(n, dtype=bool)
    first, second, dists = [], [], []
    for e in order:
        a, b = gi[e], gj[e]
        if used[a] or used[b]:
            continue
        used[a] = used[b] = True
        first.append(a)
        second.append(b)
        dists.append(dist[e])
        if len(first) == L:
            break
    if len(first) < L:
        # greedy can strand records when strata have odd sizes; capacity already
        # counts floor(size/2) per stratum so this is only a safety net
        raise InsufficientRecords(f"only {len(first)} disjoint pairs could be formed")
    return PairSet(
        np.array(first, dtype=np.int64),
        np.array(second, dtype=np.int64),
        np.array(dists, dtype=np.float64),
    )


@dataclass(frozen=True)
class FeatureDiff:
    name: str
    min: float
    median: float
    max: float


@dataclass(frozen=True)
class MatchQuality:
    per_feature: tuple[FeatureDiff, ...]
    max_distance: float
    ceiling: float
    n_pairs: int
    exceeds_ceiling: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "exceeds_ceiling", self.max_distance > self.ceiling)

    def to_dict(self) -> Mapping[str, Any]:
        return {
            "n_pairs": self.n_pairs,
            "max_distance": self.max_distance,
            "ceiling": self.ceiling,
            "exceeds_ceiling": self.exceeds_ceiling,
            "per_feature": [
                {"feature": f.name, "min": f.min, "median": f.median, "max": f.max}
                for f in self.per_feature
            ],
        }


def match_quality_report(
    pairs: PairSet,
    dataset: AuditDataset,
    ceiling: float = DEFAULT_DISTANCE_CEILING,
    scale: bool = True,
) -> MatchQuality:
    """Per-feature |difference| summary on the scaled features used for matching."""
    pairs.validate(len(dataset))
    data = scale_features(dataset) if scale else dataset
    diff = np.abs(data.features[pairs.first] - data.features[pairs.second])
    per = []
    for k, name in enumerate(data.feature_names):
        col = diff[:, k] if len(pairs) else np.zeros(1)
        per.append(FeatureDiff(name, float(col.min()), float(np.median(col)), float(col.max())))
    dmax = float(np.sqrt((diff ** 2).sum(axis=1)).max()) if len(pairs) else 0.0
    return MatchQuality(tuple(per), dmax, ceiling, len(pairs))
