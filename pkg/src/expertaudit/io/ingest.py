"""CSV ingestion with documented cleaning rules.

Input schema: one row per (student, semester) with a header row.

    student_id    identifier
    semester      term label such as 2017-Fa; a Su, Sum or Summer token marks summer
    <features>    numeric, algorithm-visible columns
    A_<name>      0/1 action columns (one per intervention)
    <outcome>     GPA (binarized at the policy threshold) or a 0/1 outcome
    transfer_status, hs_gpa, EFC   only used for the missing-data rule

Every dropped row is logged with its 1-based file line number and a reason
(``missing:<column>``, ``summer`` or ``missing:<outcome>``).
"""
from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from ..errors import MalformedRow, MissingColumn, ValidationError
from ..matching import AuditDataset

DEFAULT_DROP = ("transfer_status", "hs_gpa", "EFC")
ACTION_PREFIX = "A_"
GPA_MAX = 4.3
_SUMMER = re.compile(r"(?i)(^|[^a-z])(su|sum|summer)([^a-z]|$)")


@dataclass(frozen=True)
class IngestionPolicy:
    drop_if_missing: tuple[str, ...] = DEFAULT_DROP
    exclude_summer: bool = True
    gpa_threshold: float | None = 3.5  # None: outcome column is already 0/1
    outcome_column: str = "gpa"
    stratum_column: str | None = "semester"
    id_column: str = "student_id"
    feature_columns: tuple[str, ...] | None = None
    action_columns: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "drop_if_missing", tuple(self.drop_if_missing))
        if self.feature_columns is not None:
            object.__setattr__(self, "feature_columns", tuple(self.feature_columns))
        if self.action_columns is not None:
            object.__setattr__(self, "action_columns", tuple(self.action_columns))
        if self.gpa_threshold is not None and not 0 <= self.gpa_threshold <= GPA_MAX:
            raise ValidationError(f"GPA threshold must lie in [0, {GPA_MAX}]")

    def reserved(self) -> set[str]:
        cols = {self.id_column, self.outcome_column, *self.drop_if_missing}
        if self.stratum_column:
            cols.add(self.stratum_column)
        return cols


@dataclass(frozen=True)
class Exclusion:
    line: int
    id: str
    reason: str


@dataclass
class IngestResult:
    frame: pd.DataFrame
    features: tuple[str, ...]
    actions: tuple[str, ...]
    n_input: int
    exclusions: list[Exclusion] = field(default_factory=list)
    outcome: str = "outcome"
    stratum: str | None = None

    @property
    def dropped_count(self) -> int:
        return len(self.exclusions)

    def dataset(self, action: str) -> AuditDataset:
        if action not in self.actions:
            raise MissingColumn(f"unknown action column {action!r}")
        f = self.frame
        return AuditDataset(
            ids=f["_id"].to_numpy(dtype=object),
            features=f[list(self.features)].to_numpy(dtype=np.float64),
            actions=f[action].to_numpy(),
            outcomes=f[self.outcome].to_numpy(),
            strata=None if self.stratum is None else f[self.stratum].to_numpy(dtype=object),
            feature_names=self.features,
        )

    def exclusion_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.exclusions:
            out[e.reason] = out.get(e.reason, 0) + 1
        return dict(sorted(out.items()))


def is_summer(label: str) -> bool:
    return bool(_SUMMER.search(label.strip()))


def _read_rows(path: Path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedRow(1, "file is empty; a header row is required") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise MalformedRow(1, "duplicate column names in header")
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise MalformedRow(line, f"expected {len(header)} fields, found {len(row)}")
            rows.append((line, [c.strip() for c in row]))
    return header, rows


def _numeric(values: list[str], lines: list[int], column: str) -> np.ndarray:
    out = np.full(len(values), np.nan)
    for k, v in enumerate(values):
        if v == "" or v.upper() in ("NA", "NAN"):
            continue
        try:
            out[k] = float(v)
        except ValueError:
            raise MalformedRow(lines[k], f"column {column!r}: {v!r} is not a number") from None
    return out


def load_audit_frame(path: str | Path, policy: IngestionPolicy = IngestionPolicy()) -> IngestResult:
    path = Path(path)
    header, rows = _read_rows(path)
    for col in (policy.id_column, policy.outcome_column, *policy.drop_if_missing):
        if col not in header:
            raise MissingColumn(f"required column {col!r} not in header")
    if policy.stratum_column and policy.stratum_column not in header:
        raise MissingColumn(f"stratum column {policy.stratum_column!r} not in header")
    actions = policy.action_columns or tuple(h for h in header if h.startswith(ACTION_PREFIX))
    if not actions:
        raise MissingColumn("no action columns (expected names starting with 'A_')")
    reserved = policy.reserved() | set(actions)
    features = policy.feature_columns or tuple(h for h in header if h not in reserved)
    for col in (*actions, *features):
        if col not in header:
            raise MissingColumn(f"column {col!r} not in header")
    if not features:
        raise MissingColumn("no feature columns")

    lines = [ln for ln, _ in rows]
    raw = {h: [r[i] for _, r in rows] for i, h in enumerate(header)}
    exclusions: list[Exclusion] = []
    keep = np.ones(len(rows), dtype=bool)

    def drop(mask, reason):
        for k in np.flatnonzero(mask & keep):
            exclusions.append(Exclusion(lines[k], raw[policy.id_column][k], reason))
        keep[mask] = False

    if policy.exclude_summer and policy.stratum_column:
        drop(np.array([is_summer(v) for v in raw[policy.stratum_column]], dtype=bool), "summer")
    for col in policy.drop_if_missing:
        drop(np.array([v == "" or v.upper() in ("NA", "NAN") for v in raw[col]], dtype=bool), f"missing:{col}")

    outcome = _numeric(raw[policy.outcome_column], lines, policy.outcome_column)
    drop(np.isnan(outcome), f"missing:{policy.outcome_column}")
    feats = {}
    for col in features:
        feats[col] = _numeric(raw[col], lines, col)
        drop(np.isnan(feats[col]), f"missing:{col}")
    acts = {}
    for col in actions:
        vals = _numeric(raw[col], lines, col)
        bad = ~np.isnan(vals) & ~np.isin(vals, (0.0, 1.0))
        if (bad & keep).any():
            k = int(np.flatnonzero(bad & keep)[0])
            raise MalformedRow(lines[k], f"action column {col!r} must be 0 or 1")
        drop(np.isnan(vals), f"missing:{col}")
        acts[col] = vals

    if policy.gpa_threshold is None:
        bad = keep & ~np.isin(outcome, (0.0, 1.0))
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise MalformedRow(lines[k], f"outcome {policy.outcome_column!r} must be 0 or 1")
        bits = outcome
    else:
        bad = keep & ((outcome < 0) | (outcome > GPA_MAX))
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise MalformedRow(lines[k], f"GPA {outcome[k]} outside [0, {GPA_MAX}]")
        bits = outcome >= policy.gpa_threshold

    exclusions.sort(key=lambda e: e.line)
    frame = pd.DataFrame({"_id": np.array(raw[policy.id_column], dtype=object)[keep], "_line": np.array(lines)[keep]})
    if policy.stratum_column:
        frame[policy.stratum_column] = np.array(raw[policy.stratum_column], dtype=object)[keep]
    for col in features:
        frame[col] = feats[col][keep]
    for col in actions:
        frame[col] = acts[col][keep].astype(np.uint8)
    frame["outcome"] = bits[keep].astype(np.uint8)
    return IngestResult(frame, tuple(features), tuple(actions), len(rows), exclusions,
                        "outcome", policy.stratum_column)


def load_audit_csv(
    path: str | Path,
    policy: IngestionPolicy = IngestionPolicy(),
    action: str | None = None,
) -> tuple[AuditDataset, int, list[Exclusion]]:
    """(dataset for one action column, dropped count, exclusion log)."""
    res = load_audit_frame(path, policy)
    return res.dataset(action or res.actions[0]), res.dropped_count, res.exclusions


def write_audit_csv(frame: pd.DataFrame, path: str | Path) -> None:
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.10g")


def write_exclusion_log(exclusions: Sequence[Exclusion], path: str | Path) -> None:
    pd.DataFrame([(e.line, e.id, e.reason) for e in exclusions],
                 columns=["line", "id", "reason"]).to_csv(path, index=False, lineterminator="\n")
