"""Pipeline configuration: an INI file with one section per stage.

    [ingest]
    path = students.csv           ; relative to the config file
    outcome = gpa
    gpa_threshold = 3.5           ; "none" when the outcome is already 0/1
    exclude_summer = true
    drop_if_missing = transfer_status, hs_gpa, EFC
    features = x1, x2             ; optional, default: all non-reserved columns
    actions = A_other, A_schedule ; optional, default: columns starting with A_
    stratum = semester            ; "none" disables
    id = student_id

    [match]
    pairs = 100
    stratum_constraint = true
    max_distance_warn = 0.5

    [audit]
    k = 1000
    seed = 0
    alpha = 0.05
    directions = positive, negative
    bh = true

    [report]
    json = report.json
    summary = summary.txt
    manifest = manifest.json

Unknown sections or keys are errors.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError, ValidationError
from ..expert_test import Direction
from .ingest import DEFAULT_DROP, IngestionPolicy

CONFIG_ENV = "EXPERTAUDIT_CONFIG"

_KEYS = {
    "ingest": {"path", "outcome", "gpa_threshold", "exclude_summer", "drop_if_missing",
               "features", "actions", "stratum", "id"},
    "match": {"pairs", "stratum_constraint", "max_distance_warn"},
    "audit": {"k", "seed", "alpha", "directions", "bh"},
    "report": {"json", "summary", "manifest"},
}


@dataclass(frozen=True)
class PipelineConfig:
    input_path: Path
    policy: IngestionPolicy
    pairs: int = 100
    stratum_constraint: bool = True
    max_distance_warn: float = 0.5
    K: int = 1000
    seed: int = 0
    alpha: float = 0.05
    directions: tuple[Direction, ...] = (Direction.POSITIVE, Direction.NEGATIVE)
    bh: bool = True
    report_json: Path | None = None
    summary_txt: Path | None = None
    manifest_json: Path | None = None
    source: Path | None = None
    text: str = field(default="", repr=False)


def _list(v: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in v.split(",") if s.strip())


def _get(section: tuple[str, dict], key, conv, default):
    name, values = section
    if key not in values:
        return default
    raw = values[key].strip()
    try:
        return conv(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[{name}] {key} = {raw!r}: {exc}", key) from None


def _bool(v: str) -> bool:
    low = v.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _optional_float(v: str):
    return None if v.lower() == "none" else float(v)


def _optional_str(v: str):
    return None if v.lower() == "none" or not v else v


def parse_config(text: str, base_dir: Path | str = ".", source: Path | None = None) -> PipelineConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    for sec in cp.sections():
        if sec not in _KEYS:
            raise ConfigError(f"unknown section [{sec}]", sec)
        for key in cp[sec]:
            if key not in _KEYS[sec]:
                raise ConfigError(f"unknown key {key!r} in [{sec}]", key)
    if not cp.has_section("ingest") or "path" not in cp["ingest"]:
        raise ConfigError("[ingest] path is required", "path")
    base = Path(base_dir)

    def resolve(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    def sec(name):
        return name, dict(cp[name]) if cp.has_section(name) else {}

    ing = sec("ingest")
    try:
        policy = IngestionPolicy(
            drop_if_missing=_get(ing, "drop_if_missing", _list, DEFAULT_DROP),
            exclude_summer=_get(ing, "exclude_summer", _bool, True),
            gpa_threshold=_get(ing, "gpa_threshold", _optional_float, 3.5),
            outcome_column=_get(ing, "outcome", str, "gpa"),
            stratum_column=_get(ing, "stratum", _optional_str, "semester"),
            id_column=_get(ing, "id", str, "student_id"),
            feature_columns=_get(ing, "features", _list, None) or None,
            action_columns=_get(ing, "actions", _list, None) or None,
        )
    except ValidationError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), "gpa_threshold") from exc

    m, a, r = sec("match"), sec("audit"), sec("report")

    def directions(v):
        return tuple(Direction(d) for d in _list(v))

    cfg = PipelineConfig(
        input_path=resolve(ing[1]["path"].strip()),
        policy=policy,
        pairs=_get(m, "pairs", int, 100),
        stratum_constraint=_get(m, "stratum_constraint", _bool, True),
        max_distance_warn=_get(m, "max_distance_warn", float, 0.5),
        K=_get(a, "k", int, 1000),
        seed=_get(a, "seed", int, 0),
        alpha=_get(a, "alpha", float, 0.05),
        directions=_get(a, "directions", directions, (Direction.POSITIVE, Direction.NEGATIVE)),
        bh=_get(a, "bh", _bool, True),
        report_json=_get(r, "json", resolve, None),
        summary_txt=_get(r, "summary", resolve, None),
        manifest_json=_get(r, "manifest", resolve, None),
        source=source,
        text=text,
    )
    if cfg.pairs < 1:
        raise ConfigError("pairs must be at least 1", "pairs")
    if cfg.K < 1:
        raise ConfigError("k must be at least 1", "k")
    if not 0 < cfg.alpha < 1:
        raise ConfigError("alpha must lie in (0, 1)", "alpha")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer", "seed")
    if not cfg.directions:
        raise ConfigError("directions must not be empty", "directions")
    return cfg


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Read a config file; without a path, fall back to $EXPERTAUDIT_CONFIG."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
        if not path:
            raise ConfigError(f"no config given and ${CONFIG_ENV} is not set")
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, path.parent, path)
