"""ingest -> match -> swap tests per action and direction -> BH -> report."""
from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Any

from ..errors import ExpertAuditError
from ..expert_test import HypothesisFamily, TestConfig, run_expert_test, swap_diagnostics
from ..matching import greedy_pair, match_quality_report
from .config import PipelineConfig, load_config
from .ingest import load_audit_frame
from .report import RunManifest, dumps, file_digest, summary_text


class StageError(ExpertAuditError):
    """Wraps an error with the pipeline stage it came from; keeps its exit code."""

    def __init__(self, stage: str, cause: ExpertAuditError):
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code
        super().__init__(f"[{stage}] {cause}")


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ExpertAuditError as exc:
        if isinstance(exc, StageError):
            raise
        raise StageError(name, exc) from exc


def build_report(cfg: PipelineConfig) -> dict[str, Any]:
    ingested = _stage("ingest", load_audit_frame, cfg.input_path, cfg.policy)
    base = ingested.dataset(ingested.actions[0])
    pairs = _stage("match", greedy_pair, base, cfg.pairs, cfg.stratum_constraint)
    quality = match_quality_report(pairs, base, cfg.max_distance_warn)

    results = []
    swaps = {}
    for action in ingested.actions:
        data = ingested.dataset(action)
        diag = swap_diagnostics(data, pairs)
        swaps[action] = {"count": int(data.actions.sum()), "increase": diag.increase,
                         "decrease": diag.decrease, "neutral": diag.neutral}
        for direction in cfg.directions:
            label = f"{action}/{direction.value}"
            tc = TestConfig(K=cfg.K, direction=direction, seed=cfg.seed, alpha=cfg.alpha, label=label)
            results.append((label, _stage("audit", run_expert_test, data, pairs, tc)))

    family = HypothesisFamily.from_results(results)
    adjusted = family.adjusted_p if cfg.bh else tuple(r.raw_p for _, r in results)
    tests = []
    for (label, res), q in zip(results, adjusted):
        entry = res.to_dict()
        entry.update(action=label.rsplit("/", 1)[0], adjusted_p=q, significant=q < cfg.alpha)
        tests.append(entry)

    policy = dataclasses.asdict(cfg.policy)
    return {
        "config": {
            "K": cfg.K, "seed": cfg.seed, "alpha": cfg.alpha, "bh": cfg.bh,
            "directions": [d.value for d in cfg.directions], "pairs": cfg.pairs,
            "stratum_constraint": cfg.stratum_constraint, "policy": policy,
        },
        "input": {
            "path": cfg.input_path.name,
            "sha256": file_digest(cfg.input_path),
            "rows": ingested.n_input,
            "retained": len(ingested.frame),
            "dropped": ingested.dropped_count,
            "exclusions": ingested.exclusion_counts(),
            "features": list(ingested.features),
            "actions": list(ingested.actions),
        },
        "matching": {**quality.to_dict(), "pairs": pairs.to_dict()["pairs"]},
        "tests": tests,
        "swaps": swaps,
    }


def run_pipeline(config: PipelineConfig | str | Path | None = None, seed: int | None = None) -> dict[str, Any]:
    """Run the full audit; writes the configured outputs and returns the report."""
    cfg = config if isinstance(config, PipelineConfig) else _stage("config", load_config, config)
    if seed is not None:
        cfg = dataclasses.replace(cfg, seed=seed)
    manifest = RunManifest.start(cfg.text, cfg.seed, [cfg.input_path])
    report = build_report(cfg)
    if cfg.report_json:
        Path(cfg.report_json).write_text(dumps(report), encoding="utf-8")
    if cfg.summary_txt:
        Path(cfg.summary_txt).write_text(summary_text(report), encoding="utf-8")
    if cfg.manifest_json:
        Path(cfg.manifest_json).write_text(manifest.finish().to_json(), encoding="utf-8")
    return report
