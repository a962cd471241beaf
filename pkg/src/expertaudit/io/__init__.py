"""Ingestion, synthetic sampling, configuration, reporting and the audit pipeline."""
from .config import CONFIG_ENV, PipelineConfig, load_config, parse_config
from .ingest import (
    Exclusion,
    IngestionPolicy,
    IngestResult,
    load_audit_csv,
    load_audit_frame,
    write_audit_csv,
)
from .pipeline import StageError, build_report, run_pipeline
from .report import RunManifest, summary_text
from .sampling import sample_from_scm, sample_table

__all__ = [
    "CONFIG_ENV", "Exclusion", "IngestResult", "IngestionPolicy", "PipelineConfig", "RunManifest",
    "StageError", "build_report", "load_audit_csv", "load_audit_frame", "load_config",
    "parse_config", "run_pipeline", "sample_from_scm", "sample_table", "summary_text",
    "write_audit_csv",
]
