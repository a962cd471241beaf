"""Machine-readable reports, plain-text summary tables and run manifests.

The JSON report holds only quantities determined by (inputs, config, seed),
so identical runs produce byte-identical files.  Timestamps and library
versions live in the separate manifest.
"""
from __future__ import annotations

import datetime as _dt
import hashlib
import json
import platform
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Iterable, Mapping, Sequence

STAR = "*"


def dumps(report: Mapping) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def star(adjusted_p: float, alpha: float = 0.05) -> str:
    return STAR if adjusted_p < alpha else ""


def _fmt_p(p: float, alpha: float) -> str:
    return f"{p:.6f}{star(p, alpha)}"


def _align(rows: Sequence[Sequence[str]], sep: str = " | ") -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for k, r in enumerate(rows):
        out.append(sep.join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if k == 0:
            out.append("-+-".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def _sign(direction: str) -> str:
    return {"positive": "(+)", "negative": "(-)", "two_tailed": "(±)"}.get(direction, direction)


def top_table(tests: Sequence[Mapping], alpha: float = 0.05, top: int | None = 5) -> str:
    """Intervention | Direction | BH corrected p-value, most significant first."""
    ranked = sorted(tests, key=lambda t: (t["adjusted_p"], t["action"], t["direction"]))
    if top is not None:
        ranked = ranked[:top]
    rows = [("Intervention", "Direction", "BH corrected p-value")]
    rows += [(t["action"], _sign(t["direction"]), _fmt_p(t["adjusted_p"], alpha)) for t in ranked]
    return _align(rows)


def full_table(tests: Sequence[Mapping], alpha: float = 0.05) -> str:
    """One row per intervention, one column per direction."""
    actions = list(dict.fromkeys(t["action"] for t in tests))
    dirs = list(dict.fromkeys(t["direction"] for t in tests))
    cell = {(t["action"], t["direction"]): t["adjusted_p"] for t in tests}
    rows = [("Intervention", *(f"Outcome {_sign(d)}" for d in dirs))]
    for a in actions:
        rows.append((a, *(_fmt_p(cell[(a, d)], alpha) if (a, d) in cell else "-" for d in dirs)))
    return _align(rows)


def swap_table(swaps: Mapping[str, Mapping[str, int]]) -> str:
    """Intervention | Count | swaps that decrease MSE | swaps that increase MSE."""
    rows = [("Intervention", "Count", "down MSE", "up MSE")]
    for a, s in swaps.items():
        rows.append((a, str(s["count"]), str(s["decrease"]), str(s["increase"])))
    return _align(rows)


def regression_table(fit, adjusted_p: Sequence[float] | None = None, title: str = "Logit Regression") -> str:
    """Variable | Coef. | Std. Err. | z-value | P>|z| | 95% Confidence Interval."""
    p = list(adjusted_p) if adjusted_p is not None else list(fit.p_values)
    ci = fit.ci
    rows = [("Variable", "Coef.", "Std. Err.", "z-value", "P>|z|", "95% Confidence Interval")]
    for k, lab in enumerate(fit.labels):
        rows.append((lab, f"{fit.coef[k]:.4f}", f"{fit.se[k]:.3f}", f"{fit.z[k]:.3f}", f"{p[k]:.3f}",
                     f"[{ci[k, 0]:.3f}, {ci[k, 1]:.3f}]"))
    foot = (f"Observations: {fit.n_obs}, Pseudo R-squared: {fit.pseudo_r2:.5f}, "
            f"Log-Likelihood: {fit.loglik:.2f}, LLR p-value: {fit.llr_p_value:.4g}")
    return f"{title}\n" + _align(rows) + foot + "\n"


def summary_text(report: Mapping) -> str:
    alpha = report["config"]["alpha"]
    tests = report["tests"]
    parts = [
        f"Input: {report['input']['path']} ({report['input']['retained']} rows retained, "
        f"{report['input']['dropped']} dropped)",
        f"Pairs: {report['matching']['n_pairs']}, max scaled distance "
        f"{report['matching']['max_distance']:.4f}"
        + ("  [exceeds ceiling]" if report["matching"]["exceeds_ceiling"] else ""),
        f"K = {report['config']['K']}, seed = {report['config']['seed']}, alpha = {alpha}",
        "",
        "Top interventions",
        top_table(tests, alpha),
        "All hypotheses",
        full_table(tests, alpha),
        "Swaps that could change the MSE",
        swap_table(report["swaps"]),
        f"{STAR} adjusted p < {alpha}",
    ]
    return "\n".join(parts) + "\n"


def _version(pkg: str) -> str:
    try:
        return metadata.version(pkg)
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    config_hash: str
    seed: int
    inputs: dict[str, str]
    versions: dict[str, str] = field(default_factory=dict)
    started: str = ""
    finished: str = ""

    @classmethod
    def start(cls, config_text: str, seed: int, inputs: Iterable[str | Path]) -> "RunManifest":
        import numpy
        import pandas
        import scipy

        from .. import __version__

        return cls(
            config_hash=text_digest(config_text),
            seed=seed,
            inputs={str(p): file_digest(p) for p in inputs},
            versions={"expertaudit": __version__, "numpy": numpy.__version__,
                      "scipy": scipy.__version__, "pandas": pandas.__version__,
                      "python": platform.python_version()},
            started=_now(),
        )

    def finish(self) -> "RunManifest":
        self.finished = _now()
        return self

    def to_json(self) -> str:
        return dumps(asdict(self))


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
