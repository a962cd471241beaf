"""Command-line entry point: ``expertise-audit <command> ...``.

Exit codes: 0 success, 2 validation error (bad input, file or config),
3 statistical-procedure error.  Structured output is JSON on stdout or in
the file given by ``--out``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import ExpertAuditError, ValidationError


def _emit(obj, out: str | None, text: str | None = None) -> None:
    from .io.report import dumps

    payload = dumps(obj)
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    if text is not None:
        sys.stdout.write(text)
    elif not out:
        sys.stdout.write(payload)


def _policy(args):
    from .io.ingest import DEFAULT_DROP, IngestionPolicy

    return IngestionPolicy(
        drop_if_missing=tuple(args.drop) if args.drop is not None else DEFAULT_DROP,
        exclude_summer=not args.keep_summer,
        gpa_threshold=None if args.binary_outcome else args.gpa_threshold,
        outcome_column=args.outcome,
        stratum_column=None if args.stratum_column in ("", "none") else args.stratum_column,
        id_column=args.id_column,
        feature_columns=tuple(args.features) if args.features else None,
        action_columns=tuple(args.actions) if args.actions else None,
    )


def _add_ingest_flags(p):
    p.add_argument("csv", help="input CSV")
    p.add_argument("--outcome", default="gpa")
    p.add_argument("--gpa-threshold", type=float, default=3.5)
    p.add_argument("--binary-outcome", action="store_true", help="outcome column is already 0/1")
    p.add_argument("--keep-summer", action="store_true")
    p.add_argument("--drop", nargs="*", default=None, metavar="COL",
                   help="drop rows missing any of these columns")
    p.add_argument("--stratum-column", default="semester")
    p.add_argument("--id-column", default="student_id")
    p.add_argument("--features", nargs="+")
    p.add_argument("--actions", nargs="+")


# ---- commands -------------------------------------------------------------

def cmd_ingest(args):
    from .io.ingest import load_audit_frame, write_audit_csv, write_exclusion_log

    res = load_audit_frame(args.csv, _policy(args))
    if args.clean:
        write_audit_csv(res.frame.drop(columns=["_line"]).rename(columns={"_id": args.id_column}), args.clean)
    if args.log:
        write_exclusion_log(res.exclusions, args.log)
    _emit({"rows": res.n_input, "retained": len(res.frame), "dropped": res.dropped_count,
           "exclusions": res.exclusion_counts(), "features": list(res.features),
           "actions": list(res.actions)}, args.out)


def cmd_match(args):
    from .io.ingest import load_audit_frame
    from .matching import greedy_pair, match_quality_report

    res = load_audit_frame(args.csv, _policy(args))
    data = res.dataset(res.actions[0])
    pairs = greedy_pair(data, args.pairs, stratum_constraint=res.stratum is not None)
    q = match_quality_report(pairs, data, args.max_distance_warn)
    if q.exceeds_ceiling:
        print(f"warning: max pair distance {q.max_distance:.3f} exceeds {args.max_distance_warn}",
              file=sys.stderr)
    ids = data.ids
    _emit({**q.to_dict(), "pairs": [[str(ids[i]), str(ids[j]), d] for i, j, d in pairs]}, args.out)


def cmd_audit(args):
    from .expert_test import Direction
    from .io.config import PipelineConfig
    from .io.pipeline import build_report
    from .io.report import summary_text

    dirs = ((Direction.POSITIVE, Direction.NEGATIVE) if args.direction == "both"
            else (Direction(args.direction),))
    cfg = PipelineConfig(
        input_path=Path(args.csv), policy=_policy(args), pairs=args.pairs,
        stratum_constraint=args.stratum_column not in ("", "none"),
        max_distance_warn=args.max_distance_warn, K=args.k, seed=args.seed or 0,
        alpha=args.alpha, directions=dirs, bh=args.bh,
    )
    report = build_report(cfg)
    _emit(report, args.out, summary_text(report) if args.summary else None)


def _assignments(items: Sequence[str] | None) -> dict[str, int]:
    out = {}
    for it in items or ():
        name, _, val = it.partition("=")
        if val not in ("0", "1"):
            raise ValidationError(f"expected NAME=0 or NAME=1, got {it!r}")
        out[name.strip()] = int(val)
    return out


def _load_model(ref: str, params: Sequence[str] | None):
    from .scm.spec_file import load_bundled, load_model

    values = {}
    for it in params or ():
        k, _, v = it.partition("=")
        try:
            values[k.strip()] = float(v)
        except ValueError:
            raise ValidationError(f"expected NAME=VALUE, got {it!r}") from None
    if Path(ref).is_file():
        return load_model(ref, values)
    return load_bundled(ref, values)


def cmd_scm(args):
    from .audit import (Roles, check_expertly_targeted, check_impactful_action,
                        check_non_algorithmic_action, verify_dependence_implies_weak_expertise)
    from .scm import check_causal_minimality, check_faithfulness, enumerate_joint, intervene

    model = _load_model(args.model, args.param)
    roles = Roles(args.action, args.outcome, args.context)
    if args.scm_cmd == "audit":
        v = check_expertly_targeted(model, _assignments(args.x), args.u, roles)
        imp = check_impactful_action(model, roles)
        non = check_non_algorithmic_action(model, roles)
        weak = verify_dependence_implies_weak_expertise(model, roles)
        _emit({"model": model.name, "verdict": v.as_dict(),
               "impactful": {"holds": imp.holds, "witness": imp.witness},
               "non_algorithmic": {"holds": non.holds, "witness": non.witness, "reason": non.reason},
               "dependence_implies_weak_expertise": {"antecedent": weak.antecedent,
                                                     "holds": weak.holds}}, args.out)
    elif args.scm_cmd == "joint":
        do = _assignments(args.do)
        m = intervene(model, do) if do else model
        dist = enumerate_joint(m)
        names = args.vars or list(model.variables)
        marg = dist.marginal(names)
        rows = [{"assignment": dict(zip(names, k)), "p": p} for k, p in sorted(marg.table.items())]
        _emit({"model": m.name, "variables": names, "joint": rows}, args.out)
    elif args.scm_cmd == "check":
        mini = check_causal_minimality(model)
        out = {"model": model.name, "minimal": mini.minimal,
               "parents": [{"variable": c.variable, "parent": c.parent, "dependent": c.dependent,
                            "discrepancy": c.discrepancy} for c in mini.checks]}
        if len(model.variables) <= 5:
            f = check_faithfulness(model)
            out["faithful"] = f.faithful
            out["violations"] = [str(s) for s in f.violations]
        _emit(out, args.out)
    elif args.scm_cmd == "sample":
        from .io.sampling import sample_table

        table = sample_table(model, args.n, args.seed or 0)
        if args.out:
            table.to_csv(args.out, index=False, lineterminator="\n")
        else:
            table.to_csv(sys.stdout, index=False, lineterminator="\n")


def _students(args):
    import pandas as pd

    from .hte.design import apply_concordance, load_concordance

    frame = pd.read_csv(args.csv, dtype={"advisor": "string"})
    if args.concordance:
        frame = apply_concordance(frame, load_concordance(args.concordance))
    return frame


def cmd_hte(args):
    from .expert_test import benjamini_hochberg
    from .hte.design import build_advisor_design, build_race_design, combined_effects
    from .hte.logistic import fit_logistic
    from .io.report import regression_table

    frame = _students(args)
    if args.hte_cmd == "advisor":
        fit = fit_logistic(build_advisor_design(frame, outcome=args.outcome, reference=args.reference,
                                                treatment_only=args.treatment_only))
    else:
        fit = fit_logistic(build_race_design(frame, outcome=args.outcome))
    adj = benjamini_hochberg(fit.p_values)
    ci = fit.ci
    out = {
        "model": args.hte_cmd,
        "observations": fit.n_obs,
        "pseudo_r2": fit.pseudo_r2,
        "loglik": fit.loglik,
        "llr_p_value": fit.llr_p_value,
        "iterations": fit.iterations,
        "coefficients": [
            {"variable": lab, "coef": float(fit.coef[k]), "se": float(fit.se[k]), "z": float(fit.z[k]),
             "p": float(fit.p_values[k]), "p_bh": float(adj[k]), "ci": [float(ci[k, 0]), float(ci[k, 1])]}
            for k, lab in enumerate(fit.labels)
        ],
    }
    if args.hte_cmd == "race":
        eff = combined_effects(fit)
        adj2 = benjamini_hochberg([e.p2 for e in eff])
        out["combined"] = [{"group": e.group, "coef1": e.coef1, "coef2": e.coef2, "se2": e.se2,
                            "p2": e.p2, "p2_bh": float(q)} for e, q in zip(eff, adj2)]
    title = "Logit Regression (" + args.outcome + ")"
    _emit(out, args.out, regression_table(fit, adj, title) if not args.json else None)


def cmd_power(args):
    from .hte.power import PowerConfig, mde, required_sample_size, simulate_mde

    cfg = PowerConfig(args.alpha, args.power, args.decimals)
    if args.power_cmd == "mde":
        _emit({"se_beta3": args.se, "mde": mde(args.se, cfg), "z_alpha": cfg.z_alpha,
               "z_beta": cfg.z_beta}, args.out)
    elif args.power_cmd == "samplesize":
        n = required_sample_size(args.mde, args.rss, args.g33, cfg, args.p)
        _emit({"target_mde": args.mde, "required_n": n}, args.out)
    else:
        rows = []
        for N in args.n:
            r = simulate_mde(N, args.treated, args.subgroup, args.base_rate, cfg, args.sim_seed)
            rows.append({"N": N, "treated": r.treated, "subgroup": r.subgroup,
                         "se_beta3": r.se_beta3, "mde": r.mde})
        _emit({"rows": rows}, args.out)


def cmd_simulate(args):
    """Rejection rate of the swap test on datasets sampled from an SCM."""
    from .simulation import rejection_rate

    model = _load_model(args.model, args.param)
    res = rejection_rate(model, args.n, args.pairs, args.k, args.replicates, args.seed or 0,
                         args.alpha, args.direction)
    _emit(res.to_dict(), args.out)


def cmd_pipeline(args):
    from .io.pipeline import run_pipeline
    from .io.report import summary_text

    report = run_pipeline(args.config_file or args.config, seed=args.seed)
    _emit(report, args.out, summary_text(report))


def cmd_actionpred(args):
    import pandas as pd

    from .hte.actionpred import action_auc_grid

    frame = pd.read_csv(args.csv)
    grid = action_auc_grid(frame, args.actions, args.stratum, args.numeric, args.categorical or (),
                           race=args.race, treatment=args.treatment)
    if args.json:
        _emit({"strata": list(grid.columns), "rows": {a: list(grid.loc[a]) for a in grid.index}}, args.out)
    else:
        text = grid.to_string() + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        sys.stdout.write(text)


# ---- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="pipeline config (INI)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write structured output here")

    p = argparse.ArgumentParser(prog="expertise-audit", description=__doc__.splitlines()[0],
                                parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", parents=[common], help="clean a CSV and report exclusions")
    _add_ingest_flags(s)
    s.add_argument("--clean", help="write the cleaned table here")
    s.add_argument("--log", help="write the exclusion log here")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("match", parents=[common], help="greedy pairing of records")
    _add_ingest_flags(s)
    s.add_argument("--pairs", type=int, required=True, metavar="L")
    s.add_argument("--max-distance-warn", type=float, default=0.5)
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("audit", parents=[common], help="swap tests for every action column")
    _add_ingest_flags(s)
    s.add_argument("--pairs", type=int, default=100, metavar="L")
    s.add_argument("--max-distance-warn", type=float, default=0.5)
    s.add_argument("--k", type=int, default=1000)
    s.add_argument("--direction", choices=["positive", "negative", "two_tailed", "both"], default="both")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--bh", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("--summary", action="store_true", help="print the text summary")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("scm", parents=[common], help="exact SCM queries")
    scm = s.add_subparsers(dest="scm_cmd", required=True)
    for name, help_ in (("audit", "expertise verdict"), ("joint", "exact (interventional) joint"),
                        ("check", "causal minimality and faithfulness"), ("sample", "draw rows")):
        c = scm.add_parser(name, parents=[common], help=help_)
        c.add_argument("model", help="model file or bundled name (m1, m2, expert, null)")
        c.add_argument("--param", nargs="*", metavar="NAME=VALUE")
        c.add_argument("--action", default="A")
        c.add_argument("--outcome", default="Y")
        c.add_argument("--context", default="U")
        if name == "audit":
            c.add_argument("--x", nargs="*", metavar="NAME=BIT")
            c.add_argument("--u", type=int, choices=[0, 1], default=1)
        if name == "joint":
            c.add_argument("--do", nargs="*", metavar="NAME=BIT")
            c.add_argument("--vars", nargs="*")
        if name == "sample":
            c.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_scm)

    s = sub.add_parser("hte", parents=[common], help="heterogeneous-effect logit models")
    hte = s.add_subparsers(dest="hte_cmd", required=True)
    for name in ("advisor", "race"):
        c = hte.add_parser(name, parents=[common])
        c.add_argument("csv", help="student table")
        c.add_argument("--outcome", default="graduated")
        c.add_argument("--concordance", help="SAT->ACT concordance CSV (columns sat, act)")
        c.add_argument("--json", action="store_true", help="print JSON instead of the table")
        if name == "advisor":
            c.add_argument("--reference", help="omitted advisor (default: last label)")
            c.add_argument("--treatment-only", action="store_true")
    s.set_defaults(func=cmd_hte)

    s = sub.add_parser("power", parents=[common], help="MDE and sample-size calculus")
    pw = s.add_subparsers(dest="power_cmd", required=True)
    for name in ("mde", "samplesize", "simulate"):
        c = pw.add_parser(name, parents=[common])
        c.add_argument("--alpha", type=float, default=0.05)
        c.add_argument("--power", type=float, default=0.80)
        c.add_argument("--decimals", type=int, default=None, help="round normal quantiles")
        if name == "mde":
            c.add_argument("--se", type=float, required=True)
        elif name == "samplesize":
            c.add_argument("--mde", type=float, required=True)
            c.add_argument("--rss", type=float, required=True, help="residual sum of squares")
            c.add_argument("--g33", type=float, required=True, help="(X'X)^-1 entry for the interaction")
            c.add_argument("--p", type=int, default=4)
        else:
            c.add_argument("--n", type=int, nargs="+", default=[745, 1000, 7000, 10000])
            c.add_argument("--treated", type=float, default=0.526)
            c.add_argument("--subgroup", type=float, default=0.47)
            c.add_argument("--base-rate", type=float, default=0.26)
            c.add_argument("--sim-seed", type=int, default=None, help="Bernoulli draws instead of exact cells")
    s.set_defaults(func=cmd_power)

    s = sub.add_parser("simulate", parents=[common], help="rejection rate of the swap test on an SCM")
    s.add_argument("model")
    s.add_argument("--param", nargs="*", metavar="NAME=VALUE")
    s.add_argument("--n", type=int, default=400, help="records per dataset")
    s.add_argument("--pairs", type=int, default=100)
    s.add_argument("--k", type=int, default=200)
    s.add_argument("--replicates", type=int, default=100)
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--direction", choices=["positive", "negative", "two_tailed"], default="positive")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("pipeline", parents=[common], help="run a configured end-to-end audit")
    s.add_argument("config_file", nargs="?", help="config file (else --config or $EXPERTAUDIT_CONFIG)")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("actionpred", parents=[common], help="AUC of action models with/without race")
    s.add_argument("csv", help="meeting-level table")
    s.add_argument("--actions", nargs="+", required=True)
    s.add_argument("--stratum", default="semester")
    s.add_argument("--numeric", nargs="+", required=True)
    s.add_argument("--categorical", nargs="*")
    s.add_argument("--race", default="race")
    s.add_argument("--treatment", default="treatment")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_actionpred)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", None), ("config", None), ("out", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        args.func(args)
    except ExpertAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ValidationError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
