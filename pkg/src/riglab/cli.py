"""Command-line front end: generate | check | predict | solve | experiment | sweep.

Experiments read a JSON config (schema ``rig-lab/1``, unknown keys
rejected); command-line flags override config values. The base seed falls
back to the ``RIG_LAB_SEED`` environment variable when neither a flag nor
the config provides one. Human-readable numbers print with 6 significant
digits; machine output keeps full precision.

Exit codes: 0 ok, 2 parameter/config/parse error, 3 decision budget
exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import montecarlo, scaling
from .errors import BudgetExceeded, ConfigError, EdgeListFormatError, ParameterError
from .graphs import read_edge_list, write_edge_list
from .models import (
    BinomialRigParams,
    ErParams,
    IntersectionSpec,
    ModelSpec,
    RggParams,
    UniformRigParams,
    sample_model,
)
from .properties import DecisionBudget, PropertyKind, evaluate_property, k_robust_witness
from .rng import RngStream

_PROPERTY_NAMES = {
    "mindeg": "min_degree",
    "kconn": "k_connected",
    "matching": "near_perfect_matching",
    "hamilton": "hamilton_cycle",
    "robust": "k_robust",
}
_FAMILIES = ("er", "urig", "brig", "rgg", "urig_er", "urig_rgg")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _default_seed(explicit: int | None, config_seed: int | None) -> int:
    if explicit is not None:
        return explicit
    if config_seed is not None:
        return config_seed
    env = os.environ.get("RIG_LAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"RIG_LAB_SEED must be an integer, got {env!r}") from exc
    return 0


def _property_from(kind: str, k: int) -> PropertyKind:
    if kind not in _PROPERTY_NAMES:
        raise ParameterError(
            f"unknown property {kind!r}; choose from {sorted(_PROPERTY_NAMES)}"
        )
    return PropertyKind(_PROPERTY_NAMES[kind], k)


def _scaling_family(family: str, s: int, region: str | None) -> scaling.ModelFamily:
    if family == "er":
        return scaling.ModelFamily.er()
    if family == "urig":
        return scaling.ModelFamily.uniform_rig(s)
    if family == "brig":
        return scaling.ModelFamily.binomial_rig(s)
    if family == "urig_er":
        return scaling.ModelFamily.uniform_rig_er(s)
    if family == "urig_rgg":
        if region is None:
            raise ParameterError("urig_rgg needs --region torus|square")
        return scaling.ModelFamily.uniform_rig_rgg(region)
    raise ParameterError(f"family {family!r} has no threshold scaling")


# -- config handling -----------------------------------------------------------


def _check_keys(doc: dict, allowed: set[str], path: str) -> None:
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} at {path}")


def load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    _check_keys(doc, {
        "schema", "label", "seed", "trials", "workers", "property", "model",
        "solve", "budget", "output", "sweep",
    }, "$")
    if doc.get("schema") != montecarlo.SCHEMA:
        raise ConfigError(
            f"key 'schema' must be {montecarlo.SCHEMA!r}, got {doc.get('schema')!r}"
        )
    if "property" in doc:
        _check_keys(doc["property"], {"kind", "k"}, "$.property")
    if "model" in doc:
        _check_keys(doc["model"], {
            "family", "n", "K", "P", "s", "t", "q", "r", "region",
        }, "$.model")
    if "solve" in doc:
        _check_keys(doc["solve"], {"deviation", "free"}, "$.solve")
    if "budget" in doc:
        _check_keys(doc["budget"], {
            "max_enumeration_nodes", "search_steps", "dp_state_limit",
        }, "$.budget")
    if "output" in doc:
        _check_keys(doc["output"], {"csv", "summary", "timing"}, "$.output")
    if "sweep" in doc:
        _check_keys(doc["sweep"], {"axis", "values"}, "$.sweep")
    return doc


def _model_spec_from_dict(m: dict) -> ModelSpec:
    family = m.get("family")
    if family == "er":
        return ErParams(int(m["n"]), float(m["q"]))
    if family == "urig":
        return UniformRigParams(int(m["n"]), int(m["K"]), int(m["P"]), int(m.get("s", 1)))
    if family == "brig":
        return BinomialRigParams(int(m["n"]), float(m["t"]), int(m["P"]), int(m.get("s", 1)))
    if family == "rgg":
        return RggParams(int(m["n"]), float(m["r"]), m.get("region", "torus"))
    if family == "urig_er":
        return IntersectionSpec((
            UniformRigParams(int(m["n"]), int(m["K"]), int(m["P"]), int(m.get("s", 1))),
            ErParams(int(m["n"]), float(m["q"])),
        ))
    if family == "urig_rgg":
        return IntersectionSpec((
            UniformRigParams(int(m["n"]), int(m["K"]), int(m["P"]), 1),
            RggParams(int(m["n"]), float(m["r"]), m.get("region", "torus")),
        ))
    raise ConfigError(f"unknown model family {family!r}")


def _family_params_from_dict(m: dict) -> scaling.FamilyParams:
    return scaling.FamilyParams(
        n=int(m["n"]),
        K=None if m.get("K") is None else int(m["K"]),
        P=None if m.get("P") is None else int(m["P"]),
        t=None if m.get("t") is None else float(m["t"]),
        q=None if m.get("q") is None else float(m["q"]),
        r=None if m.get("r") is None else float(m["r"]),
    )


def _budget_from(doc: dict | None, args) -> DecisionBudget:
    kw = {}
    if doc:
        kw.update(doc)
    if getattr(args, "budget_nodes", None) is not None:
        kw["max_enumeration_nodes"] = args.budget_nodes
    if getattr(args, "search_steps", None) is not None:
        kw["search_steps"] = args.search_steps
    return DecisionBudget(**kw)


# -- subcommands -----------------------------------------------------------------


def _cmd_generate(args) -> int:
    m = {
        "family": args.model, "n": args.n, "K": args.K, "P": args.P, "s": args.s,
        "t": args.t, "q": args.q, "r": args.r, "region": args.region,
    }
    try:
        spec = _model_spec_from_dict({k: v for k, v in m.items() if v is not None})
    except KeyError as exc:
        raise ParameterError(f"model {args.model!r} needs parameter {exc}") from None
    seed = _default_seed(args.seed, None)
    g = sample_model(spec, RngStream(seed, args.trial))
    if args.out:
        write_edge_list(g, args.out)
        print(f"n={g.n} m={g.m} -> {args.out}")
    else:
        from .graphs import to_edge_list_text

        sys.stdout.write(to_edge_list_text(g))
        print(f"n={g.n} m={g.m}", file=sys.stderr)
    return 0


def _cmd_check(args) -> int:
    g = read_edge_list(args.graph)
    prop = _property_from(args.property, args.k)
    budget = _budget_from(None, args)
    if prop.kind == "k_robust":
        witness = k_robust_witness(g, prop.k, budget)
        print("true" if witness is None else "false")
        if witness is not None:
            print(f"witness T = {{{', '.join(map(str, witness.members()))}}}")
        return 0
    verdict = evaluate_property(g, prop, budget)
    print("true" if verdict else "false")
    return 0


def _cmd_predict(args) -> int:
    prop = _property_from(args.property, args.k)
    family = _scaling_family(args.family, args.s, args.region)
    spec = scaling.threshold_spec(family, prop)
    have_params = args.n is not None
    doc: dict = {
        "schema": montecarlo.SCHEMA,
        "family": family.label(),
        "property": {"kind": prop.kind, "k": prop.k},
        "limit_form": spec.limit_form,
    }
    if have_params:
        params = scaling.FamilyParams(
            n=args.n, K=args.K, P=args.P, t=args.t, q=args.q, r=args.r
        )
        report = scaling.coupling_report(family, params, prop)
        prediction = scaling.limiting_probability(spec, report.deviation)
        doc.update({
            "coupling": report.coupling,
            "implied_deviation": report.deviation,
            "predicted_probability": prediction,
            "side_conditions": [
                {"name": c.name, "value": c.value, "ok": c.ok}
                for c in report.side_conditions
            ],
        })
        if not args.json:
            print(f"coupling: {_fmt(report.coupling)}")
            print(f"implied deviation: {_fmt(report.deviation)}")
            print("limiting probability: "
                  + ("unspecified" if prediction is None else _fmt(prediction)))
            for c in report.side_conditions:
                print(f"side condition {c.name}: {_fmt(c.value)} "
                      f"[{'ok' if c.ok else 'flagged'}]")
    else:
        if args.deviation is None:
            raise ParameterError("predict needs --deviation (or --alpha/--beta/...) "
                                 "or full model parameters with --n")
        prediction = scaling.limiting_probability(spec, args.deviation)
        doc.update({
            "deviation": args.deviation,
            "predicted_probability": prediction,
        })
        if not args.json:
            print("limiting probability: "
                  + ("unspecified" if prediction is None else _fmt(prediction)))
    if args.json:
        print(json.dumps(doc, indent=2))
    return 0


def _cmd_solve(args) -> int:
    prop = _property_from(args.property, args.k)
    family = _scaling_family(args.family, args.s, args.region)
    if args.deviation is None:
        raise ParameterError("solve needs --deviation (or --alpha/--beta/...)")
    if args.n is None:
        raise ParameterError("solve needs --n")
    fixed = scaling.FamilyParams(
        n=args.n, K=args.K, P=args.P, t=args.t, q=args.q, r=args.r
    )
    result = scaling.solve_param(family, prop, args.n, args.deviation, fixed)
    spec = scaling.threshold_spec(family, prop)
    best = result.best()
    if args.json:
        print(json.dumps({
            "schema": montecarlo.SCHEMA,
            "family": family.label(),
            "property": {"kind": prop.kind, "k": prop.k},
            "parameter": result.param,
            "real_value": result.real_value,
            "clamped": result.clamped,
            "target_deviation": result.target_deviation,
            "candidates": [
                {
                    "value": c.value,
                    "implied_deviation": c.implied_deviation,
                    "predicted_probability": scaling.limiting_probability(
                        spec, c.implied_deviation),
                }
                for c in result.candidates
            ],
        }, indent=2))
        return 0
    print(f"{result.param} = {_fmt(result.real_value)}"
          + (" (clamped)" if result.clamped else ""))
    for c in result.candidates:
        pred = scaling.limiting_probability(spec, c.implied_deviation)
        mark = " *" if c == best else ""
        print(f"  candidate {result.param} = {_fmt(c.value)}: "
              f"implied deviation {_fmt(c.implied_deviation)}, "
              f"limit {'unspecified' if pred is None else _fmt(pred)}{mark}")
    return 0


def _resolve_experiment(args, need_sweep: bool):
    doc = load_config(args.config) if args.config else {"schema": montecarlo.SCHEMA}
    label = args.label if args.label is not None else doc.get("label", "")
    trials = args.trials if args.trials is not None else doc.get("trials")
    if trials is None:
        raise ConfigError("trials must be set (flag --trials or config key)")
    seed = _default_seed(args.seed, doc.get("seed"))
    workers = args.workers if args.workers is not None else doc.get("workers", os.cpu_count() or 1)
    budget = _budget_from(doc.get("budget"), args)
    prop_doc = doc.get("property")
    if args.property is not None:
        prop = _property_from(args.property, args.k)
    elif prop_doc is not None:
        prop = _property_from(prop_doc["kind"], int(prop_doc.get("k", 1)))
    else:
        raise ConfigError("property must be set (flag --property or config key)")
    model_doc = doc.get("model")
    if model_doc is None:
        raise ConfigError("config needs a 'model' section")
    solve_doc = doc.get("solve")
    out = doc.get("output", {})
    csv_path = args.csv if args.csv is not None else out.get("csv")
    json_path = args.summary if args.summary is not None else out.get("summary")
    timing = bool(out.get("timing", False)) or args.timing
    sweep_doc = doc.get("sweep")
    if need_sweep:
        axis = args.axis if args.axis is not None else (sweep_doc or {}).get("axis")
        values = (
            [float(x) for x in args.values.split(",")]
            if args.values is not None
            else (sweep_doc or {}).get("values")
        )
        if axis is None or values is None:
            raise ConfigError("sweep needs axis and values (flags or config)")
    else:
        axis = values = None
    family_name = model_doc.get("family")
    if solve_doc is not None or need_sweep:
        family = _scaling_family(
            family_name, int(model_doc.get("s", 1)), model_doc.get("region")
        )
        fixed = _family_params_from_dict({**model_doc, "n": model_doc["n"]})
        deviation = float(solve_doc["deviation"]) if solve_doc else 0.0
        return (doc, label, trials, seed, workers, budget, prop, family, fixed,
                deviation, csv_path, json_path, timing, axis, values, None)
    spec = _model_spec_from_dict(model_doc)
    ctx = None
    if family_name in ("er", "urig", "brig", "urig_er", "urig_rgg"):
        try:
            family = _scaling_family(
                family_name, int(model_doc.get("s", 1)), model_doc.get("region")
            )
            ctx = montecarlo.threshold_context(
                family, _family_params_from_dict(model_doc), prop
            )
        except ParameterError:
            ctx = None  # family/property without a law: run without prediction
    return (doc, label, trials, seed, workers, budget, prop, None, None, None,
            csv_path, json_path, timing, axis, values, (spec, ctx))


def _print_summary(summary) -> None:
    print(f"model: {summary.model}")
    print(f"property: {summary.prop.label()}")
    print(f"trials: {summary.trials}  successes: {summary.successes}")
    lo, hi = summary.wilson_95
    print(f"empirical probability: {_fmt(summary.empirical_probability)} "
          f"(wilson95 [{_fmt(lo)}, {_fmt(hi)}])")
    if summary.implied_deviation is not None:
        print(f"implied deviation: {_fmt(summary.implied_deviation)}")
    if summary.predicted_probability is not None:
        print(f"predicted limit: {_fmt(summary.predicted_probability)}")
    elif summary.limit_form is not None:
        print("predicted limit: unspecified (zero-one law at finite deviation)")
    for c in summary.side_conditions:
        print(f"side condition {c.name}: {_fmt(c.value)} [{'ok' if c.ok else 'flagged'}]")
    bad = {k: v for k, v in summary.audit_violations.items() if v}
    print(f"audit violations: {bad if bad else 'none'}")


def _cmd_experiment(args) -> int:
    (doc, label, trials, seed, workers, budget, prop, family, fixed, deviation,
     csv_path, json_path, timing, _axis, _values, explicit) = _resolve_experiment(
        args, need_sweep=False)
    if explicit is not None:
        spec, ctx = explicit
        cfg = montecarlo.ExperimentConfig(
            model=spec, prop=prop, trials=trials, seed=seed, budget=budget,
            threshold=ctx, label=label,
        )
    else:
        cfg = montecarlo.threshold_experiment(
            family, prop, fixed.n, deviation, fixed, trials, seed, budget, label
        )
    result = montecarlo.run_experiment(cfg, workers=workers)
    if csv_path:
        montecarlo.write_trials_csv(result.records, csv_path, timing=timing)
    if json_path:
        montecarlo.write_summary_json(result.summary, json_path)
    _print_summary(result.summary)
    return 0


def _cmd_sweep(args) -> int:
    (doc, label, trials, seed, workers, budget, prop, family, fixed, deviation,
     csv_path, json_path, timing, axis, values, _explicit) = _resolve_experiment(
        args, need_sweep=True)
    points = montecarlo.sweep(
        family, prop, fixed.n, fixed, axis, values, trials, seed,
        budget=budget, workers=workers, deviation=deviation,
    )
    rows = []
    for pt in points:
        if pt.summary is None:
            print(f"{axis}={_fmt(pt.value)}: error: {pt.error}")
            rows.append({"axis": axis, "value": pt.value, "error": pt.error})
            continue
        s = pt.summary
        lo, hi = s.wilson_95
        pred = ("unspecified" if s.predicted_probability is None
                else _fmt(s.predicted_probability))
        print(f"{axis}={_fmt(pt.value)}: empirical {_fmt(s.empirical_probability)} "
              f"wilson95 [{_fmt(lo)}, {_fmt(hi)}] predicted {pred}")
        rows.append({
            "axis": axis, "value": pt.value,
            "summary": montecarlo.summary_to_json_dict(s),
        })
    if json_path:
        with open(json_path, "w", encoding="ascii", newline="\n") as fh:
            json.dump({"schema": montecarlo.SCHEMA, "label": label, "points": rows},
                      fh, indent=2)
            fh.write("\n")
    return 0


# -- parser ----------------------------------------------------------------------


def _add_deviation_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    for flag in ("--deviation", "--alpha", "--beta", "--gamma", "--delta"):
        g.add_argument(flag, dest="deviation", type=float, default=None,
                       help="target deviation from the critical scaling"
                       if flag == "--deviation" else argparse.SUPPRESS)


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True,
                   choices=("er", "urig", "brig", "urig_er", "urig_rgg"))
    p.add_argument("--s", type=int, default=1, help="required ring overlap")
    p.add_argument("--region", choices=("torus", "square"), default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--P", type=int, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--r", type=float, default=None)


def _add_property_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--property", required=required, default=None,
                   choices=sorted(_PROPERTY_NAMES),
                   help="mindeg | kconn | matching | hamilton | robust")
    p.add_argument("--k", type=int, default=1)


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-nodes", type=int, default=None,
                   help="enumeration cap for hamilton/robustness checkers")
    p.add_argument("--search-steps", type=int, default=None,
                   help="step budget enabling the large-n hamilton search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rig-lab",
        description="Random intersection graph lab: samplers, exact property "
                    "checkers and Monte Carlo threshold experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a graph and write its edge list")
    p.add_argument("--model", required=True, choices=_FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--P", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--region", choices=("torus", "square"), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trial", type=int, default=0, help="trial index within the seed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("check", help="decide a property of an edge-list file")
    p.add_argument("graph", help="edge-list file")
    _add_property_flags(p)
    _add_budget_flags(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("predict", help="limiting probability of a threshold law")
    _add_family_flags(p)
    _add_property_flags(p)
    _add_deviation_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("solve", help="solve the scaling for the free parameter")
    _add_family_flags(p)
    _add_property_flags(p)
    _add_deviation_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_solve)

    for name, helptext in (("experiment", "run a Monte Carlo experiment"),
                           ("sweep", "run experiments along an axis")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("-c", "--config", default=None, help="JSON config file")
        _add_property_flags(p, required=False)
        _add_budget_flags(p)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--label", default=None)
        p.add_argument("--csv", default=None, help="per-trial CSV output path")
        p.add_argument("--summary", default=None, help="JSON summary output path")
        p.add_argument("--timing", action="store_true",
                       help="write real per-trial millis (breaks byte-identical reruns)")
        if name == "sweep":
            p.add_argument("--axis", choices=("deviation", "n", "k"), default=None)
            p.add_argument("--values", default=None, help="comma-separated axis values")
        p.set_defaults(func=_cmd_experiment if name == "experiment" else _cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, ConfigError, EdgeListFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
