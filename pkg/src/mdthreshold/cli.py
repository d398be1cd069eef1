"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 numerical failure.  Data goes to
stdout; diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import asymptotics_lab, model_core, reports, risk, tails, thresholds
from .errors import DomainError, NumericError
from .evidence import TestProblem
from .priors import local_density, parse_prior

SEED_ENV = "MDTHRESHOLD_SEED"
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _read_config(path: str) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            cfg[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return cfg


def _int_list(text: str) -> list[int]:
    return [int(float(v)) for v in text.replace(" ", "").split(",") if v]


def _grid(text: str):
    import numpy as np
    try:
        start, stop, num = text.split(":")
        return np.linspace(float(start), float(stop), int(num))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("grid must look like start:stop:num") from exc


def _family(text: str):
    name, _, arg = text.partition(":")
    if name == "gaussian":
        return model_core.gaussian(0.0, float(arg) if arg else 1.0)
    if name == "bernoulli":
        return model_core.bernoulli(float(arg) if arg else 0.5)
    raise argparse.ArgumentTypeError(f"unknown family {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, "0")),
                        help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--config", help="key=value file mirroring the flags")
    common.add_argument("--paper-parity", action="store_true",
                        help="round displayed cutoffs to 2 decimals")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--prior", default="cauchy:0,1")
    model.add_argument("--sigma", type=float, default=1.0)
    model.add_argument("--odds", default="1:1", help="prior model odds p0:pa")

    p = argparse.ArgumentParser(prog="mdthreshold",
                                description="Risk-optimal Bayesian rejection thresholds.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("threshold", parents=[common, model], help="critical value at one n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=("thm1", "thm2", "numeric", "horseshoe", "rs"), default="thm1")
    s.add_argument("--fisher", type=float, help="Fisher information for thm2")
    s.add_argument("--family", type=_family, help="gaussian:sigma | bernoulli:p0 (sets fisher for thm2)")
    s.add_argument("--k", type=int, default=1, help="dimension of interest (rs)")
    s.add_argument("--lambda-exp", type=float, default=0.0, help="local prior exponent (rs)")
    s.add_argument("--m", type=int, default=0, help="nuisance dimension (rs; does not enter)")

    s = sub.add_parser("table", parents=[common, model], help="calibration comparison table")
    s.add_argument("--n-list", type=_int_list, default=list(reports.TABLE1_N))
    s.add_argument("--alpha", type=float, default=0.05)

    s = sub.add_parser("risk-curve", parents=[common, model], help="integrated Bayes risk over c")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--grid", type=_grid, default=None, help="start:stop:num")
    s.add_argument("--out", help="output path (default stdout)")

    s = sub.add_parser("tails", parents=[common], help="tail probabilities at the RS boundary")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--lambda", dest="lam", type=float, help="explicit deviation (overrides --a)")
    s.add_argument("--family", type=_family, default=model_core.gaussian())
    s.add_argument("--reps", type=int, default=10 ** 6)
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("chernoff", parents=[common], help="Chernoff information and Efron-Truax error")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--bernoulli", help="p0,p1 for a Bernoulli pair instead of the Gaussian one")

    s = sub.add_parser("lindley", parents=[common, model], help="Lindley paradox numbers")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t", type=float, required=True)

    s = sub.add_parser("lab", parents=[common], help="BIC gap and Dawid expansion checks")
    s.add_argument("which", choices=("dawid", "bic"))
    s.add_argument("--n", type=int, default=10 ** 4)
    s.add_argument("--reps", type=int, default=2000)
    s.add_argument("--tau", type=float, default=1.0)
    s.add_argument("--n-list", type=_int_list, default=[10 ** k for k in range(2, 7)])
    s.add_argument("--samples", action="store_true", help="include per-rep statistics in JSON")
    return p


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = _read_config(known.config)
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subs.choices.values():
        flags = {a.dest for a in sp._actions if isinstance(a, argparse._StoreTrueAction)}
        dests = {a.dest for a in sp._actions}
        defaults = {}
        for a in sp._actions:
            if a.dest in cfg:
                a.required = False  # the config file supplies it
        for k, v in cfg.items():
            if k in flags:
                defaults[k] = _truthy(v)
            elif k in dests:
                defaults[k] = v
        sp.set_defaults(**defaults)


def _truthy(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _emit(data, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        json.dump(data, out, indent=2, default=_json_default)
        out.write("\n")
        return
    rows = data if isinstance(data, list) else [data]
    flat = [{k: v for k, v in r.items() if not isinstance(v, (dict, list))} for r in rows]
    w = csv.DictWriter(out, fieldnames=list(flat[0].keys()), lineterminator="\n")
    w.writeheader()
    w.writerows(flat)


def _json_default(o):
    if hasattr(o, "tolist"):
        return o.tolist()
    if isinstance(o, float) and not math.isfinite(o):
        return None
    raise TypeError(type(o).__name__)


def _problem(args) -> TestProblem:
    pi0, pia = reports.parse_odds(args.odds)
    return TestProblem(parse_prior(args.prior), sigma=args.sigma, pi0=pi0, pia=pia)


def cmd_threshold(args):
    pi0, pia = reports.parse_odds(args.odds)
    if args.method == "rs":
        if args.m:
            print(f"note: nuisance dimension m={args.m} does not enter the RS boundary", file=sys.stderr)
        return {"method": "rs", "n": args.n, "k": args.k, "lambda_exp": args.lambda_exp,
                "threshold": thresholds.threshold_rs(args.n, args.k, args.lambda_exp),
                "note": "c_n = o(1) correction set to 0"}
    if args.method == "horseshoe":
        res = thresholds.threshold_horseshoe(args.n)
    elif args.method == "numeric":
        res = thresholds.threshold_numeric(_problem(args), args.n)
    else:
        prior = parse_prior(args.prior)
        if args.method == "thm2":
            fisher = args.fisher
            theta0 = 0.0
            if args.family is not None:
                fisher = args.family.fisher if fisher is None else fisher
                theta0 = args.family.theta0
            if fisher is None:
                raise UsageError("thm2 needs --fisher or --family")
            res = thresholds.threshold_thm2(args.n, fisher, local_density(prior, theta0), pi0, pia)
        else:
            res = thresholds.threshold_thm1(args.n, args.sigma, local_density(prior), pi0, pia)
    out = res.to_dict()
    out["n"] = args.n
    if args.paper_parity and res.t_crit is not None:
        out["t_crit"] = round(res.t_crit, 2)
    if res.t_crit is None:
        print("warning: t_crit^2 < 0; t_crit undefined", file=sys.stderr)
    return out


def cmd_table(args):
    pi0, pia = reports.parse_odds(args.odds)
    rows = reports.calibration_table(args.n_list, parse_prior(args.prior), args.sigma, pi0, pia,
                                     args.alpha, paper_parity=args.paper_parity)
    return [r.to_dict() for r in rows]


def cmd_risk_curve(args):
    curve = risk.risk_curve(_problem(args), args.n, args.grid)
    rows = [{"c": float(c), "alpha": float(a), "beta": float(b), "total": float(t)}
            for c, a, b, t in zip(curve.grid, curve.alpha, curve.beta, curve.total)]
    summary = {"n": curve.n, "c_star": curve.c_star, "r_star": curve.r_star}
    return rows, summary


def cmd_tails(args):
    fam = args.family
    sd = math.sqrt(fam.variance)
    lam = args.lam if args.lam is not None else args.a * math.sqrt(math.log(args.n) / args.n)
    a_eff = lam / math.sqrt(math.log(args.n) / args.n)
    regime = tails.classify_regime(tails.rs_boundary(a_eff), args.n, sd)
    mc = tails.mc_tail(fam, args.n, lam, args.reps, args.seed, args.workers)
    return {
        "family": fam.name, "n": args.n, "lambda": lam, "a": a_eff,
        "regime": regime.label, "z": regime.z,
        "lemma1": tails.tail_lemma1(args.n, a_eff, sd).value,
        "exact": fam.exact_tail(args.n, lam),
        "mc": mc.value, "mc_se": mc.se, "reps": mc.reps, "seed": args.seed,
    }


def cmd_chernoff(args):
    if args.bernoulli:
        p0, p1 = (float(v) for v in args.bernoulli.split(","))
        res = risk.chernoff_information(risk.SimpleHypothesis.bernoulli(p0),
                                        risk.SimpleHypothesis.bernoulli(p1))
        return {"pair": f"bernoulli({p0}) vs bernoulli({p1})", "d_c": res.d_c, "s_star": res.s_star,
                "note": "exponent only; no prefactor claimed for non-Gaussian pairs"}
    num = risk.chernoff_information(risk.SimpleHypothesis.gaussian(0.0, args.sigma),
                                    risk.SimpleHypothesis.gaussian(args.delta, args.sigma))
    et = risk.efron_truax_error(args.n, args.delta, args.sigma)
    return {"pair": f"N(0,{args.sigma}^2) vs N({args.delta},{args.sigma}^2)", "n": args.n,
            "d_c": num.d_c, "s_star": num.s_star, "d_c_closed_form": et.d_c,
            "prefactor_error": et.prefactor_error, "exact_error": et.exact_error,
            "ratio": et.prefactor_error / et.exact_error}


def cmd_lindley(args):
    pi0, pia = reports.parse_odds(args.odds)
    out = reports.lindley_report(args.n, args.t, parse_prior(args.prior), args.sigma, pi0, pia)
    if args.paper_parity:
        out["t_crit"] = round(out["t_crit"], 2)
        out["bf01_leading"] = round(out["bf01_leading"], 1)
    return out


def cmd_lab(args):
    if args.which == "dawid":
        rep = asymptotics_lab.dawid_check(args.n, args.reps, args.seed, args.tau)
        for w in rep.warnings:
            print(f"warning: {w}", file=sys.stderr)
        return rep.to_dict(include_samples=args.samples)
    sweep = asymptotics_lab.bic_gap_sweep(args.n_list, seed=args.seed, tau=args.tau)
    return [{"n": n, "gap": g} for n, g in sweep]


COMMANDS = {
    "threshold": cmd_threshold, "table": cmd_table, "risk-curve": cmd_risk_curve,
    "tails": cmd_tails, "chernoff": cmd_chernoff, "lindley": cmd_lindley, "lab": cmd_lab,
}


def run(argv=None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = COMMANDS[args.command](args)
        if args.command == "risk-curve":
            rows, summary = result
            if args.format == "json":
                payload = dict(summary, rows=rows)
                if args.out:
                    with open(args.out, "w", encoding="utf-8") as fh:
                        _emit(payload, "json", fh)
                else:
                    _emit(payload, "json", stdout)
            else:
                buf = io.StringIO()
                _emit(rows, "csv", buf)
                buf.write(f"# c_star={summary['c_star']!r},r_star={summary['r_star']!r},n={summary['n']}\n")
                if args.out:
                    with open(args.out, "w", encoding="utf-8") as fh:
                        fh.write(buf.getvalue())
                else:
                    stdout.write(buf.getvalue())
        else:
            _emit(result, args.format, stdout)
    except (UsageError, DomainError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
