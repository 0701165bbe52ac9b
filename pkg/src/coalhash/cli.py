"""Command-line front end.

Subcommands: ``limits``, ``moments``, ``table1``, ``simulate``, ``oracle``,
``yule-check``.  Output goes to stdout or ``--out PATH`` as a human table,
CSV, or JSON.  Exit codes: 0 success, 1 usage error, 2 numeric/self-check
failure.  Every subcommand is deterministic given its full flag set.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import limits, mc, oracle
from .limits import LimitSpec, QuadratureError
from .table import Policy

SCHEMA_VERSION = 1

# Reference values for the limiting laws at half and full load, frozen at
# their published display precision (strings keep the decimal counts, which
# vary by cell).  Rows: k = 0..10, then the >=11 tail, mean, variance.
TABLE1_REFERENCE: dict[tuple[str, str], tuple[str, ...]] = {
    ("U", "0.5"): ("0.5", "0.375", "0.0881", "0.0252", "0.0078", "0.0026",
                   "0.00086", "0.00030", "0.00010", "0.00004", "0.00001",
                   "0.000007", "0.6796", "0.7394"),
    ("L", "0.5"): ("0.75", "0.2083", "0.0322", "0.0070", "0.0018", "0.00049",
                   "0.00014", "0.000043", "0.000014", "0.000004", "0.000001",
                   "0.0000007", "0.3046", "0.3565"),
    ("E", "0.5"): ("0.75", "0.2130", "0.0291", "0.0059", "0.0014", "0.00038",
                   "0.00011", "0.000032", "0.000010", "0.000003", "0.000001",
                   "0.0000005", "0.2974", "0.3324"),
    ("U", "1"): ("0.0", "0.5", "0.2358", "0.1200", "0.0638", "0.0349",
                 "0.0194", "0.0110", "0.0063", "0.0036", "0.0021",
                 "0.0031", "2.0973", "2.6533"),
    ("L", "1"): ("0.5", "0.3333", "0.0976", "0.0376", "0.0163", "0.0076",
                 "0.0037", "0.0019", "0.0010", "0.0005", "0.0003",
                 "0.0003", "0.7986", "1.2799"),
    ("E", "1"): ("0.5", "0.3679", "0.0840", "0.0280", "0.0110", "0.0048",
                 "0.0022", "0.0011", "0.0005", "0.0003", "0.0001",
                 "0.0002", "0.7183", "0.9603"),
}
TABLE1_COLUMNS = [("U", "0.5"), ("L", "0.5"), ("E", "0.5"),
                  ("U", "1"), ("L", "1"), ("E", "1")]
TABLE1_ROWS = [str(k) for k in range(11)] + [">=11", "E", "Var"]


def _decimals(printed: str) -> int:
    return len(printed.split(".")[1]) if "." in printed else 0


def _round_like(value: float, printed: str) -> str:
    return f"{value:.{_decimals(printed)}f}"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.add_argument("--out", metavar="PATH", default=None)


def _policy(value: str) -> Policy:
    return Policy.from_string(value)


# -- limits ------------------------------------------------------------------


def _limit_column(spec: LimitSpec, kmax: int):
    probs = [limits.p_limit(spec, k) for k in range(kmax + 1)]
    tail = max(1.0 - sum(probs), 0.0)
    return probs, tail, limits.mean_limit(spec), limits.var_limit(spec)


def _self_check_closed_forms(spec: LimitSpec) -> None:
    if spec.alpha == 0.0:
        return
    for k in (1, 2):
        a = limits.p_limit(spec, k)
        b = limits.p_closed_small_k(spec, k)
        if abs(a - b) > 1e-10:
            raise QuadratureError(
                f"quadrature p({k})={a!r} disagrees with closed form {b!r} "
                f"at alpha={spec.alpha}, policy={spec.policy.value}"
            )


def cmd_limits(args) -> int:
    spec = LimitSpec(args.alpha, _policy(args.policy))
    _self_check_closed_forms(spec)
    if args.kmax is not None:
        probs, tail, mean, variance = _limit_column(spec, args.kmax)
        k_max = args.kmax
    else:
        dist = limits.build_distribution(spec, args.eps)
        probs, tail, mean, variance = list(dist.probs), dist.tail_mass, dist.mean, dist.variance
        k_max = dist.k_max
    if args.format == "json":
        text = _dump_json({
            "schema_version": SCHEMA_VERSION,
            "alpha": spec.alpha,
            "policy": spec.policy.value,
            "k_max": k_max,
            "probs": probs,
            "tail_mass": tail,
            "mean": mean,
            "variance": variance,
        })
    elif args.format == "csv":
        lines = ["k,p"]
        lines += [f"{k},{p:.10g}" for k, p in enumerate(probs)]
        lines += [f"tail,{tail:.10g}", f"mean,{mean:.10g}", f"variance,{variance:.10g}"]
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"displacement law  alpha={spec.alpha}  policy={spec.policy.value}",
                 f"{'k':>4}  {'p(k)':>14}"]
        lines += [f"{k:>4}  {p:>14.10f}" for k, p in enumerate(probs)]
        lines += [f"tail beyond k={k_max}: {tail:.10g}",
                  f"mean: {mean:.10f}", f"variance: {variance:.10f}"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# -- moments -----------------------------------------------------------------


def cmd_moments(args) -> int:
    alpha = args.alpha
    policies = [_policy(args.policy)] if args.policy else [Policy.UNSUCCESSFUL, Policy.LATE, Policy.EARLY]
    rows = []
    for pol in policies:
        spec = LimitSpec(alpha, pol)
        rows.append((pol.value, limits.mean_limit(spec), limits.var_limit(spec)))
    probe_mean, probe_var = limits.probe_stats_unsuccessful(alpha)
    if args.format == "json":
        text = _dump_json({
            "schema_version": SCHEMA_VERSION,
            "alpha": alpha,
            "moments": [{"policy": p, "mean": m, "variance": v} for p, m, v in rows],
            "unsuccessful_probes": {"mean": probe_mean, "variance": probe_var},
        })
    elif args.format == "csv":
        lines = ["policy,mean,variance"]
        lines += [f"{p},{m:.10g},{v:.10g}" for p, m, v in rows]
        lines += [f"U-probes,{probe_mean:.10g},{probe_var:.10g}"]
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"limit moments at alpha={alpha}",
                 f"{'policy':>8}  {'mean':>14}  {'variance':>14}"]
        lines += [f"{p:>8}  {m:>14.10f}  {v:>14.10f}" for p, m, v in rows]
        lines += [f"{'U-probes':>8}  {probe_mean:>14.10f}  {probe_var:>14.10f}"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# -- table1 ------------------------------------------------------------------


def table1_values() -> dict[tuple[str, str], list[float]]:
    out = {}
    for pol, alpha_key in TABLE1_COLUMNS:
        spec = LimitSpec(float(alpha_key), Policy(pol))
        _self_check_closed_forms(spec)
        probs, tail, mean, variance = _limit_column(spec, 10)
        defect = 1.0 - sum(probs)
        if defect < -1e-9 or defect > limits.tail_bound(spec, 10) + 1e-9:
            raise QuadratureError(
                f"normalization defect {defect:.3e} outside the certified "
                f"tail bound for alpha={alpha_key}, policy={pol}"
            )
        out[(pol, alpha_key)] = probs + [tail, mean, variance]
    return out


def cmd_table1(args) -> int:
    values = table1_values()
    if args.format == "json":
        cols = []
        for key in TABLE1_COLUMNS:
            pol, alpha_key = key
            cols.append({
                "policy": pol,
                "alpha": float(alpha_key),
                "rows": TABLE1_ROWS,
                "values": values[key],
                "rounded": [_round_like(v, s)
                            for v, s in zip(values[key], TABLE1_REFERENCE[key])],
            })
        text = _dump_json({"schema_version": SCHEMA_VERSION, "columns": cols})
    elif args.format == "csv":
        lines = ["alpha,policy,k,p,p_rounded"]
        for key in TABLE1_COLUMNS:
            pol, alpha_key = key
            for row, v, s in zip(TABLE1_ROWS, values[key], TABLE1_REFERENCE[key]):
                lines.append(f"{alpha_key},{pol},{row},{v:.10g},{_round_like(v, s)}")
        text = "\n".join(lines) + "\n"
    else:
        heads = [f"{pol}({a})" for pol, a in TABLE1_COLUMNS]
        lines = ["limiting displacement laws at half and full load (rounded)",
                 f"{'k':>5} " + " ".join(f"{h:>11}" for h in heads)]
        for i, row in enumerate(TABLE1_ROWS):
            cells = [_round_like(values[key][i], TABLE1_REFERENCE[key][i])
                     for key in TABLE1_COLUMNS]
            lines.append(f"{row:>5} " + " ".join(f"{c:>11}" for c in cells))
        lines.append("")
        lines.append("unrounded (10 significant digits)")
        lines.append(f"{'k':>5} " + " ".join(f"{h:>16}" for h in heads))
        for i, row in enumerate(TABLE1_ROWS):
            cells = [f"{values[key][i]:.10g}" for key in TABLE1_COLUMNS]
            lines.append(f"{row:>5} " + " ".join(f"{c:>16}" for c in cells))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# -- simulate ----------------------------------------------------------------


def cmd_simulate(args) -> int:
    config = mc.ExperimentConfig(
        m=args.m, n=args.n, policy=_policy(args.policy),
        replicates=args.reps, seed=args.seed, k_max=args.kmax,
    )
    report = mc.run_experiment(config)
    if args.format == "json":
        text = _dump_json(report.to_dict())
    elif args.format == "csv":
        alpha = config.alpha
        lim_p = limits.build_distribution(LimitSpec(alpha, config.policy), eps=1e-10)
        lim_u = limits.build_distribution(LimitSpec(alpha, Policy.UNSUCCESSFUL), eps=1e-10)
        lines = ["k,emp_policy,limit_policy,emp_u,limit_u"]
        for k in range(config.k_max + 1):
            lines.append(
                f"{k},{report.pooled_policy.probs[k]:.10g},{lim_p.prob(k):.10g},"
                f"{report.pooled_u.probs[k]:.10g},{lim_u.prob(k):.10g}"
            )
        text = "\n".join(lines) + "\n"
    else:
        alpha = config.alpha
        lim_p = limits.build_distribution(LimitSpec(alpha, config.policy), eps=1e-10)
        lim_u = limits.build_distribution(LimitSpec(alpha, Policy.UNSUCCESSFUL), eps=1e-10)
        pol = config.policy.value
        lines = [
            f"simulation m={config.m} n={config.n} policy={pol} "
            f"replicates={config.replicates} seed={config.seed}",
            f"{'k':>4} {'emp ' + pol:>12} {'limit ' + pol:>12} {'emp U':>12} {'limit U':>12}",
        ]
        show = min(config.k_max, 12)
        for k in range(show + 1):
            lines.append(
                f"{k:>4} {report.pooled_policy.probs[k]:>12.6f} {lim_p.prob(k):>12.6f}"
                f" {report.pooled_u.probs[k]:>12.6f} {lim_u.prob(k):>12.6f}"
            )
        dp, du = report.distance_policy, report.distance_u
        lines += [
            f"pooled mean {pol}: {report.pooled_policy.mean:.6f}  (limit {lim_p.mean:.6f})",
            f"pooled var  {pol}: {report.pooled_policy.variance:.6f}  (limit {lim_p.variance:.6f})",
            f"pooled mean U: {report.pooled_u.mean:.6f}  (limit {lim_u.mean:.6f})",
            f"pooled var  U: {report.pooled_u.variance:.6f}  (limit {lim_u.variance:.6f})",
            f"TV distance {pol}: {dp.tv_distance:.6f}   U: {du.tv_distance:.6f}",
            f"chi-square {pol}: {dp.chi_square:.3f} (dof {dp.chi_square_dof},"
            f" p={dp.chi_square_pvalue:.3g})",
            f"chi-square U: {du.chi_square:.3f} (dof {du.chi_square_dof},"
            f" p={du.chi_square_pvalue:.3g})",
            f"spread {pol}: mean-std {report.spread_policy.mean_std:.3g},"
            f" var-std {report.spread_policy.variance_std:.3g},"
            f" max p-std {report.spread_policy.max_prob_std:.3g}",
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# -- oracle ------------------------------------------------------------------


def cmd_oracle(args) -> int:
    policy = _policy(args.policy)
    exact = oracle.enumerate_exact(args.m, args.n, policy)
    check = oracle.oracle_vs_table(args.m, args.n, policy)
    if args.format == "json":
        text = _dump_json({
            "schema_version": SCHEMA_VERSION,
            "m": args.m, "n": args.n, "policy": policy.value,
            "probs": [str(p) for p in exact.probs],
            "probs_float": list(exact.probs_float()),
            "u_probs": [str(p) for p in exact.u_probs],
            "u_probs_float": list(exact.u_probs_float()),
            "mean": str(exact.mean), "variance": str(exact.variance),
            "u_mean": str(exact.u_mean), "u_variance": str(exact.u_variance),
            "discrepancy": check.max_discrepancy,
            "sequences": check.sequences,
        })
    elif args.format == "csv":
        lines = ["kind,k,p_exact,p_float"]
        for k, p in enumerate(exact.probs):
            lines.append(f"{policy.value},{k},{p},{float(p):.10g}")
        for k, p in enumerate(exact.u_probs):
            lines.append(f"U,{k},{p},{float(p):.10g}")
        lines.append(f"discrepancy,,{check.max_discrepancy},")
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"exhaustive enumeration m={args.m} n={args.n} "
                 f"policy={policy.value} ({check.sequences} sequences)",
                 f"{'k':>4} {'exact':>12} {'float':>14}"]
        for k, p in enumerate(exact.probs):
            lines.append(f"{k:>4} {str(p):>12} {float(p):>14.10f}")
        lines.append("unsuccessful-search law:")
        for k, p in enumerate(exact.u_probs):
            lines.append(f"{k:>4} {str(p):>12} {float(p):>14.10f}")
        lines += [f"mean {exact.mean} = {float(exact.mean):.10f}",
                  f"variance {exact.variance} = {float(exact.variance):.10f}",
                  f"table-vs-naive max discrepancy: {check.max_discrepancy}"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if check.max_discrepancy == 0 else 2


# -- yule-check --------------------------------------------------------------


def cmd_yule(args) -> int:
    rng = mc.replicate_stream(args.seed, 0)
    result = mc.yule_check(args.t, args.samples, rng)
    p1 = math.exp(-args.t)
    sigma_p1 = math.sqrt(p1 * (1.0 - p1) / args.samples)
    z_p1 = (result.prob(1) - p1) / sigma_p1 if sigma_p1 > 0 else 0.0
    ref_mean = math.exp(args.t)
    ref_sd = math.sqrt((1.0 - p1) / (p1 * p1))
    z_mean = (result.mean - ref_mean) / (ref_sd / math.sqrt(args.samples))
    ok = abs(z_p1) <= 4.0 and abs(z_mean) <= 4.0
    if args.format == "json":
        text = _dump_json({
            "schema_version": SCHEMA_VERSION,
            "t": args.t, "samples": args.samples, "seed": args.seed,
            "counts": [list(c) for c in result.counts],
            "mean": result.mean, "reference_mean": ref_mean,
            "z_p1": z_p1, "z_mean": z_mean, "passed": ok,
        })
    elif args.format == "csv":
        lines = ["k,empirical,geometric"]
        for size, count in result.counts:
            geo = p1 * (1.0 - p1) ** (size - 1)
            lines.append(f"{size},{count / args.samples:.10g},{geo:.10g}")
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"pure-birth check t={args.t} samples={args.samples} seed={args.seed}",
                 f"{'k':>4} {'empirical':>12} {'geometric':>12}"]
        for size, count in result.counts[:15]:
            geo = p1 * (1.0 - p1) ** (size - 1)
            lines.append(f"{size:>4} {count / args.samples:>12.6f} {geo:>12.6f}")
        lines += [f"mean {result.mean:.6f} vs e^t = {ref_mean:.6f} (z = {z_mean:+.2f})",
                  f"P(1) {result.prob(1):.6f} vs e^-t = {p1:.6f} (z = {z_p1:+.2f})",
                  "PASS" if ok else "FAIL (beyond 4 sigma)"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if ok else 2


# -- parser ------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="coalhash", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("limits", help="limiting displacement law for one alpha/policy")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--policy", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--kmax", type=int, default=None)
    g.add_argument("--eps", type=float, default=1e-8)
    _add_output_flags(p)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("moments", help="limit means and variances at one alpha")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--policy", default=None)
    _add_output_flags(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("table1", help="reference table of the laws at alpha 0.5 and 1")
    _add_output_flags(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("simulate", help="Monte Carlo run against the limit laws")
    p.add_argument("-m", type=int, required=True, help="cells")
    p.add_argument("-n", type=int, required=True, help="items")
    p.add_argument("--policy", required=True)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=25)
    _add_output_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="exhaustive enumeration and dual-implementation check")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--policy", required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("yule-check", help="pure-birth simulation vs the geometric law")
    p.add_argument("--t", type=float, default=math.log(2.0))
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_yule)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"numeric self-check failed: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
