"""Command-line front end.

    bdpoisson steady    --model cfg.json
    bdpoisson passage   --model "mm1m(0.9,1,0.5)"
    bdpoisson solve     --model ... --scheme mixed --N 42
    bdpoisson errors    --model ... --scheme forward --zeta-mode perturbed:+1
    bdpoisson metrics   --model ... --scheme mixed
    bdpoisson structure --model ...
    bdpoisson repro table1 | table2 | example-metrics

Tables go to ``--out`` (or stdout) as CSV/TSV with a header row.  Numbers are
written as shortest round-trip decimals.  Exit status is 2 for configuration
errors and 3 for numerical failures; messages go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import replace

from .chain import build_tables, input_error, load_model, parse_zeta_mode
from .error_analysis import backward_error_factors, forward_error_factors, mixed_error_factors
from .errors import BDPoissonError, ConfigError
from .metrics import compute_metrics
from .passage import passage_tables
from .repro import METRICS_HEADER, TABLE1_HEADER, TABLE2_HEADER, example_metrics, table1, table2
from .solve import SCHEMES, solve, solve_exact
from .structure import appendix_diagnostics, check_assumption, verify_convexity


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return str(x).lower() if isinstance(x, bool) else x
    if isinstance(x, int):
        return str(x)
    v = float(x)
    return "nan" if math.isnan(v) else repr(v)


def _write(rows, header, fmt_name: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t" if fmt_name == "tsv" else ",", lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def _phi_seed(text: str) -> float:
    if text == "zero":
        return 0.0
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"--phi-seed must be a number or 'zero', got {text!r}") from exc


def _context(args, need_model=True):
    if args.model is None:
        if need_model:
            raise ConfigError("--model is required")
        return None, None, None
    model, policy = load_model(args.model)
    floor = max(args.nmax or 0, args.N or 0)
    if floor > policy.min_states:
        policy = replace(policy, min_states=floor)
    tables = build_tables(model, policy)
    zmode = args.zeta_mode or ("analytic" if model.has_analytic_zeta else "summed")
    parse_zeta_mode(zmode)
    return model, tables, zmode


def _solution(args, tables, zmode, passage=None):
    scheme = args.scheme or "exact"
    if scheme == "exact":
        return solve_exact(tables, passage, args.b0, zeta=zmode, nmax=args.nmax)
    return solve(
        tables, scheme, z=zmode, N=args.N, phi_NN=_phi_seed(args.phi_seed), b0=args.b0, nmax=args.nmax, passage=passage
    )


def cmd_steady(args):
    _, t, _ = _context(args)
    top = t.n_star if args.nmax is None else args.nmax
    header = ("n", "lambda", "mu", "c", "p", "P", "P_bar", "C", "C_bar", "Z")
    rows = [(n, t.lam[n], t.mu[n], t.c[n], t.p[n], t.P[n], t.P_bar[n], t.C[n], t.C_bar[n], t.Z[n]) for n in range(top + 1)]
    return _write(rows, header, args.format)


def cmd_passage(args):
    _, t, _ = _context(args)
    ps = passage_tables(t)
    top = t.n_star if args.nmax is None else args.nmax
    header = ("n", "T_up", "H_up", "T_down", "H_down", "T_0n", "T_n0", "Z_0n", "Z_n0")
    rows = [
        (n, ps.T_up[n], ps.H_up[n], ps.T_down[n], ps.H_down[n], ps.T_0n[n], ps.T_n0[n], ps.Z_0n[n], ps.Z_n0[n])
        for n in range(top + 1)
    ]
    return _write(rows, header, args.format)


def cmd_solve(args):
    _, t, zmode = _context(args)
    sol = _solution(args, t, zmode)
    rows = [(n, sol.phi[n], sol.b[n], sol.scheme, sol.z_mode) for n in range(len(sol.phi))]
    rows.append((len(sol.phi), None, sol.b[-1], sol.scheme, sol.z_mode))
    return _write(rows, ("n", "phi", "b", "scheme", "z_mode"), args.format)


def cmd_errors(args):
    model, t, zmode = _context(args)
    ps = passage_tables(t)
    scheme = args.scheme or "forward"
    if scheme == "exact":
        raise ConfigError("errors needs an approximate scheme (forward, backward or mixed)")
    exact = solve_exact(t, ps, args.b0, nmax=args.nmax)
    observed = _solution(args, t, zmode, ps)
    e = input_error(t, observed.z_input)
    if scheme == "forward":
        rep = forward_error_factors(ps, t, e, b0=args.b0, observed=observed, exact=exact)
    elif scheme == "backward":
        rep = backward_error_factors(ps, e, b0=args.b0, observed=observed, exact=exact)
    else:
        rep = mixed_error_factors(ps, t, e, b0=args.b0, observed=observed, exact=exact)
    header = (
        "n", "scheme", "abs_factor", "rel_factor", "b_abs_factor", "b_rel_factor",
        "predicted_abs_error", "observed_abs_error",
    )
    rows = [
        (r.n, scheme, r.abs_factor, r.rel_factor, r.b_abs_factor, r.b_rel_factor, r.predicted_abs_error, r.observed_abs_error)
        for r in rep.rows
        if r.observed_abs_error is not None
    ]
    return _write(rows, header, args.format)


def cmd_metrics(args):
    _, t, zmode = _context(args)
    ps = passage_tables(t)
    sol = _solution(args, t, zmode, ps)
    rep = compute_metrics(t, sol, passage=ps, e_abs_input=input_error(t, sol.z_input))
    rows = [
        ("zeta", rep.zeta),
        ("beta0", rep.beta0),
        ("sigma2", rep.sigma2),
        ("N", rep.N_used),
        ("scheme", rep.scheme),
        ("predicted_beta0_error", rep.predicted_beta0_error),
        ("predicted_sigma2_error", rep.predicted_sigma2_error),
        ("beta0_remainder_bound", rep.beta0_remainder_bound),
        ("sigma2_converged", rep.sigma2_converged),
        ("costs_signed", rep.costs_signed),
    ]
    return _write(rows, ("quantity", "value"), args.format)


def _verdict_text(v) -> str:
    return v.status if v.first_index is None else f"{v.status} at n={v.first_index}"


def cmd_structure(args):
    model, t, zmode = _context(args)
    ps = passage_tables(t)
    horizon = max(3, t.n_star if args.nmax is None else args.nmax)
    rep = check_assumption(model, horizon)
    sol = solve_exact(t, ps, args.b0, zeta=zmode)
    conv = verify_convexity(sol)
    app = appendix_diagnostics(t, ps)
    lines = [
        f"horizon: {rep.horizon}",
        f"assumption i.a: {_verdict_text(rep.i_a)}",
        f"assumption i.b: {_verdict_text(rep.i_b)}",
        f"assumption ii.a: {_verdict_text(rep.ii_a)}",
        f"assumption ii.b: {_verdict_text(rep.ii_b)}",
        "phi nondecreasing: " + ("yes" if conv.is_nondecreasing else f"no, first drop at n={conv.first_violation}"),
    ]
    if app.applicable:
        for key in ("z_monotone", "dT_positive", "r_monotone", "r_le_zeta", "r_to_zeta", "z_le_r"):
            lines.append(f"{key}: {'pass' if getattr(app, key) else 'fail'}")
    else:
        lines.append("appendix diagnostics: not applicable")
    block = "\n".join(lines) + "\n"
    top = min(horizon, t.n_star)
    c = t.c
    rows = []
    for n in range(top + 1):
        d = rep.d[n] if n < len(rep.d) else None
        dd = rep.d[n] - rep.d[n - 1] if 1 <= n < len(rep.d) else None
        dc = c[n] - c[n - 1] if n >= 1 else None
        dphi = sol.phi[n] - sol.phi[n - 1] if n >= 1 else None
        r = app.r[n - 1] if app.applicable and 1 <= n <= len(app.r) else None
        rows.append((n, d, dd, dc, sol.phi[n], dphi, r))
    table = _write(rows, ("n", "d", "delta_d", "delta_c", "phi", "delta_phi", "r"), args.format)
    return block, table


def cmd_repro(args):
    model = None
    policy = None
    if args.model is not None:
        model, policy = load_model(args.model)
    if args.which == "table1":
        return _write(table1(model, 29 if args.nmax is None else args.nmax, policy), TABLE1_HEADER, args.format)
    N = 42 if args.N is None else args.N
    if args.which == "table2":
        return _write(table2(model, N, _phi_seed(args.phi_seed), policy=policy), TABLE2_HEADER, args.format)
    m = example_metrics(model, N, policy)
    return _write([tuple(m[k] for k in METRICS_HEADER)], METRICS_HEADER, args.format)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="JSON config path or inline preset such as mm1m(0.9,1,0.5)")
    common.add_argument("--nmax", type=int, help="last state to report")
    common.add_argument("--N", type=int, help="backward frontier (default: smallest N with lambda_N p_N T_N0 < 1e-20)")
    common.add_argument("--phi-seed", default="zero", help="backward seed phi_N (number or 'zero')")
    common.add_argument("--scheme", choices=SCHEMES)
    common.add_argument("--zeta-mode", help="analytic | summed | perturbed:+k")
    common.add_argument("--b0", type=float, default=0.0, help="additive constant b_0")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "tsv"), default="csv")

    p = argparse.ArgumentParser(prog="bdpoisson", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("steady", "steady-state tables"),
        ("passage", "first-passage tables"),
        ("solve", "solve Poisson's equation"),
        ("errors", "error amplification factors"),
        ("metrics", "bias and asymptotic variance"),
        ("structure", "assumption and monotonicity checks"),
    ):
        sub.add_parser(name, parents=[common], help=helptext)
    rp = sub.add_parser("repro", parents=[common], help="worked M/M/1+M example")
    rp.add_argument("which", choices=("table1", "table2", "example-metrics"))
    return p


COMMANDS = {
    "steady": cmd_steady,
    "passage": cmd_passage,
    "solve": cmd_solve,
    "errors": cmd_errors,
    "metrics": cmd_metrics,
    "structure": cmd_structure,
    "repro": cmd_repro,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"bdpoisson: config error: {exc}", file=sys.stderr)
        return 2
    except (BDPoissonError, ArithmeticError) as exc:
        print(f"bdpoisson: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if isinstance(result, tuple):
        block, table = result
        if args.out:
            sys.stdout.write(block)
            payload = table
        else:
            payload = block + "\n" + table
            args.out = None
    else:
        payload = result
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
