"""Bias, asymptotic variance and predicted metric errors for a queue.

Run with ``python3 demos/metrics_report.py``.
"""
from bdpoisson import (
    TruncationPolicy,
    build_tables,
    check_assumption,
    compute_metrics,
    mm1m,
    passage_tables,
    solve_mixed,
    verify_convexity,
)
from bdpoisson.chain import input_error


def main():
    tables = build_tables(mm1m(0.9, 1.0, 0.5), TruncationPolicy(min_states=42))
    passage = passage_tables(tables)
    sol = solve_mixed(tables, passage, N=42)
    e_in = input_error(tables, tables.zeta)
    rep = compute_metrics(tables, sol, passage=passage, e_abs_input=e_in)
    print(f"zeta            = {tables.zeta!r}")
    print(f"beta_0          = {rep.beta0!r}")
    print(f"sigma^2         = {rep.sigma2!r}")
    print(f"predicted error = {float(rep.predicted_beta0_error):.3e} (beta_0), {float(rep.predicted_sigma2_error):.3e} (sigma^2)")
    print(f"assumptions hold: {check_assumption(tables.model).all_pass}")
    print(f"phi nondecreasing: {verify_convexity(sol.phi[:30]).is_nondecreasing}")


if __name__ == "__main__":
    main()
