"""The worked M/M/1+M example: forward instability, mixed-scheme accuracy, metrics.

Each function returns plain rows so the CLI and the tests share one code path.
"""
from __future__ import annotations

from dataclasses import replace

from .chain import DEFAULT_POLICY, BirthDeathModel, TruncationPolicy, build_tables, mm1m
from .error_analysis import mixed_factors
from .metrics import asymptotic_variance, bias
from .passage import boundary_functionals, passage_tables
from .solve import solve_exact, solve_forward, solve_mixed

EXAMPLE = (0.9, 1.0, 0.5)
TABLE1_HEADER = ("n", "p", "phi_hat", "phi_tilde")
TABLE2_HEADER = ("n", "phi_tilde", "abs_zeta_A_over_phi", "T_down", "T_up")
METRICS_HEADER = ("beta0", "sigma2", "T_p0", "T_10", "beta1")


def example_model() -> BirthDeathModel:
    return mm1m(*EXAMPLE)


def _tables(model, policy, min_states):
    policy = policy or DEFAULT_POLICY
    if policy.min_states < min_states:
        policy = replace(policy, min_states=min_states)
    return build_tables(model, policy)


def table1(model: BirthDeathModel | None = None, nmax: int = 29, policy: TruncationPolicy | None = None) -> list:
    """Rows ``(n, p_n, phi_hat_n, phi_tilde_n)``: forward recurrence with ``fl(zeta)`` and with one step more."""
    t = _tables(model or example_model(), policy, nmax)
    lo = solve_forward(t, "perturbed:+0", nmax)
    hi = solve_forward(t, "perturbed:+1", nmax)
    return [(n, float(t.p[n]), float(lo.phi[n]), float(hi.phi[n])) for n in range(nmax + 1)]


def table2(
    model: BirthDeathModel | None = None,
    N: int = 42,
    phi_NN=0.0,
    rows: range = range(12, 30),
    policy: TruncationPolicy | None = None,
) -> list:
    """Rows ``(n, phi_tilde_n, |zeta A_n / phi_n|, T_{n+1}^-, T_n^+)`` from the mixed scheme.

    ``A_n`` is negative past the crossover; the table shows its magnitude.
    """
    t = _tables(model or example_model(), policy, N)
    ps = passage_tables(t)
    mx = solve_mixed(t, ps, "perturbed:+0", N, phi_NN)
    ex = solve_exact(t, ps)
    A, _, _, _ = mixed_factors(ps)
    zeta = ex.z_input
    return [
        (n, float(mx.phi[n]), float(abs(zeta * A[n] / ex.phi[n])), float(ps.T_down[n]), float(ps.T_up[n]))
        for n in rows
    ]


def example_metrics(model: BirthDeathModel | None = None, N: int = 42, policy: TruncationPolicy | None = None) -> dict:
    """Bias and variance from the mixed scheme plus ``T_p0``, ``T_10`` and ``beta_1``."""
    t = _tables(model or example_model(), policy, N)
    ps = passage_tables(t)
    mx = solve_mixed(t, ps, "perturbed:+0", N, 0.0)
    b = bias(mx.phi, t)
    v = asymptotic_variance(mx.phi, t)
    bf = boundary_functionals(t, ps, strict=False)
    return {
        "beta0": float(b.beta0),
        "sigma2": float(v.sigma2),
        "T_p0": float(bf.T_p0),
        "T_10": float(ps.T_n0[1]),
        "beta1": float(b.beta[1]),
    }
