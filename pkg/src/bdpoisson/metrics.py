"""Bias and asymptotic variance from the marginal relative costs.

With ``phi`` in hand::

    beta_0  = -sum_j P_bar_j phi_j
    beta_n  = beta_0 + sum_{j<n} phi_j
    sigma^2 = 2 sum_n lambda_n p_n phi_n^2

The first identity needs nonnegative nondecreasing costs to justify swapping
the order of summation; with other costs the value is still computed but the
report is flagged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .chain import ChainTables
from .errors import InconclusiveConvergence, RequiresFiniteTp0
from .passage import BoundaryFunctionals, PassageTables, boundary_functionals, passage_tables
from .solve import PoissonSolution, solve_exact


@dataclass(frozen=True)
class BiasResult:
    beta0: Any
    beta: list
    remainder_bound: Any
    costs_signed: bool


@dataclass(frozen=True)
class VarianceResult:
    sigma2: Any
    partial_sums: list
    converged: bool


def _costs_signed(tables: ChainTables) -> bool:
    c = tables.c
    return any(x < 0 for x in c) or any(b < a for a, b in zip(c, c[1:]))


def bias(phi: Sequence, tables: ChainTables) -> BiasResult:
    """``beta_0`` summed up to ``len(phi) - 1`` and ``beta_n`` for ``n = 0..len(phi)``.

    ``remainder_bound = P_bar_last * max|phi|`` estimates the neglected tail of
    the ``beta_0`` series.
    """
    a = tables.arith
    k = len(phi)
    if k > tables.n_star + 1:
        raise ValueError("phi is longer than the tables")
    with a.context():
        beta0 = -a.fsum(tables.P_bar[j] * phi[j] for j in range(k))
        beta = [beta0] + a.cumsum(phi, start=beta0)
        rem = tables.P_bar[k - 1] * max(abs(x) for x in phi) if k else a.zero()
    return BiasResult(beta0, beta, rem, _costs_signed(tables))


def asymptotic_variance(phi: Sequence, tables: ChainTables, *, strict: bool = False) -> VarianceResult:
    """``2 sum lambda_n p_n phi_n^2`` with its running partial sums.

    ``converged`` is true when the last term is below ``term_rel_tol`` times the
    sum; with ``strict`` a nonconverged series raises :class:`InconclusiveConvergence`.
    """
    a = tables.arith
    with a.context():
        terms = [2 * tables.lam[n] * tables.p[n] * phi[n] * phi[n] for n in range(len(phi))]
        partial = a.cumsum(terms)
        sigma2 = a.fsum(terms)
        converged = bool(not terms or terms[-1] <= tables.policy.term_rel_tol * sigma2)
    if strict and not converged:
        raise InconclusiveConvergence("asymptotic variance series has not settled at the frontier")
    return VarianceResult(sigma2, partial, converged)


@dataclass(frozen=True)
class TruncationPredictions:
    """Predicted errors of truncated metrics caused by an input error ``E``.

    ``forward_*`` are exact for the forward scheme at every ``N``; ``mixed_*`` are
    limit predictions as ``N -> infinity``.
    """

    forward_beta0_error: list
    forward_sigma2_error: list
    forward_beta0_diverges: bool
    forward_sigma2_diverges: bool
    mixed_beta0_limit: Any
    mixed_sigma2_limit: Any


def truncated_metric_errors(
    tables: ChainTables,
    passage: PassageTables,
    boundary: BoundaryFunctionals,
    e_abs_input,
    m: int,
    *,
    exact: PoissonSolution | None = None,
    mixed: bool = True,
) -> TruncationPredictions:
    """Forward-scheme error decompositions per ``N`` and mixed-scheme limits.

    ``beta_hat_0,N - beta_0,N = -E sum_{n<=N} P_bar_n T_n^+`` and
    ``sigma_hat^2_N - sigma^2_N = 4E sum P_n phi_n + 2E^2 sum P_n T_n^+``.
    The mixed limits are ``(T_p0 - T_m0) E`` and
    ``4 beta_m E + 2 (T_p0 + T_0m - T_m0) E^2``; they need a finite ``T_p0`` and
    are skipped (left ``None``) when ``mixed`` is false.
    """
    if mixed and not boundary.T_p0_finite:
        raise RequiresFiniteTp0("mixed-scheme limits need a finite T_p0")
    a = tables.arith
    ex = exact if exact is not None else solve_exact(tables, passage)
    with a.context():
        E = a.num(e_abs_input)
        n = tables.n_star + 1
        s_beta = a.cumsum(tables.P_bar[j] * passage.T_up[j] for j in range(n))
        s_phi = a.cumsum(tables.P[j] * ex.phi[j] for j in range(n))
        s_t = a.cumsum(tables.P[j] * passage.T_up[j] for j in range(n))
        beta_err = [-E * s for s in s_beta]
        sig_err = [4 * E * u + 2 * E * E * v for u, v in zip(s_phi, s_t)]
        mixed_beta = mixed_sigma = None
        if mixed:
            beta_m = bias(ex.phi, tables).beta[m]
            T_p0 = boundary.T_p0
            mixed_beta = (T_p0 - passage.T_n0[m]) * E
            mixed_sigma = 4 * beta_m * E + 2 * (T_p0 + passage.T_0n[m] - passage.T_n0[m]) * E * E
    return TruncationPredictions(
        forward_beta0_error=beta_err,
        forward_sigma2_error=sig_err,
        forward_beta0_diverges=boundary.T_inf0_class == "divergent",
        forward_sigma2_diverges=True,
        mixed_beta0_limit=mixed_beta,
        mixed_sigma2_limit=mixed_sigma,
    )


@dataclass(frozen=True)
class MetricsReport:
    zeta: Any
    beta0: Any
    beta: list
    sigma2: Any
    scheme: str
    N_used: int
    beta0_remainder_bound: Any
    sigma2_converged: bool
    partial_sum_diagnostics: list
    costs_signed: bool
    predicted_beta0_error: Any = None
    predicted_sigma2_error: Any = None


def compute_metrics(
    tables: ChainTables,
    solution: PoissonSolution,
    *,
    passage: PassageTables | None = None,
    e_abs_input=None,
) -> MetricsReport:
    """Bias and variance from a solution, with error predictions when ``e_abs_input`` is given.

    For the forward scheme the predictions are the exact decompositions at the
    solution's length; for the mixed (and backward) scheme they are the limits.
    """
    phi = list(solution.phi)
    b = bias(phi, tables)
    v = asymptotic_variance(phi, tables)
    pb = ps = None
    if e_abs_input is not None and solution.scheme != "exact":
        passage = passage or passage_tables(tables)
        bf = boundary_functionals(tables, passage, strict=False)
        m = solution.crossover_m if solution.crossover_m is not None else 0
        if solution.scheme == "forward":
            pred = truncated_metric_errors(tables, passage, bf, e_abs_input, 0, mixed=False)
            pb = pred.forward_beta0_error[len(phi) - 1]
            ps = pred.forward_sigma2_error[len(phi) - 1]
        elif bf.T_p0_finite:
            pred = truncated_metric_errors(tables, passage, bf, e_abs_input, m)
            pb, ps = pred.mixed_beta0_limit, pred.mixed_sigma2_limit
    return MetricsReport(
        zeta=solution.z_input,
        beta0=b.beta0,
        beta=b.beta,
        sigma2=v.sigma2,
        scheme=solution.scheme,
        N_used=len(phi) - 1,
        beta0_remainder_bound=b.remainder_bound,
        sigma2_converged=v.converged,
        partial_sum_diagnostics=v.partial_sums,
        costs_signed=b.costs_signed,
        predicted_beta0_error=pb,
        predicted_sigma2_error=ps,
    )
