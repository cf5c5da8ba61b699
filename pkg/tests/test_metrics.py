"""Bias, asymptotic variance and the predicted errors of their truncated versions."""
import dataclasses

import mpmath
import numpy as np
import pytest
from helpers import MP

from bdpoisson import (
    InconclusiveConvergence,
    RequiresFiniteTp0,
    asymptotic_variance,
    bias,
    boundary_functionals,
    build_tables,
    compute_metrics,
    from_callables,
    solve_exact,
    solve_forward,
    solve_mixed,
    truncated_metric_errors,
)
from bdpoisson.repro import example_metrics


def test_zero_phi(inst_tables):
    zeros = [0.0] * 20
    b = bias(zeros, inst_tables)
    assert b.beta0 == 0 and all(x == 0 for x in b.beta)
    assert asymptotic_variance(zeros, inst_tables).sigma2 == 0


def test_bias_length_check(inst_tables):
    with pytest.raises(ValueError):
        bias([0.0] * (inst_tables.n_star + 2), inst_tables)


def test_mm1_variance(queue_tables, queue_mp):
    with mpmath.workdps(50):
        series = mpmath.nsum(lambda k: k**2 * mpmath.mpf(2) ** (1 - k), [1, mpmath.inf])
    assert abs(series - 12) < mpmath.mpf("1e-40")
    assert asymptotic_variance(solve_exact(queue_tables).phi, queue_tables).sigma2 == pytest.approx(12, rel=1e-13)
    with MP.context():
        v = asymptotic_variance(solve_exact(queue_mp).phi, queue_mp)
    assert abs(v.sigma2 - 12) < mpmath.mpf("1e-15")


def test_mm1_bias(queue_tables):
    # beta_0 = -sum_j rho**(j+1) (j+1) = -rho / (1 - rho)**2 = -2
    b = bias(solve_exact(queue_tables).phi, queue_tables)
    assert b.beta0 == pytest.approx(-2.0, rel=1e-13)


def test_reference_instance():
    m = example_metrics()
    assert f"{m['beta1']:.3f}" == "0.025"
    assert f"{m['T_p0'] - m['T_10']:.3f}" == "-0.356"


def test_partial_sums_and_normalization(inst_tables, inst_passage):
    sol = solve_mixed(inst_tables, inst_passage, N=42)
    v = asymptotic_variance(sol.phi, inst_tables)
    assert v.sigma2 >= 0 and np.all(np.diff(v.partial_sums) >= 0) and v.converged
    b = bias(sol.phi, inst_tables)
    weights = [abs(x) * p for x, p in zip(b.beta, inst_tables.p)]
    total = sum(x * p for x, p in zip(b.beta, inst_tables.p))
    assert abs(total) <= 1e-10 * sum(weights)
    assert 0 < b.remainder_bound < 1e-30 and not b.costs_signed


def test_variance_not_converged(inst_tables):
    fwd = solve_forward(inst_tables, nmax=30).phi
    assert not asymptotic_variance(fwd, inst_tables).converged
    with pytest.raises(InconclusiveConvergence):
        asymptotic_variance(fwd, inst_tables, strict=True)


def test_signed_costs_flagged():
    t = build_tables(from_callables(lambda n: 1.0, lambda n: 2.0, lambda n: -float(n)))
    assert bias(solve_exact(t).phi, t).costs_signed


def test_forward_decompositions(inst_mp, inst_mp_passage):
    t, s = inst_mp, inst_mp_passage
    bf = boundary_functionals(t, s)
    with MP.context():
        E = mpmath.mpf("1e-16")
        exact = solve_exact(t, s, zeta=t.zeta)
        pred = truncated_metric_errors(t, s, bf, E, 1, exact=exact)
        for N in (10, 20, 30, 40):
            hat = solve_forward(t, t.zeta + E, nmax=N).phi
            ref = exact.phi[: N + 1]
            d_beta = bias(hat, t).beta0 - bias(ref, t).beta0
            d_sig = asymptotic_variance(hat, t).sigma2 - asymptotic_variance(ref, t).sigma2
            assert abs(d_beta - pred.forward_beta0_error[N]) <= mpmath.mpf("1e-12") * abs(d_beta)
            assert abs(d_sig - pred.forward_sigma2_error[N]) <= mpmath.mpf("1e-12") * abs(d_sig)
    assert pred.forward_beta0_diverges and pred.forward_sigma2_diverges


def test_mixed_limits(inst_mp, inst_mp_passage):
    t, s = inst_mp, inst_mp_passage
    bf = boundary_functionals(t, s)
    with MP.context():
        E = mpmath.mpf("1e-16")
        exact = solve_exact(t, s, zeta=t.zeta)
        pred = truncated_metric_errors(t, s, bf, E, 1, exact=exact)
        mix = solve_mixed(t, s, z=t.zeta + E, N=42)
        ref = exact.phi[:43]
        d_beta = bias(mix.phi, t).beta0 - bias(ref, t).beta0
        d_sig = asymptotic_variance(mix.phi, t).sigma2 - asymptotic_variance(ref, t).sigma2
    # limit statements; order of magnitude is what is claimed
    assert 0.1 < d_beta / pred.mixed_beta0_limit < 10
    assert 0.1 < d_sig / pred.mixed_sigma2_limit < 10
    assert abs(float(pred.mixed_beta0_limit) / float(E) - (-0.356)) < 1e-3


def test_zero_input_error_predictions(inst_tables, inst_passage):
    bf = boundary_functionals(inst_tables, inst_passage)
    pred = truncated_metric_errors(inst_tables, inst_passage, bf, 0.0, 1)
    assert not any(pred.forward_beta0_error) and not any(pred.forward_sigma2_error)
    assert pred.mixed_beta0_limit == 0 and pred.mixed_sigma2_limit == 0


def test_requires_finite_tp0(inst_tables, inst_passage):
    bf = dataclasses.replace(boundary_functionals(inst_tables, inst_passage), T_p0_finite=False)
    with pytest.raises(RequiresFiniteTp0):
        truncated_metric_errors(inst_tables, inst_passage, bf, 1e-17, 1)
    pred = truncated_metric_errors(inst_tables, inst_passage, bf, 1e-17, 1, mixed=False)
    assert pred.mixed_beta0_limit is None


def test_mixed_metrics_stabilize(inst_tables, inst_passage):
    vals = []
    for N in range(34, 43):
        sol = solve_mixed(inst_tables, inst_passage, N=N)
        vals.append((bias(sol.phi, inst_tables).beta0, asymptotic_variance(sol.phi, inst_tables).sigma2))
    for (b1, s1), (b2, s2) in zip(vals, vals[1:]):
        assert abs(b2 - b1) < 1e-14 * abs(b1) and abs(s2 - s1) < 1e-14 * s1


def test_compute_metrics(inst_tables, inst_passage):
    mixed = solve_mixed(inst_tables, inst_passage, N=42)
    rep = compute_metrics(inst_tables, mixed, passage=inst_passage, e_abs_input=3.2e-18)
    assert rep.scheme == "mixed" and rep.N_used == 42 and rep.sigma2_converged
    assert abs(rep.predicted_beta0_error) == pytest.approx(0.356 * 3.2e-18, rel=1e-2)
    fwd = solve_forward(inst_tables, nmax=20)
    rep = compute_metrics(inst_tables, fwd, passage=inst_passage, e_abs_input=1e-17)
    assert rep.predicted_beta0_error < 0 and rep.predicted_sigma2_error != 0
    plain = compute_metrics(inst_tables, solve_exact(inst_tables))
    assert plain.predicted_beta0_error is None
