"""Closed forms for M/M/1+M and the regularized incomplete gamma."""
import math

import mpmath
import pytest
from helpers import MP, TABLE1, TABLE2, rel, same_printed
from hypothesis import given, settings
from hypothesis import strategies as st

from bdpoisson import DomainError, TruncationPolicy, build_tables, mm1m
from bdpoisson.mm1m import (
    Mm1mParams,
    analytic_cumulative,
    analytic_phi,
    analytic_steady,
    analytic_tail,
    analytic_zeta,
    reg_gamma,
)

PARAMS = Mm1mParams(0.9, 1.0, 0.5)


def test_reg_gamma_special_values():
    p, q = reg_gamma(1.0, 1.0)
    assert p == pytest.approx(0.632120558828558, rel=1e-15)
    assert reg_gamma(2.0, 0.0) == (0.0, 1.0)
    assert reg_gamma(0.5, 0.25)[0] == pytest.approx(0.520499877813047, rel=1e-15)


@pytest.mark.parametrize("a, x", [(-1.0, 1.0), (0.0, 1.0), (1.0, -0.5), (float("nan"), 1.0)])
def test_reg_gamma_domain(a, x):
    with pytest.raises(DomainError):
        reg_gamma(a, x)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 1000.0), st.floats(0.0, 1000.0))
def test_reg_gamma_against_mpmath(a, x):
    p, q = reg_gamma(a, x)
    assert abs(p + q - 1.0) <= 2 * 2.0**-52
    with mpmath.workdps(40):
        P = mpmath.gammainc(a, 0, x, regularized=True)
        Q = mpmath.gammainc(a, x, mpmath.inf, regularized=True)
    # the smaller of P, Q is computed directly and carries the relative accuracy;
    # exp() of a large exponent limits it to about |log result| ulps
    small, got = (P, p) if P <= Q else (Q, q)
    if small < 1e-300:
        return
    bound = 64 * 2.0**-53 * (1 + abs(float(mpmath.log(small))))
    assert abs(got - small) <= bound * small


def test_params_validation():
    with pytest.raises(DomainError):
        Mm1mParams(0.9, 0.0, 0.5)
    assert PARAMS.alpha == 2.0 and PARAMS.kappa == pytest.approx(1.8)


def test_zeta_closed_form():
    assert f"{analytic_zeta(PARAMS):.15f}" == "0.398515613690624"
    with MP.context():
        closed = (81 / (5 * mpmath.e ** mpmath.mpf("1.8") - 14) - 1) / 10
        assert rel(analytic_zeta(PARAMS, MP), closed) < mpmath.mpf("1e-45")


def test_zeta_nonnegative_for_small_theta():
    assert analytic_zeta(Mm1mParams(0.5, 1.0, 1e-3)) >= 0


def test_steady_against_tables():
    t = build_tables(mm1m(0.9, 1.0, 0.5), TruncationPolicy(min_states=42))
    for n in range(43):
        assert analytic_steady(PARAMS, n) == pytest.approx(t.p[n], rel=1e-13)
        assert analytic_cumulative(PARAMS, n) == pytest.approx(t.P[n], rel=1e-13)
        assert analytic_tail(PARAMS, n) == pytest.approx(t.P_bar[n], rel=1e-12)
    for n in (0, 5, 29):
        assert same_printed(analytic_steady(PARAMS, n), TABLE1[n][0])


def test_phi_values():
    assert analytic_phi(PARAMS, 0) == pytest.approx(analytic_zeta(PARAMS) / 0.9, rel=1e-15)
    assert f"{analytic_phi(PARAMS, 12):.15f}" == TABLE2[12][0]
    assert f"{analytic_phi(PARAMS, 29):.15f}" == TABLE2[29][0]
    phis = [analytic_phi(PARAMS, n) for n in range(60)]
    assert all(b > a for a, b in zip(phis, phis[1:])) and phis[-1] < 1


def test_phi_recurrence_residual():
    with MP.context():
        z = analytic_zeta(PARAMS, MP)
        lam, mu, theta = mpmath.mpf("0.9"), mpmath.mpf(1), mpmath.mpf("0.5")
        prev = analytic_phi(PARAMS, 0, MP)
        for n in range(1, 43):
            cur = analytic_phi(PARAMS, n, MP)
            lhs = lam * cur - (mu + n * theta) * prev
            assert abs(lhs - (z - n * theta)) <= mpmath.mpf("1e-40") * (lam * abs(cur) + abs(z - n * theta))
            prev = cur


def test_large_index_no_overflow():
    # kappa**(n+1) and Gamma(alpha+n+1) overflow long before this
    assert 0 < analytic_steady(PARAMS, 400) < 1e-300 or analytic_steady(PARAMS, 400) == 0.0
    assert 0.99 < analytic_phi(PARAMS, 400) < 1
    assert math.isfinite(analytic_phi(PARAMS, 5000))
