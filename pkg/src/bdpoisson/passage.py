"""Mean first-passage times and accumulated costs between neighbouring states.

Every quantity comes from the closed forms in terms of the steady-state tables::

    T_n^+     = P_n / (lambda_n p_n)        H_n^+     = C_n / (lambda_n p_n)
    T_{n+1}^- = P_bar_n / (lambda_n p_n)    H_{n+1}^- = C_bar_n / (lambda_n p_n)

The forward recurrences ``lambda_n T_n^+ - mu_n T_{n-1}^+ = 1`` are only used as
cross-checks in the tests; the closed forms are accurate uniformly in ``n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .arith import Arithmetic
from .chain import BirthDeathModel, ChainTables
from .errors import InconclusiveConvergence


def _nan(arith: Arithmetic):
    if arith.kind == "exact":
        return None
    return arith.num(math.nan)


@dataclass(frozen=True, eq=False)
class PassageTables:
    """Passage columns over ``n = 0..n_star``.

    ``T_down[n]`` and ``H_down[n]`` hold ``T_{n+1}^-`` and ``H_{n+1}^-``.  The
    cumulative columns ``T_0n``, ``H_0n``, ``T_n0``, ``H_n0`` (and the ratios
    ``Z_0n``, ``Z_n0``) run over ``n = 0..n_star+1`` with zero (undefined ratio)
    at ``n = 0``.
    """

    tables: ChainTables
    T_up: np.ndarray
    H_up: np.ndarray
    T_down: np.ndarray
    H_down: np.ndarray
    T_0n: np.ndarray
    H_0n: np.ndarray
    T_n0: np.ndarray
    H_n0: np.ndarray
    Z_0n: np.ndarray
    Z_n0: np.ndarray
    Z_down: np.ndarray

    @property
    def arith(self) -> Arithmetic:
        return self.tables.arith

    @property
    def n_star(self) -> int:
        return self.tables.n_star


@dataclass(frozen=True)
class UpwardColumns:
    T_up: np.ndarray
    H_up: np.ndarray
    T_0n: np.ndarray
    H_0n: np.ndarray
    Z_0n: np.ndarray


@dataclass(frozen=True)
class DownwardColumns:
    T_down: np.ndarray
    H_down: np.ndarray
    T_n0: np.ndarray
    H_n0: np.ndarray
    Z_n0: np.ndarray
    Z_down: np.ndarray


def _ratios(num, den, arith):
    out = [_nan(arith)]
    out.extend(h / t for h, t in zip(num[1:], den[1:]))
    return out


def upward_passage(tables: ChainTables) -> UpwardColumns:
    """``T_n^+``, ``H_n^+`` and their cumulative sums from state 0."""
    a = tables.arith
    with a.context():
        flux = tables.lam_p
        T = [P / f for P, f in zip(tables.P, flux)]
        H = [C / f for C, f in zip(tables.C, flux)]
        T0 = [a.zero()] + a.cumsum(T)
        H0 = [a.zero()] + a.cumsum(H)
        Z = _ratios(H0, T0, a)
    return UpwardColumns(a.array(T), a.array(H), a.array(T0), a.array(H0), a.array(Z))


def downward_passage(tables: ChainTables) -> DownwardColumns:
    """``T_{n+1}^-``, ``H_{n+1}^-`` and their cumulative sums down to state 0."""
    a = tables.arith
    with a.context():
        flux = tables.lam_p
        T = [Pb / f for Pb, f in zip(tables.P_bar, flux)]
        H = [Cb / f for Cb, f in zip(tables.C_bar, flux)]
        T0 = [a.zero()] + a.cumsum(T)
        H0 = [a.zero()] + a.cumsum(H)
        Z = _ratios(H0, T0, a)
        Zd = [h / t for h, t in zip(H, T)]
    return DownwardColumns(a.array(T), a.array(H), a.array(T0), a.array(H0), a.array(Z), a.array(Zd))


def passage_tables(tables: ChainTables) -> PassageTables:
    up = upward_passage(tables)
    down = downward_passage(tables)
    return PassageTables(
        tables=tables,
        T_up=up.T_up,
        H_up=up.H_up,
        T_down=down.T_down,
        H_down=down.H_down,
        T_0n=up.T_0n,
        H_0n=up.H_0n,
        T_n0=down.T_n0,
        H_n0=down.H_n0,
        Z_0n=up.Z_0n,
        Z_n0=down.Z_n0,
        Z_down=down.Z_down,
    )


# ----------------------------------------------------------------------------
# boundary functionals


def sum_inverse_mu_verdict(model: BirthDeathModel, kmax: int = 60) -> str:
    """Classify ``sum 1/mu_n`` as ``"converges"``, ``"diverges"`` or ``"inconclusive"``.

    Uses Cauchy condensation, ``b_k = 2**k / mu_{2**k}``, followed by a ratio
    test and, near ratio one, Raabe's test on the condensed terms.  Only valid
    when ``mu_n`` is eventually nondecreasing.
    """
    top = kmax if model.max_index is None else min(kmax, int(math.log2(model.max_index)))
    if top < 4:
        return "inconclusive"
    b = [2.0**k / float(model.death(2**k)) for k in range(top + 1)]
    k = top - 1
    r = b[k + 1] / b[k]
    if r < 0.9:
        return "converges"
    raabe = k * (1.0 / r - 1.0)
    if raabe > 1.5:
        return "converges"
    if raabe < 0.5:
        return "diverges"
    return "inconclusive"


@dataclass(frozen=True)
class BoundaryFunctionals:
    """Series over the whole state space, summed to the frontier.

    ``T_inf0`` and ``T_infp`` are partial sums; their ``*_class`` fields tell
    whether the full series is finite.  Verdicts only see states ``<= n_star``
    (and the rate function for the ``sum 1/mu_n`` test).
    """

    T_p0: Any
    T_p0_finite: bool
    T_inf0: Any
    T_inf0_class: str
    T_infp: Any
    T_infp_class: str
    sum_1_over_mu_verdict: str


def boundary_functionals(tables: ChainTables, passage: PassageTables, *, strict: bool = True) -> BoundaryFunctionals:
    """``T_p0 = sum P_bar_n^2 / (lambda_n p_n)``, ``T_inf0`` and ``T_infp = sum P_bar_n T_n^+``.

    With ``strict`` an undecidable ``T_inf0`` raises :class:`InconclusiveConvergence`;
    otherwise it is classified ``"inconclusive"``.
    """
    a = tables.arith
    tol = tables.policy.term_rel_tol
    with a.context():
        tp_terms = [pb * td for pb, td in zip(tables.P_bar, passage.T_down)]
        T_p0 = a.fsum(tp_terms)
        T_p0_finite = bool(tp_terms[-1] <= tol * T_p0)
        T_infp = a.fsum(pb * tu for pb, tu in zip(tables.P_bar, passage.T_up))
        T_inf0 = passage.T_n0[-1]

        verdict = sum_inverse_mu_verdict(tables.model)
        n = tables.n_star + 1
        q = n - max(n // 4, 1)
        growing = passage.T_n0[n] - passage.T_n0[q] > tol * passage.T_n0[n]
    if verdict == "diverges" and growing:
        cls = "divergent"
    elif verdict == "converges":
        cls = "finite"
    else:
        if strict:
            raise InconclusiveConvergence(
                f"cannot classify T_inf0: sum 1/mu_n is {verdict}, partial sums "
                f"{'grow' if growing else 'are flat'} over the last quarter of the frontier"
            )
        cls = "inconclusive"
    return BoundaryFunctionals(
        T_p0=T_p0,
        T_p0_finite=T_p0_finite,
        T_inf0=T_inf0,
        T_inf0_class=cls,
        T_infp=T_infp,
        T_infp_class=cls,
        sum_1_over_mu_verdict=verdict,
    )
