"""Predicted amplification of an input error ``E = z_hat - zeta`` by each scheme.

If the recurrences are run with ``z_hat`` instead of ``zeta`` (and no other
rounding), the computed ``phi`` and ``b`` are off by exactly

================  ==================  ==================
scheme            ``phi_n`` factor     ``b_n`` factor
================  ==================  ==================
forward           ``T_n^+``            ``T_{0n}``
backward (limit)  ``-T_{n+1}^-``       ``-T_{n0}``
mixed (limit)     ``A_n``              ``B_n``
================  ==================  ==================

times ``E``, where ``A_n`` switches from the forward to the backward factor at
the crossover ``m`` and ``B_n`` at ``M``.  Relative factors are
``zeta * factor / phi_n`` and ``zeta * factor / b_n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from .chain import ChainTables
from .errors import ZeroDenominator
from .passage import PassageTables
from .solve import PoissonSolution, crossover_b, crossover_phi, solve_exact

REL_FLOOR = 1e-300
TAIL_FRACTION = 0.25


@dataclass(frozen=True)
class ErrorRow:
    n: int
    abs_factor: Any
    rel_factor: Any
    b_abs_factor: Any
    b_rel_factor: Any
    predicted_abs_error: Any
    observed_abs_error: Any = None
    rel_flagged: bool = False


@dataclass(frozen=True)
class ErrorReport:
    """Per-state factors.  Backward and mixed factors are ``N -> infinity`` limits."""

    scheme: str
    e_abs_input: Any
    rows: tuple[ErrorRow, ...]
    divergence_class: str
    limit_factors: bool
    crossover_m: int | None = None
    crossover_M: int | None = None

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


def divergence_class(tables: ChainTables, fraction: float = TAIL_FRACTION) -> str:
    """``explosive`` if ``lambda_n p_n`` decays over the frontier tail, ``bounded`` if it stays level.

    The verdict is limited to the stored frontier: the last ``fraction`` of states.
    """
    with tables.arith.context():
        flux = [float(x) for x in tables.lam_p]
    n = len(flux)
    w = flux[n - max(int(n * fraction), 2) :]
    decreasing = all(b < a for a, b in zip(w, w[1:]))
    if decreasing and w[-1] < 0.5 * w[0]:
        return "explosive"
    if min(w) >= 0.5 * max(w):
        return "bounded"
    return "indeterminate"


def _rows(tables, exact, abs_f, b_f, e, observed, strict):
    a = tables.arith
    zeta = exact.z_input
    rows = []
    with a.context():
        for n in range(len(abs_f)):
            phi, b = exact.phi[n], exact.b[n]
            flagged = False
            if abs(phi) < REL_FLOOR:
                if strict:
                    raise ZeroDenominator(f"phi_{n} vanishes; relative factor undefined")
                rel, flagged = None, True
            else:
                rel = zeta * abs_f[n] / phi
            if abs(b) < REL_FLOOR:
                if strict:
                    raise ZeroDenominator(f"b_{n} vanishes; relative factor undefined")
                brel, flagged = None, True
            else:
                brel = zeta * b_f[n] / b
            obs = None
            if observed is not None and n < len(observed.phi):
                obs = observed.phi[n] - phi
            rows.append(ErrorRow(n, abs_f[n], rel, b_f[n], brel, abs_f[n] * e, obs, flagged))
    return tuple(rows)


def _exact(tables, passage, b0, exact):
    return exact if exact is not None else solve_exact(tables, passage, b0)


def forward_error_factors(
    passage: PassageTables,
    tables: ChainTables,
    e_abs_input,
    *,
    b0=0,
    observed: PoissonSolution | None = None,
    exact: PoissonSolution | None = None,
    strict: bool = False,
) -> ErrorReport:
    """Factors ``T_n^+`` and ``T_{0n}`` (exact, not limits).

    ``observed`` is a forward solution to compare against the exact one;
    ``strict`` turns flagged relative factors into :class:`ZeroDenominator`.
    """
    ex = _exact(tables, passage, b0, exact)
    n = len(ex.phi)
    rows = _rows(tables, ex, list(passage.T_up[:n]), list(passage.T_0n[:n]), e_abs_input, observed, strict)
    return ErrorReport("forward", e_abs_input, rows, divergence_class(tables), False)


def backward_error_factors(
    passage: PassageTables,
    e_abs_input,
    *,
    b0=0,
    observed: PoissonSolution | None = None,
    exact: PoissonSolution | None = None,
    strict: bool = False,
) -> ErrorReport:
    """Limit factors ``-T_{n+1}^-`` and ``-T_{n0}``."""
    tables = passage.tables
    ex = _exact(tables, passage, b0, exact)
    n = len(ex.phi)
    with tables.arith.context():
        A = [-t for t in passage.T_down[:n]]
        B = [-t for t in passage.T_n0[:n]]
    rows = _rows(tables, ex, A, B, e_abs_input, observed, strict)
    return ErrorReport("backward", e_abs_input, rows, "bounded", True)


def mixed_factors(passage: PassageTables) -> tuple[list, list, int, int]:
    """``(A, B, m, M)`` over ``n = 0..n_star``."""
    tables = passage.tables
    m = crossover_phi(tables)
    M = crossover_b(passage)
    with tables.arith.context():
        A = [passage.T_up[n] if n < m else -passage.T_down[n] for n in range(tables.n_star + 1)]
        B = [passage.T_0n[n] if n < M else -passage.T_n0[n] for n in range(tables.n_star + 1)]
    return A, B, m, M


def mixed_error_factors(
    passage: PassageTables,
    tables: ChainTables,
    e_abs_input,
    *,
    b0=0,
    observed: PoissonSolution | None = None,
    exact: PoissonSolution | None = None,
    strict: bool = False,
) -> ErrorReport:
    """Limit factors ``A_n`` and ``B_n``; ``|A_n| = min(T_n^+, T_{n+1}^-)``."""
    ex = _exact(tables, passage, b0, exact)
    A, B, m, M = mixed_factors(passage)
    n = len(ex.phi)
    rows = _rows(tables, ex, A[:n], B[:n], e_abs_input, observed, strict)
    return ErrorReport("mixed", e_abs_input, rows, "bounded", True, m, M)


def scheme_comparison(passage: PassageTables) -> tuple[list, list]:
    """Limiting backward/forward error ratios ``-P_bar_n / P_n`` and ``-T_{n0} / T_{0n}`` (``n >= 1``)."""
    tables = passage.tables
    with tables.arith.context():
        phi_ratio = [-pb / p for pb, p in zip(tables.P_bar, tables.P)]
        b_ratio = [-passage.T_n0[n] / passage.T_0n[n] for n in range(1, tables.n_star + 1)]
    return phi_ratio, b_ratio


@dataclass(frozen=True)
class DecayDiagnostics:
    """Boundary terms over ``N = 0..n_star`` and whether each is decreasing."""

    flux: list
    time_term: list
    cost_term: list
    sqrt_term: list
    decreasing: dict


def _decreasing(xs: Sequence) -> bool:
    """Strictly decreasing from the largest term on (all-zero counts as decreasing)."""
    if not any(xs):
        return True
    top = max(range(len(xs)), key=lambda i: xs[i])
    tail = xs[top:]
    return all(b < a for a, b in zip(tail, tail[1:]))


def boundary_decay_diagnostics(tables: ChainTables, passage: PassageTables, e_seed=1.0) -> DecayDiagnostics:
    """``lambda_N p_N`` and ``lambda_N p_N x e_seed`` for ``x`` in ``T_{N0}``, ``H_{N0}``, ``sqrt(T_{0N})``.

    These are the boundary terms that must vanish for the backward and mixed
    schemes to reach their limit accuracy; inspect them to validate a frontier.
    Each ``decreasing`` verdict asks for strict decrease after the sequence peaks.
    """
    a = tables.arith
    with a.context():
        e = a.num(e_seed)
        flux = list(tables.lam_p)
        time_term = [f * passage.T_n0[N] * e for N, f in enumerate(flux)]
        cost_term = [f * passage.H_n0[N] * e for N, f in enumerate(flux)]
        sqrt_term = [f * a.sqrt(passage.T_0n[N]) * e for N, f in enumerate(flux)]
    dec = {
        "flux": _decreasing(flux),
        "time_term": _decreasing(time_term),
        "cost_term": _decreasing(cost_term),
        "sqrt_term": _decreasing(sqrt_term),
    }
    return DecayDiagnostics(flux, time_term, cost_term, sqrt_term, dec)
