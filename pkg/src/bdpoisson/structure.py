"""Structural checks: the convexity assumptions, monotone ``phi``, and supporting lemmas.

Differences are backward differences, ``Delta x_n = x_n - x_{n-1}`` for
``n >= 1``, and ``d_n = mu_n - lambda_n`` (so ``d_0 = -lambda_0``).  The
assumption asks for

* (i.a)  ``Delta d_n >= 0`` for all ``n`` and ``Delta d_1 > 0``;
* (i.b)  ``Delta d_{n+1} <= Delta d_n``;
* (ii.a) ``c_n >= 0`` and ``Delta c_n >= 0``;
* (ii.b) ``Delta c_{n+1} >= Delta c_n``.

Under it ``phi`` is nondecreasing (``beta`` convex).  All checks only see a
finite prefix of the state space, so a ``pass`` is a statement about that
prefix only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith import Arithmetic
from .chain import BirthDeathModel, ChainTables
from .passage import PassageTables
from .solve import PoissonSolution

EXACT = Arithmetic("exact")


@dataclass(frozen=True)
class Verdict:
    """``status`` is ``pass``, ``fail`` or ``horizon-limited``; ``first_index`` marks a failure."""

    status: str
    first_index: int | None = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class AssumptionReport:
    i_a: Verdict
    i_b: Verdict
    ii_a: Verdict
    ii_b: Verdict
    d: list
    horizon: int

    @property
    def all_pass(self) -> bool:
        return all(v.ok for v in (self.i_a, self.i_b, self.ii_a, self.ii_b))


def _first(pred, indices) -> int | None:
    for n in indices:
        if not pred(n):
            return n
    return None


def check_assumption(model: BirthDeathModel, horizon: int = 200) -> AssumptionReport:
    """Evaluate the four conditions on states ``0..horizon`` with exact rational comparisons.

    Rates are converted to fractions through their decimal reprs, so no
    tolerance is involved.  A tabulated model shorter than ``horizon`` yields
    ``horizon-limited`` instead of ``pass``.
    """
    if horizon < 3:
        raise ValueError("horizon must be at least 3")
    limited = model.max_index is not None and model.max_index < horizon
    if limited:
        horizon = model.max_index
    lam, mu, c = model.rates(horizon, EXACT)
    d = [m - l for m, l in zip(mu, lam)]
    dd = [None] + [d[n] - d[n - 1] for n in range(1, horizon + 1)]
    dc = [None] + [c[n] - c[n - 1] for n in range(1, horizon + 1)]
    ok = "horizon-limited" if limited else "pass"

    def verdict(first):
        return Verdict(ok) if first is None else Verdict("fail", first)

    i_a = _first(lambda n: dd[n] > 0 if n == 1 else dd[n] >= 0, range(1, horizon + 1))
    i_b = _first(lambda n: dd[n] <= dd[n - 1], range(2, horizon + 1))
    ii_a = _first(lambda n: c[n] >= 0 and (n == 0 or dc[n] >= 0), range(0, horizon + 1))
    ii_b = _first(lambda n: dc[n] >= dc[n - 1], range(2, horizon + 1))
    # (i.b) and (ii.b) compare Delta_{n+1} with Delta_n; report the smaller index n
    return AssumptionReport(
        i_a=verdict(i_a),
        i_b=verdict(None if i_b is None else i_b - 1),
        ii_a=verdict(ii_a),
        ii_b=verdict(None if ii_b is None else ii_b - 1),
        d=d,
        horizon=horizon,
    )


@dataclass(frozen=True)
class ConvexityVerdict:
    is_nondecreasing: bool
    first_violation: int | None


def verify_convexity(solution: PoissonSolution | Sequence, tol: float = 1e-12) -> ConvexityVerdict:
    """``phi_{n+1} >= phi_n - tol * max(1, |phi_n|)`` for every stored ``n``.

    ``first_violation`` is the index ``n+1`` where ``phi`` first drops.
    """
    phi = solution.phi if isinstance(solution, PoissonSolution) else solution
    for n in range(len(phi) - 1):
        if phi[n + 1] < phi[n] - tol * max(1, abs(phi[n])):
            return ConvexityVerdict(False, n + 1)
    return ConvexityVerdict(True, None)


@dataclass(frozen=True)
class AppendixReport:
    """Lemma diagnostics; every field is ``None`` when the assumption fails."""

    applicable: bool
    z_monotone: bool | None
    dT_positive: bool | None
    r_monotone: bool | None
    r_le_zeta: bool | None
    r_to_zeta: bool | None
    z_le_r: bool | None
    r: list


def _ge(a, b, slack) -> bool:
    return a >= b - slack * max(abs(a), abs(b))


def appendix_diagnostics(
    tables: ChainTables, passage: PassageTables, *, slack: float = 1e-12, horizon: int | None = None
) -> AppendixReport:
    """Check, over ``n <= horizon`` (default ``n_star``) with relative ``slack``:

    ``Z_n`` nondecreasing, ``Delta T_n^+ > 0``, ``r_n = Delta H_n^+ / Delta T_n^+``
    nondecreasing, ``Z_n <= r_n <= zeta``, and ``r`` closer to ``zeta`` at the
    horizon than halfway there.
    """
    top = tables.n_star if horizon is None else min(horizon, tables.n_star)
    rep = check_assumption(tables.model, max(top, 3))
    if not rep.all_pass:
        return AppendixReport(False, None, None, None, None, None, None, [])
    a = tables.arith
    zeta = tables.model.analytic_zeta(a) if tables.model.has_analytic_zeta else tables.zeta
    with a.context():
        Z = tables.Z
        T, H = passage.T_up, passage.H_up
        dT = [T[n] - T[n - 1] for n in range(1, top + 1)]
        dH = [H[n] - H[n - 1] for n in range(1, top + 1)]
        r = [h / t for h, t in zip(dH, dT)]
        z_mono = all(_ge(Z[n + 1], Z[n], slack) for n in range(top))
        dT_pos = all(x > 0 for x in dT)
        r_mono = all(_ge(r[k + 1], r[k], slack) for k in range(len(r) - 1))
        r_le = all(x <= zeta * (1 + slack) if zeta >= 0 else x <= zeta * (1 - slack) for x in r)
        half = len(r) // 2
        gap = abs(r[-1] - zeta)
        r_to = bool(gap <= slack * max(abs(zeta), 1) or (half >= 1 and gap < abs(r[half - 1] - zeta)))
        z_le = all(_ge(r[n - 1], Z[n], slack) for n in range(1, top + 1))
    return AppendixReport(True, bool(z_mono), bool(dT_pos), bool(r_mono), bool(r_le), r_to, bool(z_le), r)


@dataclass(frozen=True)
class StructureReport:
    assumption: AssumptionReport
    convexity: ConvexityVerdict | None
    appendix: AppendixReport | None


def structure_report(
    tables: ChainTables, passage: PassageTables, solution: PoissonSolution | None = None, horizon: int = 200
) -> StructureReport:
    conv = verify_convexity(solution) if solution is not None else None
    return StructureReport(check_assumption(tables.model, horizon), conv, appendix_diagnostics(tables, passage))
