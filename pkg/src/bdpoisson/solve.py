"""Solutions of Poisson's equation for a birth-death chain.

The unknowns are the marginal relative costs ``phi_n = b_{n+1} - b_n``, which
satisfy ``lambda_n phi_n - mu_n phi_{n-1} = z - c_n``.  Four schemes are offered:

``exact``
    closed form through passage quantities, using ``zeta``;
``forward``
    the recurrence run upward from ``phi_0 = (z - c_0) / lambda_0``;
``backward``
    the recurrence run downward from a seed ``phi_N`` at a frontier ``N``;
``mixed``
    forward below the crossover index, backward from it on.

The forward recurrence amplifies an input error ``z - zeta`` by ``T_n^+``, which
grows like ``1/p_n``; the backward one damps it by ``T_{n+1}^-``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import mpmath
import numpy as np

from .arith import Arithmetic
from .chain import ChainTables, mean_cost
from .errors import CrossoverOrderError, FrontierTooSmall, MissingZeta
from .passage import PassageTables, passage_tables

SCHEMES = ("exact", "forward", "backward", "mixed")
DEFAULT_N_TOL = 1e-20


@dataclass(frozen=True, eq=False)
class PoissonSolution:
    """``phi`` over ``0..len(phi)-1`` and ``b`` over ``0..len(phi)`` with ``b[0] = b0``."""

    scheme: str
    z_input: Any
    z_mode: str
    phi: np.ndarray
    b: np.ndarray
    b0: Any = 0
    N: int | None = None
    phi_NN: Any = None
    crossover_m: int | None = None
    crossover_M: int | None = None

    def __len__(self):
        return len(self.phi)


def resolve_z(tables: ChainTables, z) -> tuple[Any, str]:
    """Accept a number or a mean-cost mode string (``analytic``, ``summed``, ``perturbed:k``).

    ``default`` means ``analytic`` when the model has a closed form and ``summed`` otherwise.
    """
    if isinstance(z, str) and z == "default":
        z = "analytic" if tables.model.has_analytic_zeta else "summed"
    if isinstance(z, (str, tuple)):
        label = z if isinstance(z, str) else f"perturbed:{z[1]:+d}"
        return mean_cost(tables, z), label
    with tables.arith.context():
        return tables.arith.num(z), "explicit"


def _infer(values) -> Arithmetic:
    items = list(values)
    if any(isinstance(v, mpmath.mpf) for v in items):
        return Arithmetic("mp", max(mpmath.mp.dps, 16))
    if any(isinstance(v, Fraction) for v in items):
        return Arithmetic("exact")
    return Arithmetic("float")


def accumulate_b(phi, b0=0, arith: Arithmetic | None = None) -> np.ndarray:
    """``b_0 = b0`` and ``b_{n+1} = b_n + phi_n`` (compensated in binary64)."""
    if arith is None:
        arith = _infer(phi)
    with arith.context():
        b0 = arith.num(b0)
        return arith.array([b0] + arith.cumsum(phi, start=b0))


def _check_nmax(tables: ChainTables, nmax: int | None) -> int:
    if nmax is None:
        return tables.n_star
    if not 0 <= nmax <= tables.n_star:
        raise FrontierTooSmall(f"nmax={nmax} is outside the tables (n_star={tables.n_star})")
    return nmax


def solve_exact(
    tables: ChainTables,
    passage: PassageTables | None = None,
    b0=0,
    *,
    zeta="default",
    nmax: int | None = None,
) -> PoissonSolution:
    """Exact ``phi_n = T_n^+ (zeta - Z_n)`` through cancellation-free forms.

    Below the crossover ``m`` the head form ``(zeta P_n - C_n) / (lambda_n p_n)``
    is used, from ``m`` on the tail form ``(C_bar_n - zeta P_bar_n) / (lambda_n p_n)``.
    ``zeta`` defaults to the analytic mean cost when the model has one and to the
    summed value otherwise.
    """
    a = tables.arith
    nmax = _check_nmax(tables, nmax)
    if zeta is None:
        raise MissingZeta("an exact solve needs the mean cost")
    z, label = resolve_z(tables, zeta)
    m = crossover_phi(tables)
    with a.context():
        phi = []
        for n in range(nmax + 1):
            flux = tables.lam[n] * tables.p[n]
            if n < m:
                phi.append((z * tables.P[n] - tables.C[n]) / flux)
            else:
                phi.append((tables.C_bar[n] - z * tables.P_bar[n]) / flux)
    return PoissonSolution("exact", z, label, a.array(phi), accumulate_b(phi, b0, a), b0, crossover_m=m)


def forward_values(tables: ChainTables, z, nmax: int) -> list:
    a = tables.arith
    lam, mu, c = tables.lam, tables.mu, tables.c
    with a.context():
        f = (z - c[0]) / lam[0]
        out = [f]
        for n in range(1, nmax + 1):
            f = ((z - c[n]) + mu[n] * f) / lam[n]
            out.append(f)
    return out


def solve_forward(tables: ChainTables, z="default", nmax: int | None = None, b0=0) -> PoissonSolution:
    """Forward recurrence ``phi_n = ((z - c_n) + mu_n phi_{n-1}) / lambda_n``."""
    nmax = _check_nmax(tables, nmax)
    zv, label = resolve_z(tables, z)
    phi = forward_values(tables, zv, nmax)
    a = tables.arith
    return PoissonSolution("forward", zv, label, a.array(phi), accumulate_b(phi, b0, a), b0)


def backward_values(tables: ChainTables, z, N: int, phi_NN) -> list:
    a = tables.arith
    lam, mu, c = tables.lam, tables.mu, tables.c
    with a.context():
        f = a.num(phi_NN)
        out = [f]
        for n in range(N, 0, -1):
            f = ((c[n] - z) + lam[n] * f) / mu[n]
            out.append(f)
    out.reverse()
    return out


def default_frontier(tables: ChainTables, passage: PassageTables | None = None, tol: float = DEFAULT_N_TOL) -> int:
    """Smallest ``N >= 1`` with ``lambda_N p_N T_{N0} < tol``."""
    passage = passage or passage_tables(tables)
    with tables.arith.context():
        for N in range(1, tables.n_star + 1):
            if tables.lam[N] * tables.p[N] * passage.T_n0[N] < tol:
                return N
    raise FrontierTooSmall(
        f"no N <= n_star={tables.n_star} satisfies lambda_N p_N T_N0 < {tol}; "
        "rebuild the tables with a larger min_states"
    )


def _frontier(tables, passage, N, nmax):
    if N is None:
        N = default_frontier(tables, passage)
        if nmax is not None and N < nmax:
            N = nmax
    if not 0 <= N <= tables.n_star:
        raise FrontierTooSmall(f"N={N} is outside the tables (n_star={tables.n_star})")
    if nmax is not None and N < nmax:
        raise FrontierTooSmall(f"frontier N={N} is below the requested range nmax={nmax}")
    return N


def solve_backward(
    tables: ChainTables,
    z="default",
    N: int | None = None,
    phi_NN=0,
    b0=0,
    *,
    nmax: int | None = None,
    passage: PassageTables | None = None,
) -> PoissonSolution:
    """Backward recurrence ``phi_{n-1} = ((c_n - z) + lambda_n phi_n) / mu_n`` from ``phi_N = phi_NN``."""
    N = _frontier(tables, passage, N, nmax)
    zv, label = resolve_z(tables, z)
    phi = backward_values(tables, zv, N, phi_NN)
    a = tables.arith
    return PoissonSolution("backward", zv, label, a.array(phi), accumulate_b(phi, b0, a), b0, N=N, phi_NN=phi_NN)


def crossover_phi(tables: ChainTables) -> int:
    """``m = min{n : P_bar_n < P_n}`` (ties go to the forward side)."""
    for n in range(tables.n_star + 1):
        if tables.P_bar[n] < tables.P[n]:
            return n
    return tables.n_star + 1


def crossover_b(passage: PassageTables) -> int:
    """``M = min{n >= 1 : T_{n0} < T_{0n}}``."""
    for n in range(1, len(passage.T_n0)):
        if passage.T_n0[n] < passage.T_0n[n]:
            return n
    return len(passage.T_n0)


def solve_mixed(
    tables: ChainTables,
    passage: PassageTables | None = None,
    z="default",
    N: int | None = None,
    phi_NN=0,
    b0=0,
    *,
    nmax: int | None = None,
) -> PoissonSolution:
    """Forward for ``phi_n`` with ``n < m`` and ``b_n`` with ``n < M``, backward elsewhere.

    Raises :class:`CrossoverOrderError` if ``m > M``.
    """
    passage = passage or passage_tables(tables)
    N = _frontier(tables, passage, N, nmax)
    zv, label = resolve_z(tables, z)
    m = crossover_phi(tables)
    M = crossover_b(passage)
    if m > M:
        raise CrossoverOrderError(f"crossover m={m} exceeds M={M}")
    a = tables.arith
    count = min(max(m, M - 1), N + 1)
    fwd = forward_values(tables, zv, count - 1) if count > 0 else []
    bwd = backward_values(tables, zv, N, phi_NN)
    phi = [fwd[n] if n < m else bwd[n] for n in range(N + 1)]
    b_f = accumulate_b(fwd, b0, a)
    b_b = accumulate_b(bwd, b0, a)
    b = [b_f[n] if n < M else b_b[n] for n in range(N + 2)]
    return PoissonSolution(
        "mixed", zv, label, a.array(phi), a.array(b), b0, N=N, phi_NN=phi_NN, crossover_m=m, crossover_M=M
    )


def solve(tables: ChainTables, scheme: str, *, z="default", N=None, phi_NN=0, b0=0, nmax=None, passage=None):
    """Dispatch on ``scheme``."""
    if scheme == "exact":
        return solve_exact(tables, passage, b0, zeta=z, nmax=nmax)
    if scheme == "forward":
        return solve_forward(tables, z, nmax, b0)
    if scheme == "backward":
        return solve_backward(tables, z, N, phi_NN, b0, nmax=nmax, passage=passage)
    if scheme == "mixed":
        return solve_mixed(tables, passage, z, N, phi_NN, b0, nmax=nmax)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
