"""Birth-death models with costs, ergodicity checks and steady-state tables.

A :class:`BirthDeathModel` describes the rates ``lambda_n`` (births, ``n >= 0``),
``mu_n`` (deaths, ``n >= 1``, with ``mu_0 = 0``) and cost rates ``c_n``.
:func:`build_tables` turns a model into :class:`ChainTables`: potential
coefficients, steady-state probabilities, cumulative and tail masses and costs,
all truncated at an adaptive frontier ``n_star``.

Tails are never formed as ``1 - P_n`` or ``zeta - C_n``.  They are accumulated
from the right, starting with the mass of a guard block of states beyond the
frontier, so deep-tail values such as ``1 - P_29 ~ 3e-27`` keep full relative
accuracy.
"""
from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import mpmath
import numpy as np

from . import mm1m as _mm1m
from .arith import FLOAT, Arithmetic, NeumaierSum, machine_step
from .errors import (
    ConfigError,
    MissingAnalyticForm,
    NonErgodic,
    ProbabilityUnderflow,
    RateDomain,
    TabulatedRangeError,
    TruncationOverflow,
)

PRESET_KINDS = ("mm1m", "mserver-balk-abandon", "linear-immigration", "tabulated")

RateFn = Callable[[int, Mapping[str, Any], Arithmetic], Any]

_RESCALE_EXP = 900


def _convert(value, arith: Arithmetic):
    if isinstance(value, bool) or value is None or callable(value):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, (list, tuple)):
        return [_convert(v, arith) for v in value]
    if isinstance(value, Mapping):
        return {k: _convert(v, arith) for k, v in value.items()}
    return arith.num(value)


def _poly(coeffs: Sequence, n: int, arith: Arithmetic):
    acc = arith.zero()
    for h in reversed(coeffs):
        acc = acc * n + h
    return acc


@dataclass(frozen=True)
class BirthDeathModel:
    """Rates and costs of a birth-death chain on the nonnegative integers.

    The rate functions receive the state, the parameters converted to the target
    arithmetic, and the arithmetic itself.  Use the preset constructors
    (:func:`mm1m`, :func:`mserver_balk_abandon`, :func:`linear_immigration`,
    :func:`tabulated`, :func:`from_callables`) rather than building one by hand.
    """

    kind: str
    params: Mapping[str, Any]
    birth_fn: RateFn = field(repr=False)
    death_fn: RateFn = field(repr=False)
    cost_fn: RateFn = field(repr=False)
    zeta_fn: Callable[[Arithmetic], Any] | None = field(default=None, repr=False)
    max_index: int | None = None

    def convert(self, arith: Arithmetic = FLOAT) -> dict:
        return {k: _convert(v, arith) for k, v in self.params.items()}

    def _check(self, n: int):
        if n < 0:
            raise IndexError("negative state")
        if self.max_index is not None and n > self.max_index:
            raise TabulatedRangeError(
                f"{self.kind} model defines states 0..{self.max_index}, state {n} requested"
            )

    def birth(self, n: int, arith: Arithmetic = FLOAT, params=None):
        self._check(n)
        P = self.convert(arith) if params is None else params
        with arith.context():
            v = self.birth_fn(n, P, arith)
        if not v > 0:
            raise RateDomain(f"birth rate lambda_{n} = {v} is not positive")
        return v

    def death(self, n: int, arith: Arithmetic = FLOAT, params=None):
        self._check(n)
        if n == 0:
            return arith.zero()
        P = self.convert(arith) if params is None else params
        with arith.context():
            v = self.death_fn(n, P, arith)
        if not v > 0:
            raise RateDomain(f"death rate mu_{n} = {v} is not positive")
        return v

    def cost(self, n: int, arith: Arithmetic = FLOAT, params=None):
        self._check(n)
        P = self.convert(arith) if params is None else params
        with arith.context():
            return self.cost_fn(n, P, arith)

    def rates(self, n_max: int, arith: Arithmetic = FLOAT):
        """Lists ``(lambda_0..n_max, mu_0..n_max, c_0..n_max)``."""
        P = self.convert(arith)
        lam = [self.birth(n, arith, P) for n in range(n_max + 1)]
        mu = [self.death(n, arith, P) for n in range(n_max + 1)]
        c = [self.cost(n, arith, P) for n in range(n_max + 1)]
        return lam, mu, c

    @property
    def has_analytic_zeta(self) -> bool:
        return self.zeta_fn is not None

    def analytic_zeta(self, arith: Arithmetic = FLOAT):
        """Closed-form mean cost, correctly rounded into ``arith`` for floats."""
        if self.zeta_fn is None:
            raise MissingAnalyticForm(f"{self.kind} model has no analytic mean cost")
        if arith.is_float:
            return float(self.zeta_fn(Arithmetic("mp", 40)))
        if arith.kind == "mp":
            hi = Arithmetic("mp", arith.dps + 10)
            v = self.zeta_fn(hi)
            with arith.context():
                return +v
        return self.zeta_fn(arith)


# ----------------------------------------------------------------------------
# presets


def mm1m(lam, mu, theta) -> BirthDeathModel:
    """M/M/1+M: ``lambda_n = lam``, ``mu_n = mu + n theta``, ``c_n = n theta``."""
    params = _mm1m.Mm1mParams(lam, mu, theta)
    return BirthDeathModel(
        kind="mm1m",
        params={"lambda": lam, "mu": mu, "theta": theta},
        birth_fn=lambda n, P, a: P["lambda"],
        death_fn=lambda n, P, a: P["mu"] + n * P["theta"],
        cost_fn=lambda n, P, a: n * P["theta"],
        zeta_fn=lambda arith: _mm1m.analytic_zeta(params, arith),
    )


def _balking_fn(spec) -> RateFn:
    if spec is None:
        return lambda n, P, a: a.zero()
    if isinstance(spec, Mapping):
        if set(spec) - {"slope", "cap"}:
            raise ConfigError(f"unknown balking keys {sorted(set(spec) - {'slope', 'cap'})}")
        return lambda n, P, a: min(P["balking"]["cap"], n * P["balking"]["slope"])
    if callable(spec):
        return lambda n, P, a: a.num(spec(n))
    return lambda n, P, a: P["balking"]


def mserver_balk_abandon(
    lam,
    mu,
    servers: int = 1,
    theta=0.0,
    *,
    balking=None,
    abandon_in_service: bool = False,
    abandon_cost=0.0,
    holding=(0.0, 1.0),
) -> BirthDeathModel:
    """Broad ``m``-server model with balking and abandonment.

    ``lambda_n = lam (1 - alpha_n)``, ``mu_n = min(m, n) mu + g(m, n) theta`` and
    ``c_n = abandon_cost g(m, n) theta + h_n`` where ``g(m, n) = n`` if customers
    may abandon while in service and ``(n - m)^+`` otherwise.

    ``balking`` is ``None``, a constant probability, ``{"slope": s, "cap": a}``
    for ``alpha_n = min(a, s n)``, or a callable of ``n``.  ``holding`` is a list
    of polynomial coefficients (constant term first) or a callable of ``n``.
    """
    if int(servers) != servers or servers < 1:
        raise ConfigError("servers must be a positive integer")
    servers = int(servers)
    if float(mu) <= 0 or float(theta) < 0 or float(lam) <= 0 or float(abandon_cost) < 0:
        raise ConfigError("need lam > 0, mu > 0, theta >= 0, abandon_cost >= 0")
    alpha = _balking_fn(balking)

    def g(n):
        return n if abandon_in_service else max(n - servers, 0)

    if callable(holding):
        hold = lambda n, P, a: a.num(holding(n))
    else:
        hold = lambda n, P, a: _poly(P["holding"], n, a)

    params = {
        "lambda": lam,
        "mu": mu,
        "servers": servers,
        "theta": theta,
        "balking": balking,
        "abandon_in_service": abandon_in_service,
        "abandon_cost": abandon_cost,
        "holding": holding if callable(holding) else list(holding),
    }

    zeta_fn = None
    if (
        servers == 1
        and float(theta) == 0
        and balking is None
        and not callable(holding)
        and len(holding) <= 2
        and float(lam) < float(mu)
    ):
        # M/M/1 with linear holding cost: zeta = h0 + h1 rho / (1 - rho)
        coeffs = list(holding) + [0.0] * (2 - len(holding))

        def zeta_fn(arith, coeffs=coeffs):
            with arith.context():
                rho = arith.num(lam) / arith.num(mu)
                return arith.num(coeffs[0]) + arith.num(coeffs[1]) * rho / (1 - rho)

    return BirthDeathModel(
        kind="mserver-balk-abandon",
        params=params,
        birth_fn=lambda n, P, a: P["lambda"] * (1 - alpha(n, P, a)),
        death_fn=lambda n, P, a: min(P["servers"], n) * P["mu"] + g(n) * P["theta"],
        cost_fn=lambda n, P, a: P["abandon_cost"] * g(n) * P["theta"] + hold(n, P, a),
        zeta_fn=zeta_fn,
    )


def mm1(lam, mu, holding=(0.0, 1.0)) -> BirthDeathModel:
    """Plain M/M/1 queue (the one-server, no-abandonment special case)."""
    return mserver_balk_abandon(lam, mu, 1, 0.0, holding=holding)


def linear_immigration(lam, mu, immigration, cost=(0.0, 1.0)) -> BirthDeathModel:
    """Linear birth-death with immigration: ``lambda_n = n lam + alpha``, ``mu_n = n mu``."""
    if not (float(lam) >= 0 and float(mu) > 0 and float(immigration) > 0):
        raise ConfigError("need lam >= 0, mu > 0 and immigration > 0")
    return BirthDeathModel(
        kind="linear-immigration",
        params={"lambda": lam, "mu": mu, "alpha": immigration, "cost": list(cost)},
        birth_fn=lambda n, P, a: n * P["lambda"] + P["alpha"],
        death_fn=lambda n, P, a: n * P["mu"],
        cost_fn=lambda n, P, a: _poly(P["cost"], n, a),
    )


def tabulated(birth: Sequence, death: Sequence, cost: Sequence) -> BirthDeathModel:
    """Explicit rate and cost arrays; no extrapolation beyond their common length.

    ``death[0]`` must be 0.
    """
    birth, death, cost = list(birth), list(death), list(cost)
    if not death or death[0] != 0:
        raise ConfigError("tabulated death rates must start with mu_0 = 0")
    size = min(len(birth), len(death), len(cost))
    if size < 2:
        raise ConfigError("tabulated model needs at least two states")
    return BirthDeathModel(
        kind="tabulated",
        params={"birth": birth, "death": death, "cost": cost},
        birth_fn=lambda n, P, a: P["birth"][n],
        death_fn=lambda n, P, a: P["death"][n],
        cost_fn=lambda n, P, a: P["cost"][n],
        max_index=size - 1,
    )


def from_callables(birth, death, cost, *, zeta=None, kind: str = "custom") -> BirthDeathModel:
    """Model from plain functions of ``n`` (programmatic use only).

    Values returned by the callables are converted into the working arithmetic
    (floats by their decimal repr).  ``zeta`` is an optional closed-form mean
    cost, as a number or a function of an :class:`Arithmetic`.
    """
    zeta_fn = None
    if zeta is not None:
        zeta_fn = zeta if callable(zeta) else (lambda arith: arith.num(zeta))
    return BirthDeathModel(
        kind=kind,
        params={},
        birth_fn=lambda n, P, a: a.num(birth(n)),
        death_fn=lambda n, P, a: a.num(death(n)),
        cost_fn=lambda n, P, a: a.num(cost(n)),
        zeta_fn=zeta_fn,
    )


# ----------------------------------------------------------------------------
# truncation and tables


@dataclass(frozen=True)
class TruncationPolicy:
    """Frontier selection.

    ``n_star`` is the smallest state with ``pi_n / sum_{j<=n} pi_j < tail_mass_tol``
    (and at least ``min_states``).  States beyond it are summed into the tails
    until a term falls below ``term_rel_tol`` times the accumulated tail.
    """

    tail_mass_tol: float = 1e-30
    term_rel_tol: float = 1e-18
    max_states: int = 10**6
    min_states: int = 0

    def __post_init__(self):
        if not 0 < self.tail_mass_tol < 1:
            raise ConfigError("tail_mass_tol must lie in (0, 1)")
        if not 0 < self.term_rel_tol < 1:
            raise ConfigError("term_rel_tol must lie in (0, 1)")
        if self.max_states < 2:
            raise ConfigError("max_states must be at least 2")
        if self.min_states < 0 or self.min_states >= self.max_states:
            raise ConfigError("min_states must lie in [0, max_states)")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class ErgodicityReport:
    rho_limsup_estimate: float
    condition16_pass: bool
    condition15_checked: bool
    horizon: int
    burn_in: int
    margin: float


def check_ergodicity(model: BirthDeathModel, horizon: int = 2000, margin: float = 1e-9) -> ErgodicityReport:
    """Evidence for ergodicity over states ``0..horizon``.

    ``condition16_pass`` asserts ``rho_n = lambda_n / mu_n < 1 - margin`` for every
    inspected state past ``horizon // 2``.  ``condition15_checked`` is partial-sum
    evidence that ``sum pi_n`` converges and ``sum 1/(lambda_n pi_n)`` diverges.
    """
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    if model.max_index is not None:
        horizon = min(horizon, model.max_index)
    lam, mu, _ = model.rates(horizon)
    rho = [lam[n] / mu[n] for n in range(1, horizon + 1)]
    burn_in = horizon // 2
    tail = rho[burn_in - 1 :] if burn_in >= 1 else rho
    rho_sup = max(tail)
    cond16 = rho_sup < 1 - margin

    log_pi = [0.0]
    acc = NeumaierSum()
    for n in range(1, horizon + 1):
        acc.add(math.log(lam[n - 1]) - math.log(mu[n]))
        log_pi.append(acc.value)
    top = max(log_pi)
    log_total = top + math.log(math.fsum(math.exp(v - top) for v in log_pi))
    pi_converges = log_pi[-1] - log_total < math.log(1e-8) and rho[-1] < 1
    half = horizon // 2
    inv_diverges = -(math.log(lam[horizon]) + log_pi[horizon]) >= -(math.log(lam[half]) + log_pi[half])
    return ErgodicityReport(
        rho_limsup_estimate=rho_sup,
        condition16_pass=cond16,
        condition15_checked=bool(pi_converges and inv_diverges),
        horizon=horizon,
        burn_in=burn_in,
        margin=margin,
    )


@dataclass(frozen=True, eq=False)
class ChainTables:
    """Truncated steady-state tables, indexed ``0..n_star``.

    ``P_bar[n] = sum_{j>n} p_j`` and ``C_bar[n] = sum_{j>n} c_j p_j`` are
    accumulated from the right, including the guard block beyond ``n_star``.
    ``pi`` holds the potential coefficients times ``2**pi_log2_scale`` (the scale
    is nonzero only when raw products would overflow binary64).
    """

    model: BirthDeathModel
    policy: TruncationPolicy
    arith: Arithmetic
    n_star: int
    lam: np.ndarray
    mu: np.ndarray
    c: np.ndarray
    pi: np.ndarray
    p: np.ndarray
    P: np.ndarray
    P_bar: np.ndarray
    C: np.ndarray
    C_bar: np.ndarray
    Z: np.ndarray
    zeta: Any
    guard_states: int
    pi_log2_scale: int = 0

    def __len__(self):
        return self.n_star + 1

    @property
    def lam_p(self) -> list:
        """``lambda_n p_n`` (the probability flux across the edge ``n -> n+1``)."""
        with self.arith.context():
            return [l * q for l, q in zip(self.lam, self.p)]


def build_tables(
    model: BirthDeathModel,
    policy: TruncationPolicy | None = None,
    *,
    arith: Arithmetic = FLOAT,
    n_star: int | None = None,
    allow_nonergodic: bool = False,
    ergodicity_horizon: int = 2000,
) -> ChainTables:
    """Steady-state tables up to an adaptive (or explicitly given) frontier.

    Raises :class:`NonErgodic` when the ergodicity check fails (unless
    ``allow_nonergodic``), :class:`TruncationOverflow` when ``max_states`` is hit
    first, :class:`RateDomain` on a nonpositive rate.
    """
    policy = policy or DEFAULT_POLICY
    if n_star is not None and not 0 <= n_star < policy.max_states:
        raise ValueError("explicit n_star must lie in [0, max_states)")
    if not allow_nonergodic:
        rep = check_ergodicity(model, ergodicity_horizon)
        if not rep.condition16_pass:
            raise NonErgodic(
                f"limsup rho_n estimate {rep.rho_limsup_estimate:.6g} is not below 1 "
                f"(states {rep.burn_in}..{rep.horizon})"
            )
    with arith.context():
        return _build(model, policy, arith, n_star)


def _build(model, policy, arith, explicit_n_star):
    P_ = model.convert(arith)
    lam = [model.birth(0, arith, P_)]
    mu = [arith.zero()]
    cost = [model.cost(0, arith, P_)]
    pi = [arith.one()]
    floaty = arith.is_float
    scale = 0

    def extend(n):
        lam.append(model.birth(n, arith, P_))
        mu.append(model.death(n, arith, P_))
        cost.append(model.cost(n, arith, P_))

    def step(n):
        """Append pi_{n+1}; rescale in binary64 if it would overflow."""
        nonlocal scale
        if n + 1 >= policy.max_states:
            raise TruncationOverflow(f"max_states={policy.max_states} reached at state {n + 1}")
        extend(n + 1)
        nxt = (pi[n] * lam[n]) / mu[n + 1]
        if floaty and nxt > 2.0**_RESCALE_EXP:
            for i in range(len(pi)):
                pi[i] = math.ldexp(pi[i], -_RESCALE_EXP)
            nxt = math.ldexp(nxt, -_RESCALE_EXP)
            scale -= _RESCALE_EXP
        pi.append(nxt)

    head = NeumaierSum(1.0) if floaty else None
    head_exact = arith.one()
    n = 0
    while True:
        if explicit_n_star is not None:
            if n == explicit_n_star:
                break
        elif n >= policy.min_states:
            total = head.value if floaty else head_exact
            if pi[n] < policy.tail_mass_tol * total:
                break
        before = scale
        step(n)
        n += 1
        if not floaty:
            head_exact = head_exact + pi[n]
        elif scale != before:
            head = NeumaierSum()
            for v in pi:
                head.add(v)
        else:
            head.add(pi[n])
    n_star = n

    tail = NeumaierSum() if floaty else None
    tail_exact = arith.zero()
    j = n_star
    last = model.max_index
    if last is not None and n_star >= last:
        raise TabulatedRangeError(f"frontier n_star={n_star} leaves no tail states in a table ending at {last}")
    while True:
        step(j)
        j += 1
        if floaty:
            tail.add(pi[j])
            tail_val = tail.value
        else:
            tail_exact = tail_exact + pi[j]
            tail_val = tail_exact
        if pi[j] <= policy.term_rel_tol * tail_val and pi[j] < pi[j - 1]:
            break
        if j == last:
            # a finite table is the whole chain
            break
    guard = j - n_star

    total = arith.fsum(pi)
    p_all = [v / total for v in pi]
    p = p_all[: n_star + 1]
    if floaty and any(not v > 0 for v in p):
        bad = next(i for i, v in enumerate(p) if not v > 0)
        raise ProbabilityUnderflow(f"p_{bad} underflows binary64; use multiprecision arithmetic")
    cp_all = [ci * v for ci, v in zip(cost, p_all)]
    P_tail = arith.fsum(p_all[n_star + 1 :])
    C_tail = arith.fsum(cp_all[n_star + 1 :])
    if not P_tail > 0:
        raise ProbabilityUnderflow("tail mass beyond the frontier underflows; lower tail_mass_tol")
    Pc = arith.cumsum(p)
    Pb = arith.suffix_sums(p, tail=P_tail)
    Cc = arith.cumsum(cp_all[: n_star + 1])
    Cb = arith.suffix_sums(cp_all[: n_star + 1], tail=C_tail)
    zeta = arith.fsum(cp_all)
    Z = [a / b for a, b in zip(Cc, Pc)]

    k = n_star + 1
    return ChainTables(
        model=model,
        policy=policy,
        arith=arith,
        n_star=n_star,
        lam=arith.array(lam[:k]),
        mu=arith.array(mu[:k]),
        c=arith.array(cost[:k]),
        pi=arith.array(pi[:k]),
        p=arith.array(p),
        P=arith.array(Pc),
        P_bar=arith.array(Pb),
        C=arith.array(Cc),
        C_bar=arith.array(Cb),
        Z=arith.array(Z),
        zeta=zeta,
        guard_states=guard,
        pi_log2_scale=scale,
    )


# ----------------------------------------------------------------------------
# mean cost


_PERTURBED = re.compile(r"^perturbed:([+-]?\d+)$")


def parse_zeta_mode(mode) -> tuple[str, int]:
    """``"analytic"``, ``"summed"``, ``"perturbed:+k"`` or ``("perturbed", k)``."""
    if isinstance(mode, tuple):
        name, k = mode
        if name != "perturbed":
            raise ConfigError(f"unknown zeta mode {mode!r}")
        return "perturbed", int(k)
    if mode in ("analytic", "summed"):
        return mode, 0
    m = _PERTURBED.match(str(mode))
    if not m:
        raise ConfigError(f"unknown zeta mode {mode!r}")
    return "perturbed", int(m.group(1))


def mean_cost(tables: ChainTables, mode="summed"):
    """Mean steady-state cost in the tables' arithmetic.

    ``analytic`` rounds the model's closed form to working precision; ``summed``
    is the compensated sum of ``c_n p_n``; ``perturbed:k`` moves the analytic
    value (summed if there is none) by ``k`` machine-epsilon steps of its binade,
    which is ``k * 2**-53`` for values in ``[0.25, 0.5)``.
    """
    name, k = parse_zeta_mode(mode)
    arith = tables.arith
    if name == "analytic":
        return tables.model.analytic_zeta(arith)
    if name == "summed":
        return tables.zeta
    base = tables.model.analytic_zeta(arith) if tables.model.has_analytic_zeta else tables.zeta
    step = machine_step(float(base))
    with arith.context():
        if arith.kind == "exact":
            return base + k * Fraction(step)
        if arith.kind == "mp":
            return base + k * mpmath.mpf(step)
        return base + k * step


def input_error(tables: ChainTables, z, dps: int = 40):
    """``E = z - zeta`` with ``zeta`` from a ``dps``-digit evaluation, rounded to the tables' arithmetic.

    Uses the closed form when the model has one and otherwise rebuilds the
    tables in multiprecision with the same frontier.
    """
    arith = tables.arith
    if arith.kind == "exact" and not tables.model.has_analytic_zeta:
        return z - tables.zeta
    hi = Arithmetic("mp", max(dps, (arith.dps or 0) + 10))
    if tables.model.has_analytic_zeta:
        zeta = tables.model.zeta_fn(hi) if arith.kind != "exact" else tables.model.analytic_zeta(arith)
    else:
        zeta = build_tables(tables.model, tables.policy, arith=hi, n_star=tables.n_star, allow_nonergodic=True).zeta
    if arith.kind == "exact":
        return z - zeta
    with hi.context():
        # the exact binary value of z, not its decimal repr
        zz = mpmath.mpf(z) if isinstance(z, (float, np.floating)) else hi.num(z)
        diff = zz - zeta
    if arith.is_float:
        return float(diff)
    with arith.context():
        return +diff


# ----------------------------------------------------------------------------
# configuration


_INLINE = re.compile(r"^\s*([a-z0-9-]+)\s*\((.*)\)\s*$")


def _inline_preset(text: str) -> BirthDeathModel:
    m = _INLINE.match(text)
    if not m:
        raise ConfigError(f"cannot parse inline preset {text!r}")
    kind, args = m.group(1), m.group(2)
    try:
        vals = [float(a) for a in args.split(",") if a.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad numbers in inline preset {text!r}") from exc
    if kind == "mm1m" and len(vals) == 3:
        return mm1m(*vals)
    if kind == "mm1" and len(vals) == 2:
        return mm1(*vals)
    if kind == "linear-immigration" and len(vals) == 3:
        return linear_immigration(*vals)
    raise ConfigError(f"unsupported inline preset {text!r}")


def _take(d: Mapping, allowed: set, where: str) -> dict:
    if not isinstance(d, Mapping):
        raise ConfigError(f"{where} must be an object")
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")
    return dict(d)


def model_from_config(doc: Mapping) -> tuple[BirthDeathModel, TruncationPolicy]:
    """Build a model and policy from a parsed config document."""
    doc = _take(doc, {"kind", "params", "cost", "truncation"}, "config")
    kind = doc.get("kind")
    params = doc.get("params", {})
    cost = doc.get("cost", {})
    try:
        if kind == "mm1m":
            p = _take(params, {"lambda", "mu", "theta"}, "params")
            _take(cost, set(), "cost")
            model = mm1m(p["lambda"], p["mu"], p["theta"])
        elif kind == "mserver-balk-abandon":
            p = _take(params, {"lambda", "mu", "servers", "theta", "balking", "abandon_in_service"}, "params")
            c = _take(cost, {"abandonment", "holding"}, "cost")
            model = mserver_balk_abandon(
                p["lambda"],
                p["mu"],
                p.get("servers", 1),
                p.get("theta", 0.0),
                balking=p.get("balking"),
                abandon_in_service=bool(p.get("abandon_in_service", False)),
                abandon_cost=c.get("abandonment", 0.0),
                holding=c.get("holding", [0.0, 1.0]),
            )
        elif kind == "linear-immigration":
            p = _take(params, {"lambda", "mu", "alpha"}, "params")
            c = _take(cost, {"polynomial"}, "cost")
            model = linear_immigration(p["lambda"], p["mu"], p["alpha"], c.get("polynomial", [0.0, 1.0]))
        elif kind == "tabulated":
            p = _take(params, {"birth", "death"}, "params")
            c = _take(cost, {"values"}, "cost")
            model = tabulated(p["birth"], p["death"], c["values"])
        else:
            raise ConfigError(f"unknown model kind {kind!r}; expected one of {PRESET_KINDS}")
        trunc = _take(doc.get("truncation", {}), {"tail_mass_tol", "term_rel_tol", "max_states", "min_states"}, "truncation")
        policy = TruncationPolicy(**trunc)
    except KeyError as exc:
        raise ConfigError(f"missing parameter {exc.args[0]!r}") from exc
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return model, policy


def load_model(source) -> tuple[BirthDeathModel, TruncationPolicy]:
    """Model from a JSON file path, a parsed document, or an inline preset like ``mm1m(0.9,1,0.5)``."""
    if isinstance(source, Mapping):
        return model_from_config(source)
    text = str(source)
    if _INLINE.match(text) and not os.path.exists(text):
        return _inline_preset(text), DEFAULT_POLICY
    try:
        with open(text, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read model config {text!r}: {exc}") from exc
    return model_from_config(doc)
