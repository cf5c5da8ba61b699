"""Number backends shared by every computation.

All algorithms in the package are written against plain ``+ - * /`` and the few
helpers below, so one code path runs in binary64, in mpmath multiprecision, or in
exact rational arithmetic.  The float backend uses compensated (Neumaier)
accumulation for running sums; the other two backends are already exact or carry
enough guard digits.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import mpmath
import numpy as np

KINDS = ("float", "mp", "exact")


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Error-free transformation: ``a + b == s + t`` exactly."""
    s = a + b
    bp = s - a
    ap = s - bp
    return s, (a - ap) + (b - bp)


class NeumaierSum:
    """Running compensated sum (Kahan-Babuska-Neumaier)."""

    __slots__ = ("s", "c")

    def __init__(self, start: float = 0.0):
        self.s = float(start)
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


@dataclass(frozen=True)
class Arithmetic:
    """A number backend: ``float``, ``mp`` (mpmath with ``dps`` digits) or ``exact``."""

    kind: str = "float"
    dps: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown arithmetic kind {self.kind!r}")
        if self.kind == "mp" and (self.dps is None or self.dps < 16):
            raise ValueError("mp arithmetic needs dps >= 16")

    @classmethod
    def binary64(cls) -> "Arithmetic":
        return cls("float")

    @classmethod
    def multiprecision(cls, dps: int = 50) -> "Arithmetic":
        return cls("mp", dps)

    @classmethod
    def rational(cls) -> "Arithmetic":
        return cls("exact")

    @property
    def is_float(self) -> bool:
        return self.kind == "float"

    def context(self):
        if self.kind == "mp":
            return mpmath.workdps(self.dps)
        return contextlib.nullcontext()

    def num(self, x: Any):
        """Convert a parameter into this backend.

        Python floats are read by their shortest decimal repr in the ``mp`` and
        ``exact`` backends, so a model written with ``0.9`` means nine tenths there.
        """
        if self.kind == "float":
            return float(x)
        if self.kind == "mp":
            if isinstance(x, mpmath.mpf):
                return +x
            if isinstance(x, Fraction):
                return mpmath.mpf(x.numerator) / x.denominator
            if isinstance(x, (float, np.floating)):
                return mpmath.mpf(repr(float(x)))
            return mpmath.mpf(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (float, np.floating)):
            return Fraction(repr(float(x)))
        if isinstance(x, mpmath.mpf):
            raise TypeError("cannot convert an mpf to an exact rational")
        return Fraction(x)

    def zero(self):
        return self.num(0)

    def one(self):
        return self.num(1)

    def fsum(self, xs: Iterable) -> Any:
        if self.kind == "float":
            return math.fsum(xs)
        if self.kind == "mp":
            return mpmath.fsum(xs)
        return sum(xs, Fraction(0))

    def cumsum(self, xs: Iterable, start=0) -> list:
        """Inclusive running sums ``start + x_0 + ... + x_k``."""
        out = []
        if self.kind == "float":
            acc = NeumaierSum(start)
            for x in xs:
                acc.add(x)
                out.append(acc.value)
            return out
        acc = self.num(start)
        for x in xs:
            acc = acc + x
            out.append(acc)
        return out

    def suffix_sums(self, xs: Sequence, tail=0) -> list:
        """``out[k] = tail + sum(xs[k+1:])``, accumulated from the right."""
        n = len(xs)
        out = [None] * n
        if n == 0:
            return out
        if self.kind == "float":
            acc = NeumaierSum(tail)
            out[n - 1] = acc.value
            for k in range(n - 2, -1, -1):
                acc.add(xs[k + 1])
                out[k] = acc.value
            return out
        acc = self.num(tail)
        out[n - 1] = acc
        for k in range(n - 2, -1, -1):
            acc = acc + xs[k + 1]
            out[k] = acc
        return out

    def array(self, xs: Iterable) -> np.ndarray:
        if self.kind == "float":
            arr = np.asarray(list(xs), dtype=np.float64)
        else:
            items = list(xs)
            arr = np.empty(len(items), dtype=object)
            arr[:] = items
        arr.flags.writeable = False
        return arr

    def sqrt(self, x):
        if self.kind == "float":
            return math.sqrt(x)
        if self.kind == "mp":
            return mpmath.sqrt(x)
        return Fraction(math.sqrt(x))  # only used for diagnostics

    def to_float(self, x) -> float:
        return float(x)


FLOAT = Arithmetic("float")


def machine_step(x: float) -> float:
    """Machine epsilon scaled to the binade of ``x`` (frexp convention).

    For ``x`` in ``[0.25, 0.5)`` this is ``2**-53``, i.e. two ulps of ``x``.
    """
    if x == 0:
        return math.ulp(0.0)
    _, e = math.frexp(float(x))
    return math.ldexp(2.0**-52, e)
