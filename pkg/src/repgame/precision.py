"""Numeric contexts: float64, big-float (mpmath) and exact rationals.

Every computation in the package is written against plain arithmetic
operators, so the same code runs on ``float``, ``mpmath`` numbers bound to a
private context, or :class:`fractions.Fraction`.  A :class:`Precision` knows
how to build constants and evaluate the few transcendental functions needed
in its own arithmetic.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import mpmath

from .errors import DomainError, UnsupportedModeError

FLOAT64 = "float64"
BIGFLOAT = "bigfloat"
RATIONAL = "rational"

DEFAULT_BITS = 256
ENV_VAR = "REPGAME_PRECISION"


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    # one context per precision, never mutated after creation
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class Precision:
    """An arithmetic in which beliefs, values and matrices are evaluated."""

    kind: str = FLOAT64
    bits: int = 53

    def __post_init__(self):
        if self.kind not in (FLOAT64, BIGFLOAT, RATIONAL):
            raise DomainError(f"unknown precision kind {self.kind!r}")
        if self.kind == BIGFLOAT and self.bits < 53:
            raise DomainError("big-float precision needs at least 53 bits")

    @classmethod
    def parse(cls, spec: "str | Precision | None") -> "Precision":
        """Parse ``float64``, ``bigfloat``, ``bigfloat:B`` or ``rational``.

        ``None`` falls back to the ``REPGAME_PRECISION`` environment variable
        and then to float64.
        """
        if isinstance(spec, Precision):
            return spec
        if spec is None:
            spec = os.environ.get(ENV_VAR, FLOAT64)
        text = spec.strip().lower()
        if text in ("float", "float64", "double"):
            return cls(FLOAT64, 53)
        if text in ("rational", "exact", "fraction"):
            return cls(RATIONAL, 0)
        if text.startswith(BIGFLOAT):
            _, _, bits = text.partition(":")
            try:
                return cls(BIGFLOAT, int(bits) if bits else DEFAULT_BITS)
            except ValueError:
                raise DomainError(f"bad bit count in precision {spec!r}") from None
        raise DomainError(f"unknown precision {spec!r}")

    def __str__(self) -> str:
        if self.kind == BIGFLOAT:
            return f"{BIGFLOAT}:{self.bits}"
        return self.kind

    @property
    def is_float(self) -> bool:
        return self.kind == FLOAT64

    @property
    def is_exact(self) -> bool:
        return self.kind == RATIONAL

    @property
    def ctx(self) -> mpmath.MPContext:
        if self.kind != BIGFLOAT:
            raise UnsupportedModeError(f"{self} has no mpmath context")
        return _mp_context(self.bits)

    @property
    def digits(self) -> int:
        """Significant decimal digits needed to round-trip a value."""
        if self.kind == FLOAT64:
            return 17
        if self.kind == BIGFLOAT:
            return int(math.ceil(self.bits * math.log10(2))) + 1
        return 40

    def convert(self, x: Any) -> Any:
        """Convert a number or decimal string into this arithmetic.

        Decimal strings are read exactly in rational mode, so
        ``"0.73275300915"`` becomes ``73275300915/10**11``.  Floats given to
        rational mode are read through their shortest decimal repr.
        """
        if self.kind == FLOAT64:
            if isinstance(x, str):
                return float(Fraction(x.strip()))
            return float(x)
        if self.kind == BIGFLOAT:
            ctx = self.ctx
            if isinstance(x, Fraction):
                return ctx.mpf(x.numerator) / x.denominator
            if isinstance(x, str) and "/" in x:
                f = Fraction(x.strip())
                return ctx.mpf(f.numerator) / f.denominator
            if isinstance(x, float):
                return ctx.mpf(repr(x))
            return ctx.mpf(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, float):
            if not math.isfinite(x):
                raise DomainError(f"cannot represent {x!r} exactly")
            return Fraction(repr(x))
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x.strip())
        raise UnsupportedModeError(
            f"{type(x).__name__} value {x!r} has no exact rational form"
        )

    def const(self, num: int, den: int = 1) -> Any:
        """The exact ratio num/den in this arithmetic."""
        if self.kind == FLOAT64:
            return num / den
        if self.kind == BIGFLOAT:
            return self.ctx.mpf(num) / den
        return Fraction(num, den)

    def sqrt(self, x: Any) -> Any:
        if self.kind == FLOAT64:
            return math.sqrt(x)
        if self.kind == BIGFLOAT:
            return self.ctx.sqrt(x)
        # rational square roots are evaluated in big-float
        ctx = _mp_context(DEFAULT_BITS)
        if isinstance(x, Fraction):
            x = ctx.mpf(x.numerator) / x.denominator
        return ctx.sqrt(x)

    def root(self, x: Any, k: int) -> Any:
        if self.kind == FLOAT64:
            return x ** (1.0 / k)
        ctx = self.ctx if self.kind == BIGFLOAT else _mp_context(DEFAULT_BITS)
        if self.kind == RATIONAL:
            x = ctx.mpf(x.numerator) / x.denominator
        return ctx.root(x, k)

    def log(self, x: Any) -> Any:
        if self.kind == FLOAT64:
            return math.log(x)
        ctx = self.ctx if self.kind == BIGFLOAT else _mp_context(DEFAULT_BITS)
        if self.kind == RATIONAL:
            x = ctx.mpf(x.numerator) / x.denominator
        return ctx.log(x)

    def to_float(self, x: Any) -> float:
        if isinstance(x, Fraction):
            return x.numerator / x.denominator
        return float(x)

    def format(self, x: Any) -> str:
        """Text form with enough digits to be diff-stable."""
        if self.kind == FLOAT64:
            return format(float(x), ".17g")
        if self.kind == BIGFLOAT:
            return mpmath.nstr(x, self.digits, strip_zeros=False)
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return str(x)


def to_float(x: Any) -> float:
    """Float value of any supported number type."""
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x)
