"""Precision contexts and number conversion.

Every computation in the package runs under a :class:`PrecisionContext`.
Real values are ``mpf`` and complex values ``mpc`` objects owned by the
context's private mpmath context, so no global ``mp.dps`` is ever touched.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import MPContext
from mpmath import libmp
from mpmath.ctx_mp_python import _mpc, _mpf

from .errors import DomainError, PrecisionError

MIN_DIGITS = 16
DEFAULT_GUARD = 10
DEFAULT_DIGITS = 50

# Base classes of the mpf/mpc types of every mpmath context; used in
# isinstance checks and as annotation aliases.
HPReal = _mpf
HPComplex = _mpc


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for one top-level computation.

    ``decimal_digits`` is the accuracy callers ask for; ``guard_digits`` are
    carried on top of it for intermediate cancellation.  The underlying
    mpmath context is created lazily per thread, which makes a single
    ``PrecisionContext`` safe to share read-only between threads.
    """

    decimal_digits: int
    guard_digits: int = DEFAULT_GUARD
    _local: threading.local = field(
        default_factory=threading.local, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if int(self.decimal_digits) != self.decimal_digits:
            raise PrecisionError("decimal_digits must be an integer")
        if self.decimal_digits < MIN_DIGITS:
            raise PrecisionError(
                f"decimal_digits={self.decimal_digits} is below the floor of {MIN_DIGITS}"
            )
        if self.guard_digits < 0:
            raise PrecisionError("guard_digits must be non-negative")

    @property
    def dps(self) -> int:
        """Internal working precision in decimal digits."""
        return self.decimal_digits + self.guard_digits

    @property
    def mp(self) -> MPContext:
        ctx = getattr(self._local, "ctx", None)
        if ctx is None:
            ctx = MPContext()
            ctx.dps = self.dps
            self._local.ctx = ctx
        return ctx

    @property
    def prec(self) -> int:
        return self.mp.prec

    def eps(self, loss: int = 0):
        """``10**-(decimal_digits - loss)`` as a context number."""
        return self.mp.mpf(10) ** (-(self.decimal_digits - loss))

    def real(self, x):
        """Convert ``x`` to an ``mpf`` at working precision.

        Decimal strings and Fractions are converted exactly (up to rounding at
        the working precision), never via binary floats.
        """
        m = self.mp
        if isinstance(x, Fraction) or (isinstance(x, Rational) and not isinstance(x, int)):
            return m.mpf(x.numerator) / x.denominator
        if isinstance(x, (complex, _mpc)):
            raise DomainError(f"expected a real number, got {x!r}")
        return m.mpf(x)

    def number(self, x):
        """Convert to ``mpf`` or ``mpc`` depending on the value."""
        m = self.mp
        if isinstance(x, (complex, _mpc)):
            v = m.mpc(x)
            return v if v.imag != 0 else v.real
        if isinstance(x, str) and ("j" in x or "J" in x):
            v = m.mpmathify(x.replace(" ", ""))
            return v if not isinstance(v, _mpc) or v.imag != 0 else v.real
        return self.real(x)

    def check_finite(self, x, what: str = "result"):
        if not self.mp.isfinite(x):
            raise ArithmeticError(f"{what} is not finite: {x}")
        return x

    def to_str(self, x) -> str:
        """Decimal string that round-trips through :meth:`parse` at this precision."""
        digits = libmp.repr_dps(self.prec)
        if isinstance(x, _mpc):
            re = _fmt(self.mp.mpf(x.real), digits)
            im = _fmt(self.mp.mpf(x.imag), digits)
            sign = "" if im.startswith("-") else "+"
            return f"{re}{sign}{im}j"
        return _fmt(self.mp.mpf(x), digits)

    def parse(self, s: str):
        return self.number(s)


def _fmt(x, digits: int) -> str:
    # scientific notation outside 1e-4 .. 1e8
    return libmp.to_str(x._mpf_, digits, min_fixed=-4, max_fixed=8)


def ctx_new(decimal_digits: int = DEFAULT_DIGITS, guard_digits: int = DEFAULT_GUARD) -> PrecisionContext:
    return PrecisionContext(decimal_digits, guard_digits)


def as_fraction(x) -> Fraction | None:
    """Exact rational value of ``x`` when it has one, else ``None``.

    Ints, Fractions, decimal strings and binary floats are exact; mpf values
    are exact too (they are dyadic rationals).
    """
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            return None
    if isinstance(x, _mpf):
        sign, man, exp, _ = x._mpf_
        if not man and exp:  # inf / nan
            return None
        v = Fraction(man) * (Fraction(2) ** exp)
        return -v if sign else v
    return None


def is_integer(x) -> bool:
    f = as_fraction(x)
    return f is not None and f.denominator == 1


def in_sector(a, ctx: PrecisionContext | None = None) -> bool:
    """True iff ``|arg a| < pi/4``.

    Tested as ``Re a > |Im a|``.  Points within a few ulps of the boundary
    rays are classified as outside so that ``3*exp(i*pi/4)`` built at finite
    precision is rejected consistently.
    """
    ctx = ctx or ctx_new(MIN_DIGITS)
    z = ctx.mp.mpc(ctx.number(a))
    if z == 0:
        raise DomainError("a = 0 has no argument")
    margin = abs(z) * ctx.mp.mpf(10) ** (-(ctx.dps - 5))
    return z.real - abs(z.imag) > margin
