"""Ground truth by direct summation.

S_{mu,gamma}(a; lam) = sum_{n>=1} n^gamma exp(-lam n^2 / a^2) / (n^2 + a^2)^mu

is summed term by term until an explicit majorant of the tail drops below
the working tolerance.  No acceleration is used anywhere in this module.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import NamedTuple

from . import specfun
from .arith import PrecisionContext, as_fraction, ctx_new, in_sector
from .errors import DomainError

MAX_TERMS = 10_000_000


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


def exact(x) -> Fraction:
    """Exact rational value of a user-supplied real.

    Floats are read through their shortest repr, so ``0.7`` becomes 7/10
    rather than the nearest binary fraction.
    """
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite parameter {x!r}")
        return Fraction(repr(x))
    f = as_fraction(x)
    if f is None:
        raise DomainError(f"cannot read {x!r} as a real number")
    return f


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction
    im: Fraction

    def __str__(self):
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}j"


def _exact_a(a):
    if isinstance(a, ComplexRational):
        return a if a.im != 0 else a.re
    if isinstance(a, tuple):
        re_, im = exact(a[0]), exact(a[1])
    elif isinstance(a, complex):
        re_, im = exact(a.real), exact(a.imag)
    elif isinstance(a, str) and ("j" in a or "J" in a):
        z = complex(a.replace(" ", "").replace("J", "j"))
        re_, im = exact(z.real), exact(z.imag)
    elif hasattr(a, "imag") and not isinstance(a, (int, Fraction)) and getattr(a, "imag") != 0:
        re_, im = exact(a.real), exact(a.imag)
    else:
        return exact(a)
    return ComplexRational(re_, im) if im != 0 else re_


@dataclass(frozen=True)
class SeriesParams:
    """The quadruple (mu, gamma, lam, a), stored as exact rationals.

    ``a`` is a Fraction for real a and a :class:`ComplexRational` otherwise.
    """

    mu: Fraction
    gamma: Fraction
    lam: Fraction
    a: object

    def __post_init__(self):
        object.__setattr__(self, "mu", exact(self.mu))
        object.__setattr__(self, "gamma", exact(self.gamma))
        object.__setattr__(self, "lam", exact(self.lam))
        object.__setattr__(self, "a", _exact_a(self.a))
        if self.mu < 0:
            raise DomainError("mu must be >= 0")
        if self.lam <= 0:
            raise DomainError("lambda must be > 0")
        if self.a == 0:
            raise DomainError("a must be nonzero")
        if self.is_complex:
            probe = ctx_new(30)
            if not in_sector(self.a_value(probe), probe):
                raise DomainError(f"a = {self.a} lies outside |arg a| < pi/4")
        elif self.a < 0:
            raise DomainError("real a must be positive")

    @property
    def delta(self) -> Fraction:
        return 2 * self.mu - self.gamma

    @property
    def parity(self) -> str:
        """'even' for gamma = 2p, 'minus_one' for gamma = -1, else 'general'."""
        g = self.gamma
        if g.denominator == 1 and g.numerator % 2 == 0:
            return "even"
        if g == -1:
            return "minus_one"
        return "general"

    @property
    def p(self) -> int | None:
        return self.gamma.numerator // 2 if self.parity == "even" else None

    @property
    def m(self) -> int | None:
        """mu as an int when it is a non-negative integer."""
        return int(self.mu) if self.mu.denominator == 1 else None

    @property
    def is_complex(self) -> bool:
        return isinstance(self.a, ComplexRational)

    def a_value(self, ctx: PrecisionContext):
        if self.is_complex:
            return ctx.mp.mpc(ctx.real(self.a.re), ctx.real(self.a.im))
        return ctx.real(self.a)

    def with_a(self, a) -> "SeriesParams":
        return replace(self, a=a)

    def scaled_a(self, factor: Fraction) -> "SeriesParams":
        if self.is_complex:
            return replace(self, a=ComplexRational(self.a.re * factor, self.a.im * factor))
        return replace(self, a=self.a * factor)


# ---------------------------------------------------------------------------
# Direct summation
# ---------------------------------------------------------------------------


class OracleSum(NamedTuple):
    value: object
    n_terms: int
    tail_bound: object


def _upper_gamma_bound(s, x, m):
    """Elementary upper bound for Gamma(s, x), x > 0.

    For s <= 1 the integrand t^(s-1) e^-t is at most x^(s-1) e^-t on [x, inf);
    for s > 1 and x > 2(s-1) the ratio test gives a factor of at most 2.
    """
    if s <= 1:
        return m.power(x, s - 1) * m.exp(-x)
    if x > 2 * (s - 1):
        return 2 * m.power(x, s - 1) * m.exp(-x)
    return None


def _tail_majorant(N, c, beta, m):
    """Bound for sum_{n>N} n^beta exp(-c n^2) once the summand decreases past N."""
    s = (beta + 1) / 2
    g = _upper_gamma_bound(s, c * N * N, m)
    if g is None:
        return None
    return m.power(c, -s) * g / 2


def direct_sum_terms(params: SeriesParams, ctx: PrecisionContext, alternating: bool = False) -> OracleSum:
    """Direct summation with a certified tail bound.

    With Re(a^2) > 0 we have |n^2 + a^2| >= n^2, so every term is bounded by
    n^(-delta) exp(-c n^2) with c = lam Re(1/a^2).  Once that majorant is
    decreasing, the remaining tail is at most its integral, which is an
    upper incomplete gamma function.
    """
    m = ctx.mp
    a = params.a_value(ctx)
    mu = ctx.real(params.mu)
    gam = ctx.real(params.gamma)
    lam = ctx.real(params.lam)
    inv_a2 = 1 / (a * a)
    c = lam * m.re(inv_a2)
    assert c > 0, "lam Re(1/a^2) must be positive in the sector"
    a2 = a * a
    beta = -ctx.real(params.delta)
    tol = m.mpf(10) ** (-(ctx.decimal_digits + 2))
    # majorant n^beta e^{-c n^2} decreases for n^2 > beta / (2c)
    n_dec = int(math.sqrt(max(float(beta), 0.0) / (2 * float(c)))) + 1
    terms = []
    bound = None
    n = 0
    while True:
        n += 1
        t = m.power(n, gam) * m.exp(-lam * n * n * inv_a2) / m.power(n * n + a2, mu)
        if alternating and n % 2 == 0:
            t = -t
        terms.append(t)
        if n >= n_dec:
            bound = _tail_majorant(m.mpf(n), c, beta, m)
            if bound is not None and bound <= tol * abs(m.fsum(terms)):
                break
        if n > MAX_TERMS:
            raise ArithmeticError("direct summation needs too many terms")
    return OracleSum(m.fsum(terms), n, bound)


def direct_sum(params: SeriesParams, ctx: PrecisionContext):
    """S_{mu,gamma}(a; lam) to the working precision."""
    return direct_sum_terms(params, ctx).value


def alternating_sum(params: SeriesParams, ctx: PrecisionContext, check: bool = True):
    """sum (-1)^(n-1) n^gamma e^(-lam n^2/a^2) / (n^2+a^2)^mu.

    Computed as S(a) - 2^(1-delta) S(a/2); when ``check`` is set the
    directly summed alternating series is compared against it.
    """
    m = ctx.mp
    s_full = direct_sum(params, ctx)
    s_half = direct_sum(params.scaled_a(Fraction(1, 2)), ctx)
    value = s_full - m.power(2, 1 - ctx.real(params.delta)) * s_half
    if check:
        alt = direct_sum_terms(params, ctx, alternating=True).value
        # S(a) and the even part cancel, so compare on the scale of S(a)
        scale = max(abs(s_full), abs(alt))
        if abs(alt - value) > ctx.eps(-3) * scale:
            raise ArithmeticError(
                f"alternating-sum cross-check failed: {m.nstr(alt, 20)} vs {m.nstr(value, 20)}"
            )
    return value


def series_identities(a, lam, ctx: PrecisionContext) -> dict:
    """Partial-fraction identities between series with gamma = 2p <= 2mu.

    Each entry maps a name to (lhs, rhs), both by independent direct sums.
    They follow from n^2 = (n^2 + a^2) - a^2.
    """
    def S(mu, g):
        return direct_sum(SeriesParams(mu, g, lam, a), ctx)

    av = SeriesParams(0, 0, lam, a).a_value(ctx)
    a2 = av * av
    s00, s10, s20, s22 = S(0, 0), S(1, 0), S(2, 0), S(2, 2)
    return {
        "S(1,2)=S(0,0)-a^2S(1,0)": (S(1, 2), s00 - a2 * s10),
        "S(2,2)=S(1,0)-a^2S(2,0)": (s22, s10 - a2 * s20),
        "S(2,4)=S(0,0)-2a^2S(2,2)-a^4S(2,0)": (S(2, 4), s00 - 2 * a2 * s22 - a2 * a2 * s20),
    }


# ---------------------------------------------------------------------------
# Mellin transform of the summand
# ---------------------------------------------------------------------------


def mellin_H(s, params: SeriesParams, ctx: PrecisionContext, check: bool = False):
    """H(s) = int_0^inf x^(gamma+s-1) e^(-lam x^2) (1+x^2)^(-mu) dx.

    Evaluated as (1/2) Gamma(z) U(z, 1+z-mu, lam) with z = (gamma+s)/2,
    which continues H to all s except the poles z = 0, -1, -2, ...
    ``check`` adds a quadrature of the defining integral (needs z > 0).
    """
    m = ctx.mp
    sf = as_fraction(s)
    if sf is not None:
        z = (params.gamma + sf) / 2
        zv = ctx.real(z)
    else:
        z = zv = (ctx.real(params.gamma) + ctx.real(s)) / 2
    if zv <= 0 and abs(zv - m.nint(zv)) < m.mpf(10) ** (-(ctx.decimal_digits // 2)):
        raise DomainError(f"s = {s} is at (or too close to) a pole of H")
    b = 1 + z - params.mu
    value = specfun.gamma(z, ctx) * specfun.tricomi_u(z, b, params.lam, ctx) / 2
    if check:
        from .quadrature import exp_sinh

        if zv <= 0:
            raise DomainError("quadrature check needs gamma + s > 0")
        mu = ctx.real(params.mu)
        lam = ctx.real(params.lam)
        e = 2 * zv - 1

        def f(x):
            return m.power(x, e) * m.exp(-lam * x * x) / m.power(1 + x * x, mu)

        q = exp_sinh(f, 0, ctx, scale=1 / m.sqrt(lam))
        if abs(q.value - value) > ctx.eps(-5) * abs(value):
            raise ArithmeticError(f"mellin_H quadrature check failed at s={s}")
    return value


def appendixA_G(s, params: SeriesParams, ctx: PrecisionContext):
    """The entire combination G(s) whose zeros at s = delta +- 2k show that
    H(s) has no poles there.

    G(s) = Gamma(z)/Gamma(mu) F(z; 1+z-mu; lam) - lam^(mu-z) F(mu; 1-z+mu; lam)

    with z = (gamma+s)/2 and F the regularized 1F1.  Needs non-integer mu.
    """
    if params.mu.denominator == 1:
        raise DomainError("appendixA_G needs non-integer mu")
    m = ctx.mp
    sf = as_fraction(s)
    z = (params.gamma + sf) / 2 if sf is not None else (ctx.real(params.gamma) + ctx.real(s)) / 2
    mu = params.mu
    lam = params.lam
    with m.extradps(10):
        first = specfun.gamma(z, ctx) * specfun.rgamma(mu, ctx) * specfun.kummer_1f1_regularized(z, 1 + z - mu, lam, ctx)
        second = m.power(ctx.real(lam), ctx.real(mu) - ctx.real(z)) * specfun.kummer_1f1_regularized(mu, 1 - z + mu, lam, ctx)
        val = first - second
    return +val


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


_NUMERIC = ("oracle_value", "expansion_value", "abs_err", "rel_err")


@dataclass(frozen=True)
class EvalReport:
    """Oracle against expansion for one parameter point.

    ``target`` names what both values represent: ``S`` for the full series,
    ``S_hat`` for the series minus its exactly computable parts.
    """

    method: str
    target: str
    mu: Fraction
    gamma: Fraction
    lam: Fraction
    a: object
    digits: int
    guard_digits: int
    oracle_value: object
    expansion_value: object
    abs_err: object
    rel_err: object
    terms_used: int
    ledger: tuple = ()
    wall_time: float | None = field(default=None, compare=False)

    @classmethod
    def build(cls, method, target, params: SeriesParams, ctx: PrecisionContext, oracle, expansion,
              terms_used, ledger=(), wall_time=None) -> "EvalReport":
        m = ctx.mp
        err = abs(oracle - expansion)
        rel = err / abs(oracle) if oracle != 0 else m.inf
        return cls(method, target, params.mu, params.gamma, params.lam, params.a,
                   ctx.decimal_digits, ctx.guard_digits, oracle, expansion, +err, rel,
                   int(terms_used), tuple(ledger), wall_time)

    @property
    def params(self) -> SeriesParams:
        return SeriesParams(self.mu, self.gamma, self.lam, self.a)

    def context(self) -> PrecisionContext:
        return ctx_new(self.digits, self.guard_digits)

    def to_dict(self, timings: bool = False) -> dict:
        ctx = self.context()
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "wall_time":
                if timings:
                    out[f.name] = None if v is None else f"{v:.6f}"
                continue
            if f.name in _NUMERIC:
                out[f.name] = ctx.to_str(v)
            elif f.name == "ledger":
                out[f.name] = ";".join(f"{k}={ctx.to_str(x)}" for k, x in v)
            elif f.name in ("mu", "gamma", "lam", "a"):
                out[f.name] = str(v)
            else:
                out[f.name] = v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        ctx = ctx_new(int(d["digits"]), int(d["guard_digits"]))
        kw = {}
        for f in fields(cls):
            if f.name not in d:
                continue
            v = d[f.name]
            if f.name in _NUMERIC:
                v = ctx.parse(v)
            elif f.name == "ledger":
                items = [x.rsplit("=", 1) for x in v.split(";")] if v else []
                v = tuple((k, ctx.parse(x)) for k, x in items)
            elif f.name == "a":
                v = _parse_a(v)
            elif f.name in ("mu", "gamma", "lam"):
                v = Fraction(v)
            elif f.name in ("digits", "guard_digits", "terms_used"):
                v = int(v)
            elif f.name == "wall_time":
                v = None if v in (None, "") else float(v)
            kw[f.name] = v
        return cls(**kw)


_COMPLEX_RE = re.compile(r"^([+-]?[^+-]+)([+-][^+-]+)j$")


def _parse_a(s: str):
    m = _COMPLEX_RE.match(s.strip())
    if m:
        return ComplexRational(Fraction(m.group(1)), Fraction(m.group(2)))
    return Fraction(s)


def report_fieldnames(timings: bool = False) -> list[str]:
    return [f.name for f in fields(EvalReport) if timings or f.name != "wall_time"]


def reports_to_json(reports, timings: bool = False) -> str:
    return json.dumps([r.to_dict(timings) for r in reports], indent=1) + "\n"


def reports_from_json(text: str) -> list[EvalReport]:
    return [EvalReport.from_dict(d) for d in json.loads(text)]


def reports_to_csv(reports, timings: bool = False) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=report_fieldnames(timings), lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.to_dict(timings))
    return buf.getvalue()


def reports_from_csv(text: str) -> list[EvalReport]:
    return [EvalReport.from_dict(row) for row in csv.DictReader(io.StringIO(text))]
