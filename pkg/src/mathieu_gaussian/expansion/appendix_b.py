"""Large-a expansion for gamma = -1, where s = 1 is a double pole.

The residue at s = 1 now contains log a.  Three cases are handled:

* non-integer mu: contributions from both halves of H(s), with the second
  carrying Gamma(-mu) (the 1/mu from its Laurent expansion at s = 1);
* mu = 1: the limiting form built from tau(n) = sum_{r=1}^n 1/(r+1);
* mu = 0: H(s) = Gamma((s-1)/2) lam^((1-s)/2) / 2, whose double-pole residue
  with zeta(s) a^s is a (log a + gamma_E/2 - log(lam)/2).

Other positive integers mu are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .. import specfun
from ..arith import PrecisionContext
from ..errors import DomainError
from ..oracle import SeriesParams
from .algebraic import algebraic_term
from .result import ExpansionResult, truncate


def tau(n: int) -> Fraction:
    return sum((Fraction(1, r + 1) for r in range(1, n + 1)), Fraction(0))


def tau_series(lam, ctx: PrecisionContext):
    """sum_{n>=1} lam^n tau(n) / (2)_n.

    tau(n) < log(n+1), so once lam/(n+2) <= 1/4 the remaining terms shrink by
    a factor of at most 1/2 each.
    """
    m = ctx.mp
    lam = ctx.real(lam)
    tol = m.mpf(10) ** (-(ctx.dps + 2))
    acc = m.mpf(0)
    pw = m.mpf(1)  # lam^n / (2)_n
    t_sum = Fraction(0)
    n = 0
    while True:
        n += 1
        pw = pw * lam / (n + 1)
        t_sum += Fraction(1, n + 1)
        t = pw * ctx.real(t_sum)
        acc += t
        if lam / (n + 2) <= 0.25 and abs(t) <= tol * abs(acc):
            return acc


def double_pole_terms(params: SeriesParams, ctx: PrecisionContext) -> list:
    """Labelled pieces of the residue at s = 1."""
    m = ctx.mp
    mu = params.mu
    a = params.a_value(ctx)
    lam = ctx.real(params.lam)
    pre = m.power(a, -2 * ctx.real(mu))  # a^(1-delta)
    ge = m.euler
    if mu == 0:
        return [("log", pre * (m.log(a) + ge / 2 - m.log(lam) / 2))]
    if mu == 1:
        brace = (m.exp(lam) * (m.log(lam) + ge - 1) + m.log(a * a / lam) + ge + 1
                 - lam * tau_series(lam, ctx))
        return [("log", pre * brace / 2)]
    if mu.denominator == 1:
        raise DomainError("gamma = -1 is implemented for mu = 0, 1 or non-integer mu")
    f22 = specfun.hypergeometric_series([1, 1], [2, 2 - mu], params.lam, ctx)
    head = m.log(a) + ge / 2 - specfun.digamma(mu, ctx) / 2 + lam / (2 * (1 - ctx.real(mu))) * f22
    h2 = m.power(lam, ctx.real(mu)) * specfun.gamma(-mu, ctx) * specfun.kummer_1f1(mu, 1 + mu, params.lam, ctx) / 2
    return [("log", pre * head), ("H2", pre * h2)]


def gamma_minus1_expansion(mu, lam, a, k_max: int | None = None,
                           ctx: PrecisionContext | None = None,
                           optimal: bool = True) -> ExpansionResult:
    """Expansion of S_{mu,-1}(a; lam): double-pole residue plus the k >= 1
    inverse-power terms with zeta(1-2k), truncated like the general series."""
    if ctx is None:
        raise DomainError("a PrecisionContext is required")
    params = SeriesParams(mu, -1, lam, a)
    head = double_pole_terms(params, ctx)
    scale = ctx.mp.fsum(v for _, v in head)
    tr = truncate(lambda k: algebraic_term(k, params, ctx), ctx, scale=scale, start=1,
                  limit=k_max, optimal=optimal)
    algebraic = head + [(f"k={k + 1}", t) for k, t in enumerate(tr.terms)]
    return ExpansionResult.build(ctx, algebraic, K=len(tr.terms),
                                 est_truncation_error=abs(tr.first_omitted))
