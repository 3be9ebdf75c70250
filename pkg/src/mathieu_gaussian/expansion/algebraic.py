"""Inverse-power (algebraic) part of the large-a expansion.

The residue at s = 1 gives the leading term a^(1-delta) H(1).  The poles of
Gamma((gamma+s)/2) at s = -2k-gamma give the terms

    (-1)^k / k! * zeta(-2k-gamma) * U(-k, 1-mu-k, lam) * a^(-2mu-2k),

which, since U(-k, 1-mu-k, lam) = (mu)_k 1F1(-k; 1-mu-k; lam), is the
familiar (mu)_k-weighted series; for mu = 0 it reduces to lam^k.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .. import specfun
from ..arith import PrecisionContext
from ..errors import DomainError
from ..oracle import SeriesParams
from .coefficients import poly_eval, residue_R_poly, u_poly
from .result import ExpansionResult, truncate


def _odd_negative(gamma: Fraction) -> bool:
    return gamma.denominator == 1 and gamma < 0 and gamma.numerator % 2 != 0


def H1(params: SeriesParams, ctx: PrecisionContext):
    """H(1) = (1/2) Gamma(z) U(z, 1+z-mu, lam) with z = (1+gamma)/2."""
    if _odd_negative(params.gamma):
        raise DomainError("gamma = -1, -3, ... puts a double pole at s = 1")
    z = (1 + params.gamma) / 2
    return specfun.gamma(z, ctx) * specfun.tricomi_u(z, 1 + z - params.mu, params.lam, ctx) / 2


def leading_term(params: SeriesParams, ctx: PrecisionContext):
    """a^(1-delta) H(1)."""
    m = ctx.mp
    a = params.a_value(ctx)
    return m.power(a, 1 - ctx.real(params.delta)) * H1(params, ctx)


def algebraic_term(k: int, params: SeriesParams, ctx: PrecisionContext):
    """The k-th term of the inverse-power series (k >= 0)."""
    m = ctx.mp
    z = specfun.zeta(-2 * k - params.gamma, ctx)
    if z == 0:
        return m.mpf(0)
    # U(-k, 1-mu-k, lam) is exact for rational mu and lam
    u = poly_eval(u_poly(k, 1 - params.mu - k), params.lam)
    coef = Fraction((-1) ** k, math.factorial(k)) * u
    a = params.a_value(ctx)
    return ctx.real(coef) * z * m.power(a, -2 * ctx.real(params.mu) - 2 * k)


def finite_pole_terms(params: SeriesParams, ctx: PrecisionContext) -> list:
    """Labelled terms of H_{mu,gamma} for gamma = 2p."""
    if params.parity != "even":
        raise DomainError("the finite pole part needs gamma = 2p")
    m = ctx.mp
    p = params.p
    a = params.a_value(ctx)
    scale = m.power(a, -ctx.real(params.delta))
    if p >= 1:
        return []
    if p == 0:
        return [("zeta(0)", -scale / 2)]
    q = -p
    out = []
    for k in range(q + 1):
        R = poly_eval(residue_R_poly(k, q, params.mu), params.lam)
        out.append((f"zeta({2 * k})R_{k}", scale * specfun.zeta(2 * k, ctx) * ctx.real(R) * m.power(a, 2 * k)))
    return out


def finite_pole_part(params: SeriesParams, ctx: PrecisionContext):
    """H_{mu,gamma}(a; lam): zero for p >= 1, -a^-delta/2 for p = 0, and a
    finite zeta-weighted sum of residues for p <= -1."""
    terms = finite_pole_terms(params, ctx)
    return ctx.mp.fsum(v for _, v in terms) if terms else ctx.mp.mpf(0)


def algebraic_expansion_general(params: SeriesParams, K: int | None = None,
                                ctx: PrecisionContext | None = None,
                                optimal: bool = True) -> ExpansionResult:
    """Leading term plus the inverse-power series.

    Summation stops after index ``K``, at the smallest term (``optimal``),
    or once terms drop below the working precision, whichever is first.
    For gamma = 2p the series is finite and is summed completely.
    """
    if ctx is None:
        raise DomainError("a PrecisionContext is required")
    if K is not None and K < 0:
        raise DomainError("K must be >= 0")
    if _odd_negative(params.gamma):
        raise DomainError("odd negative gamma needs the double-pole expansion")
    m = ctx.mp
    lead = leading_term(params, ctx)
    algebraic = [("leading", lead)]
    if params.parity == "even":
        p = params.p
        last = -1 if p >= 1 else -p
        if K is not None:
            last = min(last, K)
        for k in range(last + 1):
            algebraic.append((f"k={k}", algebraic_term(k, params, ctx)))
        omitted = algebraic_term(last + 1, params, ctx) if K is not None and last < (-p if p < 0 else -1) else m.mpf(0)
        return ExpansionResult.build(ctx, algebraic, K=last, est_truncation_error=abs(omitted))
    tr = truncate(lambda k: algebraic_term(k, params, ctx), ctx, scale=lead, limit=K, optimal=optimal)
    for k, t in enumerate(tr.terms):
        algebraic.append((f"k={k}", t))
    return ExpansionResult.build(ctx, algebraic, K=len(tr.terms) - 1,
                                 est_truncation_error=abs(tr.first_omitted))
