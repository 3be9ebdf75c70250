"""Exponentially small contributions J(a; lam) for gamma = 2p.

Two routes are implemented:

* the exact double sum over k >= 1 and j of the Laplace integrals I_jk,
  weighted by e^(-2 pi k a) (real a > 0, mu > 0), whose j-sum terminates for
  p >= 0 and is an inverse-factorial expansion for p <= -1;
* for integer mu = m, the split J = J1 + J2, with J1 a finite combination
  of the sums sigma_r(a) and J2 an asymptotic series in lam/(pi a)^2 whose
  r-th term multiplies sum_k exp(-pi^2 k^2 a^2 / lam) / k^(2r+delta).
"""

from __future__ import annotations

from fractions import Fraction

from .. import specfun
from ..arith import PrecisionContext
from ..errors import DomainError
from ..oracle import SeriesParams, direct_sum
from ..quadrature import IjkSpec, integral_Ijk
from .algebraic import finite_pole_terms, leading_term
from .coefficients import coeff_A, coeff_B, coeff_C, coeff_c, sigma_r
from .result import ExpansionResult, truncate

K_CAP = 200


def _require_even(params: SeriesParams):
    if params.parity != "even":
        raise DomainError("exponential contributions are implemented for gamma = 2p")
    return params.p


def _require_integer_mu(params: SeriesParams):
    if params.m is None:
        raise DomainError("this route needs mu to be a non-negative integer")
    return params.m


# ---------------------------------------------------------------------------
# Gaussian k-sums
# ---------------------------------------------------------------------------


def gaussian_k_sum(expo, a, lam, ctx: PrecisionContext):
    """sum_{k>=1} exp(-pi^2 k^2 a^2 / lam) / k^expo.

    The ratio of successive moduli is at most exp(-c(2k+1)) ((k+1)/k)^max(0,-expo)
    with c = pi^2 Re(a^2) / lam; once that is below 1/2 the tail is bounded
    by the last term.
    """
    m = ctx.mp
    a = ctx.number(a)
    lam = ctx.real(lam)
    X1 = m.pi**2 * a * a / lam
    c = m.re(X1)
    if c <= 0:
        raise DomainError("Gaussian k-sum needs Re(a^2) > 0")
    e = ctx.real(expo)
    tol = m.mpf(10) ** (-(ctx.dps + 2))
    acc = m.mpf(0)
    k = 1
    while True:
        t = m.exp(-X1 * k * k) / m.power(k, e)
        acc += t
        growth = m.power(m.mpf(k + 1) / k, -e) if e < 0 else 1
        ratio = m.exp(-c * (2 * k + 1)) * growth
        if ratio <= 0.5 and abs(t) <= tol * abs(acc):
            return acc
        k += 1
        if k > K_CAP * 100:
            raise ArithmeticError("Gaussian k-sum did not converge")


# ---------------------------------------------------------------------------
# J1 and J2 for integer mu
# ---------------------------------------------------------------------------


def j1_terms(m_: int, p: int, lam, a, ctx: PrecisionContext) -> list:
    """Terms r = 0..m-1 of J1; empty when m = 0."""
    if m_ < 0:
        raise DomainError("m must be >= 0")
    if m_ == 0:
        return []
    mp = ctx.mp
    a = ctx.number(a)
    lamv = ctx.real(lam)
    sign = (-1) ** (m_ - p - 1)
    pref = sign * mp.pi * mp.power(a, 2 * p + 1) * mp.exp(lamv - 2 * mp.pi * a)
    out = []
    for r in range(m_):
        inner = sum(coeff_A(l, m_, lam) * coeff_B(r, l, p) for l in range(r, m_))
        term = pref * ctx.real(inner) * sigma_r(r, a, ctx) * (2 * mp.pi) ** r * mp.power(a, r - 2 * m_)
        out.append((r, term))
    return out


def j1_exact(m_: int, p: int, lam, a, ctx: PrecisionContext):
    """J1(a; lam): the exactly summable e^(-2 pi k a) part for mu = m."""
    terms = j1_terms(m_, p, lam, a, ctx)
    return ctx.mp.fsum(v for _, v in terms) if terms else ctx.mp.mpf(0)


def j2_term(r: int, m_: int, p: int, lam, a, ctx: PrecisionContext):
    mp = ctx.mp
    a = ctx.number(a)
    lamv = ctx.real(lam)
    C = coeff_C(r, m_, p, lam)
    if C == 0:
        return mp.mpf(0)
    delta = 2 * m_ - 2 * p
    pref = (-1) ** (m_ - p) * mp.power(lamv / (mp.pi * a * a), mp.mpf(delta) - mp.mpf(1) / 2)
    x = lamv / (mp.pi**2 * a * a)
    return pref * (-1) ** r * ctx.real(C) * mp.power(x, r) * gaussian_k_sum(2 * r + delta, a, lam, ctx)


def j2_asymptotic(m_: int, p: int, lam, a, r_max: int | None = None,
                  ctx: PrecisionContext | None = None, optimal: bool = True) -> ExpansionResult:
    """J2 summed over r = 0..r_max.

    With ``optimal`` the sum also stops at its smallest term; it always
    stops once terms fall below the working precision relative to the r = 0
    term.  ``est_truncation_error`` is the first omitted term, a heuristic
    rather than a bound.
    """
    if ctx is None:
        raise DomainError("a PrecisionContext is required")
    if r_max is not None and r_max < 0:
        raise DomainError("r_max must be >= 0")
    if m_ < 0:
        raise DomainError("m must be >= 0")
    t0 = j2_term(0, m_, p, lam, a, ctx)
    cache = {0: t0}

    def term(r):
        if r not in cache:
            cache[r] = j2_term(r, m_, p, lam, a, ctx)
        return cache[r]

    tr = truncate(term, ctx, scale=t0, limit=r_max, optimal=optimal)
    exp_terms = list(enumerate(tr.terms))
    return ExpansionResult.build(ctx, (), exp_terms, r_max=len(tr.terms) - 1,
                                 est_truncation_error=abs(tr.first_omitted))


def theorem2_total(params: SeriesParams, r_max: int | None = None,
                   ctx: PrecisionContext | None = None, optimal: bool = True) -> ExpansionResult:
    """Leading term + finite pole part + J1 + J2 for mu = m, gamma = 2p.

    The algebraic ledger lists the closed-form pieces (``leading``, the pole
    terms and ``J1[r]``); the exponential ledger holds the J2 terms by r.
    """
    if ctx is None:
        raise DomainError("a PrecisionContext is required")
    p = _require_even(params)
    m_ = _require_integer_mu(params)
    a = params.a_value(ctx)
    alg = [("leading", leading_term(params, ctx))]
    alg += finite_pole_terms(params, ctx)
    alg += [(f"J1[{r}]", v) for r, v in j1_terms(m_, p, params.lam, a, ctx)]
    j2 = j2_asymptotic(m_, p, params.lam, a, r_max, ctx, optimal)
    return ExpansionResult.build(ctx, alg, j2.exponential_terms, r_max=j2.r_max,
                                 est_truncation_error=j2.est_truncation_error)


def exact_parts(params: SeriesParams, ctx: PrecisionContext) -> dict:
    """The three exactly computable pieces subtracted in S_hat."""
    p = _require_even(params)
    m_ = _require_integer_mu(params)
    a = params.a_value(ctx)
    return {
        "leading": leading_term(params, ctx),
        "pole_part": ctx.mp.fsum(v for _, v in finite_pole_terms(params, ctx)) if p <= 0 else ctx.mp.mpf(0),
        "J1": j1_exact(m_, p, params.lam, a, ctx),
    }


def s_hat(params: SeriesParams, ctx: PrecisionContext, oracle=None):
    """S minus (leading term + finite pole part + J1).

    The difference is tiny (about 1e-22 at a = 3, lam = 2), so it is formed
    with the guard digits of ``ctx``; ``oracle`` may pass a precomputed S.
    """
    parts = exact_parts(params, ctx)
    s = direct_sum(params, ctx) if oracle is None else oracle
    return s - ctx.mp.fsum([parts["leading"], parts["pole_part"], parts["J1"]])


# ---------------------------------------------------------------------------
# Exact double sum over I_jk
# ---------------------------------------------------------------------------


def _theorem1_prefactor(params: SeriesParams, p: int, ctx: PrecisionContext):
    mp = ctx.mp
    mu = ctx.real(params.mu)
    lam = ctx.real(params.lam)
    a = params.a_value(ctx)
    return (-1) ** p * mp.power(mp.pi, mu) * mp.exp(lam) * specfun.rgamma(params.mu, ctx) * \
        mp.power(lam / (mp.pi * a * a), mu - 2 * p - mp.mpf(1) / 2)


def _block(k: int, js, params: SeriesParams, p: int, ctx: PrecisionContext):
    """k^2p e^(-2 pi k a) sum_j (-1)^j c_j (lam/(pi k a)^2)^j I_jk, per j."""
    mp = ctx.mp
    a = params.a_value(ctx)
    lam = ctx.real(params.lam)
    x = lam / (mp.pi * k * a) ** 2
    outer = mp.power(k, 2 * p) * mp.exp(-2 * mp.pi * k * a)
    out = []
    for j in js:
        c = coeff_c(j, p)
        if c == 0:
            out.append(mp.mpf(0))
            continue
        I = integral_Ijk(IjkSpec(j, k, params.mu, p, params.lam, params.a), ctx)
        out.append(outer * (-1) ** j * ctx.real(c) * mp.power(x, j) * I)
    return out


def _k_loop(params, p, js, ctx, k_max):
    """Sum blocks over k until a block is negligible and still shrinking."""
    mp = ctx.mp
    pref = _theorem1_prefactor(params, p, ctx)
    tol = mp.mpf(10) ** (-(ctx.dps + 5))
    blocks = []
    total = mp.mpf(0)
    k = 1
    while True:
        parts = _block(k, js, params, p, ctx)
        b = pref * mp.fsum(parts)
        blocks.append((k, b, parts))
        total += b
        if k_max is not None and k >= k_max:
            break
        if k >= 2 and abs(b) <= tol * abs(total) and abs(b) < abs(blocks[-2][1]):
            break
        k += 1
        if k > K_CAP:
            raise ArithmeticError("k-sum did not converge")
    return pref, blocks


def j_theorem1(params: SeriesParams, k_max: int | None = None,
               ctx: PrecisionContext | None = None) -> ExpansionResult:
    """The exact J(a; lam) for gamma = 2p with p >= 0 and real a > 0.

    For mu = 0 the exact answer is the terminating r-series of
    Gaussian k-sums; for mu > 0 it is the double sum over k and j of the
    integrals I_jk (j-sum finite since c_j = 0 for j > p).
    """
    if ctx is None:
        raise DomainError("a PrecisionContext is required")
    p = _require_even(params)
    if p < 0:
        raise DomainError("p < 0: use j_theorem1_negative_p")
    if params.is_complex or params.a <= 0:
        raise DomainError("the I_jk route is implemented for real a > 0 only")
    if params.mu == 0:
        j2 = j2_asymptotic(0, p, params.lam, params.a, p, ctx, optimal=False)
        return ExpansionResult.build(ctx, (), j2.exponential_terms, r_max=p)
    pref, blocks = _k_loop(params, p, range(p + 1), ctx, k_max)
    terms = [(k, b) for k, b, _ in blocks]
    return ExpansionResult.build(ctx, (), terms, k_max=len(terms))


def j_theorem1_negative_p(params: SeriesParams, k_max: int | None = None, j_max: int = 0,
                          ctx: PrecisionContext | None = None) -> ExpansionResult:
    """The same double sum for p <= -1, where the j-series no longer ends.

    The j-sum is cut after ``j_max``; ``est_truncation_error`` is the first
    omitted j-term of the k = 1 block.
    """
    if ctx is None:
        raise DomainError("a PrecisionContext is required")
    p = _require_even(params)
    if p >= 0:
        raise DomainError("p >= 0: use j_theorem1")
    if params.mu == 0:
        raise DomainError("mu = 0 with p <= -1: use j2_asymptotic")
    if params.is_complex or params.a <= 0:
        raise DomainError("the I_jk route is implemented for real a > 0 only")
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    pref, blocks = _k_loop(params, p, range(j_max + 1), ctx, k_max)
    terms = [(k, b) for k, b, _ in blocks]
    omitted = pref * _block(1, [j_max + 1], params, p, ctx)[0]
    return ExpansionResult.build(ctx, (), terms, k_max=len(terms), K=j_max,
                                 est_truncation_error=abs(omitted))
