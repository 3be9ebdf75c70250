from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mathieu_gaussian import SeriesParams, direct_sum
from mathieu_gaussian import expansion as ex
from mathieu_gaussian.errors import ConvergenceError, DomainError

from conftest import rel


def test_H1_closed_forms(ctx):
    m = ctx.mp
    lam = ctx.real(2)
    # mu=1, gamma=0: H(1) = (pi/2) e^lam erfc(sqrt lam)
    assert rel(ex.H1(SeriesParams(1, 0, 2, 3), ctx), m.pi / 2 * m.exp(lam) * m.erfc(m.sqrt(lam))) < 1e-55
    # mu=0, gamma=0: H(1) = sqrt(pi/lam) / 2
    assert rel(ex.H1(SeriesParams(0, 0, 2, 3), ctx), m.sqrt(m.pi / lam) / 2) < 1e-55
    # mu=2, gamma=0: a^-3 H(1) = sqrt(pi)/(2a^3) U(1/2, -1/2, lam)
    lead = ex.leading_term(SeriesParams(2, 0, 2, 3), ctx)
    assert rel(lead, m.sqrt(m.pi) / 54 * m.hyperu(0.5, -0.5, lam)) < 1e-55


def test_H1_rejects_double_pole(ctx):
    with pytest.raises(DomainError):
        ex.H1(SeriesParams(1, -1, 2, 3), ctx)
    with pytest.raises(DomainError):
        ex.algebraic_expansion_general(SeriesParams(1, -3, 2, 3), None, ctx)


def test_algebraic_term_mu0(ctx):
    # for mu = 0 the k-th term is zeta(-2k-gamma) (-lam)^k / k! a^-2k
    m = ctx.mp
    P = SeriesParams(0, "0.5", 2, 10)
    for k in range(5):
        want = m.zeta(-2 * k - m.mpf("0.5")) * (-2) ** k / m.factorial(k) * m.mpf(10) ** (-2 * k)
        assert rel(ex.algebraic_term(k, P, ctx), want) < 1e-55


def test_algebraic_term_pochhammer_form(ctx):
    # U(-k, 1-mu-k, lam) = (mu)_k 1F1(-k; 1-mu-k; lam)
    m = ctx.mp
    mu, lam, a = m.mpf("0.7"), 2, 10
    P = SeriesParams("0.7", "1.3", lam, a)
    for k in range(1, 5):
        U = m.rf(mu, k) * m.hyp1f1(-k, 1 - mu - k, lam)
        want = (-1) ** k / m.factorial(k) * m.zeta(-2 * k - m.mpf("1.3")) * U * m.power(a, -2 * mu - 2 * k)
        assert rel(ex.algebraic_term(k, P, ctx), want) < 1e-52


def test_finite_pole_part(ctx):
    m = ctx.mp
    assert ex.finite_pole_part(SeriesParams(1, 2, 2, 3), ctx) == 0
    assert ex.finite_pole_terms(SeriesParams(1, 2, 2, 3), ctx) == []
    assert rel(ex.finite_pole_part(SeriesParams(1, 0, 2, 3), ctx), -m.mpf(1) / 18) < 1e-55
    # p = -1: a^-delta (zeta(0) R_0 + zeta(2) R_1 a^2), R_0 = -(mu+lam), R_1 = 1
    P = SeriesParams(1, -2, 2, 3)
    want = m.power(3, -4) * (-(m.mpf(1) / 2) * (-3) + m.pi ** 2 / 6 * 9)
    assert rel(ex.finite_pole_part(P, ctx), want) < 1e-55
    with pytest.raises(DomainError):
        ex.finite_pole_terms(SeriesParams(1, "0.5", 2, 3), ctx)


def test_even_gamma_series_is_finite(ctx):
    # gamma = 2p, p <= 0: only k <= -p contribute, the rest vanish at zeta(-2k-2p)
    P = SeriesParams(1, -2, 2, 3)
    r = ex.algebraic_expansion_general(P, None, ctx)
    assert r.K == 1 and r.est_truncation_error == 0
    assert all(ex.algebraic_term(k, P, ctx) == 0 for k in range(2, 6))
    assert len(ex.algebraic_expansion_general(SeriesParams(1, 2, 2, 3), None, ctx).algebraic_terms) == 1
    r0 = ex.algebraic_expansion_general(P, 0, ctx)
    assert r0.K == 0 and r0.est_truncation_error == abs(ex.algebraic_term(1, P, ctx))


def test_even_gamma_matches_pole_part(ctx):
    # the finite series is the same pole sum written two ways
    P = SeriesParams("0.7", -4, 2, 5)
    r = ex.algebraic_expansion_general(P, None, ctx)
    alt = ex.leading_term(P, ctx) + ex.finite_pole_part(P, ctx)
    assert rel(r.value, alt) < 1e-55


def test_general_gamma_against_oracle(ctx):
    P = SeriesParams("0.7", "0.5", 1, 10)
    s = direct_sum(P, ctx)
    r = ex.algebraic_expansion_general(P, None, ctx)
    assert r.K > 20
    assert abs(s - r.value) < 1e-26 * abs(s)
    # well before the optimum the error is governed by the first omitted term
    r5 = ex.algebraic_expansion_general(P, 5, ctx, optimal=False)
    assert abs(s - r5.value) < 1.2 * r5.est_truncation_error
    assert r5.K == 5


@given(st.sampled_from(["0.5", "-0.5", "1.3", "2.5", "-1.5"]),
       st.fractions(min_value=Fraction(1, 4), max_value=Fraction(3), max_denominator=4),
       st.fractions(min_value=Fraction(1, 2), max_value=Fraction(4), max_denominator=4))
def test_mu0_expansion_converges(g, lam, dummy):
    # mu = 0 gives a convergent series: error falls to the working floor
    from mathieu_gaussian import ctx_new
    c = ctx_new(30)
    P = SeriesParams(0, g, lam, 12)
    r = ex.algebraic_expansion_general(P, None, c)
    assert rel(r.value, direct_sum(P, c)) < 1e-27


def test_complex_a(ctx):
    P = SeriesParams(1, "0.5", 2, complex(10, 1))
    r = ex.algebraic_expansion_general(P, None, ctx)
    s = direct_sum(P, ctx)
    assert abs(s - r.value) < 1e-25 * abs(s)


def test_truncate_reasons(ctx):
    m = ctx.mp
    tr = ex.truncate(lambda k: m.mpf(2) ** -k, ctx, scale=1, limit=3)
    assert tr.reason == "limit" and len(tr.terms) == 4 and tr.first_omitted == m.mpf(1) / 16
    tr = ex.truncate(lambda k: m.factorial(k) / m.mpf(5) ** k, ctx, scale=1)
    assert tr.reason == "smallest" and len(tr.terms) == 5  # t_4 = t_5, t_6 larger
    tr = ex.truncate(lambda k: m.mpf(10) ** (-10 * k), ctx, scale=1)
    assert tr.reason == "floor" and len(tr.terms) == 6
    tr = ex.truncate(lambda k: m.mpf(3 - k) if k < 3 else m.mpf(0), ctx, scale=1, optimal=False)
    assert tr.reason == "zero" and tr.first_omitted == 0
    with pytest.raises(ConvergenceError):
        ex.truncate(lambda k: m.mpf(1), ctx, optimal=False)


def test_expansion_result(ctx):
    m = ctx.mp
    r = ex.ExpansionResult.build(ctx, [("x", m.mpf(1))], [(0, m.mpf("1e-30")), (1, m.mpf("1e-40"))], r_max=1)
    assert r.value == m.fsum([1, m.mpf("1e-30"), m.mpf("1e-40")])
    assert r.resum(ctx) == r.value
    assert r.ledger()[1][0] == "exp[0]"
    assert r.n_terms == 3
    assert r.est_truncation_error == 0
