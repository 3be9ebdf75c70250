import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mathieu_gaussian import expansion as ex
from mathieu_gaussian.errors import DomainError
from mathieu_gaussian.specfun import pochhammer

from conftest import rel

F = Fraction
HALF = F(1, 2)
LAMS = [F(0), F(1), F(2), F(7, 3), F(-5, 4)]


def poly(*cs):
    return tuple(F(c) for c in cs)


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def test_c_known_values():
    # c_j = (-2p)_{2j} / (4^j j!); zero beyond j = p
    assert [ex.coeff_c(j, 2) for j in range(4)] == [1, 3, F(3, 4), 0]
    assert ex.coeff_c(0, -3) == 1
    assert all(ex.coeff_c(j, p) == 0 for p in range(4) for j in range(p + 1, p + 4))


def test_c_hat_reduces_to_c():
    for p in range(-2, 4):
        for j in range(5):
            assert ex.coeff_c_hat(j, 0, 0, p) == ex.coeff_c(j, p)


def test_c_hat_second_form():
    for m in range(3):
        for p in range(-2, 3):
            for r in range(3):
                for j in range(4):
                    want = F(pochhammer(2 * m - 2 * p + 2 * r, 2 * j), 4 ** j * math.factorial(j))
                    assert ex.coeff_c_hat(j, r, m, p) == want


def test_C_known_values_m1():
    assert ex.coeff_C_poly(0, 1, 0) == poly(1)
    assert ex.coeff_C_poly(1, 1, 0) == poly(F(3, 2), -1)
    assert ex.coeff_C_poly(2, 1, 0) == poly(F(15, 4), -5, 1)
    assert ex.coeff_C_poly(3, 1, 0) == poly(F(105, 8), F(-105, 4), F(21, 2), -1)


def test_C_known_values_m2():
    assert ex.coeff_C_poly(0, 2, 0) == poly(1)
    assert ex.coeff_C_poly(1, 2, 0) == poly(5, -2)
    assert ex.coeff_C_poly(2, 2, 0) == poly(F(105, 4), -21, 3)
    assert ex.coeff_C_poly(3, 2, 0) == poly(F(315, 2), -189, 54, -4)


def test_C_single_1f1_forms(ctx):
    # m=1: 2 Gamma(r+3/2)/sqrt(pi) 1F1(-r;3/2;lam); m=2: 4(r+1)/(3 sqrt(pi)) Gamma(r+5/2) 1F1(-r;5/2;lam)
    m = ctx.mp
    lam = ctx.real("1.3")
    for r in range(8):
        c1 = 2 * m.gamma(r + m.mpf(3) / 2) / m.sqrt(m.pi) * m.hyp1f1(-r, m.mpf(3) / 2, lam)
        c2 = 4 * (r + 1) / (3 * m.sqrt(m.pi)) * m.gamma(r + m.mpf(5) / 2) * m.hyp1f1(-r, m.mpf(5) / 2, lam)
        assert rel(ex.coeff_C(r, 1, 0, "1.3", ctx), c1) < 1e-55
        assert rel(ex.coeff_C(r, 2, 0, "1.3", ctx), c2) < 1e-55


def test_C_mu0_is_c_hat():
    # m = 0: only the n = 0 term survives, giving (-2p)_{2r} / (4^r r!)
    for p in range(1, 4):
        for r in range(5):
            assert trim(ex.coeff_C_poly(r, 0, p)) == trim(poly(ex.coeff_c_hat(r, 0, 0, p)))


def test_C_dual_route_random():
    rng = random.Random(7)
    checked = 0
    while checked < 200:
        m, p, r = rng.randint(0, 6), rng.randint(-4, 5), rng.randint(0, 8)
        hyp = ex.coeff_C_poly_hypergeometric(r, m, p)
        if hyp is None:
            assert m - p <= 0  # the 2F2 form only breaks down for delta <= 0
            continue
        assert trim(ex.coeff_C_poly_convolution(r, m, p)) == trim(hyp), (m, p, r)
        checked += 1


def test_C_value_exact_and_float(ctx):
    assert ex.coeff_C(2, 1, 0, 2) == F(15, 4) - 10 + 4
    assert rel(ex.coeff_C(2, 1, 0, 2, ctx), ctx.real(F(-9, 4))) < 1e-55


def test_A_known_values_m2():
    assert ex.coeff_A_poly(0, 2) == poly(0, 1)
    assert ex.coeff_A_poly(1, 2) == poly(-1)
    assert ex.coeff_A(0, 2, F(3, 2)) == F(3, 2)


def test_A_general_form():
    for m in range(1, 6):
        for l in range(m):
            for lam in LAMS:
                want = F((-1) ** l) * lam ** (m - 1 - l) / (math.factorial(m - 1 - l) * math.factorial(l))
                assert ex.coeff_A(l, m, lam) == want


def test_A_domain():
    with pytest.raises(DomainError):
        ex.coeff_A_poly(2, 2)
    with pytest.raises(DomainError):
        ex.coeff_A_poly(0, 0)


@pytest.mark.parametrize("p", range(-3, 4))
def test_B_known_values(p):
    p = F(p)
    assert ex.coeff_B_row(0, p) == (1,)
    assert ex.coeff_B_row(1, p) == (HALF - p, HALF)
    assert ex.coeff_B_row(2, p) == (pochhammer(HALF - p, 2), F(3, 4) - p, F(1, 4))
    assert ex.coeff_B_row(3, p) == (pochhammer(HALF - p, 3), F(3, 8) * (5 - 10 * p + 4 * p * p),
                                    F(3, 4) * (1 - p), F(1, 8))


@given(st.integers(min_value=0, max_value=8), st.integers(min_value=-5, max_value=5),
       st.fractions(min_value=F(-10), max_value=F(10), max_denominator=12))
def test_B_identity(l, p, s):
    row = ex.coeff_B_row(l, p)
    lhs = pochhammer(1 - p + s / 2, l)
    assert lhs == sum(b * pochhammer(s + 1, r) for r, b in enumerate(row))
    assert row[-1] == F(1, 2 ** l)


def test_B_domain():
    with pytest.raises(DomainError):
        ex.coeff_B(3, 2, 0)


def test_R_known_values():
    mu = F(7, 3)
    lam_poly_q1 = [ex.residue_R_poly(k, 1, mu) for k in range(2)]
    assert lam_poly_q1 == [poly(-mu, -1), poly(1)]
    q2 = [ex.residue_R_poly(k, 2, mu) for k in range(3)]
    assert q2 == [poly(mu * (1 + mu) / 2, mu, HALF), poly(-mu, -1), poly(1)]


@given(st.fractions(min_value=F(0), max_value=F(6), max_denominator=10),
       st.fractions(min_value=F(1, 10), max_value=F(5), max_denominator=10))
def test_R_matches_tricomi(mu, lam):
    from mathieu_gaussian import ctx_new
    c = ctx_new(30)
    m = c.mp
    for q in (1, 2, 3):
        for k in range(q + 1):
            n = q - k
            want = (-1) ** n / m.factorial(n) * m.hyperu(-n, 1 + k - q - c.real(mu), c.real(lam))
            got = ex.residue_R(k, q, mu, lam, c)
            assert abs(got - want) <= 1e-25 * max(1, abs(want))


def test_R_domain():
    with pytest.raises(DomainError):
        ex.residue_R_poly(0, 0, 1)
    with pytest.raises(DomainError):
        ex.residue_R_poly(3, 2, 1)


def test_e_poly():
    assert ex.e_poly(3) == poly(1, 1, HALF, F(1, 6))


def test_poly_str_and_eval(ctx):
    p = poly(F(105, 8), F(-105, 4), F(21, 2), -1)
    assert ex.poly_str(p) == "105/8 - 105/4*lam + 21/2*lam^2 - lam^3"
    assert ex.poly_str(poly(0, 0)) == "0"
    assert ex.poly_eval(p, 2) == F(105, 8) - F(105, 2) + 42 - 8
    assert rel(ex.poly_eval(p, "0.5", ctx), ctx.real(ex.poly_eval(p, F(1, 2)))) < 1e-55
    with pytest.raises(DomainError):
        ex.poly_eval(p, "x")


@pytest.mark.parametrize("a", [1, 3, 10])
def test_sigma_closed_forms(ctx, a):
    for r in range(4):
        assert rel(ex.sigma_closed(r, a, ctx), ex.sigma_sum(r, a, ctx)) < 1e-55


def test_sigma_complex_and_high_r(ctx):
    m = ctx.mp
    a = m.mpc(2, "0.5")
    for r in range(4):
        assert abs(ex.sigma_closed(r, a, ctx) - ex.sigma_sum(r, a, ctx)) < 1e-55 * abs(ex.sigma_sum(r, a, ctx))
    with pytest.raises(DomainError):
        ex.sigma_closed(4, 1, ctx)
    # sigma_r(a) -> 1 as a grows
    assert abs(ex.sigma_r(6, 20, ctx) - 1) < 1e-50


def test_coefficient_set(ctx):
    cs = ex.CoefficientSet.build(2, -1, r_max=3, mu=2, a=3, ctx=ctx)
    assert cs.C[0] == poly(1)
    assert cs.A == {0: poly(0, 1), 1: poly(-1)}
    assert cs.B[(1, 1)] == HALF
    assert set(cs.R) == {0, 1}
    assert set(cs.sigma) == {0, 1, 2, 3}
    cs0 = ex.CoefficientSet.build(2, 0)
    assert cs0.C[3] == poly(F(315, 2), -189, 54, -4)
    assert cs0.sigma == {} and cs0.R == {}
