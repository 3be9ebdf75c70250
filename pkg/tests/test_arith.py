import threading
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mathieu_gaussian import PrecisionContext, ctx_new, in_sector
from mathieu_gaussian.arith import as_fraction, is_integer
from mathieu_gaussian.errors import DomainError, PrecisionError


def test_ctx_new_50_has_guard():
    c = ctx_new(50)
    assert c.decimal_digits == 50
    assert c.guard_digits >= 10
    assert c.dps >= 60
    assert c.mp.dps == c.dps


def test_ctx_new_16_is_minimal():
    assert ctx_new(16).decimal_digits == 16


@pytest.mark.parametrize("d", [8, 15, 0, -3])
def test_ctx_new_rejects_low_precision(d):
    with pytest.raises(PrecisionError):
        ctx_new(d)


def test_negative_guard_rejected():
    with pytest.raises(PrecisionError):
        PrecisionContext(20, -1)


def test_contexts_are_private():
    import mpmath
    before = mpmath.mp.dps
    c = ctx_new(80)
    _ = c.mp.pi
    assert mpmath.mp.dps == before
    assert ctx_new(20).mp.dps == 30


def test_context_equality_ignores_thread_state():
    assert ctx_new(40) == ctx_new(40)
    assert ctx_new(40) != ctx_new(41)


def test_real_reads_decimal_strings_exactly(ctx):
    # 0.1 via a binary float would differ in the 17th digit
    assert ctx.real("0.1") * 10 == 1
    assert ctx.real(Fraction(1, 3)) * 3 == 1


def test_to_str_round_trips(ctx):
    m = ctx.mp
    for x in (m.pi, -m.e / 7, m.mpf(10) ** -30 * m.sqrt(2), m.mpf(12345678901)):
        assert ctx.parse(ctx.to_str(x)) == x
    z = m.mpc(1, -2) / 3
    assert ctx.parse(ctx.to_str(z)) == z


def test_to_str_is_deterministic():
    a, b = ctx_new(50), ctx_new(50)
    assert a.to_str(a.mp.pi ** 7 / 3) == b.to_str(b.mp.pi ** 7 / 3)


def test_check_finite(ctx):
    with pytest.raises(ArithmeticError):
        ctx.check_finite(ctx.mp.inf)
    assert ctx.check_finite(ctx.mp.mpf(2)) == 2


def test_threads_get_their_own_mpmath_context():
    c = ctx_new(30)
    seen = []
    t = threading.Thread(target=lambda: seen.append(c.mp))
    t.start()
    t.join()
    assert seen[0] is not c.mp
    assert seen[0].dps == c.mp.dps


def test_in_sector_examples(ctx):
    m = ctx.mp
    assert in_sector(3, ctx)
    assert not in_sector(3 * m.expj(m.pi / 4), ctx)
    assert in_sector(3 * m.expj(m.pi / 8), ctx)
    assert not in_sector(-3, ctx)
    assert not in_sector(3j, ctx)


def test_in_sector_rejects_zero():
    with pytest.raises(DomainError):
        in_sector(0)


@given(st.floats(min_value=-0.78, max_value=0.78), st.floats(min_value=0.1, max_value=100))
def test_in_sector_matches_argument(theta, r):
    c = ctx_new(20)
    m = c.mp
    a = r * m.expj(theta)
    if abs(theta) < float(m.pi / 4) - 1e-9:
        assert in_sector(a, c)
    elif abs(theta) > float(m.pi / 4) + 1e-9:
        assert not in_sector(a, c)


def test_as_fraction():
    assert as_fraction("0.7") == Fraction(7, 10)
    assert as_fraction(3) == 3
    assert as_fraction(0.5) == Fraction(1, 2)
    assert as_fraction("abc") is None
    assert as_fraction(True) is None
    c = ctx_new(20)
    assert as_fraction(c.mp.mpf(3) / 8) == Fraction(3, 8)
    assert as_fraction(c.mp.inf) is None


def test_is_integer():
    assert is_integer("4")
    assert is_integer(Fraction(8, 2))
    assert not is_integer("4.5")


@given(st.integers(min_value=16, max_value=60))
def test_monotone_refinement_of_a_sum(d):
    from mathieu_gaussian import SeriesParams, direct_sum
    lo, hi = ctx_new(d), ctx_new(d + 15)
    P = SeriesParams(1, 0, 2, 3)
    x, y = direct_sum(P, lo), direct_sum(P, hi)
    assert abs(hi.mp.mpf(x) - y) <= abs(y) * hi.mp.mpf(10) ** (-(d - 2))
