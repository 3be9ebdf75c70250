"""Special-function kernels evaluated under a :class:`PrecisionContext`.

Gamma, digamma and erfc delegate to mpmath.  The Riemann zeta function,
Bernoulli numbers, Pochhammer symbols and the confluent hypergeometric
functions are implemented here; mpmath's versions are only used by the
tests as independent references.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from .arith import PrecisionContext, as_fraction, is_integer
from .errors import ConvergenceError, DomainError

MAX_SERIES_TERMS = 100_000


def _nonpositive_integer(x) -> bool:
    f = as_fraction(x)
    return f is not None and f.denominator == 1 and f <= 0


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


class BernoulliTable:
    """Exact Bernoulli numbers B_0, B_1 = -1/2, B_2, ... built on demand.

    The table only ever grows; reads of already-computed entries need no
    locking.
    """

    def __init__(self):
        self.values: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def extend(self, n: int) -> None:
        if n < len(self.values):
            return
        with self._lock:
            vals = self.values
            for m in range(len(vals), n + 1):
                if m > 1 and m % 2 == 1:
                    vals.append(Fraction(0))
                    continue
                # sum_{k=0}^{m} C(m+1, k) B_k = 0
                acc = Fraction(0)
                c = 1
                for k in range(m):
                    acc += c * vals[k]
                    c = c * (m + 1 - k) // (k + 1)
                vals.append(-acc / (m + 1))

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        self.extend(n)
        return self.values[n]


BERNOULLI = BernoulliTable()


def bernoulli(n: int) -> Fraction:
    return BERNOULLI[n]


# ---------------------------------------------------------------------------
# Gamma family (delegated)
# ---------------------------------------------------------------------------


def gamma(z, ctx: PrecisionContext):
    z = ctx.number(z)
    if _nonpositive_integer(z):
        raise DomainError(f"gamma has a pole at {z}")
    return ctx.mp.gamma(z)


def rgamma(z, ctx: PrecisionContext):
    """1/Gamma(z); zero at the poles."""
    return ctx.mp.rgamma(ctx.number(z))


def digamma(x, ctx: PrecisionContext):
    x = ctx.real(x)
    if _nonpositive_integer(x):
        raise DomainError(f"digamma has a pole at {x}")
    return ctx.mp.digamma(x)


def erfc(x, ctx: PrecisionContext):
    return ctx.mp.erfc(ctx.real(x))


def pochhammer(a, n: int, ctx: PrecisionContext | None = None):
    """Rising factorial (a)_n.

    Without a context the product is formed in the arithmetic of ``a``
    itself, so ints and Fractions give exact results.
    """
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    if ctx is not None:
        a = ctx.number(a)
        out = ctx.mp.mpf(1)
    else:
        out = 1
    for i in range(n):
        out *= a + i
    return out


# ---------------------------------------------------------------------------
# Riemann zeta at real arguments
# ---------------------------------------------------------------------------


@lru_cache(maxsize=16)
def _borwein_d(n: int) -> tuple[Fraction, ...]:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    out = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        out.append(n * acc)
    return tuple(out)


def _zeta_eta(s, ctx: PrecisionContext):
    """Zeta for real s > 0, s != 1, from the accelerated alternating series."""
    m = ctx.mp
    one_minus = 1 - m.power(2, 1 - s)
    loss = max(0, int(-m.log10(abs(one_minus)))) if one_minus != 0 else 0
    with m.extradps(loss + 5):
        # error ~ 3 / (3 + sqrt 8)^n
        n = int((ctx.dps + loss + 10) * math.log(10) / math.log(3 + math.sqrt(8))) + 2
        d = _borwein_d(n)
        dn = d[n]
        terms = []
        for k in range(n):
            c = d[k] - dn
            terms.append((-1) ** k * (m.mpf(c.numerator) / c.denominator) / m.power(k + 1, s))
        dn = m.mpf(dn.numerator) / dn.denominator
        val = -m.fsum(terms) / (dn * one_minus)
    return +val


def zeta(s, ctx: PrecisionContext):
    """Riemann zeta at a real argument.

    Integer arguments where a Bernoulli closed form exists (0, negative
    integers, positive even integers) are evaluated from the exact table.
    Other arguments with s > 0 use the accelerated eta series and s < 0 the
    reflection formula.
    """
    m = ctx.mp
    f = as_fraction(s)
    if f is not None and f.denominator == 1:
        k = int(f)
        if k == 1:
            raise DomainError("zeta has a pole at s = 1")
        r = zeta_rational(k)
        if r is not None:
            return m.mpf(r.numerator) / r.denominator
        if k > 0 and k % 2 == 0:
            b = bernoulli(k)
            num = abs(b) * Fraction(2**k, 2 * math.factorial(k))
            return m.mpf(num.numerator) / num.denominator * m.pi**k
        return _zeta_eta(m.mpf(k), ctx)
    s = ctx.real(s)
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if s > 0:
        return _zeta_eta(s, ctx)
    with m.extradps(10):
        t = 1 - s
        val = m.power(2, s) * m.power(m.pi, s - 1) * m.sinpi(s / 2) * m.gamma(t) * _zeta_eta(t, ctx)
    return +val


def zeta_rational(k: int) -> Fraction | None:
    """Exact zeta(k) for integers k <= 0, else None."""
    if k == 0:
        return Fraction(-1, 2)
    if k < 0:
        n = -k
        if n % 2 == 0:
            return Fraction(0)
        # zeta(-n) = -B_{n+1}/(n+1) for odd n
        return -bernoulli(n + 1) / (n + 1)
    return None


# ---------------------------------------------------------------------------
# Hypergeometric series
# ---------------------------------------------------------------------------


def _terminating_degree(upper) -> int | None:
    degs = [-int(as_fraction(a)) for a in upper if _nonpositive_integer(a)]
    return min(degs) if degs else None


def hyp_terminating(upper, lower, z):
    """Terminating pFq evaluated in the arithmetic of its arguments.

    One upper parameter must be a nonpositive integer.  With Fraction
    inputs the result is exact.  A lower parameter that hits zero before
    the series ends raises :class:`DomainError`.
    """
    deg = _terminating_degree(upper)
    if deg is None:
        raise DomainError("series does not terminate")
    term = Fraction(1)
    acc = term
    for n in range(deg):
        num = 1
        for a in upper:
            num *= a + n
        den = n + 1
        for b in lower:
            if b + n == 0:
                raise DomainError(f"lower parameter {b} reaches zero before termination")
            den *= b + n
        term = term * num * z / den
        acc += term
    return acc


def hypergeometric_series(upper, lower, z, ctx: PrecisionContext):
    """pFq(upper; lower; z) by its power series, for p <= q (or terminating).

    Summation continues until the term ratio is bounded below 1/2 and the
    geometric tail bound is under the working tolerance.  If cancellation
    eats into the guard digits the sum is redone at higher precision.
    """
    m = ctx.mp
    deg = _terminating_degree(upper)
    if deg is None:
        if len(upper) > len(lower):
            raise DomainError("only p <= q series are entire")
        for b in lower:
            if _nonpositive_integer(b):
                raise DomainError(f"lower parameter {b} is a nonpositive integer")
    else:
        for b in lower:
            if _nonpositive_integer(b) and -as_fraction(b) < deg:
                raise DomainError(f"lower parameter {b} reaches zero before termination")
    extra = 5
    for _ in range(4):
        with m.extradps(extra):
            up = [ctx.number(a) for a in upper]
            lo = [ctx.number(b) for b in lower]
            zz = ctx.number(z)
            term = m.mpf(1)
            terms = [term]
            acc = term
            big = abs(term)
            tol = m.mpf(10) ** (-(ctx.dps + 2))
            n = 0
            while True:
                if deg is not None and n >= deg:
                    break
                num = zz
                for a in up:
                    num *= a + n
                den = m.mpf(n + 1)
                for b in lo:
                    den *= b + n
                term = term * num / den
                terms.append(term)
                big = max(big, abs(term))
                n += 1
                acc += term
                if deg is None:
                    ratio = _tail_ratio(up, lo, n, zz)
                    # tail <= |t| r / (1 - r) <= 2 r |t|
                    if ratio is not None and ratio < 0.5 and abs(term) * 2 * ratio <= tol * abs(acc):
                        break
                    if n > MAX_SERIES_TERMS:
                        raise ConvergenceError("hypergeometric series did not converge")
            total = m.fsum(terms)
        if total == 0:
            return +total
        loss = m.log10(big / abs(total))
        if loss < extra - 3:
            return +total
        extra = int(loss) + 10
    return +total


def _tail_ratio(up, lo, n, z):
    """sup over j >= n of |t_{j+1} / t_j| for real parameters, or None.

    Once every a+j and b+j is positive, each (a+j)/(b+j) moves monotonically
    toward 1 and 1/(j+1), 1/(b+j) decrease, so the value at j = n bounds the
    rest.
    """
    if any(a + n <= 0 for a in up) or any(b + n <= 0 for b in lo):
        return None
    r = abs(z) / (n + 1)
    for a, b in zip(up, lo):
        q = (a + n) / (b + n)
        r *= q if q > 1 else 1
    for b in lo[len(up):]:
        r /= b + n
    return r


def kummer_1f1(a, b, z, ctx: PrecisionContext):
    """Kummer's confluent hypergeometric function 1F1(a; b; z).

    A nonpositive-integer ``a = -k`` gives a polynomial of degree k, which
    is allowed even when ``b`` is a nonpositive integer provided ``b`` does
    not reach zero within the first k factors (so 1F1(-k; -k; z) is the
    truncated exponential).
    """
    return hypergeometric_series([a], [b], z, ctx)


def kummer_1f1_regularized(a, b, z, ctx: PrecisionContext):
    """1F1(a; b; z) / Gamma(b), defined for every b.

    When b = -B is a nonpositive integer the terms with n <= B vanish; the
    sum then starts at n = B + 1.
    """
    m = ctx.mp
    with m.extradps(10):
        a_ = ctx.number(a)
        b_ = ctx.number(b)
        z_ = ctx.number(z)
        n0 = 0
        if _nonpositive_integer(b):
            n0 = 1 - int(as_fraction(b))
        if _nonpositive_integer(a) and -as_fraction(a) < n0:
            return m.mpf(0)
        first = pochhammer(a_, n0, ctx) * m.power(z_, n0) / m.factorial(n0) * m.rgamma(b_ + n0)
        if first == 0:
            return +first
        # remaining series: sum_{j>=0} (a+n0)_j z^j / ((n0+1)_j (b+n0)_j) times first
        rest = hypergeometric_series([a_ + n0, 1], [b_ + n0, n0 + 1], z_, ctx)
        val = first * rest
    return +val


def _u_coefficients(n: int, b) -> list:
    # U(-n, b, z) = (-1)^n sum_i C(n,i) (b+i)_{n-i} (-z)^i ; the Pochhammer
    # factors are built from i = n downward so each costs one product
    out = [0] * (n + 1)
    poch = 1
    for i in range(n, -1, -1):
        if i < n:
            poch = poch * (b + i)
        out[i] = (-1) ** (n + i) * math.comb(n, i) * poch
    return out


def _u_polynomial(n: int, b, z):
    acc = 0
    for c in reversed(_u_coefficients(n, b)):
        acc = acc * z + c
    return acc


def tricomi_u_polynomial(n: int, b, z):
    """U(-n, b, z) for integer n >= 0, exact for Fraction ``b`` and ``z``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return _u_polynomial(n, b, z)


def tricomi_u(a, b, z, ctx: PrecisionContext):
    """Tricomi's confluent hypergeometric function U(a, b, z) for z > 0.

    Routes, in order: polynomial when a (or 1+a-b) is a nonpositive
    integer; the closed form z**(-a) when b = 1+a; the two-term Kummer
    combination for non-integer b; the Laplace integral representation
    (needs a > 0) for integer b.
    """
    m = ctx.mp
    z_ = ctx.real(z)
    if z_ <= 0:
        raise DomainError("tricomi_u needs z > 0")
    if _nonpositive_integer(a):
        return +_u_polynomial(-int(as_fraction(a)), ctx.number(b), z_)
    a_ = ctx.number(a)
    b_ = ctx.number(b)
    c = as_fraction(a) + 1 - as_fraction(b)
    if c.denominator == 1 and c <= 0:
        # U(a,b,z) = z^(1-b) U(1+a-b, 2-b, z); c = 0 is U(a, 1+a, z) = z^-a
        if c == 0:
            return m.power(z_, -a_)
        return +(m.power(z_, 1 - b_) * _u_polynomial(-int(c), 2 - b_, z_))
    if not is_integer(b):
        return _tricomi_two_term(a_, b_, z_, ctx)
    from .quadrature import integral_U

    if a_ > 0:
        return integral_U(a_, b_, z_, ctx)
    if 1 + a_ - b_ > 0:
        return m.power(z_, 1 - b_) * integral_U(1 + a_ - b_, 2 - b_, z_, ctx)
    raise DomainError(f"U({a}, {b}, z) with integer b needs a > 0 or 1+a-b > 0")


def _tricomi_two_term(a, b, z, ctx: PrecisionContext):
    m = ctx.mp
    extra = 5
    for _ in range(4):
        with m.extradps(extra):
            t1 = m.gamma(1 - b) * m.rgamma(a - b + 1) * kummer_1f1(a, b, z, ctx)
            t2 = m.gamma(b - 1) * m.rgamma(a) * m.power(z, 1 - b) * kummer_1f1(a - b + 1, 2 - b, z, ctx)
            total = t1 + t2
            big = max(abs(t1), abs(t2))
        if total == 0 or big == 0:
            return +total
        loss = m.log10(big / abs(total))
        if loss < extra - 3:
            return +total
        extra = int(loss) + 10
    return +total
