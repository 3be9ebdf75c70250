"""Coefficient families of the expansions.

Everything that is a polynomial in lam is available both as an exact
coefficient list (``*_poly``, lowest degree first) and as a value: exact
when lam is rational and no context is given, otherwise at context
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ..arith import PrecisionContext, as_fraction
from ..errors import DomainError
from ..specfun import pochhammer

HALF = Fraction(1, 2)

Poly = tuple  # tuple of Fractions, index = power of lam


def poly_eval(poly: Poly, x, ctx: PrecisionContext | None = None):
    """Horner evaluation; exact when ``ctx`` is None and ``x`` is rational."""
    if ctx is None:
        xf = as_fraction(x)
        if xf is None:
            raise DomainError("exact evaluation needs a rational argument")
        acc = Fraction(0)
        for c in reversed(poly):
            acc = acc * xf + c
        return acc
    m = ctx.mp
    xv = ctx.number(x)
    acc = m.mpf(0)
    for c in reversed(poly):
        acc = acc * xv + ctx.real(c)
    return acc


def poly_str(poly: Poly, var: str = "lam") -> str:
    parts = []
    for n, c in enumerate(poly):
        if c == 0:
            continue
        if n == 0:
            mono = str(c)
        else:
            base = var if n == 1 else f"{var}^{n}"
            mono = base if c == 1 else f"-{base}" if c == -1 else f"{c}*{base}"
        parts.append(mono)
    if not parts:
        return "0"
    out = parts[0]
    for s in parts[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


def _value(poly: Poly, lam, ctx):
    return poly_eval(poly, lam, ctx)


# ---------------------------------------------------------------------------
# c_j and c_hat_j(r)
# ---------------------------------------------------------------------------


def coeff_c(j: int, p: int, ctx: PrecisionContext | None = None) -> Fraction:
    """c_j = (-p)_j (-p+1/2)_j / j!, checked against (-2p)_{2j} / (4^j j!)."""
    if j < 0:
        raise DomainError("j must be >= 0")
    first = Fraction(pochhammer(Fraction(-p), j) * pochhammer(Fraction(-p) + HALF, j)) / math.factorial(j)
    second = Fraction(pochhammer(-2 * p, 2 * j), 4**j * math.factorial(j))
    assert first == second, (j, p, first, second)
    return first


def coeff_c_hat(j: int, r: int, m: int, p: int, ctx: PrecisionContext | None = None) -> Fraction:
    """c_hat_j(r) = (m-p+r)_j (m-p+r+1/2)_j / j!."""
    if j < 0 or r < 0:
        raise DomainError("j and r must be >= 0")
    b = Fraction(m - p + r)
    return Fraction(pochhammer(b, j) * pochhammer(b + HALF, j)) / math.factorial(j)


# ---------------------------------------------------------------------------
# C_r(m, p, lam)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def coeff_C_poly_convolution(r: int, m: int, p: int) -> Poly:
    """sum_n (-lam)^n (m)_n / n! * c_hat_{r-n}(n), as a lam-polynomial."""
    if r < 0:
        raise DomainError("r must be >= 0")
    return tuple(
        Fraction((-1) ** n * pochhammer(m, n), math.factorial(n)) * coeff_c_hat(r - n, n, m, p)
        for n in range(r + 1)
    )


@lru_cache(maxsize=None)
def coeff_C_poly_hypergeometric(r: int, m: int, p: int) -> Poly | None:
    """(2m-2p)_{2r} / (4^r r!) * 2F2(-r, m; m-p, m-p+1/2; lam).

    Returns None when the lower parameter m-p reaches zero before the
    series terminates.
    """
    if r < 0:
        raise DomainError("r must be >= 0")
    pref = Fraction(pochhammer(2 * m - 2 * p, 2 * r), 4**r * math.factorial(r))
    b1 = Fraction(m - p)
    b2 = b1 + HALF
    out = [Fraction(1)]
    term = Fraction(1)
    # (-r)_n ends the series after r steps, (m)_n after 0 when m = 0
    deg = 0 if m == 0 else r
    for n in range(deg):
        if b1 + n == 0:
            return None
        term = term * (-r + n) * (m + n) / ((b1 + n) * (b2 + n) * (n + 1))
        out.append(term)
    return tuple(pref * c for c in out)


def coeff_C_poly(r: int, m: int, p: int) -> Poly:
    conv = coeff_C_poly_convolution(r, m, p)
    hyp = coeff_C_poly_hypergeometric(r, m, p)
    if hyp is not None:
        width = max(len(conv), len(hyp))
        a = list(conv) + [Fraction(0)] * (width - len(conv))
        b = list(hyp) + [Fraction(0)] * (width - len(hyp))
        assert a == b, (r, m, p, conv, hyp)
    return conv


def coeff_C(r: int, m: int, p: int, lam, ctx: PrecisionContext | None = None):
    return _value(coeff_C_poly(r, m, p), lam, ctx)


# ---------------------------------------------------------------------------
# A_l and B_{r l}
# ---------------------------------------------------------------------------


def coeff_A_poly(l: int, m: int) -> Poly:
    """A_l = (-1)^l lam^(m-1-l) / ((m-1-l)! l!)."""
    if m < 1 or not 0 <= l <= m - 1:
        raise DomainError("need m >= 1 and 0 <= l <= m-1")
    deg = m - 1 - l
    return tuple([Fraction(0)] * deg + [Fraction((-1) ** l, math.factorial(deg) * math.factorial(l))])


def coeff_A(l: int, m: int, lam, ctx: PrecisionContext | None = None):
    return _value(coeff_A_poly(l, m), lam, ctx)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _rising_in_s(c0: Fraction, slope: Fraction, n: int) -> list:
    """Coefficients in s of (c0 + slope*s)_n."""
    out = [Fraction(1)]
    for i in range(n):
        out = _poly_mul(out, [c0 + i, slope])
    return out


@lru_cache(maxsize=None)
def coeff_B_row(l: int, p: int) -> tuple:
    """(B_0l, ..., B_ll) with (1-p+s/2)_l = sum_r B_rl (s+1)_r.

    Expand the left side in powers of s and peel off the rising-factorial
    basis from the top degree down.
    """
    if l < 0:
        raise DomainError("l must be >= 0")
    rem = _rising_in_s(Fraction(1 - p), HALF, l)
    row = [Fraction(0)] * (l + 1)
    for r in range(l, -1, -1):
        basis = _rising_in_s(Fraction(1), Fraction(1), r)
        c = rem[r] / basis[r]
        row[r] = c
        for i in range(r + 1):
            rem[i] -= c * basis[i]
    assert all(x == 0 for x in rem)
    return tuple(row)


def coeff_B(r: int, l: int, p: int, ctx: PrecisionContext | None = None) -> Fraction:
    if not 0 <= r <= l:
        raise DomainError("need 0 <= r <= l")
    return coeff_B_row(l, p)[r]


# ---------------------------------------------------------------------------
# Residues R_k(mu, q) and truncated exponentials
# ---------------------------------------------------------------------------


def u_poly(n: int, b) -> Poly:
    """Coefficients in z of U(-n, b, z) = (-1)^n sum_i C(n,i) (b+i)_{n-i} (-z)^i."""
    from ..specfun import _u_coefficients

    return tuple(Fraction(c) for c in _u_coefficients(n, as_fraction(b)))


def residue_R_poly(k: int, q: int, mu) -> Poly:
    """R_k(mu, q) = (-1)^(q-k) / (q-k)! * U(k-q, 1+k-q-mu, lam) in powers of lam."""
    if q < 1:
        raise DomainError("q must be a positive integer")
    if not 0 <= k <= q:
        raise DomainError("need 0 <= k <= q")
    mu = as_fraction(mu)
    if mu is None:
        raise DomainError("residue_R_poly needs rational mu")
    n = q - k
    scale = Fraction((-1) ** n, math.factorial(n))
    return tuple(scale * c for c in u_poly(n, 1 + k - q - mu))


def residue_R(k: int, q: int, mu, lam, ctx: PrecisionContext | None = None):
    if as_fraction(mu) is not None:
        return _value(residue_R_poly(k, q, mu), lam, ctx)
    if ctx is None:
        raise DomainError("irrational mu needs a context")
    from ..specfun import tricomi_u_polynomial

    if not 0 <= k <= q:
        raise DomainError("need 0 <= k <= q")
    n = q - k
    u = tricomi_u_polynomial(n, 1 + k - q - ctx.real(mu), ctx.real(lam))
    return (-1) ** n * u / math.factorial(n)


def e_poly(k: int) -> Poly:
    """e_k(lam) = sum_{n<=k} lam^n / n!."""
    return tuple(Fraction(1, math.factorial(n)) for n in range(k + 1))


# ---------------------------------------------------------------------------
# sigma_r(a)
# ---------------------------------------------------------------------------


def sigma_sum(r: int, a, ctx: PrecisionContext):
    """sigma_r(a) = sum_{k>=1} k^r e^(-2 pi (k-1) a) by its defining sum.

    Once ((k+1)/k)^r |q| <= 1/2, with q = e^(-2 pi a), the remaining terms are
    dominated by a geometric series of ratio 1/2.
    """
    m = ctx.mp
    a = ctx.number(a)
    q = m.exp(-2 * m.pi * a)
    aq = abs(q)
    if aq >= 1:
        raise DomainError("sigma_r needs Re a > 0")
    tol = m.mpf(10) ** (-(ctx.dps + 2))
    acc = m.mpf(0)
    qk = m.mpf(1)
    k = 1
    while True:
        t = m.mpf(k) ** r * qk
        acc += t
        ratio = m.power(m.mpf(k + 1) / k, r) * aq
        if ratio <= 0.5 and abs(t) <= tol * abs(acc):
            break
        qk *= q
        k += 1
    return acc


def sigma_closed(r: int, a, ctx: PrecisionContext):
    """Closed forms for r <= 3 in terms of sinh and cosh."""
    m = ctx.mp
    a = ctx.number(a)
    pa = m.pi * a
    sh = m.sinh(pa)
    e2 = m.exp(2 * pa)
    if r == 0:
        return m.exp(pa) / (2 * sh)
    if r == 1:
        return e2 / (4 * sh**2)
    if r == 2:
        return e2 * m.cosh(pa) / (4 * sh**3)
    if r == 3:
        return e2 * (m.cosh(2 * pa) + 2) / (8 * sh**4)
    raise DomainError("closed forms exist only for r <= 3")


def sigma_r(r: int, a, ctx: PrecisionContext, check: bool = True):
    if r < 0:
        raise DomainError("r must be >= 0")
    s = sigma_sum(r, a, ctx)
    if check and r <= 3:
        c = sigma_closed(r, a, ctx)
        assert abs(c - s) <= ctx.eps(-2) * abs(s), (r, a)
    return s


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientSet:
    """Exact coefficient tables for one (m, p) pair.

    Polynomial-valued families hold lam-polynomials; ``sigma`` holds
    context-precision values and is filled only when ``a`` is supplied.
    """

    m: int
    p: int
    mu: Fraction
    c: dict = field(default_factory=dict)
    c_hat: dict = field(default_factory=dict)
    C: dict = field(default_factory=dict)
    A: dict = field(default_factory=dict)
    B: dict = field(default_factory=dict)
    R: dict = field(default_factory=dict)
    sigma: dict = field(default_factory=dict)

    @classmethod
    def build(cls, m: int, p: int, r_max: int = 3, mu=None, a=None, ctx: PrecisionContext | None = None):
        mu = Fraction(m) if mu is None else as_fraction(mu)
        out = cls(m, p, mu)
        for j in range(r_max + 1):
            out.c[j] = coeff_c(j, p)
            for r in range(r_max + 1):
                out.c_hat[(j, r)] = coeff_c_hat(j, r, m, p)
        for r in range(r_max + 1):
            out.C[r] = coeff_C_poly(r, m, p)
        for l in range(m):
            out.A[l] = coeff_A_poly(l, m)
        for l in range(max(m, r_max + 1)):
            for r, b in enumerate(coeff_B_row(l, p)):
                out.B[(r, l)] = b
        if p < 0:
            for k in range(-p + 1):
                out.R[k] = residue_R_poly(k, -p, mu)
        if a is not None and ctx is not None:
            for r in range(r_max + 1):
                out.sigma[r] = sigma_r(r, a, ctx)
        return out
