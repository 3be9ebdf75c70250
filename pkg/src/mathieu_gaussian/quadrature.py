"""Double-exponential quadrature on the positive real axis.

Finite pieces use the tanh-sinh rule and half-lines the exp-sinh rule.
Each rule is refined by halving the step (reusing previous nodes) until
two successive estimates agree; the reported error is that difference
times a safety factor of 100.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

from .arith import PrecisionContext
from .errors import ConvergenceError, DomainError

SAFETY = 100
MAX_LEVEL = 12
T_CAP = 7  # |t| beyond which DE weights are far below any working precision

_node_cache: dict = {}
_node_lock = threading.Lock()


@dataclass(frozen=True)
class QuadResult:
    value: object
    error: object
    levels: int
    evaluations: int


def _cached_node(kind: str, prec: int, t_num: int, level: int, m):
    """(offset, weight) at t = t_num / 2**level for the standard rule."""
    key = (kind, prec, t_num, level)
    hit = _node_cache.get(key)
    if hit is None:
        with m.workprec(prec + 20):
            t = m.mpf(t_num) / 2**level
            if kind == "tanh":
                # offset from the nearer endpoint is 1 - tanh(u) = e^-u / cosh u
                u = m.pi / 2 * m.sinh(t)
                off = m.exp(-u) / m.cosh(u)
                w = m.pi / 2 * m.cosh(t) / m.cosh(u) ** 2
            else:
                v = m.pi / 2 * m.sinh(t)
                off = m.exp(v)
                w = m.pi / 2 * m.cosh(t) * off
        hit = (off._mpf_, w._mpf_)
        with _node_lock:
            _node_cache[key] = hit
    return m.make_mpf(hit[0]), m.make_mpf(hit[1])


def _run(f, kind, lo, span, ctx: PrecisionContext, tol, max_level):
    """Shared refinement loop.

    For ``tanh`` the interval is [lo, lo + 2*span] and the two sides are the
    neighbourhoods of each endpoint; for ``exp`` the interval is
    [lo, inf) with length scale ``span`` and the sides are t < 0 (toward lo)
    and t > 0 (toward infinity).
    """
    m = ctx.mp
    prec = m.prec
    hi = lo + 2 * span if kind == "tanh" else None

    def node(t_num, level, side):
        if kind == "tanh":
            off, w = _cached_node(kind, prec, t_num, level, m)
            x = lo + span * off if side < 0 else hi - span * off
        else:
            off, w = _cached_node(kind, prec, t_num if side > 0 else -t_num, level, m)
            x = lo + span * off
        return x, w * span

    evals = 0
    # level 0: center plus a scan outward on both sides to find the extent
    if kind == "tanh":
        center = m.pi / 2 * span * f(lo + span)
    else:
        _, w0 = node(0, 0, 1)
        center = w0 * f(lo + span)
    evals += 1
    total = center
    biggest = abs(center)
    extent = {}
    tiny = m.mpf(10) ** (-(ctx.dps + 15))
    for side in (-1, 1):
        j = 1
        quiet = 0
        while j <= T_CAP:
            x, w = node(j, 0, side)
            term = w * f(x)
            evals += 1
            total += term
            biggest = max(biggest, abs(term))
            quiet = quiet + 1 if abs(term) <= tiny * biggest else 0
            if quiet >= 2:
                break
            j += 1
        extent[side] = j
    estimate = total
    for level in range(1, max_level + 1):
        h = m.mpf(1) / 2**level
        fresh = m.mpf(0)
        for side in (-1, 1):
            limit = extent[side] * 2**level
            for j in range(1, limit + 1, 2):
                x, w = node(j, level, side)
                fresh += w * f(x)
                evals += 1
        new_estimate = estimate / 2 + h * fresh
        err = abs(new_estimate - estimate) * SAFETY
        estimate = new_estimate
        scale = max(abs(estimate), biggest * h * m.mpf(10) ** -5)
        if level >= 2 and err <= tol * scale:
            return QuadResult(estimate, err, level, evals)
    raise ConvergenceError(f"{kind}-sinh quadrature did not converge in {max_level} levels")


def tanh_sinh(f: Callable, lo, hi, ctx: PrecisionContext, tol=None, max_level: int = MAX_LEVEL) -> QuadResult:
    """Integrate ``f`` over the finite interval [lo, hi]."""
    m = ctx.mp
    lo, hi = ctx.real(lo), ctx.real(hi)
    if hi == lo:
        return QuadResult(m.mpf(0), m.mpf(0), 0, 0)
    if hi < lo:
        r = tanh_sinh(f, hi, lo, ctx, tol, max_level)
        return QuadResult(-r.value, r.error, r.levels, r.evaluations)
    tol = ctx.eps() if tol is None else tol
    return _run(f, "tanh", lo, (hi - lo) / 2, ctx, tol, max_level)


def exp_sinh(f: Callable, lo, ctx: PrecisionContext, scale=1, tol=None, max_level: int = MAX_LEVEL) -> QuadResult:
    """Integrate ``f`` over [lo, inf); ``scale`` is the decay length of f."""
    tol = ctx.eps() if tol is None else tol
    return _run(f, "exp", ctx.real(lo), ctx.real(scale), ctx, tol, max_level)


def integrate(f: Callable, points, ctx: PrecisionContext, scale=1, tol=None) -> QuadResult:
    """Integrate over consecutive pieces of ``points``; the last may be ``inf``."""
    m = ctx.mp
    parts = []
    for a, b in zip(points[:-1], points[1:]):
        if b == m.inf or b == float("inf"):
            parts.append(exp_sinh(f, a, ctx, scale=scale, tol=tol))
        else:
            parts.append(tanh_sinh(f, a, b, ctx, tol=tol))
    return QuadResult(
        m.fsum(p.value for p in parts),
        m.fsum(p.error for p in parts),
        max(p.levels for p in parts),
        sum(p.evaluations for p in parts),
    )


# ---------------------------------------------------------------------------
# Integrals used by the expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IjkSpec:
    """Parameters of the Laplace-type integral I_jk.

    I_jk = int_0^inf t^(mu-1) exp(-psi(t)) / (1+t)^beta dt with
    psi(t) = lam (1+t) + X_k/(1+t) - 2 pi k a, X_k = (pi k a)^2 / lam and
    beta = 2p - j + 1/2.
    """

    j: int
    k: int
    mu: object
    p: int
    lam: object
    a: object

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be a positive integer")

    def X(self, ctx):
        m = ctx.mp
        return (m.pi * self.k * ctx.real(self.a)) ** 2 / ctx.real(self.lam)

    def beta(self, ctx):
        return ctx.mp.mpf(2 * self.p - self.j) + ctx.mp.mpf(1) / 2

    def saddle(self, ctx):
        """t_s with 1 + t_s = pi k a / lam (may be negative)."""
        m = ctx.mp
        return m.pi * self.k * ctx.real(self.a) / ctx.real(self.lam) - 1

    def phase(self, t, ctx):
        m = ctx.mp
        lam = ctx.real(self.lam)
        return lam * (1 + t) + self.X(ctx) / (1 + t) - 2 * m.pi * self.k * ctx.real(self.a)


def integral_Ijk(spec: IjkSpec, ctx: PrecisionContext):
    """I_jk by double-exponential quadrature, split at the saddle when t_s > 0."""
    m = ctx.mp
    mu = ctx.real(spec.mu)
    if mu <= 0:
        raise DomainError("I_jk needs mu > 0")
    a = ctx.number(spec.a)
    if not (isinstance(a, type(m.mpf(0))) and a > 0):
        raise DomainError("I_jk is implemented for real a > 0 only")
    lam = ctx.real(spec.lam)
    X = spec.X(ctx)
    beta = spec.beta(ctx)
    c = 2 * m.pi * spec.k * a

    def f(t):
        u = 1 + t
        return m.power(t, mu - 1) * m.exp(-(lam * u + X / u - c)) / m.power(u, beta)

    ts = spec.saddle(ctx)
    # width of the Gaussian peak: psi''(t_s) = 2 lam^2 / (pi k a)
    width = m.sqrt(m.pi * spec.k * a / 2) / lam
    if ts > 0:
        assert abs(spec.phase(ts, ctx)) <= ctx.eps(-5) * c
        res = integrate(f, [m.mpf(0), ts, m.inf], ctx, scale=max(width, 1))
    else:
        res = integrate(f, [m.mpf(0), m.inf], ctx, scale=max(width, 1 / lam))
    return res.value


def integral_U(mu, b, lam, ctx: PrecisionContext):
    """U(mu, b, lam) = Gamma(mu)^-1 int_0^inf e^(-lam t) t^(mu-1) (1+t)^(b-mu-1) dt."""
    m = ctx.mp
    mu = ctx.real(mu)
    b = ctx.real(b)
    lam = ctx.real(lam)
    if mu <= 0:
        raise DomainError("integral representation of U needs mu > 0")
    if lam <= 0:
        raise DomainError("U needs lam > 0")
    e = b - mu - 1

    def f(t):
        return m.exp(-lam * t) * m.power(t, mu - 1) * m.power(1 + t, e)

    scale = max(m.mpf(1), mu) / lam
    res = integrate(f, [m.mpf(0), m.inf], ctx, scale=scale)
    return res.value * m.rgamma(mu)
