"""Result container and truncation helpers shared by the expansions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..arith import PrecisionContext
from ..errors import ConvergenceError

HARD_CAP = 2000


@dataclass(frozen=True)
class ExpansionResult:
    """A value together with the itemized terms that produced it.

    ``exponential_terms`` are indexed by k for sums over exponentials
    e^(-2 pi k a) and by r for the inverse-power series multiplying
    e^(-pi^2 k^2 a^2 / lam).  ``value`` is always the fsum of
    ``algebraic_terms`` followed by ``exponential_terms``.
    """

    value: object
    algebraic_terms: tuple
    exponential_terms: tuple
    k_max: int | None = None
    r_max: int | None = None
    K: int | None = None
    est_truncation_error: object = None

    @classmethod
    def build(cls, ctx: PrecisionContext, algebraic=(), exponential=(), **kw) -> "ExpansionResult":
        algebraic = tuple(algebraic)
        exponential = tuple(exponential)
        value = resum(ctx, algebraic, exponential)
        if kw.get("est_truncation_error") is None:
            kw["est_truncation_error"] = ctx.mp.mpf(0)
        return cls(value, algebraic, exponential, **kw)

    def resum(self, ctx: PrecisionContext):
        return resum(ctx, self.algebraic_terms, self.exponential_terms)

    def ledger(self) -> list[tuple[str, object]]:
        out = list(self.algebraic_terms)
        out.extend((f"exp[{i}]", v) for i, v in self.exponential_terms)
        return out

    @property
    def n_terms(self) -> int:
        return len(self.algebraic_terms) + len(self.exponential_terms)


def resum(ctx: PrecisionContext, algebraic, exponential):
    vals = [v for _, v in algebraic] + [v for _, v in exponential]
    return ctx.mp.fsum(vals) if vals else ctx.mp.mpf(0)


@dataclass(frozen=True)
class Truncation:
    terms: tuple
    first_omitted: object
    reason: str  # "limit", "smallest", "floor" or "zero"


def truncate(term: Callable[[int], object], ctx: PrecisionContext, scale=None,
             start: int = 0, limit: int | None = None, optimal: bool = True) -> Truncation:
    """Sum an asymptotic series up to a stopping rule.

    Terms ``term(start), term(start+1), ...`` are accepted until one of:

    * index ``limit`` has been included (``reason='limit'``);
    * with ``optimal``, a term exceeds its predecessor in magnitude, in which
      case the predecessor (the smallest term) becomes the first omitted one
      (``'smallest'``);
    * a term falls below 10^-digits of ``scale`` (``'floor'``), or is exactly
      zero after a run of nonzero terms ends the series (``'zero'``).

    ``first_omitted`` is the term that was left out.
    """
    m = ctx.mp
    floor = ctx.eps() * abs(scale) if scale is not None else None
    accepted = []
    prev = None
    k = start
    while True:
        if k - start > HARD_CAP:
            raise ConvergenceError("asymptotic series did not reach a stopping point")
        t = term(k)
        if t == 0:
            return Truncation(tuple(accepted), m.mpf(0), "zero")
        if floor is not None and abs(t) < floor:
            return Truncation(tuple(accepted), t, "floor")
        if optimal and prev is not None and abs(t) > abs(prev):
            smallest = accepted.pop()
            return Truncation(tuple(accepted), smallest, "smallest")
        accepted.append(t)
        prev = t
        if limit is not None and k >= limit:
            return Truncation(tuple(accepted), term(k + 1), "limit")
        k += 1
