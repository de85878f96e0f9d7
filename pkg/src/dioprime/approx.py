"""Continued-fraction convergents and Dirichlet approximation of reals.

Inputs are machine doubles, so an "irrational" argument is really a rational
with a huge denominator.  The expansion stops once a partial quotient exceeds
``QUOTIENT_CUTOFF``; beyond that point the remaining digits are float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

QUOTIENT_CUTOFF = 10**15
SCAN_LIMIT = 1000


@dataclass(frozen=True)
class Convergent:
    a: int
    q: int

    @property
    def value(self) -> float:
        return self.a / self.q

    def error(self, alpha: float) -> float:
        return abs(alpha - self.a / self.q)


def partial_quotients(alpha: float, max_terms: int = 64):
    """Yield the partial quotients of ``alpha`` until the float runs out."""
    x = float(alpha)
    if not math.isfinite(x):
        raise DomainError("alpha must be finite")
    for _ in range(max_terms):
        a = math.floor(x)
        yield a
        rem = x - a
        if rem == 0.0:
            return
        x = 1.0 / rem
        if x > QUOTIENT_CUTOFF:
            return


def convergents(alpha: float, q_max: int) -> list[Convergent]:
    """All convergents ``a/q`` of ``alpha`` with ``q <= q_max``, increasing in q.

    When the second partial quotient is 1 the first two convergents share the
    denominator 1; only the later (closer) one is kept.

    >>> [(c.a, c.q) for c in convergents(2 ** 0.5, 30)]
    [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]
    """
    if q_max < 1:
        raise DomainError("q_max must be a positive integer")
    out: list[Convergent] = []
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for a in partial_quotients(alpha):
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
        if k > q_max:
            break
        if out and out[-1].q == k:
            out[-1] = Convergent(h, k)
        else:
            out.append(Convergent(h, k))
    return out


def dirichlet_scan(alpha: float, Q: int) -> Convergent:
    """Exhaustive search for ``q <= Q`` minimising ``|q*alpha - a|``."""
    best = None
    for q in range(1, Q + 1):
        a = round(q * alpha)
        d = abs(q * alpha - a)
        if best is None or d < best[0]:
            best = (d, a, q)
    _, a, q = best
    g = math.gcd(a, q)
    return Convergent(a // g, q // g)


def dirichlet_approx(alpha: float, Q: int) -> Convergent:
    """Return ``a/q`` with ``1 <= q <= Q`` and ``|alpha - a/q| <= 1/(q(Q+1))``.

    Uses the last convergent with denominator at most ``Q``; for ``Q <= 1000``
    an exhaustive scan backs it up if float rounding breaks the bound.
    """
    if Q < 1:
        raise DomainError("Q must be a positive integer")
    cands = convergents(alpha, Q)
    c = cands[-1]
    if c.error(alpha) <= 1.0 / (c.q * (Q + 1)):
        return c
    if Q <= SCAN_LIMIT:
        return dirichlet_scan(alpha, Q)
    return c


def in_q_window(q: int, X: float) -> bool:
    """Whether ``X**(1/6) <= q <= X**(5/6)``."""
    return X ** (1 / 6) <= q <= X ** (5 / 6)


@dataclass(frozen=True)
class QWindowReport:
    t: float
    a: tuple[int, int]
    q: tuple[int, int]
    errors: tuple[float, float]
    bounds: tuple[float, float]
    in_window: tuple[bool, bool]
    window: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "a": list(self.a),
            "q": list(self.q),
            "errors": list(self.errors),
            "bounds": list(self.bounds),
            "in_window": list(self.in_window),
            "window": list(self.window),
        }


def q_window_report(t: float, lambda1: float, lambda2: float, X: float, q0: int) -> QWindowReport:
    """Approximate ``lambda_i * t`` with denominators up to ``q0**2`` and flag the window.

    Purely diagnostic: nothing is asserted about the flags.
    """
    if t == 0:
        raise DomainError("t must be non-zero")
    if q0 < 2:
        raise DomainError("q0 must be at least 2")
    Q = q0 * q0
    approx = [dirichlet_approx(lam * t, Q) for lam in (lambda1, lambda2)]
    errs = tuple(c.error(lam * t) for c, lam in zip(approx, (lambda1, lambda2)))
    bounds = tuple(1.0 / (c.q * Q) for c in approx)
    return QWindowReport(
        t=t,
        a=(approx[0].a, approx[1].a),
        q=(approx[0].q, approx[1].q),
        errors=errs,
        bounds=bounds,
        in_window=tuple(in_q_window(c.q, X) for c in approx),
        window=(X ** (1 / 6), X ** (5 / 6)),
    )
