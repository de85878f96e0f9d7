"""A k-fold box-smoothed indicator and its Fourier transform.

``theta`` is the indicator of ``[-a, a]`` with ``a = 7*vartheta/8`` convolved
with ``k`` normalised boxes of width ``delta = vartheta/(4k)``.  The boxes add
up to a half-width of ``vartheta/8``, so theta is 1 on ``|y| <= 3 vartheta/4``
and 0 on ``|y| >= vartheta``.  Its transform is a product of sinc factors,

    Theta(x) = sin(2 pi a x)/(pi x) * prod_j sin(pi delta x)/(pi delta x),

and the product of the reciprocal box factors is exactly
``(k / (2 pi |x| vartheta/8))**k``.

The smoothing density is a scaled Irwin-Hall density.  Its pieces are built
by repeated convolution in exact rational arithmetic, then evaluated in local
coordinates by Horner's rule.  Using ``theta(y) = F(a - |y|)`` with ``F`` the
smoothing CDF, both theta and its complement are computed from the lower tail
of ``F``, so neither loses relative accuracy near the edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

BOUND_SLACK = 1e-12


def _integrate(poly):
    """Antiderivative vanishing at 0 of a coefficient list."""
    return [Fraction(0)] + [c / (i + 1) for i, c in enumerate(poly)]


def _at_one(poly):
    return sum(poly, Fraction(0))


def _sub(p, q):
    n = max(len(p), len(q))
    p = p + [Fraction(0)] * (n - len(p))
    q = q + [Fraction(0)] * (n - len(q))
    return [a - b for a, b in zip(p, q)]


@lru_cache(maxsize=64)
def irwin_hall_pieces(k: int) -> tuple[tuple[tuple[Fraction, ...], ...], ...]:
    """Density, CDF and CDF-antiderivative pieces of a sum of ``k`` U(0,1).

    Each is a tuple of ``k`` pieces; piece ``m`` covers ``[m, m+1]`` and is a
    coefficient list in the local variable ``u = x - m``.
    """
    dens = [[Fraction(1)]]
    for j in range(1, k):
        anti = [_integrate(p) for p in dens]
        nxt = []
        for m in range(j + 1):
            piece = [Fraction(0)]
            if m - 1 >= 0:
                prev = anti[m - 1]
                piece = _sub([_at_one(prev)], prev)
            if m < j:
                piece = _sub(piece, [-c for c in anti[m]])
            nxt.append(piece)
        dens = nxt
    cdf, acc = [], Fraction(0)
    for p in dens:
        a = _integrate(p)
        a[0] += acc
        acc = _at_one(a)
        cdf.append(a)
    second, acc = [], Fraction(0)
    for p in cdf:
        a = _integrate(p)
        a[0] += acc
        acc = _at_one(a)
        second.append(a)
    as_tuple = lambda ps: tuple(tuple(p) for p in ps)
    return as_tuple(dens), as_tuple(cdf), as_tuple(second)


def _to_array(pieces) -> np.ndarray:
    deg = max(len(p) for p in pieces)
    out = np.zeros((len(pieces), deg))
    for i, p in enumerate(pieces):
        out[i, : len(p)] = [float(c) for c in p]
    return out


def _horner(coef: np.ndarray, m: np.ndarray, u: np.ndarray) -> np.ndarray:
    rows = coef[m]
    acc = rows[:, -1].copy()
    for j in range(coef.shape[1] - 2, -1, -1):
        acc = acc * u + rows[:, j]
    return acc


@dataclass(frozen=True, eq=False)
class Mollifier:
    """Smoothed indicator of ``[-vartheta, vartheta]`` with smoothness order ``k``."""

    vartheta: float
    k: int = 10

    def __post_init__(self):
        if not self.vartheta > 0:
            raise DomainError("vartheta must be positive")
        if int(self.k) != self.k or self.k < 2:
            raise DomainError("k must be an integer >= 2")
        _, cdf, second = irwin_hall_pieces(int(self.k))
        object.__setattr__(self, "_cdf", _to_array(cdf))
        object.__setattr__(self, "_second", _to_array(second))

    @property
    def a(self) -> float:
        return 7 * self.vartheta / 8

    @property
    def width(self) -> float:
        """Width ``vartheta/(4k)`` of each smoothing box."""
        return self.vartheta / (4 * self.k)

    @property
    def widths(self) -> tuple[float, ...]:
        return (self.width,) * self.k

    @property
    def mass(self) -> float:
        return 2 * self.a

    # Irwin-Hall CDF on [0, k], evaluated from whichever tail is closer.
    def _cdf_unit(self, x: np.ndarray) -> np.ndarray:
        k = self.k
        out = np.zeros_like(x)
        out[x >= k] = 1.0
        lower = (x > 0) & (x <= k / 2)
        upper = (x > k / 2) & (x < k)
        out[lower] = self._cdf_low(x[lower])
        out[upper] = 1.0 - self._cdf_low(k - x[upper])
        return out

    def _cdf_low(self, x):
        m = np.minimum(np.floor(x).astype(np.int64), self.k - 1)
        return _horner(self._cdf, m, x - m)

    def _second_unit(self, x: np.ndarray) -> np.ndarray:
        k = self.k
        out = np.zeros_like(x)
        top = x >= k
        out[top] = x[top] - k / 2
        lower = (x > 0) & (x <= k / 2)
        upper = (x > k / 2) & (x < k)
        out[lower] = self._second_low(x[lower])
        out[upper] = x[upper] - k / 2 + self._second_low(k - x[upper])
        return out

    def _second_low(self, x):
        m = np.minimum(np.floor(x).astype(np.int64), self.k - 1)
        return _horner(self._second, m, x - m)

    def smoothing_cdf(self, w):
        """CDF of the total smoothing offset (support ``[-vartheta/8, vartheta/8]``)."""
        w = np.asarray(w, dtype=float)
        return self._cdf_unit(w / self.width + self.k / 2)

    def smoothing_cdf_integral(self, w):
        """``int_{-inf}^{w} smoothing_cdf``."""
        w = np.asarray(w, dtype=float)
        return self.width * self._second_unit(w / self.width + self.k / 2)

    def theta(self, y):
        r = np.abs(np.asarray(y, dtype=float))
        # unit coordinate (vartheta - r)/width; the difference is exact near the edges
        out = self._cdf_unit((self.vartheta - r) / self.width)
        out[r >= self.vartheta] = 0.0
        out[r <= 0.75 * self.vartheta] = 1.0
        return out[()] if out.ndim == 0 else out

    def theta_complement(self, y):
        """``1 - theta(y)`` without cancellation near the plateau edge."""
        r = np.abs(np.asarray(y, dtype=float))
        out = self._cdf_unit((r - 0.75 * self.vartheta) / self.width)
        out[r >= self.vartheta] = 1.0
        out[r <= 0.75 * self.vartheta] = 0.0
        return out[()] if out.ndim == 0 else out

    def theta_integral(self, u):
        """``int_{-inf}^{u} theta(y) dy``; runs from 0 up to ``mass``."""
        u = np.asarray(u, dtype=float)
        neg = self.smoothing_cdf_integral(self.a + u)
        pos = self.mass - self.smoothing_cdf_integral(self.a - u)
        out = np.where(u <= 0, neg, pos)
        return out[()] if out.ndim == 0 else out

    def theta_hat(self, x):
        x = np.asarray(x, dtype=float)
        out = self.mass * np.sinc(2 * self.a * x) * np.sinc(self.width * x) ** self.k
        return out[()] if out.ndim == 0 else out

    def bound(self, x):
        """``min(7 vartheta/4, 1/(pi|x|), (1/(pi|x|)) (k/(2 pi |x| vartheta/8))**k)``."""
        x = np.abs(np.asarray(x, dtype=float))
        first = 7 * self.vartheta / 4
        with np.errstate(divide="ignore", over="ignore"):
            second = 1.0 / (math.pi * x)
            third = second * (self.k / (2 * math.pi * x * self.vartheta / 8)) ** self.k
        out = np.where(x == 0, first, np.minimum(first, np.minimum(second, third)))
        return out[()] if out.ndim == 0 else out

    def check_bound(self, x):
        """Whether ``|Theta(x)|`` respects :meth:`bound` (up to a 1e-12 relative slack)."""
        out = np.abs(self.theta_hat(x)) <= self.bound(x) * (1 + BOUND_SLACK)
        return bool(out) if np.ndim(out) == 0 else out

    def transition_breaks(self) -> np.ndarray:
        """Knots of theta on ``[0, vartheta]``: the plateau edge, box joints, support edge."""
        return 3 * self.vartheta / 4 + self.width * np.arange(self.k + 1)


def check_bound(m: Mollifier, x) -> bool:
    return m.check_bound(x)


def theta(m: Mollifier, y):
    return m.theta(y)


def theta_hat(m: Mollifier, x):
    return m.theta_hat(x)
