"""Circle-method objects at a fixed, finite X.

``L(t) = sum_d lambda(d) sum_{p + 2 = 0 (d)} e(p t) log p`` over primes in
``(lambda0 X, X]`` is evaluated exactly (up to rounding) from a residue index;
the main-term model ``M(t) = I(t) G`` uses the closed form of ``I``.  The
major-arc integrals are computed by adaptive Gauss-Kronrod quadrature with
initial panels no wider than one period of the fastest oscillation.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError
from .mollifier import Mollifier
from .ntheory import PrimeTable, primes_in
from .params import ParamSet
from .quadrature import QuadResult, integrate
from .rosser import G_pm, WeightTable
from .summation import pairwise_sum

TWO_PI = 2 * math.pi
CHUNK = 256


@dataclass(frozen=True, eq=False)
class ExpSumContext:
    """Primes in ``(lambda0 X, X]`` and their residue buckets ``p = -2 (mod d)``.

    ``buckets[d]`` holds indices into ``primes``.  ``flat`` holds, per sign, the
    concatenation over ascending ``d`` of ``(p, lambda(d) * log p)``.
    """

    X: float
    lambda0: float
    weights: WeightTable
    primes: np.ndarray = field(repr=False)
    logp: np.ndarray = field(repr=False)
    buckets: dict = field(repr=False)
    flat: dict = field(repr=False)
    G: dict = field(repr=False)
    params: ParamSet | None = None
    threads: int = 1

    @classmethod
    def build(cls, X, lambda0, weights, table: PrimeTable, params=None, threads=1):
        if not 0 < lambda0 < 1:
            raise DomainError("lambda0 must lie in (0, 1)")
        primes = primes_in(lambda0 * X, X, table)
        logp = np.log(primes.astype(float))
        buckets = {}
        for d in weights.d:
            d = int(d)
            buckets[d] = np.flatnonzero((primes + 2) % d == 0)
        flat = {}
        for sign, lam in (("-", weights.minus), ("+", weights.plus)):
            ps, cs = [], []
            for d, l in zip(weights.d, lam):
                if l == 0:
                    continue
                idx = buckets[int(d)]
                ps.append(primes[idx])
                cs.append(l * logp[idx])
            flat[sign] = (
                np.concatenate(ps) if ps else np.zeros(0, dtype=np.int64),
                np.concatenate(cs) if cs else np.zeros(0),
            )
        gm, gp = G_pm(weights)
        return cls(float(X), float(lambda0), weights, primes, logp, buckets, flat,
                   {"-": gm, "+": gp}, params, int(threads))

    @classmethod
    def from_params(cls, p: ParamSet, weights, table, threads=1):
        return cls.build(p.X, p.lambda0, weights, table, params=p, threads=threads)

    def crude_L_bound(self) -> float:
        """``sum(log p) * sum(|lambda(d)|)``, maximised over both signs."""
        total = float(pairwise_sum(self.logp))
        spread = max(np.abs(self.weights.minus).sum(), np.abs(self.weights.plus).sum())
        return total * float(spread)


def _check_sign(sign):
    if sign not in ("-", "+"):
        raise DomainError("sign must be '-' or '+'")


def I_eval(alpha, X, lambda0):
    """``int_{lambda0 X}^{X} e(alpha y) dy`` in the stable form ``e(alpha c) w sinc(alpha w)``."""
    alpha = np.asarray(alpha, dtype=float)
    width = (1 - lambda0) * X
    centre = 0.5 * (1 + lambda0) * X
    out = width * np.sinc(alpha * width) * np.exp(1j * TWO_PI * ((alpha * centre) % 1.0))
    return out[()] if out.ndim == 0 else out


_SPLIT = 2.0**27 + 1


def _split(x):
    """Veltkamp split: ``x = hi + lo`` with ``hi`` carrying at most 26 bits."""
    y = _SPLIT * x
    hi = y - (y - x)
    return hi, x - hi


def phase_mod1(t, p):
    """``outer(t, p) mod 1`` without the rounding error of the full product.

    ``p*hi`` is exact while ``p < 2**26``; larger ``p`` are split as well.
    """
    th, tl = _split(np.asarray(t, dtype=float))
    pf = np.asarray(p, dtype=float)
    if pf.size and pf.max() < 2.0**26:
        out = np.outer(th, pf) % 1.0 + np.outer(tl, pf)
    else:
        ph, pl = _split(pf)
        out = (np.outer(th, ph) % 1.0 + np.outer(th, pl) % 1.0
               + np.outer(tl, ph) % 1.0 + np.outer(tl, pl))
    return out % 1.0


def _L_chunk(p, c, t):
    phase = phase_mod1(t, p)
    return pairwise_sum(c[None, :] * np.exp(1j * TWO_PI * phase), axis=1)


def L_pm(ctx: ExpSumContext, t, sign: str):
    """``L^sign(t, X)``; ``t`` may be a scalar or an array."""
    _check_sign(sign)
    p, c = ctx.flat[sign]
    t = np.asarray(t, dtype=float)
    flat_t = np.atleast_1d(t).ravel()
    if p.size == 0:
        out = np.zeros(flat_t.shape, dtype=complex)
    else:
        step = max(1, CHUNK * 4096 // max(p.size, 1))
        chunks = [flat_t[i : i + step] for i in range(0, flat_t.size, step)]
        if ctx.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(ctx.threads) as pool:
                parts = list(pool.map(lambda ch: _L_chunk(p, c, ch), chunks))
        else:
            parts = [_L_chunk(p, c, ch) for ch in chunks]
        out = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
    out = out.reshape(t.shape)
    return out[()] if out.ndim == 0 else out


def M_pm(ctx: ExpSumContext, t, lam: float, sign: str):
    """Main-term model ``I(lam t) G^sign``."""
    _check_sign(sign)
    return I_eval(lam * np.asarray(t, dtype=float), ctx.X, ctx.lambda0) * ctx.G[sign]


@dataclass
class IntegralReport:
    value: float
    error: float
    imag: float
    panels: int
    evaluations: int
    limit: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _report(res: QuadResult, limit) -> IntegralReport:
    return IntegralReport(res.real, res.error, res.imag, res.panels, res.evaluations, float(limit))


def _period(lam, X) -> float:
    return 1.0 / (max(abs(l) for l in lam) * X)


def _checked_lambda(lam):
    lam = tuple(float(l) for l in lam)
    if len(lam) != 3 or any(l == 0 for l in lam):
        raise DomainError("lambda must be three non-zero reals")
    return lam


def gamma1_major(ctx: ExpSumContext, m: Mollifier, lam, eta: float, tau: float | None = None,
                 signs=("-", "+", "+"), rtol=1e-6, panel_scale=1.0, max_panels=200_000) -> IntegralReport:
    """``int_{|t| <= tau} Theta(t) e(eta t) L^s1(l1 t) L^s2(l2 t) L^s3(l3 t) dt``.

    ``tau`` defaults to the derived value from ``ctx.params``.  The real part is
    the result; ``imag`` is the residual that symmetry says should vanish.
    ``panel_scale`` shrinks the initial panel width (0.5 doubles the nodes).
    """
    lam = _checked_lambda(lam)
    tau = _resolve_tau(ctx, tau)

    def f(t):
        out = m.theta_hat(t) * np.exp(1j * TWO_PI * eta * t)
        for l, s in zip(lam, signs):
            out = out * L_pm(ctx, l * t, s)
        return out

    res = integrate(f, [-tau, 0.0, tau], rtol=rtol, max_width=panel_scale * _period(lam, ctx.X),
                    max_panels=max_panels)
    return _report(res, tau)


def _resolve_tau(ctx, tau):
    if tau is None:
        if ctx.params is None:
            raise DomainError("tau is required when the context carries no ParamSet")
        tau = ctx.params.tau
    if tau < 0:
        raise DomainError("tau must be non-negative")
    return float(tau)


def J1_eval(ctx: ExpSumContext, m: Mollifier, lam, eta: float, tau: float | None = None,
            signs=("-", "+", "+"), rtol=1e-8, panel_scale=1.0, max_panels=200_000) -> IntegralReport:
    """Major-arc integral with every ``L`` replaced by its model ``M``."""
    lam = _checked_lambda(lam)
    tau = _resolve_tau(ctx, tau)

    def f(t):
        out = m.theta_hat(t) * np.exp(1j * TWO_PI * eta * t)
        for l, s in zip(lam, signs):
            out = out * M_pm(ctx, t, l, s)
        return out

    res = integrate(f, [-tau, 0.0, tau], rtol=rtol, max_width=panel_scale * _period(lam, ctx.X),
                    max_panels=max_panels)
    return _report(res, tau)


def J1_truncation_bound(m: Mollifier, lam, tau: float, G_product: float) -> float:
    """Bound on what ``J1`` misses by stopping at ``|t| = tau``.

    Uses ``|Theta| <= 7 vartheta/4`` and ``|I(l t)| <= 1/(pi |l| t)``.
    """
    prod = abs(lam[0] * lam[1] * lam[2])
    return abs(G_product) * (7 * m.vartheta / 4) / (math.pi**3 * prod * tau**2)


@dataclass
class BReport:
    value: float
    error: float
    outer_panels: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _solve_interval(c0, slope, lo, hi):
    """``{y : lo < c0 + slope*y < hi}`` as an ordered pair."""
    a, b = (lo - c0) / slope, (hi - c0) / slope
    return (a, b) if a <= b else (b, a)


def B_eval(m: Mollifier, lam, eta: float, X: float, lambda0: float, rtol=1e-9) -> BReport:
    """``int int int theta(l1 y1 + l2 y2 + l3 y3 + eta)`` over ``(lambda0 X, X]^3``.

    The ``y3`` integral is closed form through the antiderivative of theta;
    ``y2`` and ``y1`` are adaptive panels split at every kink of the
    integrand.
    """
    l1, l2, l3 = _checked_lambda(lam)
    lo, hi = lambda0 * X, X
    v = m.vartheta
    levels = np.array([-v, -0.75 * v, 0.75 * v, v])
    r3 = sorted((l3 * lo, l3 * hi))
    r2 = sorted((l2 * lo, l2 * hi))

    def inner3(c):
        return (m.theta_integral(c + l3 * hi) - m.theta_integral(c + l3 * lo)) / l3

    inner_err = [0.0]

    def inner2(y1):
        c1 = l1 * y1 + eta
        a, b = _solve_interval(c1, l2, -v - r3[1], v - r3[0])
        a, b = max(a, lo), min(b, hi)
        if a >= b:
            return 0.0
        pts = [a, b]
        for y3 in (lo, hi):
            pts.extend((levels - c1 - l3 * y3) / l2)
        pts = np.array(sorted(x for x in pts if a <= x <= b))
        res = integrate(lambda y2: inner3(c1 + l2 * y2), pts, rtol=rtol * 0.1, atol=1e-300)
        inner_err[0] = max(inner_err[0], res.error)
        return res.value

    def outer(y1s):
        return np.array([inner2(y) for y in np.atleast_1d(y1s)])

    a, b = _solve_interval(eta, l1, -v - r2[1] - r3[1], v - r2[0] - r3[0])
    a, b = max(a, lo), min(b, hi)
    if a >= b:
        return BReport(0.0, 0.0, 0)
    pts = [a, b]
    for y2 in (lo, hi):
        for y3 in (lo, hi):
            pts.extend((levels - eta - l2 * y2 - l3 * y3) / l1)
    pts = sorted(x for x in pts if a <= x <= b)
    res = integrate(outer, pts, rtol=rtol)
    err = res.error + (b - a) * inner_err[0]
    return BReport(max(res.real, 0.0), err, res.panels)


def tail_diagnostic(m: Mollifier, H: float, crude_L_bound: float, k: int | None = None) -> float:
    """``crude_L_bound**3 * int_{|t| >= H}`` of the power-law bound on ``|Theta|``.

    The power-law term ``(1/(pi t)) (k/(2 pi t vartheta/8))**k`` integrates to
    ``(2/(pi k)) (4k/(pi vartheta H))**k``.  Strictly decreasing in ``H``;
    decreasing in ``k`` only once ``4k/(pi vartheta H)`` is well below 1/e.
    """
    k = m.k if k is None else k
    if k <= 1:
        raise DomainError("the tail bound needs k >= 2")
    if H <= 0:
        raise DomainError("H must be positive")
    ratio = 4 * k / (math.pi * m.vartheta * H)
    return 2 / (math.pi * k) * ratio**k * crude_L_bound**3


def meansquare_L(ctx: ExpSumContext, sign: str, tau: float, grid: int = 1024, lam: float = 1.0) -> dict:
    """Trapezoid estimate of ``int_{-tau}^{tau} |L(lam a)|^2 da``.

    Also returns the ratio to ``X (ln X)^5`` for trend inspection.
    """
    _check_sign(sign)
    if grid < 16:
        raise DomainError("grid must be at least 16")
    if tau == 0:
        return {"value": 0.0, "ratio": 0.0, "grid": grid}
    t = np.linspace(-tau, tau, grid)
    vals = np.abs(L_pm(ctx, lam * t, sign)) ** 2
    h = t[1] - t[0]
    total = h * (pairwise_sum(vals) - 0.5 * (vals[0] + vals[-1]))
    return {"value": float(total), "ratio": float(total / (ctx.X * math.log(ctx.X) ** 5)),
            "grid": grid}


def gamma1_intermediate_sampled(ctx: ExpSumContext, m: Mollifier, lam, eta: float, n: int = 4096,
                                seed: int = 0, tau=None, H=None, signs=("-", "+", "+")) -> dict:
    """Monte-Carlo estimate of the integral over ``tau < |t| < H``.

    Not certified; the integrand oscillates on the scale ``1/X`` across a
    range of length ``H``, so this is a rough magnitude check only.
    """
    lam = _checked_lambda(lam)
    tau = _resolve_tau(ctx, tau)
    if H is None:
        if ctx.params is None:
            raise DomainError("H is required when the context carries no ParamSet")
        H = ctx.params.H
    rng = np.random.default_rng(seed)
    t = rng.uniform(tau, H, n) * rng.choice([-1.0, 1.0], n)
    vals = m.theta_hat(t) * np.exp(1j * TWO_PI * eta * t)
    for l, s in zip(lam, signs):
        vals = vals * L_pm(ctx, l * t, s)
    span = 2 * (H - tau)
    mean = pairwise_sum(vals) / n
    sd = float(np.std(vals.real)) / math.sqrt(n)
    return {"estimate": float(span * mean.real), "stderr": float(span * sd), "samples": n}


def main_term_ratio(ctx: ExpSumContext, sign: str) -> float:
    """``L(0) / ((1 - lambda0) X G)``."""
    return float(np.real(L_pm(ctx, 0.0, sign))) / ((1 - ctx.lambda0) * ctx.X * ctx.G[sign])


def dump_grid(ctx: ExpSumContext, ts, path: str | Path, lam: float = 1.0) -> None:
    """CSV of ``t, Re L-, Im L-, Re L+, Im L+, |M-|, |M+|``."""
    ts = np.asarray(ts, dtype=float)
    lm, lp = L_pm(ctx, lam * ts, "-"), L_pm(ctx, lam * ts, "+")
    mm, mp = np.abs(M_pm(ctx, ts, lam, "-")), np.abs(M_pm(ctx, ts, lam, "+"))
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["t", "re_L_minus", "im_L_minus", "re_L_plus", "im_L_plus",
                      "abs_M_minus", "abs_M_plus"])
        for row in zip(ts, lm.real, lm.imag, lp.real, lp.imag, mm, mp):
            out.writerow([repr(float(x)) for x in row])
