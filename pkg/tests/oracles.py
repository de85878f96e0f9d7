"""Independent reference implementations used only by the tests.

Each oracle is deliberately naive: trial division, gcd scans, explicit
loops and plain quadrature, sharing no code with the package beyond the
objects under test.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def is_prime_td(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_td(lo: float, hi: float) -> list[int]:
    return [n for n in range(math.floor(lo) + 1, math.floor(hi) + 1) if is_prime_td(n)]


def factor_td(n: int) -> dict[int, int]:
    out, f = {}, 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def phi_gcd(n: int) -> int:
    return sum(1 for j in range(1, n + 1) if math.gcd(j, n) == 1)


def mobius_td(n: int) -> int:
    f = factor_td(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def omega_td(n: int) -> int:
    return sum(factor_td(n).values())


def P_of(z: float) -> int:
    out = 1
    for p in range(3, math.floor(z) + 1):
        if is_prime_td(p):
            out *= p
    return out


def best_approximations(alpha: float, q_max: int) -> list[tuple[int, int]]:
    """Best approximations of the second kind: ``|q alpha - a|`` strictly smaller than for every smaller q."""
    out, best = [], math.inf
    for q in range(1, q_max + 1):
        a = round(q * alpha)
        err = abs(q * alpha - a)
        if err < best - 1e-15:
            best = err
            out.append((a, q))
    return out


def rosser_weight_brute(d_primes: list[int], D: float) -> tuple[int, int]:
    """Weights of ``d = prod(d_primes)`` straight from the truncation rules."""
    ps = sorted(d_primes, reverse=True)
    mu = (-1) ** len(ps)
    plus_ok = minus_ok = True
    prefix = 1
    for l, p in enumerate(ps, 1):
        ok = prefix * p**3 < D
        if l % 2:
            plus_ok &= ok
        else:
            minus_ok &= ok
        prefix *= p
    return (mu if minus_ok else 0, mu if plus_ok else 0)


def L_naive(primes, entries: dict, t: float, sign: str) -> complex:
    """Double loop over ``d`` then ``p``; the phase ``p t mod 1`` is taken exactly."""
    idx = 1 if sign == "+" else 0
    tf = Fraction(t)
    phase = {p: float((tf * p) % 1) for p in primes}
    re, im = [], []
    for d in sorted(entries):
        lam = entries[d][idx]
        if lam == 0:
            continue
        for p in primes:
            if (p + 2) % d == 0:
                w = lam * math.log(p)
                re.append(w * math.cos(2 * math.pi * phase[p]))
                im.append(w * math.sin(2 * math.pi * phase[p]))
    return complex(math.fsum(re), math.fsum(im))


def theta_hat_quadrature(m, x: float, nodes: int = 64) -> float:
    """``2 int_0^vartheta theta(y) cos(2 pi x y) dy`` by Gauss-Legendre on the theta knots."""
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    knots = np.concatenate([[0.0], m.transition_breaks()])
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        # subdivide so each panel spans at most a quarter period
        n = max(1, math.ceil(4 * abs(x) * (b - a)))
        edges = np.linspace(a, b, n + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx
            total += 0.5 * (hi - lo) * float(np.dot(gw, m.theta(y) * np.cos(2 * math.pi * x * y)))
    return 2 * total


def triple_brute(primes, lambdas, eta, vartheta):
    """Every ordered triple with residual < vartheta, by a plain triple loop."""
    l1, l2, l3 = lambdas
    out = []
    for p1, p2, p3 in itertools.product(primes, repeat=3):
        r = abs(((l1 * p1 + l2 * p2) + l3 * p3) + eta)
        if r < vartheta:
            out.append((p1, p2, p3, r))
    return out


def rough_td(n: int, z: float) -> bool:
    return all(p == 2 or p > z for p in factor_td(n))


def B_monte_carlo(m, lambdas, eta, X, lambda0, samples=10**7, seed=12345, batch=10**6):
    """Monte-Carlo volume of ``theta(l1 y1 + l2 y2 + l3 y3 + eta)`` over the cube.

    ``y1, y2`` are uniform; ``y3`` is uniform on the window where the
    argument can reach the support, and each sample is weighted by the window
    length, which keeps the variance small.
    """
    l1, l2, l3 = lambdas
    lo, hi = lambda0 * X, X
    v = m.vartheta
    rng = np.random.default_rng(seed)
    acc, acc2, n = 0.0, 0.0, 0
    while n < samples:
        b = min(batch, samples - n)
        y1 = rng.uniform(lo, hi, b)
        y2 = rng.uniform(lo, hi, b)
        c = l1 * y1 + l2 * y2 + eta
        e1, e2 = (-v - c) / l3, (v - c) / l3
        a = np.maximum(np.minimum(e1, e2), lo)
        bb = np.minimum(np.maximum(e1, e2), hi)
        width = np.clip(bb - a, 0.0, None)
        y3 = a + width * rng.uniform(0.0, 1.0, b)
        vals = width * m.theta(c + l3 * y3)
        acc += vals.sum()
        acc2 += (vals * vals).sum()
        n += b
    mean = acc / n
    var = acc2 / n - mean * mean
    area = (hi - lo) ** 2
    return area * mean, area * math.sqrt(max(var, 0.0) / n)
