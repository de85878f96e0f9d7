"""Rosser weights for the linear sieve, the vector-sieve lower bound, and the
density sums that feed the main term.

Weights live on squarefree ``d = p1 p2 ... pr`` with odd primes
``z >= p1 > p2 > ... > pr``.  With ``y_l = p1 ... p_{l-1} * p_l**3``:

* ``lambda+(d) = mu(d)`` iff ``y_l < D`` for every odd ``l <= r``
* ``lambda-(d) = mu(d)`` iff ``y_l < D`` for every even ``l <= r``

and zero otherwise.  Because each condition set is closed under taking
prefixes, Buchstab's identity makes the divisor sums bracket the coprimality
indicator exactly, for every ``n``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DomainError, ResourceError
from .ntheory import PrimeTable, coprime_to_Pz, primes_in

EULER_GAMMA = 0.577215664901533
MAX_NODES = 10**8


@dataclass(frozen=True)
class WeightTable:
    """Lower/upper Rosser weights on the divisors of P(z).

    ``entries`` maps each ``d`` with a non-zero weight to ``(lambda-, lambda+)``.
    The arrays mirror ``entries`` in ascending ``d``.
    """

    z: float
    D: float
    sieving_primes: tuple[int, ...]
    entries: dict[int, tuple[int, int]] = field(repr=False)
    d: np.ndarray = field(repr=False)
    minus: np.ndarray = field(repr=False)
    plus: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.entries)

    def weight(self, d: int, sign: str) -> int:
        pair = self.entries.get(int(d), (0, 0))
        return pair[1] if sign == "+" else pair[0]

    def support(self, sign: str) -> tuple[np.ndarray, np.ndarray]:
        """``(d, lambda)`` arrays restricted to non-zero weights of one sign."""
        lam = self.plus if sign == "+" else self.minus
        keep = lam != 0
        return self.d[keep], lam[keep]

    @classmethod
    def from_entries(cls, z, D, primes, entries) -> "WeightTable":
        ds = np.array(sorted(entries), dtype=np.int64)
        minus = np.array([entries[int(d)][0] for d in ds], dtype=np.int64)
        plus = np.array([entries[int(d)][1] for d in ds], dtype=np.int64)
        phi = np.array([_phi_squarefree(int(d), primes) for d in ds], dtype=np.int64)
        return cls(float(z), float(D), tuple(primes), dict(entries), ds, minus, plus, phi)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["d", "lambda_minus", "lambda_plus"])
            for d, lm, lp in zip(self.d, self.minus, self.plus):
                out.writerow([int(d), int(lm), int(lp)])


def _phi_squarefree(d: int, primes) -> int:
    out = 1
    for p in primes:
        if d % p == 0:
            out *= p - 1
    return out


def sifting_primes(z: float, table: PrimeTable) -> list[int]:
    """Odd primes ``p <= z``."""
    return [int(p) for p in primes_in(2, z, table)]


def build_weights(z: float, D: float, table: PrimeTable, max_nodes: int = MAX_NODES) -> WeightTable:
    """Enumerate the Rosser weights of level ``D`` for the sifting range ``z``.

    Depth-first over odd primes in decreasing order; a branch is abandoned as
    soon as both sign conditions have failed, since failures are inherited.
    """
    if z < 3:
        raise DomainError("z must be at least 3")
    if D < 2:
        raise DomainError("D must be at least 2")
    if z > table.limit:
        raise DomainError("prime table does not cover z")
    primes = sifting_primes(z, table)
    desc = primes[::-1]
    entries: dict[int, tuple[int, int]] = {1: (1, 1)}
    # (next index into desc, d, depth, plus alive, minus alive)
    stack = [(0, 1, 0, True, True)]
    nodes = 0
    while stack:
        start, d, depth, plus_ok, minus_ok = stack.pop()
        for i in range(start, len(desc)):
            p = desc[i]
            level = depth + 1
            passes = d * p**3 < D
            if level % 2:
                new_plus, new_minus = plus_ok and passes, minus_ok
            else:
                new_plus, new_minus = plus_ok, minus_ok and passes
            if not (new_plus or new_minus):
                continue
            nodes += 1
            if nodes > max_nodes:
                raise ResourceError(f"weight enumeration exceeded {max_nodes} divisors",
                                    partial={"entries": len(entries)})
            e = d * p
            mu = -1 if level % 2 else 1
            entries[e] = (mu if new_minus else 0, mu if new_plus else 0)
            stack.append((i + 1, e, level, new_plus, new_minus))
    return WeightTable.from_entries(z, D, primes, entries)


def trivial_weights(z: float = 2.0, D: float = 2.0) -> WeightTable:
    """The table with no sifting primes: only ``d = 1``, both weights 1."""
    return WeightTable.from_entries(z, D, [], {1: (1, 1)})


def lambda_exact(n: int, z: float) -> int:
    """``sum(mu(d) for d | (n, P(z)))``, i.e. 1 iff n is free of odd primes <= z."""
    return int(coprime_to_Pz(n, z))


def lambda_pm(n: int, w: WeightTable) -> tuple[int, int]:
    """``(Lambda-, Lambda+)``: weight sums over ``d | (n, P(z))``."""
    n = int(n)
    kernel = [p for p in w.sieving_primes if n % p == 0]
    lo = hi = 0
    for mask in range(1 << len(kernel)):
        d = 1
        for j, p in enumerate(kernel):
            if mask >> j & 1:
                d *= p
        pair = w.entries.get(d)
        if pair is not None:
            lo += pair[0]
            hi += pair[1]
    return lo, hi


def lambda_pm_array(ns, w: WeightTable) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`lambda_pm` over an integer array."""
    ns = np.asarray(ns, dtype=np.int64)
    lo = np.zeros(ns.shape, dtype=np.int64)
    hi = np.zeros(ns.shape, dtype=np.int64)
    for d, lm, lp in zip(w.d, w.minus, w.plus):
        hit = ns % d == 0
        lo += lm * hit
        hi += lp * hit
    return lo, hi


def vector_sieve_lower(lm, lp):
    """``L1- L2+ L3+ + L1+ L2- L3+ + L1+ L2+ L3- - 2 L1+ L2+ L3+``.

    Accepts scalars or broadcastable arrays for each of the six inputs.
    """
    m1, m2, m3 = lm
    p1, p2, p3 = lp
    return m1 * p2 * p3 + p1 * m2 * p3 + p1 * p2 * m3 - 2 * p1 * p2 * p3


def G_pm(w: WeightTable) -> tuple[float, float]:
    """``(G-, G+)`` with ``G = sum(lambda(d) / phi(d))``, ascending d, exactly rounded."""
    inv = 1.0 / w.phi
    return math.fsum((w.minus * inv).tolist()), math.fsum((w.plus * inv).tolist())


def G_pm_exact(w: WeightTable) -> tuple[Fraction, Fraction]:
    gm = sum((Fraction(int(l), int(f)) for l, f in zip(w.minus, w.phi)), Fraction(0))
    gp = sum((Fraction(int(l), int(f)) for l, f in zip(w.plus, w.phi)), Fraction(0))
    return gm, gp


def singular_product(z: float, table: PrimeTable) -> float:
    """``prod(1 - 1/(p-1) for odd p <= z)``; 1 for ``z < 3``."""
    if z < 3:
        return 1.0
    out = 1.0
    for p in sifting_primes(z, table):
        out *= 1.0 - 1.0 / (p - 1)
    return out


def singular_product_exact(z: float, table: PrimeTable) -> Fraction:
    out = Fraction(1)
    if z >= 3:
        for p in sifting_primes(z, table):
            out *= Fraction(p - 2, p - 1)
    return out


def _check_s(s: float) -> None:
    if not 2 <= s <= 3:
        raise DomainError("the closed forms of f and F hold only for 2 <= s <= 3")


def f_lower(s: float) -> float:
    _check_s(s)
    return 2 * math.exp(EULER_GAMMA) * math.log(s - 1) / s


def F_upper(s: float) -> float:
    _check_s(s)
    return 2 * math.exp(EULER_GAMMA) / s


def W_of(Gm: float, Gp: float) -> float:
    """``3 (G+)^2 (G- - 2/3 G+)``."""
    return 3 * Gp * Gp * (Gm - 2 * Gp / 3)


@dataclass(frozen=True)
class SieveSummary:
    Gminus: float
    Gplus: float
    Fz: float
    s: float
    fs: float
    Fs: float
    W: float

    @property
    def sandwich_ok(self) -> bool:
        return self.Gminus <= self.Fz <= self.Gplus

    def as_dict(self) -> dict:
        return {
            "Gminus": self.Gminus,
            "Gplus": self.Gplus,
            "Fz": self.Fz,
            "s": self.s,
            "fs": self.fs,
            "Fs": self.Fs,
            "W": self.W,
            "sandwich_ok": self.sandwich_ok,
        }


def sieve_summary(w: WeightTable, table: PrimeTable) -> SieveSummary:
    """Density sums and sieve curves for a weight table with ``2 <= s <= 3``."""
    gm, gp = G_pm(w)
    s = math.log(w.D) / math.log(w.z)
    return SieveSummary(gm, gp, singular_product(w.z, table), s, f_lower(s), F_upper(s), W_of(gm, gp))


def positivity_checks(s: float = 2.948, eps0: float = 0.001) -> dict:
    """The arithmetic behind the choice ``s = 2.948``.

    Returns beta, the almost-prime bound ``floor(1/beta)`` and
    ``f(s) - 2/3 F(s)``, which must exceed 1e-5 for the main term to be positive.
    """
    beta = (47 / 450 - eps0) / s
    margin = f_lower(s) - 2 * F_upper(s) / 3
    return {
        "s": s,
        "eps0": eps0,
        "beta": beta,
        "h": math.floor(1 / beta),
        "f_minus_two_thirds_F": margin,
        "margin_ok": margin > 1e-5,
        "beta_below_one_thirtieth": beta < 1 / 30,
    }


def sandwich_violations(w: WeightTable) -> list[int]:
    """Every ``n | P(z)`` whose weight sums fail to bracket ``[n = 1]``."""
    bad = []
    primes = w.sieving_primes
    for mask in range(1 << len(primes)):
        n = 1
        for j, p in enumerate(primes):
            if mask >> j & 1:
                n *= p
        lo, hi = lambda_pm(n, w)
        exact = 1 if n == 1 else 0
        if not lo <= exact <= hi:
            bad.append(n)
    return bad
