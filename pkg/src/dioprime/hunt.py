"""Explicit search for prime triples with a small linear form, and the
finite weighted counts built from them.

For each ``(p1, p2)`` the admissible ``p3`` satisfy
``|l1 p1 + l2 p2 + l3 p3 + eta| < vartheta``, an interval of length
``2 vartheta/|l3|``; it is located by binary search in the sorted prime
list, so the whole enumeration costs ``O(n^2 log n + hits)``.
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
from .ntheory import PrimeTable, big_omega_array, primes_in, smallest_factor_table
from .rosser import W_of, G_pm, WeightTable, lambda_pm_array, vector_sieve_lower
from .summation import pairwise_sum


@dataclass(frozen=True)
class SearchConfig:
    lambdas: tuple[float, float, float]
    eta: float
    X: float
    lambda0: float
    vartheta: float
    z: float
    r_max: int = 28

    def __post_init__(self):
        lam = tuple(float(l) for l in self.lambdas)
        if len(lam) != 3 or any(l == 0 for l in lam):
            raise DomainError("lambdas must be three non-zero reals")
        if all(l > 0 for l in lam) or all(l < 0 for l in lam):
            raise DomainError("lambdas must not all have the same sign")
        if not self.vartheta > 0:
            raise DomainError("vartheta must be positive")
        if not 0 <= self.lambda0 < 1:
            raise DomainError("lambda0 must lie in [0, 1)")
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def from_params(cls, p, lambdas, eta=0.0, r_max=28) -> "SearchConfig":
        return cls(tuple(lambdas), eta, p.X, p.lambda0, p.vartheta, p.z, r_max)

    def as_dict(self) -> dict:
        return {"lambdas": list(self.lambdas), "eta": self.eta, "X": self.X,
                "lambda0": self.lambda0, "vartheta": self.vartheta, "z": self.z,
                "r_max": self.r_max}


def residual(lambdas, eta, p1, p2, p3):
    """``|l1 p1 + l2 p2 + l3 p3 + eta|``; the single definition used everywhere."""
    l1, l2, l3 = lambdas
    return np.abs(((l1 * p1 + l2 * p2) + l3 * p3) + eta)


@dataclass(frozen=True)
class TripleHit:
    p1: int
    p2: int
    p3: int
    residual: float
    omega: tuple[int, int, int]
    rough: tuple[bool, bool, bool]

    def recompute_residual(self, lambdas, eta) -> float:
        return float(residual(lambdas, eta, float(self.p1), float(self.p2), float(self.p3)))

    def row(self) -> list:
        return [self.p1, self.p2, self.p3, repr(self.residual), *self.omega,
                *(int(r) for r in self.rough)]


@dataclass(frozen=True, eq=False)
class HitArrays:
    """Every hit of a search as parallel arrays, in ``(p1, p2, p3)`` order."""

    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    residual: np.ndarray = field(repr=False)

    def __len__(self):
        return int(self.p1.size)

    @property
    def logs(self) -> np.ndarray:
        return np.log(self.p1.astype(float)) * np.log(self.p2.astype(float)) * np.log(self.p3.astype(float))


def _search_block(primes, pf, lambdas, eta, vartheta, rows):
    l1, l2, l3 = lambdas
    out1, out2, out3, res = [], [], [], []
    # widen the float window by a few ulps; the exact filter below decides
    pad = 1e-9 * (abs(l1) + abs(l2) + abs(l3)) * max(float(primes[-1]), 1.0) / abs(l3)
    for i in rows:
        p1 = pf[i]
        c = l1 * p1 + l2 * pf + eta
        ends = np.stack([(-c - vartheta) / l3, (-c + vartheta) / l3])
        lo_v, hi_v = ends.min(axis=0) - pad, ends.max(axis=0) + pad
        left = np.searchsorted(primes, lo_v, side="left")
        right = np.searchsorted(primes, hi_v, side="right")
        cnt = right - left
        if not cnt.any():
            continue
        j = np.repeat(np.arange(primes.size), cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        k = np.repeat(left, cnt) + offs
        r = residual(lambdas, eta, p1, pf[j], pf[k])
        keep = r < vartheta
        if keep.any():
            out1.append(np.full(int(keep.sum()), primes[i]))
            out2.append(primes[j[keep]])
            out3.append(primes[k[keep]])
            res.append(r[keep])
    return out1, out2, out3, res


def enumerate_hits(cfg: SearchConfig, table: PrimeTable, threads: int = 1) -> HitArrays:
    """All ordered triples in ``(lambda0 X, X]^3`` with residual below vartheta."""
    if cfg.X > table.limit:
        raise DomainError("prime table does not reach X")
    primes = primes_in(cfg.lambda0 * cfg.X, cfg.X, table)
    empty = np.zeros(0, dtype=np.int64)
    if primes.size == 0:
        return HitArrays(empty, empty, empty, np.zeros(0))
    pf = primes.astype(float)
    rows = np.arange(primes.size)
    blocks = np.array_split(rows, max(1, int(threads)))
    if threads > 1:
        with ThreadPoolExecutor(int(threads)) as pool:
            parts = list(pool.map(lambda b: _search_block(primes, pf, cfg.lambdas, cfg.eta,
                                                          cfg.vartheta, b), blocks))
    else:
        parts = [_search_block(primes, pf, cfg.lambdas, cfg.eta, cfg.vartheta, rows)]
    # merge in partition order, so the result is independent of the worker count
    cols = [[], [], [], []]
    for part in parts:
        for col, chunk in zip(cols, part):
            col.extend(chunk)
    if not cols[0]:
        return HitArrays(empty, empty, empty, np.zeros(0))
    return HitArrays(*(np.concatenate(c) for c in cols))


def _rough_array(ns: np.ndarray, z: float) -> np.ndarray:
    """Vectorised coprimality with P(z) (no odd prime factor <= z)."""
    out = np.ones(ns.shape, dtype=bool)
    for p in range(3, math.floor(z) + 1, 2):
        if all(p % q for q in range(3, math.isqrt(p) + 1, 2)):
            out &= ns % p != 0
    return out


def find_triples(cfg: SearchConfig, table: PrimeTable, limit: int | None = None,
                 threads: int = 1, hits: HitArrays | None = None) -> list[TripleHit]:
    """Up to ``limit`` hits, smallest residual first, each re-verified."""
    if limit is not None and limit <= 0:
        return []
    hits = enumerate_hits(cfg, table, threads) if hits is None else hits
    if len(hits) == 0:
        return []
    order = np.lexsort((hits.p3, hits.p2, hits.p1, hits.residual))
    if limit is not None:
        order = order[:limit]
    p1, p2, p3 = hits.p1[order], hits.p2[order], hits.p3[order]
    spf = smallest_factor_table(int(cfg.X) + 2)
    omegas = [big_omega_array(p + 2, spf) for p in (p1, p2, p3)]
    rough = [_rough_array(p + 2, cfg.z) for p in (p1, p2, p3)]
    out = []
    for i in range(order.size):
        hit = TripleHit(int(p1[i]), int(p2[i]), int(p3[i]), float(hits.residual[order[i]]),
                        tuple(int(o[i]) for o in omegas), tuple(bool(r[i]) for r in rough))
        if hit.recompute_residual(cfg.lambdas, cfg.eta) != hit.residual or not hit.residual < cfg.vartheta:
            raise AssertionError(f"hit {hit} failed re-verification")
        out.append(hit)
    return out


def gamma_sum(cfg: SearchConfig, table: PrimeTable, hits: HitArrays | None = None) -> float:
    """Sum of ``log p1 log p2 log p3`` over hits whose ``p_i + 2`` are all free of P(z)."""
    hits = enumerate_hits(cfg, table) if hits is None else hits
    if len(hits) == 0:
        return 0.0
    keep = _rough_array(hits.p1 + 2, cfg.z) & _rough_array(hits.p2 + 2, cfg.z) & _rough_array(hits.p3 + 2, cfg.z)
    return float(pairwise_sum(hits.logs[keep]))


def _check_mollifier(cfg, m):
    if m.vartheta != cfg.vartheta:
        raise DomainError("mollifier support differs from the search vartheta")


def _smooth_weights(cfg, m, hits):
    return m.theta(((cfg.lambdas[0] * hits.p1 + cfg.lambdas[1] * hits.p2)
                    + cfg.lambdas[2] * hits.p3) + cfg.eta)


def gamma_tilde(cfg: SearchConfig, table: PrimeTable, m: Mollifier, hits: HitArrays | None = None) -> float:
    """Smoothed count with the exact coprimality indicators."""
    _check_mollifier(cfg, m)
    hits = enumerate_hits(cfg, table) if hits is None else hits
    if len(hits) == 0:
        return 0.0
    ind = np.ones(len(hits))
    for p in (hits.p1, hits.p2, hits.p3):
        ind = ind * _rough_array(p + 2, cfg.z)
    return float(pairwise_sum(_smooth_weights(cfg, m, hits) * ind * hits.logs))


def gamma0(cfg: SearchConfig, table: PrimeTable, m: Mollifier, w: WeightTable,
           hits: HitArrays | None = None) -> float:
    """Smoothed count with the vector-sieve lower bound in place of the indicators."""
    _check_mollifier(cfg, m)
    hits = enumerate_hits(cfg, table) if hits is None else hits
    if len(hits) == 0:
        return 0.0
    pairs = [lambda_pm_array(p + 2, w) for p in (hits.p1, hits.p2, hits.p3)]
    comb = vector_sieve_lower(tuple(pr[0] for pr in pairs), tuple(pr[1] for pr in pairs))
    return float(pairwise_sum(_smooth_weights(cfg, m, hits) * comb * hits.logs))


def main_term_report(cfg: SearchConfig, table: PrimeTable, m: Mollifier, w: WeightTable,
                     B: float | None = None, threads: int = 1) -> dict:
    """``Gamma``, ``Gamma~``, ``Gamma0`` next to the model ``B W``.

    No inequality between ``Gamma0`` and ``B W`` is implied; the error term
    separating them is not computable.
    """
    from .expsum import B_eval

    hits = enumerate_hits(cfg, table, threads)
    gm, gp = G_pm(w)
    if B is None:
        B = B_eval(m, cfg.lambdas, cfg.eta, cfg.X, cfg.lambda0).value
    W = W_of(gm, gp)
    if len(hits):
        spf = smallest_factor_table(int(cfg.X) + 2)
        ok = np.ones(len(hits), dtype=bool)
        for p in (hits.p1, hits.p2, hits.p3):
            ok &= big_omega_array(p + 2, spf) <= cfg.r_max
        almost = int(ok.sum())
        rmin, rmax = float(hits.residual.min()), float(hits.residual.max())
    else:
        almost, rmin, rmax = 0, None, None
    return {
        "Gamma": gamma_sum(cfg, table, hits),
        "Gamma_tilde": gamma_tilde(cfg, table, m, hits),
        "Gamma0": gamma0(cfg, table, m, w, hits),
        "B": B,
        "W": W,
        "BW": B * W,
        "Gminus": gm,
        "Gplus": gp,
        "hits": len(hits),
        "hits_all_almost_prime": almost,
        "min_residual": rmin,
        "max_residual": rmax,
    }


def write_hits_csv(hits: list[TripleHit], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["p1", "p2", "p3", "residual", "omega1", "omega2", "omega3",
                      "rough1", "rough2", "rough3"])
        for h in hits:
            out.writerow(h.row())
