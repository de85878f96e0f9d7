"""Prime tables and the multiplicative functions used by the sieve and search.

The prime table is a plain boolean array built by a segmented sieve of
Eratosthenes.  Everything else here is a pure function of small integers.

>>> sieve_primes(10).primes.tolist()
[2, 3, 5, 7]
>>> euler_phi(105), mobius(30), big_omega(96)
(48, -1, 6)
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError, OutOfRangeError, ResourceError

MEMORY_CAP = 2**31
SEGMENT = 1 << 22

_MAGIC = b"PTBL"
_VERSION = 1


@dataclass(frozen=True)
class PrimeTable:
    """Primality bits for ``0..limit`` and the sorted primes they encode.

    Attributes:
        limit: Largest integer covered by the table.
        primality: Boolean array of length ``limit + 1``.
        primes: Ascending int64 array of every prime ``<= limit``.
    """

    limit: int
    primality: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    def is_prime(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise OutOfRangeError(f"{n} outside table range [0, {self.limit}]")
        return bool(self.primality[n])

    def __len__(self):
        return len(self.primes)


def _small_primes(n: int) -> np.ndarray:
    """Plain sieve up to ``n``; used to seed the segmented pass."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve_primes(limit: int, cap: int = MEMORY_CAP, cache: str | Path | None = None) -> PrimeTable:
    """Build the prime table up to ``limit`` with a segmented sieve.

    If ``cache`` names an existing table file covering ``limit`` it is loaded
    instead; if it names a missing file, the freshly built table is written
    there.  The result is identical either way.
    """
    limit = int(limit)
    if limit < 0:
        raise DomainError("limit must be non-negative")
    if limit > cap:
        raise ResourceError(f"limit {limit} exceeds memory cap {cap}")
    if cache is not None and Path(cache).exists():
        table = load_table(cache)
        if table.limit >= limit:
            return _truncate(table, limit)

    flags = np.zeros(limit + 1, dtype=bool)
    if limit >= 2:
        base = _small_primes(math.isqrt(limit))
        for lo in range(0, limit + 1, SEGMENT):
            hi = min(lo + SEGMENT, limit + 1)
            seg = np.ones(hi - lo, dtype=bool)
            for p in base:
                p = int(p)
                if p * p >= hi:
                    break
                start = max(p * p, ((lo + p - 1) // p) * p)
                seg[start - lo :: p] = False
            flags[lo:hi] = seg
        flags[:2] = False
    table = PrimeTable(limit, flags, np.flatnonzero(flags).astype(np.int64))
    if cache is not None:
        save_table(table, cache)
    return table


def _truncate(table: PrimeTable, limit: int) -> PrimeTable:
    if table.limit == limit:
        return table
    flags = table.primality[: limit + 1].copy()
    primes = table.primes[: np.searchsorted(table.primes, limit, side="right")].copy()
    return PrimeTable(limit, flags, primes)


def save_table(table: PrimeTable, path: str | Path) -> None:
    """Write ``PTBL`` | u32 version | u64 limit | little-endian packed bits."""
    header = _MAGIC + struct.pack("<IQ", _VERSION, table.limit)
    bits = np.packbits(table.primality, bitorder="little")
    Path(path).write_bytes(header + bits.tobytes())


def load_table(path: str | Path) -> PrimeTable:
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC:
        raise DomainError(f"{path}: not a prime table file")
    version, limit = struct.unpack("<IQ", raw[4:16])
    if version != _VERSION:
        raise DomainError(f"{path}: unsupported table version {version}")
    bits = np.frombuffer(raw[16:], dtype=np.uint8)
    flags = np.unpackbits(bits, bitorder="little")[: limit + 1].astype(bool)
    if flags.size != limit + 1:
        raise DomainError(f"{path}: truncated bit array")
    return PrimeTable(int(limit), flags, np.flatnonzero(flags).astype(np.int64))


def primes_in(lo: float, hi: float, table: PrimeTable) -> np.ndarray:
    """Primes ``p`` with ``lo < p <= hi``."""
    if hi > table.limit:
        raise OutOfRangeError(f"hi={hi} exceeds table limit {table.limit}")
    # p > lo  <=>  p > floor(lo) for integer p
    left = np.searchsorted(table.primes, math.floor(lo), side="right")
    right = np.searchsorted(table.primes, math.floor(hi), side="right")
    return table.primes[left:right]


@lru_cache(maxsize=8)
def _trial_primes(bound: int) -> tuple[int, ...]:
    return tuple(int(p) for p in _small_primes(bound))


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division.

    Intended for desk-scale inputs (``n`` up to about 1e14).
    """
    n = int(n)
    if n < 1:
        raise DomainError("factorize requires n >= 1")
    out: dict[int, int] = {}
    root = math.isqrt(n)
    # round the trial bound up to a power of two so the cache stays small
    bound = 1 << max(8, root.bit_length())
    for p in _trial_primes(bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError("euler_phi requires n >= 1")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError("mobius requires n >= 1")
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def big_omega(n: int) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    if n < 1:
        raise DomainError("big_omega requires n >= 1")
    return sum(factorize(n).values())


def is_almost_prime(n: int, r: int) -> bool:
    """True iff ``n`` is a P_r: at most ``r`` prime factors with multiplicity."""
    return big_omega(n) <= r


def coprime_to_Pz(n: int, z: float) -> bool:
    """True iff ``n`` has no odd prime factor ``p <= z``.

    The factor 2 never counts, since the sifting product runs over odd primes.
    """
    n = int(n)
    if n < 1:
        raise DomainError("coprime_to_Pz requires n >= 1")
    while n % 2 == 0:
        n //= 2
    bound = math.floor(z)
    p = 3
    while p <= bound and p * p <= n:
        if n % p == 0:
            return False
        p += 2
    # what remains is 1 or a prime
    return n == 1 or n > bound


def phi_table(limit: int) -> np.ndarray:
    """``phi[n]`` for ``0 <= n <= limit`` (``phi[0] = 0``) by a totient sieve."""
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in _small_primes(limit):
        phi[p::p] -= phi[p::p] // p
    return phi


def phi_reciprocal_sum(X: int) -> float:
    """Exact-rounded value of ``sum(1/phi(n) for n <= X)``."""
    X = int(X)
    if X < 2:
        raise DomainError("phi_reciprocal_sum requires X >= 2")
    phi = phi_table(X)
    return math.fsum((1.0 / phi[1:]).tolist())


def smallest_factor_table(limit: int) -> np.ndarray:
    """``spf[n]`` = least prime factor of ``n`` for ``2 <= n <= limit``."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in _small_primes(math.isqrt(limit) if limit >= 4 else limit):
        block = spf[p * p :: p]
        block[block == 0] = p
        spf[p * p :: p] = block
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return spf


def big_omega_array(values: np.ndarray, spf: np.ndarray) -> np.ndarray:
    """Vectorised Omega over ``values`` using a smallest-prime-factor table."""
    n = np.asarray(values, dtype=np.int64).copy()
    if n.size and (n.min() < 1 or n.max() >= spf.size):
        raise OutOfRangeError("values outside the smallest-factor table")
    count = np.zeros(n.shape, dtype=np.int64)
    live = n > 1
    while live.any():
        n[live] //= spf[n[live]]
        count[live] += 1
        live = n > 1
    return count
