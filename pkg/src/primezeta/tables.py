"""Prime and Moebius tables.

The prime table is a segmented sieve of Eratosthenes. Each segment is kept
bit-packed (one bit per integer, little-endian bit order) together with the
cumulative prime count at segment boundaries, so memory during construction
is bounded by one unpacked segment.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import mpmath
import numpy as np

from .errors import DomainError, OutOfRangeError

DEFAULT_SEGMENT = 1 << 20
MAX_LIMIT = 1 << 40
CACHE_MAGIC = b"MSRV1"


def _small_primes(n: int) -> np.ndarray:
    """All primes <= n with a plain (unsegmented) sieve; used for base primes."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primality flags for the integers lo <= n < hi."""
    flags = np.ones(hi - lo, dtype=bool)
    for n in range(lo, min(hi, 2)):
        flags[n - lo] = False
    for p in base:
        p = int(p)
        sq = p * p
        if sq >= hi:
            break
        start = max(sq, -(-lo // p) * p)
        flags[start - lo:: p] = False
    return flags


@dataclass(frozen=True, eq=False)
class PrimeSieve:
    limit: int
    segment_size: int
    segments: tuple = field(repr=False)
    count_index: np.ndarray = field(repr=False)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    def _flags(self, i: int) -> np.ndarray:
        lo = i * self.segment_size
        width = min(self.segment_size, self.limit + 1 - lo)
        return np.unpackbits(self.segments[i], count=width, bitorder="little").astype(bool)

    def segment_primes(self, i: int) -> np.ndarray:
        """Primes in segment ``i`` as an int64 array, ascending."""
        return np.flatnonzero(self._flags(i)).astype(np.int64) + i * self.segment_size

    def iter_primes(self, upto: int | None = None) -> Iterator[np.ndarray]:
        """Yield per-segment prime arrays in ascending order, all p <= upto."""
        upto = self.limit if upto is None else min(int(upto), self.limit)
        for i in range(self.n_segments):
            lo = i * self.segment_size
            if lo > upto:
                break
            ps = self.segment_primes(i)
            if lo + self.segment_size - 1 > upto:
                ps = ps[: np.searchsorted(ps, upto, side="right")]
            yield ps

    def primes(self, upto: int | None = None) -> np.ndarray:
        chunks = list(self.iter_primes(upto))
        return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)

    def is_prime(self, n: int) -> bool:
        n = int(n)
        if n < 0 or n > self.limit:
            raise OutOfRangeError(f"{n} outside sieve range [0, {self.limit}]")
        i, off = divmod(n, self.segment_size)
        return bool((self.segments[i][off >> 3] >> (off & 7)) & 1)

    def count_upto(self, n: int) -> int:
        """Number of primes p <= n (plain right-closed count)."""
        n = int(n)
        if n < 0:
            return 0
        if n > self.limit:
            raise OutOfRangeError(f"{n} exceeds sieve limit {self.limit}")
        i, off = divmod(n, self.segment_size)
        bits = np.unpackbits(self.segments[i], count=off + 1, bitorder="little")
        return int(self.count_index[i]) + int(bits.sum())

    def save(self, path: str | Path) -> None:
        """Write the cache file: magic, limit (u64 LE), then the packed bits."""
        with open(path, "wb") as fh:
            fh.write(CACHE_MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            for i in range(self.n_segments):
                fh.write(self.segments[i].tobytes())

    @classmethod
    def load(cls, path: str | Path, segment_size: int = DEFAULT_SEGMENT) -> "PrimeSieve":
        """Read a cache written by :meth:`save` (any segment size that is a multiple of 8)."""
        raw = Path(path).read_bytes()
        if raw[:5] != CACHE_MAGIC:
            raise DomainError(f"{path}: not a sieve cache file")
        (limit,) = struct.unpack("<Q", raw[5:13])
        bits = np.unpackbits(np.frombuffer(raw[13:], dtype=np.uint8),
                             count=limit + 1, bitorder="little").astype(bool)
        return _assemble(limit, segment_size, (bits[lo: lo + segment_size]
                                               for lo in range(0, limit + 1, segment_size)))


def _assemble(limit: int, segment_size: int, blocks) -> PrimeSieve:
    segments = []
    counts = [0]
    for flags in blocks:
        counts.append(counts[-1] + int(np.count_nonzero(flags)))
        segments.append(np.packbits(flags, bitorder="little"))
    return PrimeSieve(limit, segment_size, tuple(segments), np.asarray(counts, dtype=np.int64))


def sieve_primes(limit: int, segment_size: int = DEFAULT_SEGMENT) -> PrimeSieve:
    """Segmented sieve of Eratosthenes over [0, limit]."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("sieve limit must be at least 2")
    if limit > MAX_LIMIT:
        raise DomainError("sieve limit above 2**40 is not supported")
    if segment_size < 8 or segment_size % 8:
        raise DomainError("segment size must be a positive multiple of 8")
    base = _small_primes(math.isqrt(limit))
    blocks = (_sieve_block(lo, min(lo + segment_size, limit + 1), base)
              for lo in range(0, limit + 1, segment_size))
    return _assemble(limit, segment_size, blocks)


def _split_real(x) -> tuple[int, bool]:
    """floor(x) and whether x is an integer, for int/float/mpf/HighPrecisionReal."""
    v = getattr(x, "value", x)
    if isinstance(v, (int, np.integer)):
        return int(v), True
    v = mpmath.mpf(v)
    n = int(mpmath.floor(v))
    return n, v == n


def prime_count(x, sieve: PrimeSieve) -> float:
    """pi(x) with the half-jump convention: at a prime x the value is count - 1/2."""
    n, integral = _split_real(x)
    if getattr(x, "value", x) <= 0:
        raise DomainError("prime_count needs x > 0")
    if n > sieve.limit:
        raise OutOfRangeError(f"x = {x} exceeds sieve limit {sieve.limit}")
    count = sieve.count_upto(n)
    if integral and n >= 2 and sieve.is_prime(n):
        return count - 0.5
    return float(count)


@dataclass(frozen=True, eq=False)
class MobiusTable:
    limit: int
    values: np.ndarray = field(repr=False)  # values[n] = mu(n); values[0] unused

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise OutOfRangeError(f"mu({n}) outside table [1, {self.limit}]")
        return int(self.values[n])


def mobius_table(limit: int) -> MobiusTable:
    """mu(1..limit) by the linear sieve."""
    limit = int(limit)
    if limit < 1:
        raise DomainError("Moebius table limit must be at least 1")
    mu = [0] * (limit + 1)
    mu[1] = 1
    composite = bytearray(limit + 1)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            composite[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return MobiusTable(limit, np.asarray(mu, dtype=np.int8))
