"""Classification of the integers up to a limit into P2 (primes and products of two primes) and P2*."""

import logging
import math
from dataclasses import dataclass
from time import perf_counter
from typing import Iterable, Optional

import numpy as np

from .config import Settings, ensure_memory, get_settings, resolve_threads
from .errors import DomainError, NormalizationError, OutOfRangeError, SizingError
from .sieve import (
	Bitmap, LpfTable, PrimeTable, assemble_packed, count_upto, lpf_segment, packed_size, primes_upto, segment_bounds, sieve_primes,
	small_primes
)
from .workers import ordered_map

logger = logging.getLogger(__name__)

NORMALIZATION_MIN_X = 16
"""Below 16, log log x is too small for the normalization to mean anything."""

@dataclass(frozen=True, eq=False)
class ClassifiedSet:
	"""Membership bitmaps of P2 and P2* on ``[0, limit]``, together with the prime table they were derived from."""
	limit: int
	primes: PrimeTable
	p2: Bitmap
	p2star: Bitmap

	def square_count(self, x: Optional[int] = None) -> int:
		"""Number of prime squares ``p^2 <= x`` (default: the limit); they lie in P2 and never in P2*."""
		return square_count(self.primes, self.limit if x is None else x)

@dataclass(frozen=True)
class CheckpointRecord:
	"""A counting checkpoint ``(x, A(x), A(x) log x / (x log log x))``."""
	x: int
	count: int
	normalized: float

	@classmethod
	def at(cls, bitmap: Bitmap, x: int) -> "CheckpointRecord":
		if x < NORMALIZATION_MIN_X:
			raise NormalizationError(f"normalization is undefined for x={x} < {NORMALIZATION_MIN_X}")
		count = count_upto(bitmap, x)
		return cls(x=x, count=count, normalized=count * math.log(x) / (x * math.log(math.log(x))))

	def as_row(self) -> dict:
		return { "x": self.x, "count": self.count, "normalized": self.normalized }

@dataclass(frozen=True)
class MertensRecord:
	x: int
	reciprocal_sum: float
	loglog: float

	@property
	def difference(self) -> float:
		return self.reciprocal_sum - self.loglog

	def as_row(self) -> dict:
		return { "x": self.x, "reciprocal_sum": self.reciprocal_sum, "loglog": self.loglog, "difference": self.difference }

def psi(q: int, lpf: LpfTable) -> int:
	"""The least prime factor of ``q``, except that ``psi(p) = 1`` for a prime ``p``.

	Raises
	------
	DomainError
		If ``q < 2``.
	OutOfRangeError
		If ``q`` exceeds the table.
	"""
	if q < 2:
		raise DomainError(f"psi is defined for q >= 2, got {q}")
	least = lpf[q]
	return 1 if least == q else least

def star_by_cube(p1: int, q: int) -> bool:
	"""Whether a semiprime ``q`` with least prime factor ``p1`` satisfies ``p1^3 < q``."""
	return p1 ** 3 < q

def star_by_square(p1: int, p2: int) -> bool:
	"""Whether ``q = p1 p2`` (``p1 <= p2``) satisfies ``p1^2 < p2``, which is the same as `star_by_cube`."""
	return p1 * p1 < p2

def classify_naive(n: int) -> tuple[bool, bool]:
	"""Trial-division membership of ``n`` in (P2, P2*). Slow; meant as an oracle."""
	factors = []
	m, d = n, 2
	while d * d <= m and len(factors) < 3:
		while m % d == 0 and len(factors) < 3:
			factors.append(d)
			m //= d
		d += 1
	if m > 1:
		factors.append(m)
	if n < 2 or len(factors) > 2:
		return False, False
	if len(factors) == 1:
		return True, True
	return True, star_by_cube(factors[0], n)

def _classify_segment(bounds: tuple[int, int], primes: PrimeTable, base: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
	lo, hi = bounds
	lpf = lpf_segment(lo, hi, base)
	p2 = primes.unpack(lo, hi)
	star = p2.copy()

	# uint32 holds every n up to the 2^31 cap, and lpf(n)^2 <= n
	offsets = np.flatnonzero(lpf).astype(np.uint32)
	least = lpf[offsets]
	cofactor = (offsets + np.uint32(lo)) // least
	# n is a semiprime iff n / lpf(n) is prime; lpf(n)^3 < n iff lpf(n)^2 < n / lpf(n)
	semi = primes.test(cofactor)
	p2[offsets[semi]] = True
	star[offsets[semi & (least * least < cofactor)]] = True
	return np.packbits(p2, bitorder="little"), np.packbits(star, bitorder="little")

def classify(
	limit: int, *, segment_size: Optional[int] = None, threads: Optional[int] = None, settings: Optional[Settings] = None,
	primes: Optional[PrimeTable] = None
) -> ClassifiedSet:
	"""Classifies every integer on ``[0, limit]``.

	Least prime factors are produced segment by segment and every table is stored packed, so resident memory is three
	bits per integer plus a few segments in flight. The P2* test is the exact integer predicate ``lpf(q)^3 < q``.

	Parameters
	----------
	limit: `int`
		At least 4.
	primes: Optional[`PrimeTable`]
		A prime table covering ``limit``, if one was already built.
	"""
	settings = settings or get_settings()
	if limit < 4:
		raise SizingError(f"classification needs limit >= 4, got {limit}")
	size = min(segment_size or settings.segment_size, limit + 1)
	workers = resolve_threads(threads)
	ensure_memory(3 * packed_size(limit + 1) + 40 * size * workers, "classification")
	logger.info(f"Classifying integers up to {limit:,}...")
	benchmark = perf_counter()

	if primes is None or primes.limit < limit:
		primes = sieve_primes(limit, segment_size=size, threads=threads, settings=settings)
	primes = primes.restrict(limit)
	base = small_primes(math.isqrt(limit))
	bounds = segment_bounds(limit, size)
	parts = ordered_map(lambda b: _classify_segment(b, primes, base), bounds, workers)

	result = ClassifiedSet(
		limit=limit, primes=primes,
		p2=Bitmap(limit=limit, packed=assemble_packed(limit, bounds, [p2 for p2, _ in parts]), kind="p2"),
		p2star=Bitmap(limit=limit, packed=assemble_packed(limit, bounds, [star for _, star in parts]), kind="p2star")
	)
	end = perf_counter() - benchmark
	logger.info(f"Classified integers up to {limit:,} in {end:.2f}s")
	return result

def checkpoint_report(bitmap: Bitmap, xs: Iterable[int]) -> list[CheckpointRecord]:
	"""Normalized counts of ``bitmap`` at each checkpoint, sorted by ``x``.

	Raises
	------
	NormalizationError
		If some ``x < 16``.
	OutOfRangeError
		If some ``x`` exceeds the bitmap limit.
	"""
	return [CheckpointRecord.at(bitmap, x) for x in sorted(xs)]

def square_count(primes: PrimeTable, x: int) -> int:
	return count_upto(primes, math.isqrt(x))

def p2star_param_count(x: int, primes: PrimeTable) -> int:
	"""Counts pairs ``(p1, p2)`` with ``p1`` prime or 1, ``p2`` prime and ``p1^2 < p2 <= x / p1``.

	The pairs are in bijection with P2* up to ``x``, so this must equal ``count_upto(p2star, x)``.
	"""
	if x > primes.limit:
		raise OutOfRangeError(f"x={x} exceeds the prime table limit {primes.limit:,}")
	total = count_upto(primes, x)
	for p1 in small_primes(math.isqrt(x)):
		if p1 ** 3 >= x:
			break
		total += max(0, count_upto(primes, x // p1) - count_upto(primes, p1 * p1))
	return total

def mertens_report(primes: PrimeTable, xs: Iterable[int]) -> list[MertensRecord]:
	"""Compensated sums of ``1/p`` over ``p <= x`` next to ``log log x``."""
	records = []
	for x in sorted(xs):
		if x < NORMALIZATION_MIN_X:
			raise NormalizationError(f"log log x is not used below x={NORMALIZATION_MIN_X}, got {x}")
		reciprocals = 1.0 / primes_upto(primes, x).astype(np.float64)
		records.append(MertensRecord(x=x, reciprocal_sum=math.fsum(reciprocals), loglog=math.log(math.log(x))))
	return records
