"""The sumset 2^P + S, its representation function r(n), the moments of r and the Cauchy-Schwarz bound."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from time import perf_counter
from typing import Iterable, Optional

import numpy as np

from .arith import sing_series
from .config import Settings, ensure_memory, get_settings, resolve_threads
from .errors import DomainError, NormalizationError, OutOfRangeError, SizingError
from .sieve import Bitmap, PrimeTable, clear_below, count_upto, extract_bits, is_prime64, packed_size, popcount
from .workers import ordered_map

logger = logging.getLogger(__name__)

WINDOW_CHUNK = 1 << 23
"""Bits per pass of a window count, so each worker holds about a megabyte."""

@dataclass(frozen=True)
class ExponentSet:
	"""The primes ``p`` with ``2^p <= x``."""
	x: int
	exps: tuple[int, ...]

	@classmethod
	def upto(cls, x: int) -> "ExponentSet":
		if x < 1:
			raise DomainError(f"x must be positive, got {x}")
		# floor(log x / log 2), exactly
		top = x.bit_length() - 1
		return cls(x=x, exps=tuple(p for p in range(2, top + 1) if is_prime64(p)))

	@property
	def shifts(self) -> tuple[int, ...]:
		return tuple(1 << p for p in self.exps)

	def __len__(self) -> int:
		return len(self.exps)

@dataclass(frozen=True, eq=False)
class RepCounts:
	"""``r[n]`` for ``0 <= n <= x``, materialized one byte per integer."""
	x: int
	r: np.ndarray = field(repr=False)

	def __getitem__(self, n: int) -> int:
		if not 1 <= n <= self.x:
			raise OutOfRangeError(f"r({n}) requested, counts cover [1, {self.x}]")
		return int(self.r[n])

	@property
	def total(self) -> int:
		return int(self.r.sum(dtype=np.int64))

	@property
	def square_total(self) -> int:
		wide = self.r.astype(np.int64)
		return int((wide * wide).sum())

	@property
	def support(self) -> int:
		return int(np.count_nonzero(self.r))

@dataclass(frozen=True)
class PairWindow:
	"""Contribution of the ordered exponent pair ``(p1, p2)`` to the second moment."""
	p1: int
	p2: int
	count: int

	@property
	def diagonal(self) -> bool:
		return self.p1 == self.p2

@dataclass(frozen=True)
class MomentProfile:
	x: int
	windows: tuple[PairWindow, ...]

	@property
	def ordered_total(self) -> int:
		return sum(w.count for w in self.windows)

	@property
	def diagonal(self) -> int:
		return sum(w.count for w in self.windows if w.diagonal)

	@property
	def off_diagonal(self) -> int:
		return self.ordered_total - self.diagonal

	@property
	def factor2_form(self) -> int:
		"""``2 * sum over p2 <= p1`` of the window counts, i.e. the ordered total plus the diagonal once more."""
		return self.ordered_total + self.diagonal

@dataclass(frozen=True)
class DensityRow:
	x: int
	sumset_count: int
	rep_sum: int
	rep_square_sum: int

	@property
	def cs_bound(self) -> float:
		if self.rep_square_sum == 0:
			raise NormalizationError(f"second moment vanishes at x={self.x}")
		return self.rep_sum ** 2 / self.rep_square_sum

	@property
	def density(self) -> float:
		return self.sumset_count / self.x

	@property
	def certified(self) -> bool:
		"""The Cauchy-Schwarz inequality with cleared denominators, checked in integers."""
		return self.rep_sum ** 2 <= self.sumset_count * self.rep_square_sum

	def as_row(self) -> dict:
		return {
			"x": self.x, "sumset_count": self.sumset_count, "rep_sum": self.rep_sum,
			"rep_square_sum": self.rep_square_sum, "cs_bound": self.cs_bound if self.rep_square_sum else None,
			"density": self.density
		}

@dataclass(frozen=True)
class MomentRow:
	x: int
	rep_sum: int
	first_moment_product: int
	profile: MomentProfile

	def as_row(self) -> dict:
		return {
			"x": self.x, "rep_sum": self.rep_sum, "first_moment_product": self.first_moment_product,
			"diagonal": self.profile.diagonal, "off_diagonal": self.profile.off_diagonal,
			"rep_square_sum": self.profile.ordered_total, "factor2_form": self.profile.factor2_form
		}

def _check_range(x: int, s: Bitmap) -> None:
	if x < 1:
		raise DomainError(f"x must be positive, got {x}")
	if x > s.limit:
		raise OutOfRangeError(f"x={x:,} exceeds the set limit {s.limit:,}")

def shift_or_count(x: int, s: Bitmap, shifts: Iterable[int]) -> int:
	"""``|{n <= x : n = t + q, t in shifts, q in s}|``.

	Bit ``i`` of the packed accumulator stands for ``n = i + 1``. Each shift ``t`` ORs in the bitmap of ``s`` read from
	``1 - t``, with the positions where ``n - t < 1`` cleared.
	"""
	_check_range(x, s)
	acc = np.zeros(packed_size(x), dtype=np.uint8)
	for t in sorted(set(shifts)):
		if t < 0:
			raise DomainError(f"shift must be nonnegative, got {t}")
		if t + 1 > x:
			continue
		shifted = extract_bits(s.packed, 1 - t, x)
		clear_below(shifted, t)
		acc |= shifted
	return popcount(acc)

def sumset_count(x: int, s: Bitmap) -> int:
	"""``|(2^P + s) ∩ [1, x]|``."""
	return shift_or_count(x, s, ExponentSet.upto(x).shifts)

def romanov_count(x: int, primes: PrimeTable) -> int:
	"""``|(2^N + P) ∩ [1, x]|`` with ``N = {0, 1, 2, ...}``, the classical Romanov sumset."""
	return shift_or_count(x, primes, (1 << n for n in range(x.bit_length())))

def rep_sum(x: int, p2star: Bitmap) -> int:
	"""``sum over n <= x`` of r(n), computed as ``sum over p`` of ``P2*(x - 2^p)``."""
	_check_range(x, p2star)
	return sum(count_upto(p2star, x - t) for t in ExponentSet.upto(x).shifts)

def first_moment_product(x: int, p2star: Bitmap) -> int:
	"""``2^P(x/2) * P2*(x/2)``, the lower bound used for the first moment."""
	_check_range(x, p2star)
	return len(ExponentSet.upto(x // 2)) * count_upto(p2star, x / 2) if x >= 2 else 0

def _window_count(x: int, packed: np.ndarray, p1: int, p2: int) -> int:
	t = (1 << p1) - (1 << p2)
	lo = max(1, 1 - t)
	hi = x - (1 << p1)
	if hi < lo:
		return 0
	n = hi - lo + 1
	total = 0
	for start in range(0, n, WINDOW_CHUNK):
		size = min(WINDOW_CHUNK, n - start)
		total += popcount(extract_bits(packed, lo + start, size) & extract_bits(packed, lo + t + start, size))
	return total

def moment_profile(x: int, p2star: Bitmap, *, threads: Optional[int] = None) -> MomentProfile:
	"""Per ordered exponent pair ``(p1, p2)``, the number of ``q1`` in P2* with ``q1 + 2^p1 - 2^p2`` in P2*.

	Both ``q1 <= x - 2^p1`` and ``1 <= q2 <= x - 2^p2`` are enforced; the upper ends coincide, and the lower end is
	clamped when ``2^p2 > 2^p1``.
	"""
	_check_range(x, p2star)
	exps = ExponentSet.upto(x).exps
	pairs = [(p1, p2) for p1 in exps for p2 in exps]
	counts = ordered_map(lambda pair: _window_count(x, p2star.packed, *pair), pairs, resolve_threads(threads))
	return MomentProfile(x=x, windows=tuple(PairWindow(p1, p2, c) for (p1, p2), c in zip(pairs, counts)))

def rep_square_sum(x: int, p2star: Bitmap, *, threads: Optional[int] = None) -> int:
	"""``sum over n <= x`` of r(n)^2, without materializing r."""
	return moment_profile(x, p2star, threads=threads).ordered_total

def rep_counts_direct(x: int, p2star: Bitmap, *, settings: Optional[Settings] = None) -> RepCounts:
	"""Exact ``r(n)`` for every ``n <= x`` by incrementing over all pairs ``(p, q)``.

	Raises
	------
	SizingError
		If ``x`` exceeds the direct-mode cap; use `rep_sum` and `rep_square_sum` instead.
	"""
	settings = settings or get_settings()
	_check_range(x, p2star)
	if x > settings.direct_cap:
		raise SizingError(
			f"direct counts are capped at x={settings.direct_cap:,} (got {x:,}); use rep_sum and rep_square_sum instead"
		)
	ensure_memory(x + 1, "representation counts")
	exps = ExponentSet.upto(x)
	assert len(exps) < 256, "r(n) would overflow one byte"
	r = np.zeros(x + 1, dtype=np.uint8)
	for t in exps.shifts:
		if t + 1 > x:
			continue
		r[t + 1:x + 1] += p2star.unpack(1, x + 1 - t)
	return RepCounts(x=x, r=r)

def cs_lower_bound(x: int, p2star: Bitmap, *, threads: Optional[int] = None) -> float:
	"""``(sum r)^2 / sum r^2``, a lower bound on `sumset_count`.

	Raises
	------
	NormalizationError
		If the moments vanish.
	"""
	first = rep_sum(x, p2star)
	if first == 0:
		raise NormalizationError(f"no representations up to x={x}; the bound is undefined")
	return first ** 2 / rep_square_sum(x, p2star, threads=threads)

def cs_lower_bound_exact(x: int, p2star: Bitmap, *, threads: Optional[int] = None) -> Fraction:
	first = rep_sum(x, p2star)
	if first == 0:
		raise NormalizationError(f"no representations up to x={x}; the bound is undefined")
	return Fraction(first ** 2, rep_square_sum(x, p2star, threads=threads))

def density_row(x: int, p2star: Bitmap, *, threads: Optional[int] = None) -> DensityRow:
	logger.debug(f"Computing density row at x={x:,}...")
	benchmark = perf_counter()
	row = DensityRow(
		x=x, sumset_count=sumset_count(x, p2star), rep_sum=rep_sum(x, p2star),
		rep_square_sum=rep_square_sum(x, p2star, threads=threads)
	)
	end = perf_counter() - benchmark
	logger.debug(f"Density row at x={x:,} complete in {end:.2f}s")
	return row

def moment_row(x: int, p2star: Bitmap, *, threads: Optional[int] = None) -> MomentRow:
	return MomentRow(
		x=x, rep_sum=rep_sum(x, p2star), first_moment_product=first_moment_product(x, p2star),
		profile=moment_profile(x, p2star, threads=threads)
	)

def off_diagonal_weights(profile: MomentProfile) -> list[tuple[PairWindow, Fraction]]:
	"""Each off-diagonal window with the singular series ``S(2^|p1 - p2| - 1)`` that governs its size."""
	return [(w, sing_series((1 << abs(w.p1 - w.p2)) - 1)) for w in profile.windows if not w.diagonal]
