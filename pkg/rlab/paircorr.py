"""Correlated memberships at a fixed offset, and simultaneous prime values of two linear forms."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .arith import sing_series
from .errors import EmptyRangeError, NormalizationError, OutOfRangeError, ParameterError
from .psets import NORMALIZATION_MIN_X
from .sieve import Bitmap, PrimeTable, popcount

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class PairReport:
	"""The count of ``q <= x - N`` with ``q, q + N`` in the set, and its sieve normalization.

	``normalized`` is ``None`` for odd ``N``: the upper bound it is compared with is only stated for even offsets.
	"""
	x: int
	N: int
	count: int
	sigma: Fraction
	normalized: Optional[float]

	def as_row(self) -> dict:
		return { "x": self.x, "N": self.N, "count": self.count, "sigma": self.sigma, "normalized": self.normalized }

@dataclass(frozen=True)
class PrimePairReport:
	x: int
	forms: tuple[int, int, int, int]
	count: int
	sigma: Fraction
	normalized: float

	def as_row(self) -> dict:
		k1, l1, k2, l2 = self.forms
		return {
			"x": self.x, "k1": k1, "l1": l1, "k2": k2, "l2": l2, "count": self.count, "sigma": self.sigma,
			"normalized": self.normalized
		}

@dataclass(frozen=True)
class SigmaTrack:
	"""How the normalized pair ratio moves from ``N`` to ``3N``; the singular series should absorb the change."""
	N: int
	ratio: Optional[float]
	"""None when no pairs were found at ``N``."""

	@property
	def within_band(self) -> bool:
		return self.ratio is not None and 0.5 <= self.ratio <= 1.5

	def as_row(self) -> dict:
		return { "N": self.N, "ratio": self.ratio, "within_band": self.within_band }

def count_pairs(x: int, N: int, s: Bitmap) -> int:
	"""``|{q <= x - N : q in s and q + N in s}|``, by AND-ing the bitmap with itself shifted by ``N``.

	Raises
	------
	EmptyRangeError
		If ``N >= x`` or ``N < 1``.
	OutOfRangeError
		If ``x`` exceeds the set limit.
	"""
	if N < 1 or N >= x:
		raise EmptyRangeError(f"offset N={N} leaves no q in [1, x - N] for x={x}")
	if x > s.limit:
		raise OutOfRangeError(f"x={x:,} exceeds the set limit {s.limit:,}")
	return popcount(s.bit_range(1, x - N + 1) & s.bit_range(1 + N, x + 1))

def pair_normalizer(x: int) -> float:
	"""``x (log log x)^2 / (log x)^2``."""
	return x * math.log(math.log(x)) ** 2 / math.log(x) ** 2

def pair_ratio(x: int, N: int, s: Bitmap) -> PairReport:
	"""The pair count at offset ``N`` divided by ``x (log log x)^2 / (log x)^2 * S(N)``.

	Raises
	------
	NormalizationError
		If ``N`` is odd or ``x < 16``; `count_pairs` still counts such cases.
	"""
	if N % 2:
		raise NormalizationError(f"the pair normalization is defined for even N only, got N={N}")
	if x < NORMALIZATION_MIN_X:
		raise NormalizationError(f"normalization is undefined for x={x} < {NORMALIZATION_MIN_X}")
	count = count_pairs(x, N, s)
	sigma = sing_series(N)
	return PairReport(x=x, N=N, count=count, sigma=sigma, normalized=count / (pair_normalizer(x) * float(sigma)))

def pair_table(x: int, Ns: Iterable[int], s: Bitmap) -> list[PairReport]:
	"""One report per offset; odd offsets carry a count and the singular series but no normalization."""
	reports = []
	for N in Ns:
		if N % 2:
			reports.append(PairReport(x=x, N=N, count=count_pairs(x, N, s), sigma=sing_series(N), normalized=None))
		else:
			reports.append(pair_ratio(x, N, s))
	return reports

def sigma_tracking(reports: Iterable[PairReport]) -> list[SigmaTrack]:
	"""For every even ``N`` whose triple ``3N`` is also reported, ``normalized(3N) / normalized(N)``."""
	by_offset = { r.N: r for r in reports if r.normalized is not None }
	return [
		SigmaTrack(N=N, ratio=by_offset[3 * N].normalized / report.normalized if report.normalized else None)
		for N, report in sorted(by_offset.items()) if 3 * N in by_offset
	]

def _validate_forms(x: int, k1: int, l1: int, k2: int, l2: int, primes: PrimeTable) -> int:
	if min(k1, l1, k2, l2) < 0:
		raise ParameterError(f"coefficients must be nonnegative, got ({k1}, {l1}, {k2}, {l2})")
	if math.gcd(k1, l1) != 1:
		raise ParameterError(f"gcd(k1, l1) = gcd({k1}, {l1}) != 1")
	if math.gcd(k2, l2) != 1:
		raise ParameterError(f"gcd(k2, l2) = gcd({k2}, {l2}) != 1")
	delta = k2 * l1 - k1 * l2
	if delta == 0:
		raise ParameterError(f"k2*l1 - k1*l2 = 0: the two forms are proportional")
	top = max(k1 * x + l1, k2 * x + l2)
	if top > primes.limit:
		raise ParameterError(f"the forms reach {top:,} at n={x}, beyond the prime table limit {primes.limit:,}")
	return delta

def count_linear_pairs(x: int, k1: int, l1: int, k2: int, l2: int, primes: PrimeTable) -> int:
	"""``|{1 <= n <= x : k1 n + l1 and k2 n + l2 both prime}|``, with no parity hypothesis on ``k2 l1 - k1 l2``."""
	_validate_forms(x, k1, l1, k2, l2, primes)
	n = np.arange(1, x + 1, dtype=np.int64)
	return int(np.count_nonzero(primes.test(k1 * n + l1) & primes.test(k2 * n + l2)))

def prime_pair_count(x: int, k1: int, l1: int, k2: int, l2: int, primes: PrimeTable) -> PrimePairReport:
	"""The two-linear-forms count and its normalization ``count / (x / (log x)^2 * S(|k2 l1 - k1 l2|))``.

	Raises
	------
	ParameterError
		Naming the failed hypothesis: a non-coprime pair, proportional forms, an odd ``k2 l1 - k1 l2``, ``x < 2``,
		or values beyond the prime table.
	"""
	if x < 2:
		raise ParameterError(f"x must be at least 2 for log x to be positive, got {x}")
	delta = _validate_forms(x, k1, l1, k2, l2, primes)
	if delta % 2:
		raise ParameterError(f"k2*l1 - k1*l2 = {delta} is not even")
	count = count_linear_pairs(x, k1, l1, k2, l2, primes)
	sigma = sing_series(abs(delta))
	return PrimePairReport(
		x=x, forms=(k1, l1, k2, l2), count=count, sigma=sigma, normalized=count / (x / math.log(x) ** 2 * float(sigma))
	)
