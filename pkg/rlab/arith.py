"""Factorization, multiplicative orders of 2, the singular series, and the series that close the second-moment bound."""

import logging
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count
from pathlib import Path
from time import perf_counter
from typing import Iterable, Optional, Union

import gmpy2
import numpy as np

from .config import Settings, get_settings
from .errors import DomainError, VerificationError
from .sieve import MR_BASES_64, is_prime64, sieve_lpf, sieve_primes, small_primes, strong_probable_prime

logger = logging.getLogger(__name__)

MR_BASES_WIDE = MR_BASES_64 + (41,)
MR_WIDE_BOUND = 3317044064679887385961981
"""Below this bound, Miller-Rabin with the first thirteen prime bases is a proof of primality."""

TRIAL_BOUND = 10 ** 6
EXACT_TERMS = 2000
"""Truncations with at most this many terms per sum are evaluated in exact rational arithmetic by default."""

FACTOR_LINE = re.compile(r"^\s*(?P<k>\d+)\s*:(?P<factors>(?:\s*\d+)*)\s*$")

Number = Union[Fraction, float]

def is_prime(n: int) -> bool:
	"""Primality for integers of any size.

	Below 3.3e24 the answer is a proof: Miller-Rabin with the first thirteen prime bases has no pseudoprime there.
	Larger ``n`` (prime factors of ``2^k - 1`` from an external table, for instance) go through the Baillie-PSW test,
	which has no known counterexample.
	"""
	if n < 1 << 64:
		return is_prime64(max(n, 0))
	if n % 2 == 0:
		return False
	if n < MR_WIDE_BOUND:
		return strong_probable_prime(n, MR_BASES_WIDE)
	logger.debug(f"{n.bit_length()}-bit input is beyond the deterministic witness range; using Baillie-PSW")
	return bool(gmpy2.is_bpsw_prp(n))

@dataclass(frozen=True)
class Factorization:
	"""``n`` as a sorted tuple of ``(prime, exponent)`` pairs. The product and every prime are checked on construction."""
	n: int
	factors: tuple[tuple[int, int], ...] = field(default=())

	def __post_init__(self) -> None:
		product = 1
		for p, e in self.factors:
			if e < 1 or not is_prime(p):
				raise VerificationError(f"{p}^{e} is not a prime power in the factorization of {self.n}")
			product *= p ** e
		if product != self.n:
			raise VerificationError(f"factors of {self.n} multiply to {product}")
		if list(self.factors) != sorted(self.factors) or len({ p for p, _ in self.factors }) != len(self.factors):
			raise VerificationError(f"factors of {self.n} are not sorted and distinct")

	@classmethod
	def from_primes(cls, n: int, primes: Iterable[int]) -> "Factorization":
		"""Builds a factorization from a list of primes with multiplicity."""
		exponents: dict[int, int] = { }
		for p in primes:
			exponents[p] = exponents.get(p, 0) + 1
		return cls(n=n, factors=tuple(sorted(exponents.items())))

	@property
	def primes(self) -> tuple[int, ...]:
		return tuple(p for p, _ in self.factors)

	@property
	def is_squarefree(self) -> bool:
		return all(e == 1 for _, e in self.factors)

	@property
	def phi(self) -> int:
		result = 1
		for p, e in self.factors:
			result *= p ** (e - 1) * (p - 1)
		return result

	@property
	def carmichael(self) -> int:
		"""The exponent of the unit group mod ``n`` (``n`` odd)."""
		result = 1
		for p, e in self.factors:
			result = math.lcm(result, p ** (e - 1) * (p - 1))
		return result

	def squarefree_divisors(self) -> list[int]:
		divisors = [1]
		for p in self.primes:
			divisors += [d * p for d in divisors]
		return sorted(divisors)

	def __str__(self) -> str:
		return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"

@dataclass(frozen=True)
class SeriesEstimate:
	"""A partial sum, how it was truncated, and a proven bound on the tail when one is known."""
	value: Number
	terms_used: int
	truncation: str
	error_bound: Optional[float] = None

	@property
	def exact(self) -> bool:
		return isinstance(self.value, Fraction)

	def __float__(self) -> float:
		return float(self.value)

def _brent(n: int) -> int:
	"""A nontrivial factor of the odd composite ``n``; seeds are fixed so the output is deterministic."""
	block = 128
	for c in count(1):
		y, r, q, g = 2, 1, 1, 1
		x = ys = y
		while g == 1:
			x = y
			for _ in range(r):
				y = (y * y + c) % n
			k = 0
			while k < r and g == 1:
				ys = y
				for _ in range(min(block, r - k)):
					y = (y * y + c) % n
					q = q * abs(x - y) % n
				g = math.gcd(q, n)
				k += block
			r *= 2
		if g == n:
			g = 1
			while g == 1:
				ys = (ys * ys + c) % n
				g = math.gcd(abs(x - ys), n)
		if g != n:
			return g
	raise AssertionError("unreachable")

def _split(n: int, out: list[int]) -> None:
	if n == 1:
		return
	if is_prime(n):
		out.append(n)
		return
	d = _brent(n)
	_split(d, out)
	_split(n // d, out)

def factorize(n: int, *, trial_bound: int = 1000) -> Factorization:
	"""Factors ``n``: trial division by the primes up to ``trial_bound``, then Brent's variant of Pollard rho.

	Raises
	------
	DomainError
		If ``n < 1``.
	"""
	if n < 1:
		raise DomainError(f"only positive integers are factored, got {n}")
	found: list[int] = []
	m = n
	for p in small_primes(trial_bound):
		if p * p > m:
			break
		while m % p == 0:
			found.append(p)
			m //= p
	_split(m, found)
	return Factorization.from_primes(n, found)

@lru_cache(maxsize=None)
def mersenne_factors(k: int) -> Factorization:
	"""The verified factorization of ``2^k - 1``."""
	if k < 1:
		raise DomainError(f"k must be positive, got {k}")
	return factorize((1 << k) - 1, trial_bound=TRIAL_BOUND)

def load_factor_table(path: Union[str, Path]) -> dict[int, Factorization]:
	"""Reads lines ``k: p1 p2 ...`` (primes with multiplicity) and verifies each one.

	Raises
	------
	VerificationError
		Naming the line and ``k`` of the first entry whose product is not ``2^k - 1`` or whose entries are not all
		certified primes.
	"""
	table: dict[int, Factorization] = { }
	with open(path, encoding="utf-8") as f:
		for lineno, raw in enumerate(f, start=1):
			line = raw.split("#", 1)[0]
			if not line.strip():
				continue
			match = FACTOR_LINE.match(line)
			if not match:
				raise VerificationError(f"{path}:{lineno}: expected 'k: p1 p2 ...', got {raw.strip()!r}", line=lineno)
			k = int(match["k"])
			primes = [int(p) for p in match["factors"].split()]
			if k < 1 or k in table:
				raise VerificationError(f"{path}:{lineno}: k={k} is not positive or is repeated", k=k, line=lineno)
			if math.prod(primes) != (1 << k) - 1:
				raise VerificationError(f"{path}:{lineno}: the factors do not multiply to 2^{k} - 1", k=k, line=lineno)
			try:
				table[k] = Factorization.from_primes((1 << k) - 1, primes)
			except VerificationError as e:
				raise VerificationError(f"{path}:{lineno}: {e}", k=k, line=lineno) from e
	logger.info(f"Loaded {len(table)} verified factorizations from {path}")
	return table

def mult_order2(d: int) -> int:
	"""``e(d)``, the least ``e >= 1`` with ``2^e = 1 (mod d)``.

	The Carmichael exponent of ``d`` is factored and divided down prime by prime; the result is checked by direct
	modular exponentiation.

	Raises
	------
	DomainError
		If ``d`` is even or not positive.
	"""
	if d < 1 or d % 2 == 0:
		raise DomainError(f"the order of 2 is defined for odd positive d, got {d}")
	if d == 1:
		return 1
	e = factorize(d).carmichael
	for q in factorize(e).primes:
		while e % q == 0 and pow(2, e // q, d) == 1:
			e //= q
	if pow(2, e, d) != 1:
		raise VerificationError(f"2^{e} is not 1 modulo {d}")
	return e

def sing_series(N: int) -> Fraction:
	"""``S(N) = prod over p | N`` of ``(1 + 1/p)``, exactly."""
	if N < 1:
		raise DomainError(f"S(N) is defined for N >= 1, got {N}")
	result = Fraction(1)
	for p in factorize(N).primes:
		result *= Fraction(p + 1, p)
	return result

def euler_phi(n: int) -> int:
	if n < 1:
		raise DomainError(f"phi(n) is defined for n >= 1, got {n}")
	return factorize(n).phi

def is_squarefree(n: int) -> bool:
	if n < 1:
		raise DomainError(f"squarefreeness is defined for n >= 1, got {n}")
	return factorize(n).is_squarefree

def squarefree_mask(D: int) -> np.ndarray:
	"""``mask[d]`` is true iff ``1 <= d <= D`` is squarefree."""
	mask = np.ones(D + 1, dtype=bool)
	mask[0] = False
	for p in small_primes(math.isqrt(D)):
		mask[p * p::p * p] = False
	return mask

@lru_cache(maxsize=4)
def order_table(D: int) -> np.ndarray:
	"""``e(d)`` for every odd squarefree ``d <= D``; 0 for the other entries.

	Orders of primes come from the factorization of ``p - 1`` read off a least-prime-factor table, and for a
	squarefree ``d`` with least prime ``q``, ``e(d) = lcm(e(q), e(d / q))``.
	"""
	if D < 1:
		raise DomainError(f"D must be positive, got {D}")
	logger.debug(f"Building order table up to {D:,}...")
	benchmark = perf_counter()
	lpf = sieve_lpf(max(D, 2)).lpf.tolist()
	orders = [0] * (D + 1)
	orders[1] = 1
	for d in range(3, D + 1, 2):
		q = lpf[d]
		if q == d:
			e, m, seen = d - 1, d - 1, []
			while m > 1:
				r = lpf[m]
				seen.append(r)
				while m % r == 0:
					m //= r
			for r in seen:
				while e % r == 0 and pow(2, e // r, d) == 1:
					e //= r
			orders[d] = e
			continue
		rest = d // q
		if rest % q == 0 or orders[rest] == 0:
			continue
		orders[d] = math.lcm(orders[q], orders[rest])
	end = perf_counter() - benchmark
	logger.debug(f"Built order table up to {D:,} in {end:.2f}s")
	table = np.array(orders, dtype=np.int64)
	table.flags.writeable = False
	return table

def w_scan(K: int, D: int) -> SeriesEstimate:
	"""``sum of 1/d`` over odd squarefree ``d <= D`` with ``e(d) <= K``: a lower bound for ``W(K)``."""
	if K < 1 or D < 1:
		raise DomainError(f"K and D must be positive, got K={K}, D={D}")
	orders = order_table(D)
	ds = np.flatnonzero((orders > 0) & (orders <= K))
	value = sum((Fraction(1, int(d)) for d in ds), Fraction(0))
	return SeriesEstimate(value=value, terms_used=len(ds), truncation=f"K={K}, d<={D}")

def _factor_source(k: int, factor_table: Optional[dict[int, Factorization]], settings: Settings) -> Factorization:
	if factor_table and k in factor_table:
		return factor_table[k]
	if k <= settings.k_max:
		return mersenne_factors(k)
	raise VerificationError(f"no verified factorization of 2^{k} - 1 is available (in-process limit is {settings.k_max})", k=k)

def prime_orders(K: int, factor_table: Optional[dict[int, Factorization]] = None, settings: Optional[Settings] = None) -> dict[int, int]:
	"""Every prime ``p`` with ``e(p) <= K``, mapped to ``e(p)``.

	``p | 2^k - 1`` iff ``e(p) | k``, so the first ``k`` at which ``p`` shows up is its order.
	"""
	settings = settings or get_settings()
	orders: dict[int, int] = { }
	for k in range(1, K + 1):
		for p in _factor_source(k, factor_table, settings).primes:
			orders.setdefault(p, k)
	return orders

def w_dp(K: int, *, factor_table: Optional[dict[int, Factorization]] = None, settings: Optional[Settings] = None) -> SeriesEstimate:
	"""Exact ``W(K) = sum over k <= K`` of ``sum of 1/d`` over squarefree ``d`` with ``e(d) = k``.

	Dynamic programming over the lcm of the orders: each prime ``p`` moves the weight of state ``m`` to
	``lcm(m, e(p))`` with factor ``1/p``. States above ``K`` are dropped for good, since adding primes only grows
	the lcm.

	Raises
	------
	VerificationError
		If some ``2^k - 1`` with ``k <= K`` has no verified factorization.
	"""
	if K < 1:
		raise DomainError(f"K must be positive, got {K}")
	orders = prime_orders(K, factor_table, settings)
	states: dict[int, Fraction] = { 1: Fraction(1) }
	for p in sorted(orders):
		ep = orders[p]
		moves = []
		for m, weight in states.items():
			target = math.lcm(m, ep)
			if target <= K:
				moves.append((target, weight / p))
		for target, weight in moves:
			states[target] = states.get(target, Fraction(0)) + weight
	value = sum((states[m] for m in sorted(states)), Fraction(0))
	return SeriesEstimate(value=value, terms_used=len(orders), truncation=f"K={K}")

@lru_cache(maxsize=4)
def euler_product_constant(P: Optional[int] = None) -> SeriesEstimate:
	"""``prod over p`` of ``(1 + 1/p^2)``, from the primes up to ``P`` and an estimate of the rest.

	The missing factor lies in ``[1, exp(1/P))``; the estimate ``exp(1/(P log P))`` is applied and ``error_bound``
	covers the whole interval. The value is compared against ``zeta(2)/zeta(4) = 15/pi^2``.
	"""
	P = P or get_settings().euler_primes
	primes = sieve_primes(max(P, 2)).members().astype(np.float64)
	head = math.exp(math.fsum(np.log1p(1.0 / (primes * primes))))
	value = head * math.exp(1.0 / (P * math.log(P))) if P > 1 else head
	bound = head * math.expm1(1.0 / P)
	reference = 15 / math.pi ** 2
	if abs(value - reference) > bound:
		logger.warning(f"Euler product {value:.12g} is {abs(value - reference):.3g} away from 15/pi^2, beyond its bound {bound:.3g}")
	return SeriesEstimate(value=value, terms_used=len(primes), truncation=f"p<={P}", error_bound=bound)

def inner_sum_closed(k: int) -> float:
	"""``(1/k) prod over p | k of (1 + 1/p) * prod over p not dividing k of (1 + 1/p^2)``."""
	if k < 1:
		raise DomainError(f"k must be positive, got {k}")
	divided = Fraction(1)
	for p in factorize(k).primes:
		divided *= Fraction(p * p + 1, p * p)
	return float(sing_series(k) / (k * divided)) * euler_product_constant().value

def _inner_terms(k: int, ds: np.ndarray) -> np.ndarray:
	lcm = ds * (k // np.gcd(ds, k))
	return 1.0 / (ds.astype(np.float64) * lcm.astype(np.float64))

def inner_sum_trunc(k: int, Dp: int, *, exact: Optional[bool] = None) -> SeriesEstimate:
	"""``sum of 1/(d' lcm(k, d'))`` over squarefree ``d' <= Dp``; the tail is at most ``1/Dp``."""
	if k < 1 or Dp < 1:
		raise DomainError(f"k and Dp must be positive, got k={k}, Dp={Dp}")
	ds = np.flatnonzero(squarefree_mask(Dp)).astype(np.int64)
	if exact if exact is not None else len(ds) <= EXACT_TERMS:
		value: Number = sum((Fraction(1, int(d) * math.lcm(k, int(d))) for d in ds), Fraction(0))
	else:
		value = math.fsum(_inner_terms(k, ds))
	return SeriesEstimate(value=value, terms_used=len(ds), truncation=f"k={k}, d'<={Dp}", error_bound=1 / Dp)

def double_series_partial(Dd: int, Dp: int, *, exact: Optional[bool] = None) -> SeriesEstimate:
	"""``sum of 1/(d d' lcm(e(d), d'))`` over odd squarefree ``d <= Dd`` and squarefree ``d' <= Dp``.

	The inner sum only depends on ``e(d)``, so the ``d`` are grouped by order first.
	"""
	if Dd < 1 or Dp < 1:
		raise DomainError(f"Dd and Dp must be positive, got Dd={Dd}, Dp={Dp}")
	orders = order_table(Dd)
	groups: dict[int, list[int]] = { }
	for d in np.flatnonzero(orders):
		groups.setdefault(int(orders[d]), []).append(int(d))
	inner_ds = np.flatnonzero(squarefree_mask(Dp)).astype(np.int64)
	terms = sum(len(g) for g in groups.values()) * len(inner_ds)
	if exact if exact is not None else terms <= EXACT_TERMS:
		value: Number = Fraction(0)
		for e in sorted(groups):
			outer = sum((Fraction(1, d) for d in groups[e]), Fraction(0))
			value += outer * sum((Fraction(1, int(d) * math.lcm(e, int(d))) for d in inner_ds), Fraction(0))
	else:
		value = math.fsum(
			math.fsum(1.0 / d for d in groups[e]) * math.fsum(_inner_terms(e, inner_ds)) for e in sorted(groups)
		)
	return SeriesEstimate(value=value, terms_used=terms, truncation=f"d<={Dd}, d'<={Dp}")

@dataclass(frozen=True)
class GrowthRow:
	K: int
	w_dp: Fraction
	w_scan: Fraction
	D: int

	@property
	def ratio_to_log_k(self) -> Optional[float]:
		return float(self.w_dp) / math.log(self.K) if self.K > 1 else None

	def as_row(self) -> dict:
		return {
			"K": self.K, "W_dp": float(self.w_dp), "W_scan": float(self.w_scan), "D": self.D,
			"ratio_to_logK": self.ratio_to_log_k
		}

def w_growth(Ks: Iterable[int], D: int, *, factor_table: Optional[dict[int, Factorization]] = None) -> list[GrowthRow]:
	return [
		GrowthRow(K=K, w_dp=w_dp(K, factor_table=factor_table).value, w_scan=w_scan(K, D).value, D=D) for K in sorted(Ks)
	]

@dataclass(frozen=True)
class DoublingRow:
	D: int
	partial_sum: float
	delta: Optional[float]

	def as_row(self) -> dict:
		return { "Dd": self.D, "Dp": self.D, "partial_sum": self.partial_sum, "delta": self.delta }

def series_doubling(D0: int, steps: int) -> list[DoublingRow]:
	"""Partial sums of the double series along ``Dd = Dp = D0 * 2^i``, with successive differences."""
	rows: list[DoublingRow] = []
	previous = None
	for i in range(steps):
		D = D0 << i
		value = float(double_series_partial(D, D).value)
		rows.append(DoublingRow(D=D, partial_sum=value, delta=None if previous is None else value - previous))
		previous = value
	return rows

def singular_weight_sum(K: int, *, factor_table: Optional[dict[int, Factorization]] = None, settings: Optional[Settings] = None) -> Fraction:
	"""``sum over k <= K`` of ``S(k) S(2^k - 1)``, the weight the off-diagonal pairs of the second moment carry."""
	settings = settings or get_settings()
	total = Fraction(0)
	for k in range(1, K + 1):
		mersenne = _factor_source(k, factor_table, settings)
		weight = Fraction(1)
		for p in mersenne.primes:
			weight *= Fraction(p + 1, p)
		total += sing_series(k) * weight
	return total
