"""Prime and least-prime-factor tables, membership bitmaps and 64-bit primality."""

import logging
import math
import struct
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from time import perf_counter
from typing import Optional, Union

import numpy as np

from .config import Settings, ensure_memory, get_settings, resolve_threads
from .errors import DomainError, OutOfRangeError, SizingError, VerificationError
from .workers import ordered_map

logger = logging.getLogger(__name__)

MAGIC = b"RLAB"
VERSION = 1
HEADER = struct.Struct("<4sIQB")
"""magic, version (u32), limit (u64), kind (u8); little-endian, no padding."""
KIND_CODES = { "primes": 0, "p2": 1, "p2star": 2, "sumset": 3 }
OTHER_KIND = 255

MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
"""Witness set that makes Miller-Rabin deterministic below 3.3e24, hence for every 64-bit input."""

BYTE_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)
UNPACK_CHUNK = 1 << 24

def packed_size(nbits: int) -> int:
	return -(-nbits // 8)

def popcount(packed: np.ndarray) -> int:
	"""Number of set bits in a ``uint8`` array."""
	return int(BYTE_POPCOUNT[packed].sum(dtype=np.int64))

def extract_bits(packed: np.ndarray, lo: int, n: int) -> np.ndarray:
	"""Bits ``lo, ..., lo + n - 1`` of a little-endian packed array, realigned to start at bit 0.

	Positions outside the array (including negative ``lo``) read as 0, and the unused bits of the last byte are 0.
	"""
	if n <= 0:
		return np.zeros(0, dtype=np.uint8)
	nbytes = packed_size(n)
	first, shift = lo >> 3, lo & 7
	window = np.zeros(nbytes + 1, dtype=np.uint8)
	src_lo, src_hi = max(first, 0), min(first + nbytes + 1, packed.size)
	if src_lo < src_hi:
		window[src_lo - first:src_hi - first] = packed[src_lo:src_hi]
	if shift:
		out = (window[:-1] >> np.uint8(shift)) | (window[1:] << np.uint8(8 - shift))
	else:
		out = window[:-1]
	tail = n & 7
	if tail:
		out[-1] &= np.uint8((1 << tail) - 1)
	return out

def clear_below(packed: np.ndarray, k: int) -> None:
	"""Clears bits ``0, ..., k - 1`` of ``packed`` in place."""
	if k <= 0:
		return
	packed[:k >> 3] = 0
	if k & 7 and (k >> 3) < packed.size:
		packed[k >> 3] &= np.uint8(0xFF ^ ((1 << (k & 7)) - 1))

@dataclass(frozen=True, eq=False)
class Bitmap:
	"""Membership of a set of positive integers on ``[0, limit]``.

	Bit ``n % 8`` of byte ``n // 8`` of ``packed`` is set iff ``n`` belongs to the set; the bits past ``limit`` are 0.
	The array is made read-only on construction, so a bitmap can be shared between threads without copying.
	"""
	limit: int
	packed: np.ndarray = field(repr=False)
	kind: str = "set"

	def __post_init__(self) -> None:
		if self.packed.dtype != np.uint8 or self.packed.shape != (packed_size(self.limit + 1),):
			raise ValueError(
				f"Expected {packed_size(self.limit + 1)} packed bytes for limit {self.limit}, got {self.packed.dtype} {self.packed.shape}"
			)
		tail = (self.limit + 1) & 7
		if tail and self.packed[-1] >> tail:
			raise ValueError(f"bits past the limit {self.limit} are set")
		self.packed.flags.writeable = False

	@classmethod
	def from_bools(cls, limit: int, bools: np.ndarray, **kwargs) -> "Bitmap":
		"""Packs a boolean array of length ``limit + 1``."""
		if bools.shape != (limit + 1,):
			raise ValueError(f"Expected {limit + 1} flags, got {bools.shape}")
		return cls(limit=limit, packed=np.packbits(bools.astype(bool, copy=False), bitorder="little"), **kwargs)

	def __contains__(self, n: int) -> bool:
		return 0 <= n <= self.limit and bool((self.packed[n >> 3] >> (n & 7)) & 1)

	def test(self, indices: np.ndarray) -> np.ndarray:
		"""Vectorized membership of ``indices``, which must lie in ``[0, limit]``."""
		indices = np.asarray(indices)
		if indices.dtype.kind not in "iu":
			indices = indices.astype(np.int64)
		return ((self.packed[indices >> 3] >> (indices & 7).astype(np.uint8)) & 1).astype(bool)

	def bit_range(self, lo: int, hi: int) -> np.ndarray:
		"""Packed bits of ``[lo, hi)`` realigned to bit 0; see `extract_bits`."""
		return extract_bits(self.packed, lo, hi - lo)

	def unpack(self, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
		"""Boolean flags of ``[lo, hi)`` (default: the whole table)."""
		hi = self.limit + 1 if hi is None else hi
		if hi <= lo:
			return np.zeros(0, dtype=bool)
		return np.unpackbits(self.bit_range(lo, hi), count=hi - lo, bitorder="little").view(bool)

	def count_range(self, lo: int, hi: int) -> int:
		"""Members in ``[lo, hi)``."""
		return popcount(self.bit_range(lo, hi)) if hi > lo else 0

	def count_upto(self, x: Union[int, float]) -> int:
		return count_upto(self, x)

	def members(self, x: Optional[int] = None) -> np.ndarray:
		"""The sorted members that are at most ``x`` (default: all of them)."""
		top = self.limit if x is None else min(int(x), self.limit)
		found = [
			np.flatnonzero(self.unpack(lo, min(lo + UNPACK_CHUNK, top + 1))) + lo for lo in range(0, top + 1, UNPACK_CHUNK)
		]
		return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)

	def restrict(self, limit: int) -> "Bitmap":
		"""The same set on ``[0, limit]`` for ``limit <= self.limit``."""
		if limit > self.limit:
			raise OutOfRangeError(f"cannot extend a bitmap built up to {self.limit:,} to {limit:,}")
		if limit == self.limit:
			return self
		return replace(self, limit=limit, packed=extract_bits(self.packed, 0, limit + 1))

	def to_words(self) -> np.ndarray:
		"""The bitmap as little-endian 64-bit words, bit ``n % 64`` of word ``n // 64`` being member ``n``."""
		padded = np.zeros(-(-self.packed.size // 8) * 8, dtype=np.uint8)
		padded[:self.packed.size] = self.packed
		return padded.view("<u8")

	@property
	def popcount(self) -> int:
		return popcount(self.packed)

	def dump(self, path: Union[str, Path]) -> None:
		dump_bitmap(self, path)

	@classmethod
	def load(cls, path: Union[str, Path]) -> "Bitmap":
		return load_bitmap(path)

@dataclass(frozen=True, eq=False)
class PrimeTable(Bitmap):
	"""Bitmap of the primes on ``[0, limit]``."""
	kind: str = "primes"

@dataclass(frozen=True, eq=False)
class LpfTable:
	"""Least prime factor of every integer on ``[1, limit]``, with ``lpf(1) = 1``."""
	limit: int
	lpf: np.ndarray = field(repr=False)

	def __post_init__(self) -> None:
		self.lpf.flags.writeable = False

	def __getitem__(self, n: int) -> int:
		if not 1 <= n <= self.limit:
			raise OutOfRangeError(f"lpf({n}) requested from a table built up to {self.limit}")
		return int(self.lpf[n])

	def is_prime(self, n: int) -> bool:
		return n >= 2 and self[n] == n

def _check_limit(limit: int, minimum: int, settings: Settings) -> None:
	if limit < minimum:
		raise SizingError(f"limit {limit} is below the minimum of {minimum}")
	if limit > settings.limit_cap:
		raise SizingError(
			f"limit {limit:,} exceeds the cap of {settings.limit_cap:,}; raise RLAB_LIMIT_CAP or stream segments externally"
		)

@lru_cache(maxsize=8)
def small_primes(limit: int) -> tuple[int, ...]:
	"""All primes up to ``limit`` as a tuple, via a plain (monolithic) sieve."""
	if limit < 2:
		return ()
	bits = np.ones(limit + 1, dtype=bool)
	bits[:2] = False
	for p in range(2, math.isqrt(limit) + 1):
		if bits[p]:
			bits[p * p::p] = False
	return tuple(int(p) for p in np.flatnonzero(bits))

def _prime_segment(bounds: tuple[int, int], base: tuple[int, ...]) -> np.ndarray:
	lo, hi = bounds
	seg = np.ones(hi - lo, dtype=bool)
	for p in base:
		if p * p >= hi:
			break
		start = max(p * p, -(-lo // p) * p)
		seg[start - lo::p] = False
	# 0 and 1 are not prime
	for n in (0, 1):
		if lo <= n < hi:
			seg[n - lo] = False
	return seg

def lpf_segment(lo: int, hi: int, base: tuple[int, ...]) -> np.ndarray:
	"""Least prime factors of ``[lo, hi)``; entries of primes (and of 0, 1) are left at 0.

	``base`` must contain every prime up to ``isqrt(hi - 1)``.
	"""
	seg = np.zeros(hi - lo, dtype=np.uint32)
	for p in base:
		if p * p >= hi:
			break
		start = max(p * p, -(-lo // p) * p)
		view = seg[start - lo::p]
		view[view == 0] = p
	return seg

def segment_bounds(limit: int, segment_size: int) -> list[tuple[int, int]]:
	# segments start on byte boundaries so packed segments can be copied in place
	size = -(-segment_size // 8) * 8
	return [(lo, min(lo + size, limit + 1)) for lo in range(0, limit + 1, size)]

def assemble_packed(limit: int, bounds: list[tuple[int, int]], parts: list[np.ndarray]) -> np.ndarray:
	"""Joins packed segments produced over byte-aligned ``bounds`` into one packed array on ``[0, limit]``."""
	packed = np.empty(packed_size(limit + 1), dtype=np.uint8)
	for (lo, _), part in zip(bounds, parts):
		packed[lo >> 3:(lo >> 3) + part.size] = part
	return packed

def sieve_primes(
	limit: int, *, segment_size: Optional[int] = None, threads: Optional[int] = None, settings: Optional[Settings] = None
) -> PrimeTable:
	"""Builds the prime bitmap on ``[0, limit]``.

	Parameters
	----------
	limit: `int`
		Upper end of the table, at least 2 and at most the configured cap.
	segment_size: Optional[`int`]
		If given, the table is built segment by segment (the size is rounded up to a multiple of 8). The result is
		bit-identical to the monolithic build, which holds one byte per integer while it runs.
	threads: Optional[`int`]
		Workers used for the segments.

	Raises
	------
	SizingError
		If ``limit`` is below 2, above the cap, or does not fit in memory.
	"""
	settings = settings or get_settings()
	_check_limit(limit, 2, settings)
	monolithic = segment_size is None or segment_size > limit
	ensure_memory(limit + 1 if monolithic else packed_size(limit + 1) + 2 * segment_size, "prime bitmap")
	logger.debug(f"Sieving primes up to {limit:,}...")
	benchmark = perf_counter()

	if monolithic:
		bits = np.ones(limit + 1, dtype=bool)
		bits[:2] = False
		for p in range(2, math.isqrt(limit) + 1):
			if bits[p]:
				bits[p * p::p] = False
		table = PrimeTable.from_bools(limit, bits)
	else:
		if segment_size < 1:
			raise SizingError(f"segment size must be positive, got {segment_size}")
		base = small_primes(math.isqrt(limit))
		bounds = segment_bounds(limit, segment_size)
		parts = ordered_map(
			lambda b: np.packbits(_prime_segment(b, base), bitorder="little"), bounds, resolve_threads(threads)
		)
		table = PrimeTable(limit=limit, packed=assemble_packed(limit, bounds, parts))

	end = perf_counter() - benchmark
	logger.debug(f"Sieved primes up to {limit:,} in {end:.2f}s")
	return table

def sieve_lpf(
	limit: int, *, segment_size: Optional[int] = None, threads: Optional[int] = None, settings: Optional[Settings] = None
) -> LpfTable:
	"""Builds the least-prime-factor table on ``[1, limit]`` (``lpf(1) = 1``, ``lpf(p) = p``)."""
	settings = settings or get_settings()
	_check_limit(limit, 1, settings)
	ensure_memory(4 * (limit + 1), "least prime factor table")
	benchmark = perf_counter()

	base = small_primes(math.isqrt(limit))
	if segment_size is None or segment_size > limit:
		lpf = lpf_segment(0, limit + 1, base)
	else:
		bounds = segment_bounds(limit, segment_size)
		parts = ordered_map(lambda b: lpf_segment(b[0], b[1], base), bounds, resolve_threads(threads))
		lpf = np.empty(limit + 1, dtype=np.uint32)
		for (lo, hi), part in zip(bounds, parts):
			lpf[lo:hi] = part

	unmarked = np.flatnonzero(lpf == 0)
	lpf[unmarked] = unmarked
	lpf[0] = 0
	if limit >= 1:
		lpf[1] = 1

	end = perf_counter() - benchmark
	logger.debug(f"Built least prime factors up to {limit:,} in {end:.2f}s")
	return LpfTable(limit=limit, lpf=lpf)

def strong_probable_prime(n: int, bases: tuple[int, ...]) -> bool:
	"""Miller-Rabin with the given witnesses; ``n`` must be odd and larger than every base."""
	d, s = n - 1, 0
	while d % 2 == 0:
		d //= 2
		s += 1
	for a in bases:
		x = pow(a, d, n)
		if x == 1 or x == n - 1:
			continue
		for _ in range(s - 1):
			x = x * x % n
			if x == n - 1:
				break
		else:
			return False
	return True

def is_prime64(n: int) -> bool:
	"""Deterministic primality for ``0 <= n < 2**64``.

	Raises
	------
	DomainError
		If ``n`` is negative or does not fit in 64 bits.
	"""
	if n < 0 or n >= 1 << 64:
		raise DomainError(f"{n} is not an unsigned 64-bit integer")
	if n < 2:
		return False
	for p in MR_BASES_64:
		if n % p == 0:
			return n == p
	return strong_probable_prime(n, MR_BASES_64)

def count_upto(table: Bitmap, x: Union[int, float]) -> int:
	"""``|{1 <= a <= x : a in table}|``; real ``x`` is truncated to ``floor(x)``.

	Raises
	------
	OutOfRangeError
		If ``floor(x)`` exceeds the table limit.
	DomainError
		If ``x`` is negative.
	"""
	if x < 0:
		raise DomainError(f"count requested at negative x={x}")
	top = math.floor(x)
	if top > table.limit:
		raise OutOfRangeError(f"count requested at x={x}, beyond the table limit {table.limit:,}")
	return table.count_range(1, top + 1)

def primes_upto(table: PrimeTable, x: int) -> np.ndarray:
	"""The primes ``p <= x`` as a sorted ``int64`` array."""
	if x > table.limit:
		raise OutOfRangeError(f"primes requested up to {x}, beyond the table limit {table.limit:,}")
	return table.members(x).astype(np.int64)

def dump_bitmap(bitmap: Bitmap, path: Union[str, Path]) -> None:
	"""Writes the ``RLAB`` header followed by the little-endian 64-bit words of the bitmap."""
	kind = KIND_CODES.get(bitmap.kind, OTHER_KIND)
	with open(path, "wb") as f:
		f.write(HEADER.pack(MAGIC, VERSION, bitmap.limit, kind))
		f.write(bitmap.to_words().tobytes())
	logger.info(f"Wrote {bitmap.kind} bitmap up to {bitmap.limit:,} to {path}")

def load_bitmap(path: Union[str, Path]) -> Bitmap:
	"""Reads a bitmap written by `dump_bitmap`.

	Raises
	------
	VerificationError
		If the magic, version or payload length does not match, or bits past the limit are set.
	"""
	data = Path(path).read_bytes()
	if len(data) < HEADER.size:
		raise VerificationError(f"{path}: file too short for a bitmap header")
	magic, version, limit, kind = HEADER.unpack_from(data)
	if magic != MAGIC:
		raise VerificationError(f"{path}: bad magic {magic!r}")
	if version != VERSION:
		raise VerificationError(f"{path}: unsupported version {version}")
	words = -(-(limit + 1) // 64)
	payload = data[HEADER.size:]
	if len(payload) != 8 * words:
		raise VerificationError(f"{path}: expected {8 * words} payload bytes, found {len(payload)}")
	raw = np.frombuffer(payload, dtype=np.uint8)
	packed = raw[:packed_size(limit + 1)].copy()
	tail = (limit + 1) & 7
	if np.any(raw[packed_size(limit + 1):]) or (tail and packed[-1] >> tail):
		raise VerificationError(f"{path}: bits past the limit {limit} are set")
	names = { code: name for name, code in KIND_CODES.items() }
	name = names.get(kind, "set")
	if name == "primes":
		return PrimeTable(limit=limit, packed=packed)
	return Bitmap(limit=limit, packed=packed, kind=name)
