"""Trajectories for the two conjectures on sumsets {2^a + b : a in A, b in B} of arbitrary sets A and B."""

import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Literal, Optional

import numpy as np

from .errors import DomainError, SetSpecParseError
from .psets import classify
from .sieve import Bitmap, count_upto, sieve_primes
from .sumset import shift_or_count

logger = logging.getLogger(__name__)

SetKind = Literal["primes", "semiprimes", "p2", "p2star", "naturals", "squares", "file"]
SET_KINDS: tuple[str, ...] = ("primes", "semiprimes", "p2", "p2star", "naturals", "squares", "file")

@dataclass(frozen=True)
class SetSpec:
	"""A declarative description of a set of positive integers.

	Examples
	--------
	>>> SetSpec.parse("p2star")
	SetSpec(kind='p2star', path=None)

	>>> SetSpec.parse("file:exponents.txt").path
	'exponents.txt'
	"""
	kind: SetKind
	path: Optional[str] = None

	@classmethod
	def parse(cls, text: str) -> "SetSpec":
		kind, _, path = text.strip().partition(":")
		kind = kind.lower()
		if kind not in SET_KINDS:
			raise DomainError(f"unknown set {text!r}; expected one of {', '.join(SET_KINDS)} (file:PATH)")
		if kind == "file" and not path:
			raise DomainError("a file set needs a path: file:PATH")
		return cls(kind=kind, path=path or None)  # type: ignore[arg-type]

	def __str__(self) -> str:
		return f"file:{self.path}" if self.kind == "file" else self.kind

@dataclass(frozen=True)
class ConjectureRow:
	x: int
	ratio: float
	density: float
	c_exceeded: Optional[bool]

	def as_row(self) -> dict:
		return { "x": self.x, "ratio": self.ratio, "density": self.density, "c_exceeded": self.c_exceeded }

def _read_members(path: str) -> list[int]:
	members: list[int] = []
	with open(path, encoding="utf-8") as f:
		for lineno, line in enumerate(f, start=1):
			for token in line.split("#", 1)[0].split():
				try:
					value = int(token)
				except ValueError:
					raise SetSpecParseError(f"{path}:{lineno}: {token!r} is not an integer", path=path, line=lineno) from None
				if value < 1:
					raise SetSpecParseError(f"{path}:{lineno}: {value} is not positive", path=path, line=lineno)
				if members and value <= members[-1]:
					raise SetSpecParseError(
						f"{path}:{lineno}: {value} does not exceed the previous entry {members[-1]}", path=path, line=lineno
					)
				members.append(value)
	return members

def resolve_setspec(spec: SetSpec, limit: int) -> Bitmap:
	"""The bitmap of the members of ``spec`` that are at most ``limit``.

	Raises
	------
	SetSpecParseError
		With the line number, for a malformed file.
	"""
	if limit < 1:
		raise DomainError(f"limit must be positive, got {limit}")
	match spec.kind:
		case "primes" if limit >= 2:
			return replace(sieve_primes(limit), kind=str(spec))
		case "p2" | "p2star" if limit >= 4:
			classified = classify(limit)
			return replace(classified.p2 if spec.kind == "p2" else classified.p2star, kind=str(spec))
		case "semiprimes" if limit >= 4:
			classified = classify(limit)
			packed = classified.p2.packed & ~classified.primes.packed
			return Bitmap(limit=limit, packed=packed, kind=str(spec))
	bits = np.zeros(limit + 1, dtype=bool)
	match spec.kind:
		case "naturals":
			bits[1:] = True
		case "squares":
			bits[np.arange(1, math.isqrt(limit) + 1) ** 2] = True
		case "primes" | "p2" | "p2star":
			bits[[n for n in (2, 3) if n <= limit]] = True
		case "file":
			members = [m for m in _read_members(spec.path) if m <= limit]
			bits[members] = True
	return Bitmap.from_bools(limit, bits, kind=str(spec))

def _exponent_bound(x: int) -> int:
	# floor(log x / log 2), exactly
	return x.bit_length() - 1

def chen_ratio(A: SetSpec, B: SetSpec, x: int, *, b_set: Optional[Bitmap] = None) -> float:
	"""``A(log x / log 2) * B(x) / x``, counting ``A`` at the real point ``log x / log 2`` with floor semantics."""
	if x < 4:
		raise DomainError(f"x must be at least 4, got {x}")
	a_set = resolve_setspec(A, _exponent_bound(x))
	b_set = b_set if b_set is not None and b_set.limit >= x else resolve_setspec(B, x)
	return count_upto(a_set, _exponent_bound(x)) * count_upto(b_set, x) / x

def general_density(A: SetSpec, B: SetSpec, x: int, *, b_set: Optional[Bitmap] = None) -> float:
	"""``|{n <= x : n = 2^a + b, a in A, b in B}| / x`` by shift-OR over the ``a`` with ``2^a <= x - 1``."""
	if x < 4:
		raise DomainError(f"x must be at least 4, got {x}")
	a_set = resolve_setspec(A, _exponent_bound(x - 1))
	b_set = b_set if b_set is not None and b_set.limit >= x else resolve_setspec(B, x)
	return shift_or_count(x, b_set, (1 << int(a) for a in a_set.members())) / x

def conjecture_report(A: SetSpec, B: SetSpec, xs: Iterable[int], c: Optional[float] = None) -> list[ConjectureRow]:
	"""Ratio and density at each checkpoint; ``c_exceeded`` marks where the ratio is above ``c``."""
	xs = sorted(xs)
	if not xs:
		return []
	b_set = resolve_setspec(B, xs[-1])
	rows = []
	for x in xs:
		ratio = chen_ratio(A, B, x, b_set=b_set)
		rows.append(ConjectureRow(
			x=x, ratio=ratio, density=general_density(A, B, x, b_set=b_set), c_exceeded=None if c is None else ratio > c
		))
	return rows
