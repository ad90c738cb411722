"""Process-wide settings, read from the environment (and a ``.env`` file if present)."""

import logging
import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import psutil
from dotenv import load_dotenv

from .errors import SizingError

logger = logging.getLogger(__name__)

load_dotenv()

def _env_int(name: str, default: int) -> int:
	value = os.getenv(name)
	if value is None or value.strip() == "":
		return default
	try:
		# accept "1e6" as well as "1000000"
		return int(float(value)) if any(c in value for c in "eE.") else int(value)
	except ValueError:
		logger.warning(f"Ignoring malformed {name}={value!r}, using {default}")
		return default

@dataclass(frozen=True)
class Settings:
	"""Caps and defaults shared by every experiment.

	Parameters
	----------
	limit_cap: `int`
		Largest limit a sieve or classification may be built for.
	direct_cap: `int`
		Largest x for which the representation counts r(n) are materialized.
	k_max: `int`
		Largest K for which factorizations of 2^k - 1 are computed in-process.
	euler_primes: `int`
		Prime bound of the truncated Euler product for prod(1 + 1/p^2).
	segment_size: `int`
		Segment length used by segmented sieving and classification.
	threads: `int`
		Worker count for segment and exponent-pair loops.
	debug: `bool`
		Whether verbose logging is enabled.
	"""
	limit_cap: int = 2 ** 31
	direct_cap: int = 10 ** 7
	k_max: int = 60
	euler_primes: int = 10 ** 6
	segment_size: int = 2 ** 20
	threads: int = 1
	debug: bool = False

	@classmethod
	def from_env(cls) -> "Settings":
		return cls(
			limit_cap=_env_int("RLAB_LIMIT_CAP", cls.limit_cap), direct_cap=_env_int("RLAB_DIRECT_CAP", cls.direct_cap),
			k_max=_env_int("RLAB_K_MAX", cls.k_max), euler_primes=_env_int("RLAB_EULER_PRIMES", cls.euler_primes),
			segment_size=_env_int("RLAB_SEGMENT_SIZE", cls.segment_size), threads=max(1, _env_int("RLAB_THREADS", cls.threads)),
			debug=os.getenv("RLAB_DEBUG", "").lower() in ("1", "true", "yes", "on")
		)

	def with_overrides(self, **overrides) -> "Settings":
		return replace(self, **{ k: v for k, v in overrides.items() if v is not None })

@lru_cache(maxsize=1)
def get_settings() -> Settings:
	return Settings.from_env()

def resolve_threads(threads: Optional[int]) -> int:
	return max(1, threads if threads is not None else get_settings().threads)

def ensure_memory(nbytes: int, what: str) -> None:
	"""Raises `SizingError` if a table of ``nbytes`` bytes cannot fit in the memory currently available.

	Parameters
	----------
	nbytes: `int`
		Estimated resident size of the table.
	what: `str`
		Human-readable name of the table, used in the message.
	"""
	available = psutil.virtual_memory().available
	if nbytes > available:
		raise SizingError(
			f"{what} needs about {nbytes / 1048576:.0f} MB but only {available / 1048576:.0f} MB are available; "
			f"lower the limit or use the segmented path"
		)
	if nbytes > available // 2:
		logger.warning(f"{what} will use {nbytes / 1048576:.0f} MB of {available / 1048576:.0f} MB available")
