"""Deterministic fan-out over independent work items."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
	"""Applies ``func`` to every item and returns the results in submission order.

	The result never depends on ``threads``: results are collected in input order, so any reduction the caller
	performs over the list happens in the same order for 1 or 64 workers.
	"""
	items = list(items)
	if threads <= 1 or len(items) <= 1:
		return [func(item) for item in items]
	with ThreadPoolExecutor(max_workers=min(threads, len(items))) as executor:
		return list(executor.map(func, items))
