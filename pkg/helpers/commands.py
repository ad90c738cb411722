"""The command framework shared by ``main.py`` and the cogs."""

import argparse
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable, Optional

import yaml

from rlab import errors
from rlab.psets import ClassifiedSet, classify
from rlab.sieve import Bitmap, PrimeTable, sieve_primes

from .convert import convert_checkpoints
from .custom_response import Report

if TYPE_CHECKING:
	from main import Client

@dataclass(frozen=True)
class RunConfig:
	"""Everything that determines a report. Identical configurations produce byte-identical reports for any thread count."""
	command: str
	limit: Optional[int]
	checkpoints: str
	as_json: bool
	threads: int
	out: Optional[str] = None
	options: dict[str, Any] = field(default_factory=dict)
	deterministic: bool = True

	@classmethod
	def from_namespace(cls, namespace: argparse.Namespace) -> "RunConfig":
		values = dict(vars(namespace))
		return cls(
			command=values.pop("command"), limit=values.pop("limit", None), checkpoints=values.pop("checkpoints", "log10"),
			as_json=values.pop("json", False), threads=max(1, values.pop("threads", 1) or 1), out=values.pop("out", None),
			options={ k: v for k, v in values.items() if k not in ("config", "handler") }
		)

	def option(self, name: str, default: Any = None) -> Any:
		value = self.options.get(name)
		return default if value is None else value

@dataclass
class Command:
	name: str
	description: str
	callback: Callable[[RunConfig], Report]
	arguments: list[tuple[tuple, dict]]

def command(name: str):
	"""Marks a cog method as the handler of the subcommand ``name``."""
	def decorator(func):
		func.__command_name__ = name
		func.__dict__.setdefault("__command_arguments__", [])
		return func
	return decorator

def argument(*flags: str, **kwargs: Any):
	"""Adds an ``argparse`` argument to a command. Stacked decorators keep their top-to-bottom order."""
	def decorator(func):
		func.__dict__.setdefault("__command_arguments__", []).insert(0, (flags, kwargs))
		return func
	return decorator

class Cog:
	"""A group of related subcommands. Subclasses decorate methods with `command` and `argument`."""

	def __init__(self, client: "Client") -> None:
		self.client = client

	def get_commands(self) -> list[Command]:
		found = []
		for attribute in dir(type(self)):
			member = getattr(self, attribute)
			name = getattr(member, "__command_name__", None)
			if name:
				found.append(Command(
					name=name, description=self.client.custom_response(f"commands.{name}"), callback=member,
					arguments=list(member.__command_arguments__)
				))
		return found

	@staticmethod
	def require_limit(config: RunConfig) -> int:
		if config.limit is None:
			raise ValueError(f"{config.command} needs --limit")
		return config.limit

	@staticmethod
	def checkpoints(config: RunConfig, limit: int, *, minimum: int = 16) -> list[int]:
		return convert_checkpoints(str(config.checkpoints), limit, minimum=minimum)

class TableCache:
	"""Prime tables and classifications shared by the commands of one invocation; a larger table serves smaller limits."""

	def __init__(self) -> None:
		self._primes: Optional[PrimeTable] = None
		self._classified: Optional[ClassifiedSet] = None

	def primes(self, limit: int, threads: int = 1) -> PrimeTable:
		if self._classified and self._classified.limit >= limit:
			return self._classified.primes
		if not self._primes or self._primes.limit < limit:
			self._primes = sieve_primes(max(limit, 2), threads=threads)
		return self._primes

	def classified(self, limit: int, threads: int = 1) -> ClassifiedSet:
		if not self._classified or self._classified.limit < limit:
			primes = self._primes if self._primes and self._primes.limit >= limit else None
			self._classified = classify(max(limit, 4), threads=threads, primes=primes)
		return self._classified

	def bitmap(self, name: str, limit: int, threads: int = 1) -> Bitmap:
		match name:
			case "primes":
				return self.primes(limit, threads)
			case "p2":
				return self.classified(limit, threads).p2
			case "p2star":
				return self.classified(limit, threads).p2star
			case _:
				raise errors.DomainError(f"unknown set {name!r}; expected p2, p2star or primes")

RANGE_SCALAR = re.compile(r"^[-+]?[0-9][0-9_.]*(?::[0-9_.]+)+$")
"""Plain scalars such as ``2:30`` that YAML 1.1 would read as base-60 numbers."""

class RunConfigLoader(yaml.SafeLoader):
	"""A safe loader that keeps ranges like ``N: 2:30`` as strings."""

RunConfigLoader.yaml_implicit_resolvers = {
	first: ([("tag:yaml.org,2002:str", RANGE_SCALAR)] if first in "+-0123456789" else []) + list(resolvers)
	for first, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}
