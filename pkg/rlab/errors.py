"""Exceptions raised by the rlab library."""

from typing import Optional

class RlabError(ValueError):
	"""Base class for every error raised by rlab.

	``key`` names the message in ``localization/en.l10n.json`` that the command line uses to report it.
	"""

	key = "errors.generic"

	def __init__(self, message: str, **details) -> None:
		super().__init__(message)
		self.details = details

class SizingError(RlabError):
	"""A requested table does not fit the configured limit cap or the available memory."""

	key = "errors.sizing"

class OutOfRangeError(RlabError):
	"""A query point lies beyond the limit a table was built for."""

	key = "errors.out_of_range"

class DomainError(RlabError):
	"""An argument lies outside the domain of the function (even modulus, q < 2, ...)."""

	key = "errors.domain"

class NormalizationError(RlabError):
	"""A count exists but its normalization is undefined (x < 16, odd offsets, zero moments)."""

	key = "errors.normalization"

class EmptyRangeError(RlabError):
	"""The counting range is empty, e.g. an offset not smaller than x."""

	key = "errors.empty_range"

class ParameterError(RlabError):
	"""A hypothesis of a counting experiment fails. The message names the failed condition."""

	key = "errors.parameter"

class SetSpecParseError(RlabError):
	key = "errors.setspec_parse"

	def __init__(self, message: str, *, path: str, line: int) -> None:
		super().__init__(message, path=path, line=line)
		self.path = path
		self.line = line

class VerificationError(RlabError):
	"""A certificate failed: a factor table line, a bitmap dump header, a primality proof."""

	key = "errors.verification"

	def __init__(self, message: str, *, k: Optional[int] = None, line: Optional[int] = None) -> None:
		super().__init__(message, k=k, line=line)
		self.k = k
		self.line = line
