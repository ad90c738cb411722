"""A helper for custom messages and machine-readable reports."""

import csv
import io
import json
import logging
import math
import pathlib
from fractions import Fraction
from typing import Any, Iterable, Optional, Union

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12

class CustomResponse:
	"""Looks up user-facing messages in the ``*.l10n.json`` catalogues and formats them."""

	def __init__(self, path: Union[str, pathlib.Path, None] = None, default_locale: str = "en") -> None:
		"""A message catalogue instance.

		Parameters
		----------
		path: Union[`str`, `pathlib.Path`]
			The folder holding the ``<lang>.l10n.json`` files. Defaults to ``localization`` next to the project root.
		default_locale: `str`
			The locale used when a key is missing from the requested one.
		"""
		self.default_locale = default_locale
		self.localizations: dict[str, dict] = { }
		self.load_localizations(path or pathlib.Path(__file__).resolve().parent.parent / "localization")

	def load_localizations(self, path: Union[str, pathlib.Path]) -> None:
		localization_path = pathlib.Path(path)
		for file_path in localization_path.glob("*.l10n.json"):
			lang = file_path.stem.removesuffix(".l10n")
			try:
				with open(file_path, encoding="utf-8") as f:
					data = json.load(f)
					if not isinstance(data, dict):
						raise ValueError(f"Expected dict in {file_path}, got {type(data).__name__}")
					self.localizations.setdefault(lang, { }).update(data)
			except Exception as e:
				logger.warning(f"Failed to load {file_path}: {e}")

	def _lookup(self, name: str, locale: str) -> Optional[Any]:
		node: Any = self.localizations.get(locale, { })
		for part in name.split("."):
			if not isinstance(node, dict) or part not in node:
				return None
			node = node[part]
		return node

	def get_message(self, name: str, /, locale: Optional[str] = None, **kwargs: Any) -> str:
		"""Gets a message by its dotted key, formatted with ``kwargs``.

		Parameters
		----------
		name: `str`
			The dotted key, e.g. ``errors.out_of_range``.
		locale: Optional[`str`]
			The locale to use; falls back to the default locale, then to the key itself.

		Returns
		-------
		`str`
			The formatted message.
		"""
		message = self._lookup(name, locale or self.default_locale)
		if message is None:
			message = self._lookup(name, self.default_locale)
		if not isinstance(message, str):
			return name
		try:
			return message.format(**kwargs)
		except (KeyError, IndexError) as e:
			logger.warning(f"Message {name} is missing the placeholder {e}")
			return message

	__call__ = get_message

def format_value(value: Any, *, for_json: bool = False) -> Any:
	"""Renders one report cell. Floats keep 12 significant digits, fractions are written ``p/q``."""
	match value:
		case None:
			return None if for_json else ""
		case bool():
			return value if for_json else str(value).lower()
		case Fraction():
			return str(value)
		case int():
			return value if for_json else str(value)
		case float():
			if not math.isfinite(value):
				return None if for_json else str(value)
			return float(f"{value:.{SIGNIFICANT_DIGITS}g}") if for_json else f"{value:.{SIGNIFICANT_DIGITS}g}"
		case _:
			return str(value)

class Report:
	"""Rows of a report with a fixed column order, rendered as CSV (with a header row) or as a JSON array of records."""

	def __init__(self, rows: Iterable[dict], columns: Optional[list[str]] = None) -> None:
		self.rows = list(rows)
		self.columns = columns or (list(self.rows[0]) if self.rows else [])

	def to_csv(self) -> str:
		buffer = io.StringIO()
		writer = csv.writer(buffer, lineterminator="\n")
		writer.writerow(self.columns)
		for row in self.rows:
			writer.writerow([format_value(row.get(column)) for column in self.columns])
		return buffer.getvalue()

	def to_json(self) -> str:
		records = [{ column: format_value(row.get(column), for_json=True) for column in self.columns } for row in self.rows]
		return json.dumps(records, indent=2) + "\n"

	def render(self, as_json: bool = False) -> str:
		return self.to_json() if as_json else self.to_csv()

	def __len__(self) -> int:
		return len(self.rows)
