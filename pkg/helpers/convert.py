"""A helper for converting command-line values."""

from typing import Union

from .regex import NUMBER, POWER_OF_TWO, RANGE

def convert_number(text: Union[str, int]) -> int:
	"""
	Converts text into a positive integer. ex.: 1e6 = 1000000, 2^20 = 1048576

	Arguments
	---------
	text: `str`
		The value as typed on the command line. Scientific notation is accepted as long as the value is an integer.

	Returns
	-------
	`int`
		The integer value.

	Raises
	----------
	ValueError
		If the text is not a nonnegative integer.
	"""
	if isinstance(text, int):
		return text
	if match := POWER_OF_TWO.match(text):
		return 1 << int(match["exponent"])
	match = NUMBER.match(text)
	if not match:
		raise ValueError(f"'{text}' is not a nonnegative integer")
	mantissa = match["mantissa"]
	exponent = int(match["exponent"] or 0)
	whole, _, fraction = mantissa.partition(".")
	fraction = fraction.rstrip("0")
	if len(fraction) > exponent:
		raise ValueError(f"'{text}' is not an integer")
	return int(whole + fraction) * 10 ** (exponent - len(fraction))

def convert_range(text: str) -> list[int]:
	"""
	Converts ``a:b:step`` (inclusive, step defaults to 1) or a comma-separated list into integers.
	ex.: 2:10:2 = [2, 4, 6, 8, 10], 2,6,30 = [2, 6, 30]

	Raises
	----------
	ValueError
		If the step is not positive or the bounds are malformed.
	"""
	if match := RANGE.match(text):
		start, stop = convert_number(match["start"]), convert_number(match["stop"])
		step = convert_number(match["step"]) if match["step"] else 1
		if step < 1:
			raise ValueError(f"step must be positive in '{text}'")
		return list(range(start, stop + 1, step))
	return [convert_number(part) for part in text.split(",") if part.strip()]

def convert_checkpoints(text: str, limit: int, *, minimum: int = 16) -> list[int]:
	"""
	Converts a checkpoint schedule into a sorted list of values.

	Arguments
	---------
	text: `str`
		Either ``log10`` (every power of ten from ``minimum`` up to ``limit``; the limit itself if there is none) or an
		explicit list ``x1,x2,...``.
	limit: `int`
		The largest admissible checkpoint.

	Returns
	-------
	list[`int`]
		Distinct checkpoints in increasing order.

	Raises
	----------
	ValueError
		If a checkpoint lies outside ``[minimum, limit]``.
	"""
	if text.strip().lower() == "log10":
		points = []
		power = 10
		while power <= limit:
			if power >= minimum:
				points.append(power)
			power *= 10
		return points or [limit]

	points = sorted(set(convert_range(text)))
	for x in points:
		if not minimum <= x <= limit:
			raise ValueError(f"checkpoint {x} is outside [{minimum}, {limit}]")
	return points
