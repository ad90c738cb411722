import re

NUMBER = re.compile(r"^\s*(?P<mantissa>\d+(?:\.\d*)?)(?:[eE](?P<exponent>\+?\d+))?\s*$")
"""An integer in plain or scientific notation: ``1000000``, ``1e6``, ``2.5e3``."""
RANGE = re.compile(r"^\s*(?P<start>[^:,]+):(?P<stop>[^:,]+)(?::(?P<step>[^:,]+))?\s*$")
"""An inclusive range ``a:b`` or ``a:b:step``."""
POWER_OF_TWO = re.compile(r"^\s*2\^(?P<exponent>\d+)\s*$")
"""``2^k`` as accepted by ``--limit``."""
