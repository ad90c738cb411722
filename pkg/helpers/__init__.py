"""
Various helper functions.
"""

from .convert import *
from .custom_response import *
from .machine import *
from .regex import *
