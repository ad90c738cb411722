"""
Sieves, set classification, sumset moments, pair counts and series for sumsets of the form 2^P + P2.
"""

from .errors import *
from .config import *
from .sieve import *
from .psets import *
from .arith import *
from .sumset import *
from .paircorr import *
from .explorer import *

__version__ = "0.1.0"
