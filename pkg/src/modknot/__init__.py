"""Periodic continued fractions, modular geodesics and their linking numbers.

Submodules: :mod:`.cf` (words, surds, lengths), :mod:`.sl2` (matrix algebra,
Rademacher function), :mod:`.census` (orbit enumeration and counts),
:mod:`.stats` (Gauss-measure diagnostics), :mod:`.spectral` (transfer
operators) and :mod:`.cli`.
"""

from .cf import PeriodicWord, QuadraticSurd, alt_sum, geodesic_length, surd_from_word
from .sl2 import IntMatrix2, rademacher, word_to_matrix

__version__ = "0.1.0"

__all__ = ["PeriodicWord", "QuadraticSurd", "IntMatrix2", "alt_sum", "geodesic_length",
           "surd_from_word", "rademacher", "word_to_matrix", "__version__"]
