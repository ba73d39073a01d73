"""Structure-level reduction of English sentences to a controlled fragment.

The pipeline normalizes raw text, composes a discourse representation
structure, classifies which reductions are needed, rewrites the structure
with label-gated rules, and verbalizes or reasons over the result.
"""
from .drs import Drs, alpha_equivalent, is_proper
from .drstext import parse_drs, serialize_drs
from .errors import CnlError
from .lexicon import Lexicon

__version__ = "0.1.0"

__all__ = ["CnlError", "Drs", "Lexicon", "alpha_equivalent", "is_proper", "parse_drs",
           "serialize_drs", "__version__"]
