"""One-level prosodic morphology: set-labelled automata, enrichment and BLO."""

from .alphabet import TypeHierarchy
from .blo import WeightScheme, blo, blo_language
from .dsl import Grammar, load_grammar
from .fsa import Fsa
from .runtime import optimizing_parse, parse, surface_strings

__all__ = ["TypeHierarchy", "WeightScheme", "blo", "blo_language", "Grammar", "load_grammar",
           "Fsa", "optimizing_parse", "parse", "surface_strings"]
__version__ = "0.1.0"
