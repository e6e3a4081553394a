"""Bounded-index engulfing checks for finitely presented groups."""

from .words import (
    Alphabet,
    GeneratorSymbol,
    ParseError,
    Presentation,
    SubgroupSpec,
    Word,
    builtin_presentations,
    group_B,
    group_G,
    load_presentation,
    parse_presentation,
    parse_word,
)

__version__ = "0.1.0"
