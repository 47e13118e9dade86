"""Deterministic lexicon + suffix part-of-speech tagger over a reduced tag set."""

import re
from enum import Enum

from . import lexicon


class POSTag(str, Enum):
    NN = "NN"
    JJ = "JJ"
    RB = "RB"
    IN = "IN"
    VB = "VB"
    VBD = "VBD"
    VBG = "VBG"
    VBN = "VBN"
    VBZ = "VBZ"
    CD = "CD"
    OTHER = "OTHER"


PREPOSITIONS = frozenset("""
about above across after against along amid amidst among amongst around as at before behind below
beneath beside besides between beyond by concerning despite down during except for from in inside
into near of off on onto opposite outside over past per regarding since through throughout toward
towards under underneath unlike until unto upon via with within without
""".split())

# forms whose following -ed word is read as a past participle
AUXILIARIES = frozenset("be am is are was were been being have has had having".split())

_NUMBER = re.compile(r"^\d+(?:[.,]\d+)*$")
_ADJ_SUFFIXES = ("ous", "ful", "able", "ive")


def _has(token, suffix):
    # at least two characters must remain in front of the suffix
    return token.endswith(suffix) and len(token) >= len(suffix) + 2


def _verb_stem_of(token, lex):
    candidates = []
    if token.endswith("ies") and len(token) > 4:
        candidates.append(token[:-3] + "y")
    if token.endswith("es"):
        candidates.append(token[:-2])
    candidates.append(token[:-1])
    return any(lex.get(c) == "VB" for c in candidates)


def tag_one(token: str, prev: str | None = None) -> POSTag:
    lex = lexicon.tag_lexicon()
    if _NUMBER.match(token):
        return POSTag.CD
    if token in lex:
        return POSTag(lex[token])
    if _has(token, "ly"):
        return POSTag.RB
    if _has(token, "ing"):
        return POSTag.VBG
    if _has(token, "ed"):
        return POSTag.VBN if prev in lex and prev in AUXILIARIES else POSTag.VBD
    if token.endswith("s") and len(token) > 2 and _verb_stem_of(token, lex):
        return POSTag.VBZ
    if any(_has(token, s) for s in _ADJ_SUFFIXES):
        return POSTag.JJ
    if token in PREPOSITIONS:
        return POSTag.IN
    return POSTag.NN


def pos_tag(tokens) -> list[POSTag]:
    """One tag per token, first matching rule wins.

    Order: number -> lexicon -> suffix (-ly, -ing, -ed, verb+s, adjectival)
    -> preposition list -> NN.
    """
    tags = []
    prev = None
    for tok in tokens:
        tags.append(tag_one(tok, prev))
        prev = tok
    return tags
