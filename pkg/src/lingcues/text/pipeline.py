"""Tokenize -> drop stopwords -> stem -> tag -> score sentiment."""

import re
from dataclasses import dataclass

from . import lexicon
from .sentiment import SentimentResult, sentiment_scores
from .stem import stem
from .tagger import POSTag, pos_tag

_TOKEN = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*|\d+")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    tag: POSTag


@dataclass(frozen=True)
class AnalyzedDoc:
    tokens: tuple[Token, ...]
    raw_token_count: int
    sentiment: SentimentResult

    @property
    def is_empty(self) -> bool:
        return not self.tokens


def tokenize(text: str) -> list[str]:
    """Lowercased runs of letters (apostrophes allowed inside) or of digits.

    >>> tokenize("Won 3 seats, won't stop")
    ['won', '3', 'seats', "won't", 'stop']
    """
    return _TOKEN.findall(text.translate(_APOSTROPHES).lower())


def remove_stopwords(tokens) -> list[str]:
    stop = lexicon.stopwords()
    return [t for t in tokens if t not in stop]


def analyze(text: str) -> AnalyzedDoc:
    raw = tokenize(text)
    clean = remove_stopwords(raw)
    tags = pos_tag(clean)
    tokens = tuple(Token(t, stem(t), tag) for t, tag in zip(clean, tags))
    return AnalyzedDoc(tokens, len(raw), sentiment_scores(clean))
