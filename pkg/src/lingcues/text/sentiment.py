"""Lexicon valence scoring: word-count proportions plus a normalized compound score."""

import math
from dataclasses import dataclass

from . import lexicon

ALPHA = 15.0


@dataclass(frozen=True)
class SentimentResult:
    neg: float
    neu: float
    pos: float
    compound: float


def normalize(total: float, alpha: float = ALPHA) -> float:
    """Map a valence sum into (-1, 1) as ``total / sqrt(total**2 + alpha)``."""
    return total / math.sqrt(total * total + alpha)


def sentiment_scores(tokens) -> SentimentResult:
    table = lexicon.valence()
    n = neg = pos = 0
    total = 0.0
    for tok in tokens:
        v = table.get(tok, 0.0)
        n += 1
        total += v
        if v < 0:
            neg += 1
        elif v > 0:
            pos += 1
    if n == 0:
        return SentimentResult(0.0, 1.0, 0.0, 0.0)
    neu = n - neg - pos
    return SentimentResult(neg / n, neu / n, pos / n, normalize(total))
