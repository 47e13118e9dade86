from .pipeline import AnalyzedDoc, Token, analyze, remove_stopwords, tokenize
from .sentiment import SentimentResult, sentiment_scores
from .stem import stem
from .tagger import POSTag, pos_tag

__all__ = [
    "AnalyzedDoc",
    "POSTag",
    "SentimentResult",
    "Token",
    "analyze",
    "pos_tag",
    "remove_stopwords",
    "sentiment_scores",
    "stem",
    "tokenize",
]
