"""Synthetic labeled corpora with controllable class signal.

Documents are built from disjoint word pools (positive words, negative words,
numbers and neutral filler) so that the unique-stem ratio and the densities
of sentiment words and numbers can be dialed in per document. FAKE documents
draw those four quantities from shifted ranges; every other feature is
incidental. Used by the acceptance tests and the CLI demo.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .corpus_io import Corpus, Label, NewsItem
from .text import lexicon
from .text.stem import stem
from .text.tagger import POSTag, tag_one


@dataclass(frozen=True)
class Profile:
    """Uniform ranges (lo, hi) for one class."""

    unique: tuple[float, float]
    negative: tuple[float, float]
    positive: tuple[float, float]
    numbers: tuple[float, float]


REAL_PROFILE = Profile(unique=(0.2, 0.8), negative=(0.0, 0.10), positive=(0.0, 0.10), numbers=(0.0, 0.05))
FAKE_PROFILE = Profile(unique=(0.6, 1.0), negative=(0.06, 0.16), positive=(0.06, 0.16), numbers=(0.03, 0.10))


def blend(a: Profile, b: Profile, t: float) -> Profile:
    def mix(x, y):
        return (x[0] + t * (y[0] - x[0]), x[1] + t * (y[1] - x[1]))

    return Profile(*(mix(getattr(a, f), getattr(b, f)) for f in ("unique", "negative", "positive", "numbers")))


_STREAM = 0x5EED
_CONSONANTS = "bcdfgklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class _Pools:
    positive: tuple[str, ...]
    negative: tuple[str, ...]
    numbers: tuple[str, ...]
    filler: tuple[str, ...]


@lru_cache(maxsize=1)
def _pools() -> _Pools:
    stop = lexicon.stopwords()
    valence = lexicon.valence()
    seen: set[str] = set()

    def take(words):
        out = []
        for w in sorted(words):
            s = stem(w)
            if w in stop or s in seen or not w.isalpha():
                continue
            seen.add(s)
            out.append(w)
        return tuple(out)

    positive = take(w for w, v in valence.items() if v >= 1.5)
    negative = take(w for w, v in valence.items() if v <= -1.5)
    numbers = tuple(str(i) for i in range(1, 3000))
    tags = lexicon.tag_lexicon()
    words = [w for w, t in tags.items() if w not in valence and t not in (POSTag.OTHER, POSTag.CD)]
    rng = np.random.default_rng(7)
    while len(words) < 3000:
        syl = rng.integers(2, 4)
        w = "".join(rng.choice(list(_CONSONANTS)) + rng.choice(list(_VOWELS)) for _ in range(syl))
        if w not in valence and tag_one(w) is POSTag.NN:
            words.append(w)
    filler = take(words)
    return _Pools(positive, negative, numbers, filler)


def _draw(rng, pool, count, distinct):
    if count == 0:
        return []
    picks = list(rng.choice(len(pool), size=distinct, replace=False))
    picks += list(rng.choice(picks, size=count - distinct, replace=True))
    return [pool[i] for i in picks]


def _document(rng, profile: Profile, pools: _Pools, length: int) -> str:
    def u(bounds):
        return rng.uniform(*bounds)

    n_neg = int(round(u(profile.negative) * length))
    n_pos = int(round(u(profile.positive) * length))
    n_num = int(round(u(profile.numbers) * length))
    n_fill = max(1, length - n_neg - n_pos - n_num)
    ratio = u(profile.unique)
    tokens = []
    for pool, count in ((pools.negative, n_neg), (pools.positive, n_pos), (pools.numbers, n_num),
                        (pools.filler, n_fill)):
        distinct = min(count, max(1, int(round(ratio * count)))) if count else 0
        tokens += _draw(rng, pool, count, distinct)
    order = rng.permutation(len(tokens))
    words = [tokens[i] for i in order]
    sentences = [" ".join(words[i:i + 12]) for i in range(0, len(words), 12)]
    return ". ".join(s.capitalize() for s in sentences) + "."


def synthetic_corpus(
    n: int = 2000,
    fake_fraction: float = 0.5,
    seed: int = 0,
    *,
    signal: bool = True,
    strength: float = 1.0,
    length: tuple[int, int] = (60, 140),
    name: str = "synthetic",
) -> Corpus:
    """``n`` documents, ``round(n * fake_fraction)`` of them FAKE at random positions.

    ``strength`` moves the FAKE ranges from the REAL ones (0) to the full
    FAKE profile (1). With ``signal=False`` both classes share the REAL profile.
    """
    # own stream, so a corpus seed never replays the permutation a split with the same seed draws
    rng = np.random.default_rng([_STREAM, seed])
    pools = _pools()
    fake_profile = blend(REAL_PROFILE, FAKE_PROFILE, strength if signal else 0.0)
    n_fake = int(round(n * fake_fraction))
    labels = np.zeros(n, dtype=int)
    labels[rng.permutation(n)[:n_fake]] = 1
    items = []
    for i, y in enumerate(labels):
        profile = fake_profile if y == 1 else REAL_PROFILE
        body = _document(rng, profile, pools, int(rng.integers(length[0], length[1] + 1)))
        items.append(NewsItem(f"syn-{i:05d}", Label(int(y)), None, body))
    return Corpus(tuple(items), name)


def shuffle_labels(corpus: Corpus, seed: int = 0, name: str | None = None) -> Corpus:
    """Same texts, labels permuted at random (class counts preserved)."""
    rng = np.random.default_rng([_STREAM + 1, seed])
    labels = corpus.labels[rng.permutation(len(corpus))]
    items = tuple(NewsItem(it.id, Label(int(y)), it.title, it.body) for it, y in zip(corpus.items, labels))
    return Corpus(items, name or f"{corpus.name}-shuffled")
