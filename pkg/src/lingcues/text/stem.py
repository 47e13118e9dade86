"""English Snowball (Porter2) stemmer.

Follows the current published Snowball ``english`` algorithm, including the
revised region prefixes, the ``-ingly``/``-edly`` handling of step 1b and the
``-ogist`` rule of step 2.
"""

from functools import lru_cache

VOWELS = frozenset("aeiouy")
_NOT_SHORT_TAIL = frozenset("aeiouywxY")
_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")
_LI_ENDING = frozenset("cdeghkmnrt")

_EXCEPTIONS = {
    "skis": "ski",
    "skies": "sky",
    "idly": "idl",
    "gently": "gentl",
    "ugly": "ugli",
    "early": "earli",
    "only": "onli",
    "singly": "singl",
    "sky": "sky",
    "news": "news",
    "howe": "howe",
    "atlas": "atlas",
    "cosmos": "cosmos",
    "bias": "bias",
    "andes": "andes",
}

_REGION_PREFIXES = ("arsen", "commun", "emerg", "gener", "inter", "later", "organ", "past", "univers")

_STEP1B_EXCEPTIONS = ("succ", "proc", "exc")
_ING_KEEP = ("even", "cann", "inn", "earr", "herr", "out")

# (suffix, replacement) in longest-first order; None marks a conditional rule
_STEP2 = (
    ("ization", "ize"),
    ("ational", "ate"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("iveness", "ive"),
    ("tional", "tion"),
    ("biliti", "ble"),
    ("lessli", "less"),
    ("entli", "ent"),
    ("ation", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("ousli", "ous"),
    ("iviti", "ive"),
    ("fulli", "ful"),
    ("ogist", "og"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("abli", "able"),
    ("izer", "ize"),
    ("ator", "ate"),
    ("alli", "al"),
    ("bli", "ble"),
    ("ogi", None),
    ("li", None),
)

_STEP3 = (
    ("ational", "ate"),
    ("tional", "tion"),
    ("alize", "al"),
    ("icate", "ic"),
    ("iciti", "ic"),
    ("ative", None),
    ("ical", "ic"),
    ("ness", ""),
    ("ful", ""),
)

_STEP4 = (
    "ement", "ment", "able", "ible", "ance", "ence", "ate", "ive", "ize",
    "iti", "ism", "ion", "ous", "ant", "ent", "ic", "al", "er",
)


def _longest(word, suffixes):
    for suffix in suffixes:
        if word.endswith(suffix):
            return suffix
    return None


def _regions(word):
    n = len(word)
    for prefix in _REGION_PREFIXES:
        if word.startswith(prefix):
            p1 = len(prefix)
            break
    else:
        p1 = _first_region(word, 0)
        if p1 is None:
            return n, n
    p2 = _first_region(word, p1)
    return p1, n if p2 is None else p2


def _first_region(word, start):
    n = len(word)
    i = start
    while i < n and word[i] not in VOWELS:
        i += 1
    if i >= n:
        return None
    while i < n and word[i] in VOWELS:
        i += 1
    if i >= n:
        return None
    return i + 1


def _ends_short_syllable(word):
    n = len(word)
    if n >= 3 and word[-1] not in _NOT_SHORT_TAIL and word[-2] in VOWELS and word[-3] not in VOWELS:
        return True
    if n == 2 and word[0] in VOWELS and word[1] not in VOWELS:
        return True
    return word.endswith("past")


def _prelude(word):
    if word.startswith("'"):
        word = word[1:]
    chars = list(word)
    if chars and chars[0] == "y":
        chars[0] = "Y"
    for i in range(1, len(chars)):
        if chars[i] == "y" and chars[i - 1] in VOWELS:
            chars[i] = "Y"
    return "".join(chars)


def _step1a(word):
    for suffix in ("'s'", "'s", "'"):
        if word.endswith(suffix):
            word = word[: -len(suffix)]
            break
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ied") or word.endswith("ies"):
        return word[:-2] if len(word) > 4 else word[:-1]
    if word.endswith("us") or word.endswith("ss"):
        return word
    if word.endswith("s"):
        if any(c in VOWELS for c in word[:-2]):
            return word[:-1]
    return word


def _step1b(word, p1):
    suffix = _longest(word, ("eedly", "ingly", "edly", "eed", "ing", "ed"))
    if suffix is None:
        return word
    stem = word[: -len(suffix)]
    if suffix in ("eed", "eedly"):
        if len(stem) >= p1 and stem not in _STEP1B_EXCEPTIONS:
            return stem + "ee"
        return word
    if suffix == "ing":
        if len(stem) == 2 and stem[1] == "y" and stem[0] not in VOWELS:
            return stem[0] + "ie"
        if stem in _ING_KEEP:
            return word
    if not any(c in VOWELS for c in stem):
        return word
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if stem.endswith(_DOUBLES):
        if len(stem) == 3 and stem[0] in "aeo":
            return stem
        return stem[:-1]
    if len(stem) == p1 and _ends_short_syllable(stem):
        return stem + "e"
    return stem


def _step1c(word):
    if len(word) > 2 and word[-1] in "yY" and word[-2] not in VOWELS:
        return word[:-1] + "i"
    return word


def _step2(word, p1):
    for suffix, repl in _STEP2:
        if not word.endswith(suffix):
            continue
        start = len(word) - len(suffix)
        if start < p1:
            return word
        if suffix == "ogi":
            return word[:start] + "og" if start > 0 and word[start - 1] == "l" else word
        if suffix == "li":
            return word[:start] if start > 0 and word[start - 1] in _LI_ENDING else word
        return word[:start] + repl
    return word


def _step3(word, p1, p2):
    for suffix, repl in _STEP3:
        if not word.endswith(suffix):
            continue
        start = len(word) - len(suffix)
        if start < p1:
            return word
        if repl is None:
            return word[:start] if start >= p2 else word
        return word[:start] + repl
    return word


def _step4(word, p2):
    suffix = _longest(word, _STEP4)
    if suffix is None:
        return word
    start = len(word) - len(suffix)
    if start < p2:
        return word
    if suffix == "ion":
        return word[:start] if start > 0 and word[start - 1] in "st" else word
    return word[:start]


def _step5(word, p1, p2):
    if word.endswith("e"):
        start = len(word) - 1
        if start >= p2 or (start >= p1 and not _ends_short_syllable(word[:start])):
            return word[:start]
    elif word.endswith("l"):
        start = len(word) - 1
        if start >= p2 and start > 0 and word[start - 1] == "l":
            return word[:start]
    return word


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    """Return the Porter2 stem of a lowercase ``word``.

    >>> stem("taking"), stem("cats"), stem("a")
    ('take', 'cat', 'a')
    """
    if word in _EXCEPTIONS:
        return _EXCEPTIONS[word]
    if len(word) < 3:
        return word
    word = _prelude(word)
    p1, p2 = _regions(word)
    word = _step1a(word)
    word = _step1b(word, p1)
    word = _step1c(word)
    word = _step2(word, p1)
    word = _step3(word, p1, p2)
    word = _step4(word, p2)
    word = _step5(word, p1, p2)
    return word.replace("Y", "y")
