"""Bundled lexicon tables, loaded once and cached."""

import hashlib
from functools import lru_cache
from importlib import resources

DATA_SHA256 = {
    "stopwords.txt": "019f104ba2ed07436d05f9cdd3383034ad66014edc27fc651f837e1a038b6451",
    "tag_lexicon.tsv": "a18764d8e098668979fb109064fc4b2c5b43bbb447b6a6fdc6f3cacfa2d38e48",
    "valence.tsv": "b2eeaf3f95a8155cb06c9d8b8bf6310b40a8a413844a6c9b14439d1425c7dd00",
}


def _data(name):
    return resources.files("lingcues.text").joinpath("data", name)


def read_bytes(name: str) -> bytes:
    return _data(name).read_bytes()


def checksum(name: str) -> str:
    return hashlib.sha256(read_bytes(name)).hexdigest()


def _rows(name):
    for line in read_bytes(name).decode("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line.split("\t")


@lru_cache(maxsize=None)
def stopwords() -> frozenset:
    return frozenset(row[0] for row in _rows("stopwords.txt"))


@lru_cache(maxsize=None)
def tag_lexicon() -> dict:
    """word -> tag name."""
    return {row[0]: row[1] for row in _rows("tag_lexicon.tsv")}


@lru_cache(maxsize=None)
def valence() -> dict:
    """word -> mean valence on the [-4, 4] rating scale."""
    return {row[0]: float(row[1]) for row in _rows("valence.tsv")}
