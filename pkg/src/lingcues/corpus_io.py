"""Loading, validating, remapping and splitting labeled news corpora."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum, IntEnum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._io import atomic_write_text
from .errors import (
    BadLabel,
    DegenerateSplit,
    DuplicateId,
    EmptyCorpus,
    EmptyText,
    MissingColumn,
    UnknownStance,
)

REQUIRED_FIELDS = ("id", "label", "title", "body")
STANCE_FIELDS = ("id", "headline", "body", "stance")


class Label(IntEnum):
    """Binary class; FAKE is the positive class everywhere downstream."""

    REAL = 0
    FAKE = 1

    @classmethod
    def parse(cls, value, row=None):
        if isinstance(value, Label):
            return value
        text = str(value).strip().lower()
        if text == "real":
            return cls.REAL
        if text == "fake":
            return cls.FAKE
        raise BadLabel(value, row)

    def __str__(self):
        return self.name.lower()


class Stance(str, Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    UNRELATED = "unrelated"
    DISCUSS = "discuss"

    @classmethod
    def parse(cls, value, row=None):
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise UnknownStance(value, row) from None


@dataclass(frozen=True)
class NewsItem:
    id: str
    label: Label
    title: str | None
    body: str

    @property
    def text(self) -> str:
        return self.body


@dataclass(frozen=True)
class Corpus:
    items: tuple[NewsItem, ...]
    name: str = "corpus"

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        seen = set()
        for row, item in enumerate(self.items, start=1):
            if item.id in seen:
                raise DuplicateId(item.id, row)
            seen.add(item.id)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def labels(self) -> np.ndarray:
        return np.fromiter((int(it.label) for it in self.items), dtype=np.int8, count=len(self.items))

    def subset(self, indices: Iterable[int], name: str | None = None) -> "Corpus":
        return Corpus(tuple(self.items[i] for i in indices), name or self.name)


@dataclass(frozen=True)
class StanceRecord:
    id: str
    headline: str
    body: str
    stance: Stance


@dataclass(frozen=True)
class CorpusSummary:
    name: str
    real: int
    fake: int
    mean_body_length: float

    @property
    def total(self) -> int:
        return self.real + self.fake

    def to_dict(self):
        return {"name": self.name, "real": self.real, "fake": self.fake,
                "total": self.total, "mean_body_length": self.mean_body_length}


def _infer_format(path: Path) -> str:
    suffix = path.suffix.lower().lstrip(".")
    if suffix in ("csv", "json", "jsonl"):
        return suffix
    raise ValueError(f"cannot infer corpus format from {path.name!r}; pass format explicitly")


def _read_records(path: Path, fmt: str, required: Sequence[str]) -> list[dict]:
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for col in required:
                if col not in header:
                    raise MissingColumn(col, path)
            return list(reader)
    if fmt == "json":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data.get("items", [])
        records = list(data)
    elif fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            records = [json.loads(line) for line in fh if line.strip()]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    for rec in records:
        for col in required:
            if col not in rec:
                raise MissingColumn(col, path)
    return records


def _clean(value) -> str:
    return "" if value is None else str(value).strip()


def load_corpus(path, format: str | None = None, name: str | None = None) -> Corpus:
    """Read a corpus with fields ``id,label,title,body``.

    Rows are numbered from 1 (the CSV header is not counted) in error messages.
    """
    path = Path(path)
    fmt = format or _infer_format(path)
    records = _read_records(path, fmt, REQUIRED_FIELDS)
    if not records:
        raise EmptyCorpus(f"{path} contains no records")
    items = []
    for row, rec in enumerate(records, start=1):
        label = Label.parse(rec["label"], row)
        title = _clean(rec["title"]) or None
        body = _clean(rec["body"])
        if not body and title is None:
            raise EmptyText(row)
        items.append(NewsItem(_clean(rec["id"]), label, title, body))
    return Corpus(tuple(items), name or path.stem)


def dumps_corpus(corpus: Corpus) -> str:
    """Canonical JSONL: one item per line, fields in fixed order."""
    lines = []
    for it in corpus.items:
        rec = {"id": it.id, "label": str(it.label), "title": it.title, "body": it.body}
        lines.append(json.dumps(rec, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def save_corpus(corpus: Corpus, path) -> None:
    atomic_write_text(path, dumps_corpus(corpus))


def load_stances(path, format: str | None = None) -> list[StanceRecord]:
    """Read stance records with fields ``id,headline,body,stance``."""
    path = Path(path)
    fmt = format or _infer_format(path)
    records = _read_records(path, fmt, STANCE_FIELDS)
    return [
        StanceRecord(_clean(r["id"]), _clean(r["headline"]), _clean(r["body"]), Stance.parse(r["stance"], row))
        for row, r in enumerate(records, start=1)
    ]


def load_fnc1_pair(stances_path, bodies_path) -> list[StanceRecord]:
    """Join the two files of the public FNC-1 distribution.

    ``stances_path`` has ``Headline,Body ID,Stance``; ``bodies_path`` has
    ``Body ID,articleBody``. Record ids are ``fnc-<row>``.
    """
    with open(bodies_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for col in ("Body ID", "articleBody"):
            if col not in (reader.fieldnames or []):
                raise MissingColumn(col, bodies_path)
        bodies = {r["Body ID"].strip(): r["articleBody"] for r in reader}
    out = []
    with open(stances_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for col in ("Headline", "Body ID", "Stance"):
            if col not in (reader.fieldnames or []):
                raise MissingColumn(col, stances_path)
        for row, r in enumerate(reader, start=1):
            body_id = r["Body ID"].strip()
            if body_id not in bodies:
                raise MissingColumn(f"body {body_id}", bodies_path)
            out.append(StanceRecord(f"fnc-{row}", _clean(r["Headline"]), _clean(bodies[body_id]),
                                    Stance.parse(r["Stance"], row)))
    return out


def remap_fnc_stances(records: Iterable[StanceRecord], name: str = "fnc1") -> Corpus:
    """agree -> REAL; disagree, unrelated, discuss -> FAKE.

    The headline is kept as title and also prepended to the body, so features
    see both.
    """
    items = []
    for row, rec in enumerate(records, start=1):
        stance = Stance.parse(rec.stance.value if isinstance(rec.stance, Stance) else rec.stance, row)
        label = Label.REAL if stance is Stance.AGREE else Label.FAKE
        body = f"{rec.headline}\n{rec.body}"
        items.append(NewsItem(rec.id, label, rec.headline or None, body))
    return Corpus(tuple(items), name)


def train_size(n: int, train_fraction: float) -> int:
    """round(train_fraction * n), halves rounded up."""
    exact = Decimal(repr(float(train_fraction))) * n
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def split_indices(labels, train_fraction: float = 0.7, seed: int = 0, max_retries: int = 100):
    """Seeded random partition of ``range(len(labels))`` into sorted train/test index arrays.

    Re-draws until the train part holds both classes.
    """
    labels = np.asarray(labels)
    n = len(labels)
    if n == 0:
        raise EmptyCorpus("cannot split an empty corpus")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n_train = train_size(n, train_fraction)
    if len(np.unique(labels)) < 2 or n_train < 2:
        raise DegenerateSplit(f"cannot draw a two-class train set of size {n_train} from {n} items")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        perm = rng.permutation(n)
        train = np.sort(perm[:n_train])
        if len(np.unique(labels[train])) == 2:
            return train, np.sort(perm[n_train:])
    raise DegenerateSplit(f"train set stayed single-class after {max_retries} draws")


def split(corpus: Corpus, train_fraction: float = 0.7, seed: int = 0) -> tuple[Corpus, Corpus]:
    train, test = split_indices(corpus.labels, train_fraction, seed)
    return corpus.subset(train), corpus.subset(test)


def corpus_summary(corpus: Corpus) -> CorpusSummary:
    labels = corpus.labels
    fake = int(labels.sum()) if len(labels) else 0
    mean_len = float(np.mean([len(it.body) for it in corpus.items])) if len(corpus) else 0.0
    return CorpusSummary(corpus.name, len(labels) - fake, fake, mean_len)
