"""Per-article linguistic features, class statistics and feature matrices."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .corpus_io import Corpus, Label
from .errors import MissingStats, SingleClassCorpus
from .text import AnalyzedDoc, POSTag, analyze

BASE_FEATURES = (
    "unique", "negative", "neutral", "positive", "compound",
    "noun", "adjective", "adverb", "preposition",
    "vb", "vbd", "vbg", "vbn", "vbz", "cn",
)
# variance feature -> base feature it measures
VARIANCE_FEATURES = {
    "uniqueVar": "unique",
    "negativeVar": "negative",
    "positiveVar": "positive",
    "cnVar": "cn",
}
ALL_FEATURES = BASE_FEATURES + tuple(VARIANCE_FEATURES)

FSET1_FEATURES = BASE_FEATURES + ("negativeVar", "positiveVar", "cnVar")
FSET2_FEATURES = ("unique", "negative", "positive", "cn", "uniqueVar", "negativeVar", "positiveVar", "cnVar")

_POS_FIELDS = {
    POSTag.NN: "noun", POSTag.JJ: "adjective", POSTag.RB: "adverb", POSTag.IN: "preposition",
    POSTag.VB: "vb", POSTag.VBD: "vbd", POSTag.VBG: "vbg", POSTag.VBN: "vbn", POSTag.VBZ: "vbz",
    POSTag.CD: "cn",
}


class FSet(str, Enum):
    FSET1 = "fset1"
    FSET2 = "fset2"
    ALL = "all"

    @property
    def features(self) -> tuple[str, ...]:
        return {FSet.FSET1: FSET1_FEATURES, FSet.FSET2: FSET2_FEATURES, FSet.ALL: ALL_FEATURES}[self]


class StatsSource(str, Enum):
    TRAIN_CLASS_MEANS = "train_class_means"
    POOLED = "pooled"


@dataclass(frozen=True)
class BaseFeatureVector:
    unique: float = 0.0
    negative: float = 0.0
    neutral: float = 1.0
    positive: float = 0.0
    compound: float = 0.0
    noun: float = 0.0
    adjective: float = 0.0
    adverb: float = 0.0
    preposition: float = 0.0
    vb: float = 0.0
    vbd: float = 0.0
    vbg: float = 0.0
    vbn: float = 0.0
    vbz: float = 0.0
    cn: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in BASE_FEATURES], dtype=np.float64)


def extract_base(doc: AnalyzedDoc) -> BaseFeatureVector:
    n = len(doc.tokens)
    s = doc.sentiment
    if n == 0:
        return BaseFeatureVector(negative=s.neg, neutral=s.neu, positive=s.pos, compound=s.compound)
    counts = dict.fromkeys(_POS_FIELDS.values(), 0)
    for tok in doc.tokens:
        name = _POS_FIELDS.get(tok.tag)
        if name is not None:
            counts[name] += 1
    ratios = {k: v / n for k, v in counts.items()}
    unique = len({tok.stem for tok in doc.tokens}) / n
    return BaseFeatureVector(unique=unique, negative=s.neg, neutral=s.neu, positive=s.pos,
                             compound=s.compound, **ratios)


@dataclass(frozen=True)
class BaseTable:
    """Base features of every item in a corpus, in corpus order."""

    values: np.ndarray
    ids: tuple[str, ...]
    empty: tuple[bool, ...]

    def take(self, indices) -> "BaseTable":
        indices = np.asarray(indices, dtype=int)
        return BaseTable(self.values[indices], tuple(self.ids[i] for i in indices),
                         tuple(self.empty[i] for i in indices))


def extract_corpus(corpus: Corpus, pipeline: Callable[[str], AnalyzedDoc] = analyze) -> BaseTable:
    memo: dict[str, tuple[np.ndarray, bool]] = {}
    rows, empty = [], []
    for item in corpus.items:
        hit = memo.get(item.text)
        if hit is None:
            doc = pipeline(item.text)
            hit = memo[item.text] = (extract_base(doc).as_array(), doc.is_empty)
        rows.append(hit[0])
        empty.append(hit[1])
    values = np.vstack(rows) if rows else np.zeros((0, len(BASE_FEATURES)))
    return BaseTable(values, tuple(it.id for it in corpus.items), tuple(empty))


@dataclass(frozen=True)
class ClassStats:
    feature_names: tuple[str, ...]
    mu_real: np.ndarray
    mu_fake: np.ndarray
    mu_pooled: np.ndarray
    n_real: int
    n_fake: int

    def get(self, which: str, name: str) -> float:
        arr = {"real": self.mu_real, "fake": self.mu_fake, "pooled": self.mu_pooled}[which]
        return float(arr[self.feature_names.index(name)])

    def to_dict(self):
        return {
            "feature_names": list(self.feature_names),
            "mu_real": self.mu_real.tolist(),
            "mu_fake": self.mu_fake.tolist(),
            "mu_pooled": self.mu_pooled.tolist(),
            "n_real": self.n_real,
            "n_fake": self.n_fake,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["feature_names"]), np.asarray(d["mu_real"], float), np.asarray(d["mu_fake"], float),
                   np.asarray(d["mu_pooled"], float), int(d["n_real"]), int(d["n_fake"]))


def class_means(rows, labels, feature_names: Sequence[str] = BASE_FEATURES) -> ClassStats:
    rows = np.asarray(rows, dtype=np.float64)
    labels = np.asarray(labels)
    real = rows[labels == Label.REAL]
    fake = rows[labels == Label.FAKE]
    if len(real) == 0 or len(fake) == 0:
        raise SingleClassCorpus("class means need at least one REAL and one FAKE item")
    mu_real = real.mean(axis=0)
    mu_fake = fake.mean(axis=0)
    m1, m2 = len(real), len(fake)
    mu_pooled = (m1 * mu_real + m2 * mu_fake) / (m1 + m2)
    return ClassStats(tuple(feature_names), mu_real, mu_fake, mu_pooled, m1, m2)


def variance_feature(value, mean):
    """Squared deviation of a feature value from a (class or pooled) mean."""
    return (value - mean) * (value - mean)


@dataclass(frozen=True)
class FeatureMatrix:
    X: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    fset: FSet | None = None
    ids: tuple[str, ...] = ()
    empty: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if len(self.X) != len(self.labels):
            raise ValueError("row/label count mismatch")
        if self.X.ndim != 2 or self.X.shape[1] != len(self.feature_names):
            raise ValueError("column count does not match feature_names")

    def __len__(self):
        return len(self.labels)

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.feature_names.index(name)]

    def select(self, names: Sequence[str], fset: FSet | None = None) -> "FeatureMatrix":
        idx = [self.feature_names.index(n) for n in names]
        return FeatureMatrix(self.X[:, idx], self.labels, tuple(names), fset, self.ids, self.empty)

    def rows(self, indices) -> "FeatureMatrix":
        indices = np.asarray(indices, dtype=int)
        ids = tuple(self.ids[i] for i in indices) if self.ids else ()
        empty = tuple(self.empty[i] for i in indices) if self.empty else ()
        return FeatureMatrix(self.X[indices], self.labels[indices], self.feature_names, self.fset, ids, empty)

    def to_tsv(self) -> str:
        buf = io.StringIO()
        buf.write("\t".join(self.feature_names + ("label",)) + "\n")
        for row, lab in zip(self.X, self.labels):
            buf.write("\t".join(repr(float(v)) for v in row))
            buf.write(f"\t{Label(int(lab))}\n")
        return buf.getvalue()

    @classmethod
    def from_tsv(cls, text: str) -> "FeatureMatrix":
        lines = [ln for ln in text.splitlines() if ln]
        header = lines[0].split("\t")
        if header[-1] != "label":
            raise ValueError("last TSV column must be 'label'")
        names = tuple(header[:-1])
        X = np.array([[float(v) for v in ln.split("\t")[:-1]] for ln in lines[1:]], dtype=np.float64)
        X = X.reshape(len(lines) - 1, len(names))
        labels = np.array([int(Label.parse(ln.split("\t")[-1])) for ln in lines[1:]], dtype=np.int8)
        return cls(X, labels, names, _fset_for(names))

    def to_json(self) -> str:
        doc = {
            "fset": self.fset.value if self.fset else None,
            "feature_names": list(self.feature_names),
            "ids": list(self.ids),
            "labels": [str(Label(int(v))) for v in self.labels],
            "empty": list(self.empty),
            "rows": self.X.tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "FeatureMatrix":
        d = json.loads(text)
        names = tuple(d["feature_names"])
        X = np.asarray(d["rows"], dtype=np.float64).reshape(len(d["labels"]), len(names))
        labels = np.array([int(Label.parse(v)) for v in d["labels"]], dtype=np.int8)
        fset = FSet(d["fset"]) if d.get("fset") else None
        return cls(X, labels, names, fset, tuple(d.get("ids", ())), tuple(d.get("empty", ())))


def _fset_for(names) -> FSet | None:
    for fs in FSet:
        if tuple(names) == fs.features:
            return fs
    return None


def build_matrix(
    corpus: Corpus,
    fset: FSet = FSet.ALL,
    stats_source: StatsSource = StatsSource.POOLED,
    stats: ClassStats | None = None,
    *,
    pipeline: Callable[[str], AnalyzedDoc] = analyze,
    base: BaseTable | None = None,
) -> FeatureMatrix:
    """Feature matrix restricted to the columns of ``fset``.

    TRAIN_CLASS_MEANS measures each variance feature against the item's own
    class mean; ``stats`` defaults to the class means of ``corpus`` itself.
    POOLED measures against ``stats.mu_pooled`` and never reads labels, so
    ``stats`` must come from training data.
    """
    fset = FSet(fset)
    stats_source = StatsSource(stats_source)
    if base is None:
        base = extract_corpus(corpus, pipeline)
    values = base.values
    if stats_source is StatsSource.POOLED:
        if stats is None:
            raise MissingStats("POOLED variance features need ClassStats from training data")
        centers = np.broadcast_to(stats.mu_pooled, values.shape)
    else:
        labels = corpus.labels
        if stats is None:
            stats = class_means(values, labels, BASE_FEATURES)
        centers = np.where((labels == Label.FAKE)[:, None], stats.mu_fake, stats.mu_real)
    var_cols = []
    for src in VARIANCE_FEATURES.values():
        j = BASE_FEATURES.index(src)
        var_cols.append(variance_feature(values[:, j], centers[:, j]))
    full = np.column_stack([values] + var_cols) if len(values) else np.zeros((0, len(ALL_FEATURES)))
    idx = [ALL_FEATURES.index(n) for n in fset.features]
    return FeatureMatrix(full[:, idx], corpus.labels, fset.features, fset, base.ids, base.empty)
