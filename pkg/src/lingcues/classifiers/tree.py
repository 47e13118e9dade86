"""CART (weighted Gini) trees and bootstrap random forests."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _gini_sum(wpos, wsum):
    # weighted impurity mass: wsum * 2 p (1 - p)
    if wsum <= 0.0:
        return 0.0
    p = wpos / wsum
    return 2.0 * wsum * p * (1.0 - p)


@njit(cache=True)
def _grow(X, y, w, max_depth, min_leaf, max_features, seed):
    np.random.seed(seed)
    n, d = X.shape
    active = np.nonzero(w > 0.0)[0]
    m = active.shape[0]
    cap = 2 * m + 1
    feat = np.full(cap, -1, np.int64)
    thr = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap)

    order = active.copy()
    buf = np.empty(m, np.int64)
    st_node = np.empty(cap, np.int64)
    st_start = np.empty(cap, np.int64)
    st_end = np.empty(cap, np.int64)
    st_depth = np.empty(cap, np.int64)
    sp = 0
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = m
    st_depth[0] = 0
    sp = 1
    n_nodes = 1
    xs = np.empty(m)
    ws = np.empty(m)
    ps = np.empty(m)

    while sp > 0:
        sp -= 1
        node = st_node[sp]
        start = st_start[sp]
        end = st_end[sp]
        depth = st_depth[sp]
        count = end - start

        wsum = 0.0
        wpos = 0.0
        for i in range(start, end):
            r = order[i]
            wsum += w[r]
            wpos += w[r] * y[r]
        value[node] = wpos / wsum if wsum > 0.0 else 0.5

        if wpos <= 0.0 or wpos >= wsum or count < 2 * min_leaf:
            continue
        if max_depth >= 0 and depth >= max_depth:
            continue

        parent = _gini_sum(wpos, wsum)
        if max_features < d:
            perm = np.random.permutation(d)
        else:
            perm = np.arange(d)

        best_gain = -1.0
        best_f = -1
        best_t = 0.0
        examined = 0
        for fi in range(d):
            if examined >= max_features and best_f >= 0:
                break
            f = perm[fi]
            for i in range(count):
                xs[i] = X[order[start + i], f]
            srt = np.argsort(xs[:count], kind="mergesort")
            if xs[srt[0]] == xs[srt[count - 1]]:
                continue
            examined += 1
            for i in range(count):
                r = order[start + srt[i]]
                ws[i] = w[r]
                ps[i] = w[r] * y[r]
            wl = 0.0
            pl = 0.0
            for i in range(count - 1):
                wl += ws[i]
                pl += ps[i]
                if i + 1 < min_leaf or count - i - 1 < min_leaf:
                    continue
                a = xs[srt[i]]
                b = xs[srt[i + 1]]
                if a == b:
                    continue
                gain = parent - _gini_sum(pl, wl) - _gini_sum(wpos - pl, wsum - wl)
                if gain > best_gain:
                    best_gain = gain
                    best_f = f
                    t = 0.5 * (a + b)
                    best_t = a if t >= b else t

        if best_f < 0:
            continue

        lo = start
        hi = 0
        for i in range(start, end):
            r = order[i]
            if X[r, best_f] <= best_t:
                order[lo] = r
                lo += 1
            else:
                buf[hi] = r
                hi += 1
        for i in range(hi):
            order[lo + i] = buf[i]

        feat[node] = best_f
        thr[node] = best_t
        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        left[node] = lnode
        right[node] = rnode
        # push right first so the left subtree is expanded first
        st_node[sp] = rnode
        st_start[sp] = lo
        st_end[sp] = end
        st_depth[sp] = depth + 1
        sp += 1
        st_node[sp] = lnode
        st_start[sp] = start
        st_end[sp] = lo
        st_depth[sp] = depth + 1
        sp += 1

    return feat[:n_nodes], thr[:n_nodes], left[:n_nodes], right[:n_nodes], value[:n_nodes]


@njit(cache=True)
def _apply(X, feat, thr, left, right, value):
    n = X.shape[0]
    out = np.empty(n)
    for i in range(n):
        node = 0
        while feat[node] >= 0:
            if X[i, feat[node]] <= thr[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = value[node]
    return out


class DecisionTree:
    """Binary CART tree; leaves hold the weighted FAKE fraction."""

    def __init__(self, max_depth=None, min_samples_leaf=1, max_features=None, seed=0):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.seed = seed
        self.nodes = None

    def fit(self, X, y, sample_weight=None):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = np.ones(len(y)) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
        d = X.shape[1]
        max_features = d if self.max_features is None else int(self.max_features)
        max_depth = -1 if self.max_depth is None else int(self.max_depth)
        self.nodes = _grow(X, y, w, max_depth, int(self.min_samples_leaf), max_features, int(self.seed))
        return self

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.nodes[0] < 0))

    @property
    def n_splits(self) -> int:
        return int(np.sum(self.nodes[0] >= 0))

    def score(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _apply(X, *self.nodes)

    def state(self):
        feat, thr, left, right, value = self.nodes
        return {
            "feature": feat.tolist(),
            "threshold": thr.tolist(),
            "left": left.tolist(),
            "right": right.tolist(),
            "value": value.tolist(),
        }

    @classmethod
    def from_state(cls, state):
        tree = cls()
        tree.nodes = (
            np.asarray(state["feature"], dtype=np.int64),
            np.asarray(state["threshold"], dtype=np.float64),
            np.asarray(state["left"], dtype=np.int64),
            np.asarray(state["right"], dtype=np.int64),
            np.asarray(state["value"], dtype=np.float64),
        )
        return tree


def resolve_max_features(spec, d):
    if spec is None or spec == "all":
        return d
    if spec == "sqrt":
        return max(1, math.ceil(math.sqrt(d)))
    if isinstance(spec, float) and 0 < spec <= 1:
        return max(1, math.ceil(spec * d))
    return max(1, min(d, int(spec)))


class RandomForest:
    """Bootstrapped CART ensemble; the score is the mean leaf FAKE fraction."""

    def __init__(self, n_trees=100, max_features="sqrt", bootstrap=True, max_depth=None,
                 min_samples_leaf=1, seed=0):
        self.n_trees = n_trees
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.trees = []

    def fit(self, X, y):
        n, d = X.shape
        rng = np.random.default_rng(self.seed)
        m = resolve_max_features(self.max_features, d)
        self.trees = []
        for _ in range(self.n_trees):
            if self.bootstrap:
                weights = np.bincount(rng.integers(0, n, n), minlength=n).astype(np.float64)
            else:
                weights = np.ones(n)
            tree = DecisionTree(self.max_depth, self.min_samples_leaf, m, int(rng.integers(0, 2**31 - 1)))
            self.trees.append(tree.fit(X, y, weights))
        return self

    def score(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.score(X)
        return total / len(self.trees)

    def state(self):
        return {"trees": [t.state() for t in self.trees]}

    @classmethod
    def from_state(cls, state):
        forest = cls(n_trees=len(state["trees"]))
        forest.trees = [DecisionTree.from_state(s) for s in state["trees"]]
        return forest
