import math

import numpy as np

from .tree import DecisionTree

# stage weight used when a learner is perfect on the weighted sample
_MIN_ERROR = 1e-10


class AdaBoost:
    """Discrete (SAMME, two-class) AdaBoost over shallow CART trees.

    Stops early when a round's weighted error is 0 (that learner is kept) or
    at least 0.5 (that learner is discarded).
    """

    def __init__(self, n_estimators=50, learning_rate=1.0, base_depth=1, seed=0):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.base_depth = base_depth
        self.seed = seed

    def fit(self, X, y):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y)
        sign = np.where(y == 1, 1.0, -1.0)
        w = np.full(len(y), 1.0 / len(y))
        self.learners, self.alphas = [], []
        self.errors, self.weight_sums = [], []
        for t in range(self.n_estimators):
            tree = DecisionTree(max_depth=self.base_depth, seed=self.seed + t).fit(X, y, w)
            h = np.where(tree.score(X) >= 0.5, 1.0, -1.0)
            miss = h != sign
            err = float(np.sum(w[miss]))
            if err >= 0.5:
                break
            alpha = self.learning_rate * math.log((1.0 - max(err, _MIN_ERROR)) / max(err, _MIN_ERROR))
            self.learners.append(tree)
            self.alphas.append(alpha)
            self.errors.append(err)
            if err == 0.0:
                self.weight_sums.append(float(w.sum()))
                break
            w = w * np.exp(alpha * miss)
            w /= w.sum()
            self.weight_sums.append(float(w.sum()))
        return self

    def margin(self, X):
        """Stage-weighted vote normalized to [-1, 1]."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        total = sum(self.alphas)
        if total <= 0:
            return np.zeros(len(X))
        votes = np.zeros(len(X))
        for alpha, tree in zip(self.alphas, self.learners):
            votes += alpha * np.where(tree.score(X) >= 0.5, 1.0, -1.0)
        return votes / total

    def score(self, X):
        return 0.5 * (self.margin(X) + 1.0)

    def state(self):
        return {
            "alphas": list(self.alphas),
            "learners": [t.state() for t in self.learners],
            "errors": list(self.errors),
            "weight_sums": list(self.weight_sums),
        }

    @classmethod
    def from_state(cls, state):
        ada = cls(n_estimators=len(state["alphas"]))
        ada.alphas = list(state["alphas"])
        ada.learners = [DecisionTree.from_state(s) for s in state["learners"]]
        ada.errors = list(state.get("errors", []))
        ada.weight_sums = list(state.get("weight_sums", []))
        return ada
