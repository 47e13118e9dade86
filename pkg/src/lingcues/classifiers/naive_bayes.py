import numpy as np


class GaussianNB:
    """Per-class Gaussian likelihoods with a variance floor; scores are P(FAKE | x)."""

    def __init__(self, var_floor=1e-9):
        self.var_floor = var_floor

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        self.means = np.vstack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.variances = np.maximum(np.vstack([X[y == c].var(axis=0) for c in (0, 1)]), self.var_floor)
        self.priors = np.array([np.mean(y == 0), np.mean(y == 1)])
        return self

    def log_joint(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty((len(X), 2))
        for c in (0, 1):
            var = self.variances[c]
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * var) + (X - self.means[c]) ** 2 / var, axis=1)
            out[:, c] = np.log(self.priors[c]) + ll
        return out

    def score(self, X):
        lj = self.log_joint(X)
        # P(FAKE) = 1 / (1 + exp(l_real - l_fake)), evaluated stably
        diff = lj[:, 0] - lj[:, 1]
        out = np.empty(len(diff))
        pos = diff >= 0
        e = np.exp(-diff[pos])
        out[pos] = e / (1.0 + e)
        out[~pos] = 1.0 / (1.0 + np.exp(diff[~pos]))
        return out

    def state(self):
        return {"means": self.means.tolist(), "variances": self.variances.tolist(), "priors": self.priors.tolist()}

    @classmethod
    def from_state(cls, state, var_floor=1e-9):
        nb = cls(var_floor)
        nb.means = np.asarray(state["means"], dtype=np.float64)
        nb.variances = np.asarray(state["variances"], dtype=np.float64)
        nb.priors = np.asarray(state["priors"], dtype=np.float64)
        return nb
