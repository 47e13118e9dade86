import numpy as np


def hinge_objective(w, b, Z, sign, lam):
    margins = sign * (Z @ w + b)
    return 0.5 * lam * (w @ w + b * b) + float(np.mean(np.maximum(0.0, 1.0 - margins)))


class LinearSVM:
    """Linear soft-margin SVM trained by mini-batch Pegasos sub-gradient steps.

    Minimizes ``lam/2 * |w|^2 + mean(hinge)`` with ``lam = 1 / (C * n)`` on
    z-scored features (the bias is a regularized constant column). The
    returned hyperplane is the running average of all iterates. Scores are the
    signed margin squashed through a logistic function.
    """

    def __init__(self, C=1.0, epochs=100, batch_size=32, seed=0):
        self.C = C
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.center = X.mean(axis=0)
        scale = X.std(axis=0)
        self.scale = np.where(scale > 0, scale, 1.0)
        Z = (X - self.center) / self.scale
        n, d = Z.shape
        A = np.hstack([Z, np.ones((n, 1))])
        sign = np.where(np.asarray(y) == 1, 1.0, -1.0)
        lam = 1.0 / (self.C * n)
        radius = 1.0 / np.sqrt(lam)
        rng = np.random.default_rng(self.seed)
        theta = np.zeros(d + 1)
        avg = np.zeros(d + 1)
        t = 0
        self.objective_history = []
        for _ in range(self.epochs):
            perm = rng.permutation(n)
            for lo in range(0, n, self.batch_size):
                batch = perm[lo:lo + self.batch_size]
                t += 1
                eta = 1.0 / (lam * t)
                viol = sign[batch] * (A[batch] @ theta) < 1.0
                grad_loss = (sign[batch][viol, None] * A[batch][viol]).sum(axis=0) / len(batch)
                theta = (1.0 - eta * lam) * theta + eta * grad_loss
                norm = np.linalg.norm(theta)
                if norm > radius:
                    theta *= radius / norm
                avg += (theta - avg) / t
            self.objective_history.append(hinge_objective(avg[:-1], avg[-1], Z, sign, lam))
        self.w = avg[:-1].copy()
        self.b = float(avg[-1])
        return self

    def decision(self, X):
        Z = (np.asarray(X, dtype=np.float64) - self.center) / self.scale
        return Z @ self.w + self.b

    def score(self, X):
        m = self.decision(X)
        return 0.5 * (1.0 + np.tanh(0.5 * m))

    def state(self):
        return {"center": self.center.tolist(), "scale": self.scale.tolist(), "w": self.w.tolist(), "b": self.b}

    @classmethod
    def from_state(cls, state):
        svm = cls()
        svm.center = np.asarray(state["center"], dtype=np.float64)
        svm.scale = np.asarray(state["scale"], dtype=np.float64)
        svm.w = np.asarray(state["w"], dtype=np.float64)
        svm.b = float(state["b"])
        return svm
