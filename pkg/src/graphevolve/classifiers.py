"""k-NN and multinomial logistic regression with per-class probability output.

Both classifiers standardize features with statistics of their own
training set, are deterministic, and expose ``predict_proba`` returning
one distribution over classes per row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FitError


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "knn"
    knn_k: int = 5
    learning_rate: float = 0.1
    l2: float = 1e-3
    max_epochs: int = 2000
    grad_tol: float = 1e-6

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}; expected one of {sorted(CLASSIFIER_KINDS)}")
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")
        if self.learning_rate <= 0 or self.max_epochs < 0 or self.l2 < 0:
            raise ValueError("invalid training hyperparameters")


def standardize_stats(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension mean and std; constant dimensions get std 1."""
    mu = x.mean(axis=0)
    sigma = x.std(axis=0)
    sigma = np.where(sigma < 1e-12, 1.0, sigma)
    return mu, sigma


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _validate_training_data(x: np.ndarray, y: np.ndarray, n_classes: int | None) -> int:
    if x.ndim != 2 or x.shape[0] == 0:
        raise FitError("training features must be a nonempty (N, d) matrix")
    if x.shape[0] != y.shape[0]:
        raise FitError("features and labels differ in length")
    if not np.all(np.isfinite(x)):
        raise FitError("training features contain non-finite values")
    present = np.unique(y)
    if present.size < 2:
        raise FitError("training set contains a single class")
    inferred = int(present.max()) + 1
    if n_classes is None:
        return inferred
    if inferred > n_classes:
        raise FitError(f"label {int(present.max())} outside 0..{n_classes - 1}")
    return n_classes


class KnnClassifier:
    """k nearest neighbors under Euclidean distance on standardized features.

    Distance ties are broken toward the lower training index; the predicted
    distribution is the class frequency among the k neighbors.
    """

    def __init__(self, k: int = 5, n_classes: int | None = None):
        self.k = k
        self.n_classes = n_classes
        self._x: np.ndarray | None = None

    def fit(self, x, y) -> "KnnClassifier":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=int)
        self.n_classes = _validate_training_data(x, y, self.n_classes)
        self.mu, self.sigma = standardize_stats(x)
        self._x = (x - self.mu) / self.sigma
        self._y = y
        return self

    def predict_proba(self, x) -> np.ndarray:
        if self._x is None:
            raise FitError("classifier is not fitted")
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.shape[1] != self._x.shape[1]:
            raise ValueError(f"expected feature dimension {self._x.shape[1]}, got {x.shape[1]}")
        z = (x - self.mu) / self.sigma
        # squared distances via the Gram trick: avoids an (N, M, d) intermediate
        sq = (z ** 2).sum(axis=1)[:, None] + (self._x ** 2).sum(axis=1)[None, :] - 2.0 * (z @ self._x.T)
        np.maximum(sq, 0.0, out=sq)
        k = min(self.k, self._x.shape[0])
        nearest = np.argsort(sq, axis=1, kind="stable")[:, :k]
        onehot = self._y[nearest][:, :, None] == np.arange(self.n_classes)[None, None, :]
        probs = onehot.sum(axis=1) / k
        return probs[0] if single else probs


def _gradients(
    w: np.ndarray, b: np.ndarray, z: np.ndarray, y_onehot: np.ndarray, l2: float
) -> tuple[np.ndarray, np.ndarray]:
    diff = (softmax(z @ w + b) - y_onehot) / z.shape[0]
    return z.T @ diff + l2 * w, diff.sum(axis=0)


def loss_and_grad(
    w: np.ndarray, b: np.ndarray, z: np.ndarray, y_onehot: np.ndarray, l2: float
) -> tuple[float, np.ndarray, np.ndarray]:
    """L2-regularized mean cross-entropy and its analytic gradient.

    The bias is unregularized. Exposed separately so the gradient can be
    checked against finite differences.
    """
    probs = softmax(z @ w + b)
    # clip only inside the log; the gradient uses the exact probabilities
    loss = -np.mean(np.log(np.clip((probs * y_onehot).sum(axis=1), 1e-300, None)))
    loss += 0.5 * l2 * float((w ** 2).sum())
    grad_w, grad_b = _gradients(w, b, z, y_onehot, l2)
    return loss, grad_w, grad_b


class LogisticRegression:
    """Multinomial logistic regression trained by full-batch gradient descent.

    Weights start at zero and updates stop when the gradient norm falls
    below ``grad_tol`` or after ``max_epochs`` steps, so training is fully
    deterministic.
    """

    def __init__(
        self,
        learning_rate: float = 0.1,
        l2: float = 1e-3,
        max_epochs: int = 2000,
        grad_tol: float = 1e-6,
        n_classes: int | None = None,
    ):
        self.learning_rate = learning_rate
        self.l2 = l2
        self.max_epochs = max_epochs
        self.grad_tol = grad_tol
        self.n_classes = n_classes
        self.w: np.ndarray | None = None

    def fit(self, x, y) -> "LogisticRegression":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=int)
        self.n_classes = _validate_training_data(x, y, self.n_classes)
        self.mu, self.sigma = standardize_stats(x)
        z = (x - self.mu) / self.sigma
        y_onehot = np.zeros((x.shape[0], self.n_classes))
        y_onehot[np.arange(x.shape[0]), y] = 1.0

        # hot loop: same math as _gradients with reused float32 buffers;
        # the stored model and all predictions stay float64
        z32 = np.ascontiguousarray(z, dtype=np.float32)
        y32 = y_onehot.astype(np.float32)
        n = z.shape[0]
        w = np.zeros((x.shape[1], self.n_classes), dtype=np.float32)
        b = np.zeros(self.n_classes, dtype=np.float32)
        buf = np.empty((n, self.n_classes), dtype=np.float32)
        grad_w = np.empty_like(w)
        zt = np.ascontiguousarray(z32.T)
        for _ in range(self.max_epochs):
            np.matmul(z32, w, out=buf)
            buf += b
            buf -= buf.max(axis=1, keepdims=True)
            np.exp(buf, out=buf)
            buf /= buf.sum(axis=1, keepdims=True)
            buf -= y32
            buf /= n
            np.matmul(zt, buf, out=grad_w)
            grad_w += np.float32(self.l2) * w
            grad_b = buf.sum(axis=0)
            gnorm = np.sqrt(float((grad_w ** 2).sum()) + float((grad_b ** 2).sum()))
            if gnorm < self.grad_tol:
                break
            w -= np.float32(self.learning_rate) * grad_w
            b -= np.float32(self.learning_rate) * grad_b
        self.w = w.astype(float)
        self.b = b.astype(float)
        return self

    def predict_proba(self, x) -> np.ndarray:
        if self.w is None:
            raise FitError("classifier is not fitted")
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.shape[1] != self.w.shape[0]:
            raise ValueError(f"expected feature dimension {self.w.shape[0]}, got {x.shape[1]}")
        z = (x - self.mu) / self.sigma
        probs = softmax(z @ self.w + self.b)
        return probs[0] if single else probs


CLASSIFIER_KINDS = {"knn", "logreg"}

Classifier = KnnClassifier | LogisticRegression


def fit(features, labels, config: ClassifierConfig, n_classes: int | None = None) -> Classifier:
    """Train a classifier of ``config.kind`` and return the fitted model."""
    if config.kind == "knn":
        model: Classifier = KnnClassifier(k=config.knn_k, n_classes=n_classes)
    else:
        model = LogisticRegression(
            learning_rate=config.learning_rate,
            l2=config.l2,
            max_epochs=config.max_epochs,
            grad_tol=config.grad_tol,
            n_classes=n_classes,
        )
    return model.fit(features, labels)


def predict_labels(model: Classifier, features) -> np.ndarray:
    probs = np.atleast_2d(model.predict_proba(features))
    return probs.argmax(axis=1)


def accuracy(model: Classifier, features, labels) -> float:
    labels = np.asarray(labels, dtype=int)
    return float((predict_labels(model, features) == labels).mean())
