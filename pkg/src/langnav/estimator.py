"""Scikit-learn style estimator facade over the phrase classifier.

Lets the classifier drop into sklearn tooling (clone, grid search,
pipelines) while the heavy lifting stays in the numpy training core.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .corpus import Corpus
from .model import ARCHITECTURES
from .network import classify
from .text import LABELS, LabeledPhrase, Phrase, Vocabulary, normalize, tokenize
from .training import TrainConfig, evaluate_accuracy, train


def _check_texts(X) -> list[str]:
    if isinstance(X, (str, bytes)):
        raise ValueError("X must be a sequence of phrase strings, not a single string")
    texts = list(X)
    if not texts:
        raise ValueError("X is empty")
    for i, t in enumerate(texts):
        if not isinstance(t, str) or not t.strip():
            raise ValueError(f"X[{i}] is not a non-empty string")
    return texts


def _check_labels(y, n: int) -> list[str]:
    labels = list(y)
    if len(labels) != n:
        raise ValueError(f"X and y lengths differ: {n} != {len(labels)}")
    for i, lab in enumerate(labels):
        if lab not in LABELS:
            raise ValueError(f"y[{i}] = {lab!r} not one of {LABELS}")
    return labels


class PhraseClassifier(BaseEstimator, ClassifierMixin):
    """Three-way phrase classifier with a fit/predict surface.

    X is a sequence of raw phrase strings; y uses the labels
    ("goal", "constraint", "uninformative").
    """

    def __init__(
        self,
        architecture: str = "attbilstm",
        embedding_dim: int = 32,
        hidden_size: int = 64,
        learning_rate: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
        epochs: int = 50,
        batch_size: int = 32,
        seed: int = 0,
    ):
        self.architecture = architecture
        self.embedding_dim = embedding_dim
        self.hidden_size = hidden_size
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed

    def _tokenize(self, text: str) -> Phrase:
        return tokenize(normalize(text), self.vocab_)

    def fit(self, X, y):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"architecture must be one of {ARCHITECTURES}")
        texts = _check_texts(X)
        labels = _check_labels(y, len(texts))
        self.vocab_ = Vocabulary.from_surfaces(normalize(t) for t in texts)
        rows = [
            LabeledPhrase(tokenize(normalize(t), self.vocab_), lab)
            for t, lab in zip(texts, labels)
        ]
        corpus = Corpus(train=rows, test=[], seed=self.seed, vocab=self.vocab_)
        config = TrainConfig(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed,
            embedding_dim=self.embedding_dim,
            hidden_size=self.hidden_size,
        )
        self.model_, self.loss_curve_ = train(corpus, config, self.architecture)
        self.classes_ = np.asarray(LABELS)
        return self

    def _require_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("PhraseClassifier is not fitted; call fit first")

    def predict(self, X):
        self._require_fitted()
        return np.asarray([classify(self._tokenize(t), self.model_).label for t in _check_texts(X)])

    def predict_proba(self, X):
        self._require_fitted()
        return np.vstack([classify(self._tokenize(t), self.model_).probs for t in _check_texts(X)])

    def explain(self, text: str):
        """(tokens, attention weights or None) for one phrase."""
        self._require_fitted()
        phrase = self._tokenize(text)
        result = classify(phrase, self.model_)
        return phrase.words(), result.attention

    def score(self, X, y):
        self._require_fitted()
        texts = _check_texts(X)
        labels = _check_labels(y, len(texts))
        rows = [LabeledPhrase(self._tokenize(t), lab) for t, lab in zip(texts, labels)]
        return evaluate_accuracy(self.model_, rows)
