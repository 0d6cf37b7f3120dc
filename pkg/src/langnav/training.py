"""Adam training loop and evaluation for the phrase classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .errors import DivergenceError
from .gradients import gradients
from .model import ClassifierModel, init_model
from .network import classify, forward_batch
from .text import LABELS, LabeledPhrase


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 50
    batch_size: int = 32
    seed: int = 0
    embedding_dim: int = 32
    hidden_size: int = 64

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


class Adam:
    """Standard Adam with bias correction; updates parameters in place."""

    def __init__(self, params: dict[str, np.ndarray], lr: float, beta1: float, beta2: float, eps: float):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        bc1 = 1.0 - self.b1**self.t
        bc2 = 1.0 - self.b2**self.t
        for k, p in params.items():
            g = grads[k]
            self.m[k] = self.b1 * self.m[k] + (1.0 - self.b1) * g
            self.v[k] = self.b2 * self.v[k] + (1.0 - self.b2) * g * g
            p -= self.lr * (self.m[k] / bc1) / (np.sqrt(self.v[k] / bc2) + self.eps)


def train(
    corpus: Corpus, config: TrainConfig, architecture: str
) -> tuple[ClassifierModel, list[float]]:
    """Adam over shuffled mini-batches; returns the model and per-epoch loss."""
    rows = corpus.train
    if not rows:
        raise ValueError("empty training corpus")
    model = init_model(
        architecture,
        vocab_size=len(corpus.vocab),
        embedding_dim=config.embedding_dim,
        hidden_size=config.hidden_size,
        seed=config.seed,
    )
    params = model.params()
    opt = Adam(params, config.learning_rate, config.beta1, config.beta2, config.epsilon)
    rng = np.random.default_rng(config.seed)

    curve: list[float] = []
    n = len(rows)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for lo in range(0, n, config.batch_size):
            batch = [rows[i] for i in order[lo : lo + config.batch_size]]
            grads, batch_loss = gradients(batch, model)
            if not np.isfinite(batch_loss):
                raise DivergenceError(f"training loss became {batch_loss}")
            opt.step(params, grads)
            epoch_loss += batch_loss * len(batch)
        curve.append(epoch_loss / n)
    return model, curve


def evaluate_accuracy(model: ClassifierModel, test: list[LabeledPhrase]) -> float:
    """Fraction of argmax-correct labels."""
    if not test:
        raise ValueError("empty test set")
    correct = 0
    groups: dict[int, list[LabeledPhrase]] = {}
    for row in test:
        groups.setdefault(len(row.phrase), []).append(row)
    for rows in groups.values():
        ids = np.array([r.phrase.tokens for r in rows], dtype=np.int64).T
        cache = forward_batch(model, ids)
        pred = np.argmax(cache.probs, axis=1)
        truth = np.array([LABELS.index(r.label) for r in rows])
        correct += int((pred == truth).sum())
    return correct / len(test)


def predict_label(model: ClassifierModel, phrase) -> str:
    return classify(phrase, model).label
