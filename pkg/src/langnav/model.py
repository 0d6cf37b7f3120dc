"""Parameter containers, initialization, and checkpoint I/O for the classifier."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ModelFormatError
from .text import LABELS, Vocabulary

ARCH_LSTM = "lstm"
ARCH_BILSTM = "bilstm"
ARCH_ATTBILSTM = "attbilstm"
ARCHITECTURES = (ARCH_LSTM, ARCH_BILSTM, ARCH_ATTBILSTM)

CHECKPOINT_FORMAT = "langnav-model"
CHECKPOINT_VERSION = 1

#: Gate block order inside the stacked LSTM weight matrices.
GATE_ORDER = ("input", "forget", "cell", "output")


@dataclass
class EmbeddingTable:
    """Word embeddings, one column per vocabulary id: e_i = We[:, i]."""

    We: np.ndarray  # (embedding_dim, vocab_size)


@dataclass
class LstmDirectionParams:
    """One LSTM direction; gates stacked in GATE_ORDER along the first axis."""

    Wx: np.ndarray  # (4p, d)
    Wh: np.ndarray  # (4p, p)
    b: np.ndarray  # (4p,)

    @property
    def hidden_size(self) -> int:
        return self.Wh.shape[1]


@dataclass
class AttentionHead:
    w: np.ndarray  # (p,)


@dataclass
class OutputHead:
    W: np.ndarray  # (3, p)
    b: np.ndarray  # (3,)


@dataclass
class ClassifierModel:
    architecture: str
    embedding: EmbeddingTable
    forward_lstm: LstmDirectionParams
    backward_lstm: LstmDirectionParams | None
    attention: AttentionHead | None
    output: OutputHead
    seed: int

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if (self.backward_lstm is None) != (self.architecture == ARCH_LSTM):
            raise ValueError("backward direction present iff architecture is bidirectional")
        if (self.attention is None) != (self.architecture != ARCH_ATTBILSTM):
            raise ValueError("attention head present iff architecture is attbilstm")

    @property
    def vocab_size(self) -> int:
        return self.embedding.We.shape[1]

    @property
    def embedding_dim(self) -> int:
        return self.embedding.We.shape[0]

    @property
    def hidden_size(self) -> int:
        return self.forward_lstm.hidden_size

    def params(self) -> dict[str, np.ndarray]:
        """Named views of every trainable tensor; update in place to train."""
        out = {
            "embedding.We": self.embedding.We,
            "fwd.Wx": self.forward_lstm.Wx,
            "fwd.Wh": self.forward_lstm.Wh,
            "fwd.b": self.forward_lstm.b,
        }
        if self.backward_lstm is not None:
            out["bwd.Wx"] = self.backward_lstm.Wx
            out["bwd.Wh"] = self.backward_lstm.Wh
            out["bwd.b"] = self.backward_lstm.b
        if self.attention is not None:
            out["attention.w"] = self.attention.w
        out["output.W"] = self.output.W
        out["output.b"] = self.output.b
        return out


def _init_lstm(rng: np.random.Generator, d: int, p: int, scale: float) -> LstmDirectionParams:
    params = LstmDirectionParams(
        Wx=rng.uniform(-scale, scale, size=(4 * p, d)),
        Wh=rng.uniform(-scale, scale, size=(4 * p, p)),
        b=rng.uniform(-scale, scale, size=4 * p),
    )
    params.b[p : 2 * p] += 1.0  # forget-gate bias for training stability
    return params


def init_model(
    architecture: str,
    vocab_size: int,
    embedding_dim: int = 32,
    hidden_size: int = 64,
    seed: int = 0,
    scale: float = 0.08,
) -> ClassifierModel:
    """Seeded uniform(-scale, scale) initialization of all parameters."""
    if architecture not in ARCHITECTURES:
        raise ValueError(f"unknown architecture {architecture!r}")
    rng = np.random.default_rng(seed)
    d, p = embedding_dim, hidden_size
    embedding = EmbeddingTable(We=rng.uniform(-scale, scale, size=(d, vocab_size)))
    fwd = _init_lstm(rng, d, p, scale)
    bwd = _init_lstm(rng, d, p, scale) if architecture != ARCH_LSTM else None
    attention = AttentionHead(w=rng.uniform(-scale, scale, size=p)) if architecture == ARCH_ATTBILSTM else None
    output = OutputHead(
        W=rng.uniform(-scale, scale, size=(len(LABELS), p)),
        b=rng.uniform(-scale, scale, size=len(LABELS)),
    )
    return ClassifierModel(
        architecture=architecture,
        embedding=embedding,
        forward_lstm=fwd,
        backward_lstm=bwd,
        attention=attention,
        output=output,
        seed=seed,
    )


def save_model(model: ClassifierModel, vocab: Vocabulary, path) -> None:
    """Self-describing JSON checkpoint: header, dims, vocabulary, tensors."""
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "architecture": model.architecture,
        "embedding_dim": model.embedding_dim,
        "hidden_size": model.hidden_size,
        "labels": list(LABELS),
        "seed": model.seed,
        "vocab": vocab.to_list(),
        "params": {
            name: {"shape": list(t.shape), "data": t.ravel().tolist()}
            for name, t in model.params().items()
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)


def load_model(path) -> tuple[ClassifierModel, Vocabulary]:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ModelFormatError(f"not a model checkpoint: {e}") from e
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ModelFormatError(f"unexpected format tag {doc.get('format')!r}")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise ModelFormatError(f"unsupported checkpoint version {doc.get('version')!r}")
    if doc.get("labels") != list(LABELS):
        raise ModelFormatError("checkpoint label set does not match this build")

    tensors = {}
    for name, spec in doc["params"].items():
        arr = np.asarray(spec["data"], dtype=np.float64).reshape(spec["shape"])
        tensors[name] = arr

    arch = doc["architecture"]
    model = ClassifierModel(
        architecture=arch,
        embedding=EmbeddingTable(We=tensors["embedding.We"]),
        forward_lstm=LstmDirectionParams(
            Wx=tensors["fwd.Wx"], Wh=tensors["fwd.Wh"], b=tensors["fwd.b"]
        ),
        backward_lstm=(
            LstmDirectionParams(Wx=tensors["bwd.Wx"], Wh=tensors["bwd.Wh"], b=tensors["bwd.b"])
            if arch != ARCH_LSTM
            else None
        ),
        attention=AttentionHead(w=tensors["attention.w"]) if arch == ARCH_ATTBILSTM else None,
        output=OutputHead(W=tensors["output.W"], b=tensors["output.b"]),
        seed=doc.get("seed", 0),
    )
    vocab = Vocabulary.from_list(doc["vocab"])
    if len(vocab) != model.vocab_size:
        raise ModelFormatError("vocabulary length does not match embedding width")
    return model, vocab
