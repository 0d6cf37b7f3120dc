"""Forward passes for the phrase classifier.

All internals are time-major: token ids are (T, B), embedded inputs
(T, B, d), hidden states (T, B, p). Batches always share one length T, so
no padding or masking is needed; the trainer groups samples by length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit as sigmoid

from .model import ARCH_ATTBILSTM, ARCH_BILSTM, ARCH_LSTM, ClassifierModel, LstmDirectionParams
from .text import LABELS, Phrase

PROB_FLOOR = 1e-12


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    z = x - np.max(x, axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def embed_ids(We: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """Look up embedding columns: (T, B) int ids -> (T, B, d)."""
    ids = np.asarray(ids)
    if ids.size and (ids.min() < 0 or ids.max() >= We.shape[1]):
        raise ValueError(
            f"token id out of range [0, {We.shape[1]}): {int(ids.min())}..{int(ids.max())}"
        )
    return We.T[ids]


def embed_sequence(phrase, table) -> np.ndarray:
    """Embed one phrase: each token id selects a column of We; returns (T, d)."""
    ids = np.asarray(phrase.tokens if isinstance(phrase, Phrase) else phrase, dtype=np.int64)
    return embed_ids(table.We, ids[:, None])[:, 0, :]


@dataclass
class LstmCache:
    """Everything the backward pass needs, stored in *internal* time order."""

    E: np.ndarray  # (T, B, d) inputs as seen by the recurrence
    gates: np.ndarray  # (T, B, 4p) post-activation, gate order i|f|g|o
    C: np.ndarray  # (T, B, p) cell states
    TC: np.ndarray  # (T, B, p) tanh(cell)
    H: np.ndarray  # (T, B, p) hidden states
    reverse: bool  # True when the direction read the sequence reversed


def lstm_run(E: np.ndarray, params: LstmDirectionParams, reverse: bool = False) -> tuple[np.ndarray, LstmCache]:
    """Run one LSTM direction over (T, B, d); zero initial hidden/cell state.

    Returns hidden states aligned with the *input* time order, so for a
    reversed direction H[i] is the state after reading tokens T..i+1.
    """
    if E.ndim != 3:
        raise ValueError(f"expected (T, B, d) inputs, got shape {E.shape}")
    if E.shape[0] == 0:
        raise ValueError("empty input sequence")
    if E.shape[2] != params.Wx.shape[1]:
        raise ValueError(f"input dim {E.shape[2]} != LSTM input dim {params.Wx.shape[1]}")

    Ein = E[::-1] if reverse else E
    T, B, _ = Ein.shape
    p = params.hidden_size
    gates = np.empty((T, B, 4 * p))
    C = np.empty((T, B, p))
    TC = np.empty((T, B, p))
    H = np.empty((T, B, p))

    h = np.zeros((B, p))
    c = np.zeros((B, p))
    for t in range(T):
        z = Ein[t] @ params.Wx.T + h @ params.Wh.T + params.b
        i = sigmoid(z[:, :p])
        f = sigmoid(z[:, p : 2 * p])
        g = np.tanh(z[:, 2 * p : 3 * p])
        o = sigmoid(z[:, 3 * p :])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        gates[t, :, :p] = i
        gates[t, :, p : 2 * p] = f
        gates[t, :, 2 * p : 3 * p] = g
        gates[t, :, 3 * p :] = o
        C[t] = c
        TC[t] = tc
        H[t] = h

    cache = LstmCache(E=Ein, gates=gates, C=C, TC=TC, H=H, reverse=reverse)
    return (H[::-1] if reverse else H), cache


def lstm_forward(inputs: np.ndarray, params: LstmDirectionParams) -> np.ndarray:
    """All T hidden states for a single (T, d) sequence."""
    H, _ = lstm_run(np.asarray(inputs, dtype=np.float64)[:, None, :], params)
    return H[:, 0, :]


def bilstm_states(
    inputs: np.ndarray, fwd: LstmDirectionParams, bwd: LstmDirectionParams
) -> np.ndarray:
    """Per-token sum of forward and backward hidden states: h_i = fh_i + bh_i."""
    E = np.asarray(inputs, dtype=np.float64)[:, None, :]
    Hf, _ = lstm_run(E, fwd)
    Hb, _ = lstm_run(E, bwd, reverse=True)
    return (Hf + Hb)[:, 0, :]


def attention_weights(states: np.ndarray, head) -> np.ndarray:
    """Softmax over per-token scores w . tanh(h_i); positive, sums to 1."""
    scores = np.tanh(np.asarray(states)) @ head.w
    return softmax(scores, axis=0)


def summarize(states: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """tanh of the attention-weighted state sum."""
    states = np.asarray(states, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape[0] != states.shape[0]:
        raise ValueError(f"{alpha.shape[0]} weights for {states.shape[0]} states")
    if abs(float(alpha.sum()) - 1.0) > 1e-9:
        raise ValueError("attention weights must sum to 1")
    return np.tanh(alpha @ states)


def output_probs(feature: np.ndarray, head) -> np.ndarray:
    """Class distribution softmax(W h + b)."""
    return softmax(head.W @ np.asarray(feature, dtype=np.float64) + head.b)


def loss(probs: np.ndarray, label) -> float:
    """Cross-entropy -log p(true class), floored at PROB_FLOOR."""
    idx = LABELS.index(label) if isinstance(label, str) else int(label)
    return float(-np.log(max(float(np.asarray(probs)[idx]), PROB_FLOOR)))


@dataclass
class ForwardCache:
    """Intermediates of a length-homogeneous batch forward pass."""

    ids: np.ndarray  # (T, B)
    E: np.ndarray  # (T, B, d)
    fwd: LstmCache
    bwd: LstmCache | None
    H: np.ndarray  # (T, B, p) combined states (fwd-only for ARCH_LSTM)
    tanh_h: np.ndarray | None  # (T, B, p) attbilstm only
    alpha: np.ndarray | None  # (T, B) attention weights
    r: np.ndarray | None  # (B, p) pre-tanh summary
    feature: np.ndarray  # (B, p)
    probs: np.ndarray  # (B, 3)


def forward_batch(model: ClassifierModel, ids: np.ndarray) -> ForwardCache:
    """Full classifier forward over a (T, B) id batch."""
    ids = np.atleast_2d(np.asarray(ids, dtype=np.int64))
    E = embed_ids(model.embedding.We, ids)
    Hf, fwd_cache = lstm_run(E, model.forward_lstm)

    bwd_cache = None
    tanh_h = alpha = r = None
    if model.architecture == ARCH_LSTM:
        H = Hf
        feature = H[-1]
    else:
        Hb, bwd_cache = lstm_run(E, model.backward_lstm, reverse=True)
        H = Hf + Hb
        if model.architecture == ARCH_BILSTM:
            feature = H[-1]
        else:
            tanh_h = np.tanh(H)
            scores = tanh_h @ model.attention.w  # (T, B)
            alpha = softmax(scores, axis=0)
            r = np.einsum("tb,tbp->bp", alpha, H)
            feature = np.tanh(r)

    logits = feature @ model.output.W.T + model.output.b
    probs = softmax(logits, axis=1)
    return ForwardCache(
        ids=ids, E=E, fwd=fwd_cache, bwd=bwd_cache, H=H,
        tanh_h=tanh_h, alpha=alpha, r=r, feature=feature, probs=probs,
    )


@dataclass
class ClassifyResult:
    label: str
    probs: np.ndarray  # (3,) in LABELS order
    attention: np.ndarray | None  # (T,) for attbilstm, else None


def classify(phrase, model: ClassifierModel) -> ClassifyResult:
    """Label one tokenized phrase; ties broken toward the lowest class index."""
    ids = np.asarray(phrase.tokens if isinstance(phrase, Phrase) else phrase, dtype=np.int64)
    cache = forward_batch(model, ids[:, None])
    probs = cache.probs[0]
    label = LABELS[int(np.argmax(probs))]
    attention = cache.alpha[:, 0].copy() if cache.alpha is not None else None
    return ClassifyResult(label=label, probs=probs, attention=attention)
