"""Exact analytic gradients of the mean cross-entropy via backpropagation."""

from __future__ import annotations

import numpy as np

from .model import ARCH_ATTBILSTM, ARCH_BILSTM, ARCH_LSTM, ClassifierModel, LstmDirectionParams
from .network import ForwardCache, LstmCache, forward_batch, loss
from .text import LABELS, LabeledPhrase


def zero_grads(model: ClassifierModel) -> dict[str, np.ndarray]:
    return {name: np.zeros_like(t) for name, t in model.params().items()}


def lstm_backward(
    dH: np.ndarray, cache: LstmCache, params: LstmDirectionParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Backprop one direction; dH is aligned with the input time order.

    Returns (dE, dWx, dWh, db) with dE in input time order as well.
    """
    if cache.reverse:
        dH = dH[::-1]
    T, B, p = dH.shape
    dWx = np.zeros_like(params.Wx)
    dWh = np.zeros_like(params.Wh)
    db = np.zeros_like(params.b)
    dE = np.empty_like(cache.E)

    dh_carry = np.zeros((B, p))
    dc_carry = np.zeros((B, p))
    for t in range(T - 1, -1, -1):
        i = cache.gates[t, :, :p]
        f = cache.gates[t, :, p : 2 * p]
        g = cache.gates[t, :, 2 * p : 3 * p]
        o = cache.gates[t, :, 3 * p :]
        tc = cache.TC[t]

        dh = dH[t] + dh_carry
        do = dh * tc
        dc = dc_carry + dh * o * (1.0 - tc * tc)
        c_prev = cache.C[t - 1] if t > 0 else np.zeros((B, p))
        df = dc * c_prev
        di = dc * g
        dg = dc * i

        dz = np.concatenate(
            [di * i * (1.0 - i), df * f * (1.0 - f), dg * (1.0 - g * g), do * o * (1.0 - o)],
            axis=1,
        )
        h_prev = cache.H[t - 1] if t > 0 else np.zeros((B, p))
        dWx += dz.T @ cache.E[t]
        dWh += dz.T @ h_prev
        db += dz.sum(axis=0)
        dE[t] = dz @ params.Wx
        dh_carry = dz @ params.Wh
        dc_carry = dc * f

    if cache.reverse:
        dE = dE[::-1]
    return dE, dWx, dWh, db


def backward_batch(
    model: ClassifierModel,
    cache: ForwardCache,
    labels: np.ndarray,
    grads: dict[str, np.ndarray],
    scale: float,
) -> None:
    """Accumulate scale * d(sum of sample losses)/d(params) into grads."""
    T, B = cache.ids.shape
    p = model.hidden_size

    dlogits = cache.probs.copy()
    dlogits[np.arange(B), labels] -= 1.0
    dlogits *= scale

    grads["output.W"] += dlogits.T @ cache.feature
    grads["output.b"] += dlogits.sum(axis=0)
    dfeat = dlogits @ model.output.W  # (B, p)

    dH = np.zeros_like(cache.H)
    if model.architecture == ARCH_ATTBILSTM:
        dr = dfeat * (1.0 - cache.feature * cache.feature)  # through h* = tanh(r)
        dalpha = np.einsum("bp,tbp->tb", dr, cache.H)
        dH += cache.alpha[:, :, None] * dr[None, :, :]
        # softmax over the time axis
        dscores = cache.alpha * (dalpha - np.sum(cache.alpha * dalpha, axis=0, keepdims=True))
        grads["attention.w"] += np.einsum("tb,tbp->p", dscores, cache.tanh_h)
        dH += dscores[:, :, None] * model.attention.w[None, None, :] * (1.0 - cache.tanh_h**2)
    else:
        dH[-1] = dfeat

    dE_f, dWx, dWh, db = lstm_backward(dH, cache.fwd, model.forward_lstm)
    grads["fwd.Wx"] += dWx
    grads["fwd.Wh"] += dWh
    grads["fwd.b"] += db
    dE = dE_f
    if model.architecture != ARCH_LSTM:
        dE_b, dWx, dWh, db = lstm_backward(dH, cache.bwd, model.backward_lstm)
        grads["bwd.Wx"] += dWx
        grads["bwd.Wh"] += dWh
        grads["bwd.b"] += db
        dE = dE + dE_b

    # Scatter-add embedding gradients into the id columns (duplicates stack).
    dWe_rows = grads["embedding.We"].T  # (V, d) view sharing memory
    np.add.at(dWe_rows, cache.ids.ravel(), dE.reshape(-1, dE.shape[2]))


def group_by_length(batch: list[LabeledPhrase]) -> dict[int, list[LabeledPhrase]]:
    groups: dict[int, list[LabeledPhrase]] = {}
    for row in batch:
        groups.setdefault(len(row.phrase), []).append(row)
    return groups


def gradients(
    batch: list[LabeledPhrase], model: ClassifierModel
) -> tuple[dict[str, np.ndarray], float]:
    """Mean cross-entropy gradients for a mixed-length batch, plus the loss."""
    if not batch:
        raise ValueError("empty batch")
    grads = zero_grads(model)
    n = len(batch)
    total = 0.0
    for T, rows in group_by_length(batch).items():
        ids = np.array([r.phrase.tokens for r in rows], dtype=np.int64).T  # (T, B)
        labels = np.array([LABELS.index(r.label) for r in rows])
        cache = forward_batch(model, ids)
        total += sum(loss(cache.probs[b], int(labels[b])) for b in range(len(rows)))
        backward_batch(model, cache, labels, grads, scale=1.0 / n)
    return grads, total / n
