"""Independent brute-force references used to check the library.

Every function here recomputes its value from scratch per index or by
exhaustive enumeration, deliberately avoiding the running-state
recurrences and rank tricks the implementations use.
"""

import numpy as np


def sma_oracle(x, n):
    x = np.asarray(x, dtype=np.float64)
    out = np.full(len(x), np.nan)
    for t in range(n - 1, len(x)):
        out[t] = x[t - n + 1 : t + 1].sum() / n
    return out


def ema_oracle(x, n):
    """Closed-form EMA per index: decayed seed plus decayed-weight sum."""
    x = np.asarray(x, dtype=np.float64)
    out = np.full(len(x), np.nan)
    if len(x) < n:
        return out
    alpha = 2.0 / (n + 1.0)
    seed = x[:n].sum() / n
    for t in range(n - 1, len(x)):
        k = t - (n - 1)
        tail = x[n : t + 1]
        weights = (1.0 - alpha) ** np.arange(len(tail) - 1, -1, -1)
        out[t] = (1.0 - alpha) ** k * seed + alpha * (weights * tail).sum()
    return out


def rsi_oracle(closes, n):
    """Closed-form Wilder RSI per index."""
    x = np.asarray(closes, dtype=np.float64)
    out = np.full(len(x), np.nan)
    if len(x) < n + 1:
        return out
    moves = np.diff(x)
    gains = np.maximum(moves, 0.0)
    losses = np.maximum(-moves, 0.0)
    beta = (n - 1.0) / n
    seed_gain = gains[:n].sum() / n
    seed_loss = losses[:n].sum() / n
    for t in range(n, len(x)):
        k = t - n
        tail_g = gains[n : t]
        tail_l = losses[n : t]
        weights = beta ** np.arange(len(tail_g) - 1, -1, -1)
        avg_gain = beta**k * seed_gain + (weights * tail_g).sum() / n
        avg_loss = beta**k * seed_loss + (weights * tail_l).sum() / n
        if avg_loss == 0.0:
            out[t] = 100.0
        elif avg_gain == 0.0:
            out[t] = 0.0
        else:
            out[t] = 100.0 - 100.0 / (1.0 + avg_gain / avg_loss)
    return out


def macd_oracle(closes, fast=12, slow=26, signal=9):
    x = np.asarray(closes, dtype=np.float64)
    line = ema_oracle(x, fast) - ema_oracle(x, slow)
    sig = np.full(len(x), np.nan)
    hist = np.full(len(x), np.nan)
    defined = ~np.isnan(line)
    if defined.sum() >= signal:
        start = int(np.argmax(defined))
        compact_sig = ema_oracle(line[start:], signal)
        sig[start:] = compact_sig
        hist = line - sig
    return line, sig, hist


def confusion_oracle(predictions, labels):
    tp = fp = fn = tn = 0
    for p, l in zip(predictions, labels):
        if p == 1 and l == 1:
            tp += 1
        elif p == 1 and l == 0:
            fp += 1
        elif p == 0 and l == 1:
            fn += 1
        else:
            tn += 1
    total = tp + fp + fn + tn
    accuracy = (tp + tn) / total
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return accuracy, precision, recall, f1


def balanced_acc_oracle(predictions, labels):
    hits1 = [p for p, l in zip(predictions, labels) if l == 1]
    hits0 = [p for p, l in zip(predictions, labels) if l == 0]
    r1 = sum(1 for p in hits1 if p == 1) / len(hits1)
    r0 = sum(1 for p in hits0 if p == 0) / len(hits0)
    return (r1 + r0) / 2.0


def auc_oracle(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def compound_oracle(daily_returns_pct):
    value = 1.0
    for r in daily_returns_pct:
        value *= 1.0 + r / 100.0
    return (value - 1.0) * 100.0
