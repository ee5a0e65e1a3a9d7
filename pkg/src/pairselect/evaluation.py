"""Per-pair scoring: predictive metrics, backtest return, and baseline.

The backtest goes long on a 1-prediction and (by default) short on a 0,
full notional, open-to-close only, zero costs; daily strategy returns
compound geometrically.  ``nnp`` is the always-long baseline over the
same window, so an all-1 predictor reproduces it exactly.
"""

from __future__ import annotations

import datetime as dt
import io
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError
from .features import LabeledDataset

CSV_COLUMNS = (
    "dataset",
    "model",
    "accuracy",
    "normalized_acc",
    "precision",
    "recall",
    "f1",
    "auc",
    "pred_pos_rate",
    "backtest_return_pct",
    "nnp_pct",
    "profit_label",
)


@dataclass(frozen=True)
class MetricSet:
    accuracy: float
    normalized_acc: float
    precision: float
    recall: float
    f1: float
    auc: float
    pred_pos_rate: float
    backtest_return_pct: float
    nnp_pct: float


@dataclass(frozen=True)
class EvaluationRecord:
    """One (instrument, model) pair's metric vector for one window."""

    run_id: str
    instrument: str
    model: str
    window_start: dt.date
    window_end: dt.date
    metrics: MetricSet
    profit_label: int


@dataclass(frozen=True)
class PairEvaluation:
    """An evaluation record together with its retained equity curves."""

    record: EvaluationRecord
    dates: tuple[dt.date, ...]
    strategy_cum_pct: np.ndarray
    normal_cum_pct: np.ndarray
    predictions: np.ndarray


def _as_int_arrays(predictions, labels) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(predictions, dtype=np.int64)
    l = np.asarray(labels, dtype=np.int64)
    if p.shape != l.shape:
        raise EvaluationError(f"length mismatch: {p.shape} vs {l.shape}")
    if len(p) == 0:
        raise EvaluationError("empty window")
    return p, l


def confusion_metrics(predictions, labels) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, f1) with class 1 positive; 0/0 -> 0."""
    p, l = _as_int_arrays(predictions, labels)
    tp = float(((p == 1) & (l == 1)).sum())
    fp = float(((p == 1) & (l == 0)).sum())
    fn = float(((p == 0) & (l == 1)).sum())
    accuracy = float((p == l).mean())
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return accuracy, precision, recall, f1


def normalized_acc(predictions, labels) -> float:
    """Balanced accuracy: mean of the two per-class recalls.

    A constant predictor lands on 0.5 no matter how skewed the labels
    are, which is the robustness the plain count ratio lacks.
    """
    p, l = _as_int_arrays(predictions, labels)
    if len(np.unique(l)) < 2:
        raise EvaluationError("normalized accuracy needs both classes in the labels")
    recall_1 = float((p[l == 1] == 1).mean())
    recall_0 = float((p[l == 0] == 0).mean())
    return (recall_1 + recall_0) / 2.0


def pred_pos_rate(predictions) -> float:
    """Share of 1-predictions: the literal count ratio, kept as a diagnostic."""
    p = np.asarray(predictions, dtype=np.int64)
    if len(p) == 0:
        raise EvaluationError("empty window")
    return float((p == 1).mean())


def auc(scores, labels) -> float:
    """Mann-Whitney AUC; ties count one half."""
    s = np.asarray(scores, dtype=np.float64)
    l = np.asarray(labels, dtype=np.int64)
    if s.shape != l.shape:
        raise EvaluationError(f"length mismatch: {s.shape} vs {l.shape}")
    n_pos = int((l == 1).sum())
    n_neg = int((l == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise EvaluationError("auc needs both classes in the labels")

    order = np.argsort(s, kind="stable")
    ranks = np.empty(len(s), dtype=np.float64)
    sorted_scores = s[order]
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0  # average rank, 1-based
        i = j + 1
    rank_sum_pos = float(ranks[l == 1].sum())
    u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def strategy_returns(predictions, realized_returns_pct, short_on_down: bool = True) -> np.ndarray:
    """Per-day strategy returns: +r on a 1, -r (or 0 when not shorting) on a 0."""
    p = np.asarray(predictions, dtype=np.int64)
    r = np.asarray(realized_returns_pct, dtype=np.float64)
    if p.shape != r.shape:
        raise EvaluationError(f"length mismatch: {p.shape} vs {r.shape}")
    if np.any(np.abs(r) >= 100.0):
        worst = float(np.max(np.abs(r)))
        raise EvaluationError(f"daily return of {worst}% breaks the data contract (|r| < 100)")
    if short_on_down:
        return np.where(p == 1, r, -r)
    return np.where(p == 1, r, 0.0)


def compound_pct(daily_returns_pct) -> float:
    r = np.asarray(daily_returns_pct, dtype=np.float64)
    if len(r) == 0:
        raise EvaluationError("empty window")
    return float((np.prod(1.0 + r / 100.0) - 1.0) * 100.0)


def equity_curve_pct(daily_returns_pct) -> np.ndarray:
    """Cumulative compounded return after each day, in percent."""
    r = np.asarray(daily_returns_pct, dtype=np.float64)
    return (np.cumprod(1.0 + r / 100.0) - 1.0) * 100.0


def backtest(predictions, realized_returns_pct, short_on_down: bool = True) -> float:
    """Compounded strategy return over the window, in percent."""
    return compound_pct(strategy_returns(predictions, realized_returns_pct, short_on_down))


def nnp(realized_returns_pct) -> float:
    """Buy-and-hold (always long) compounded return over the same window."""
    r = np.asarray(realized_returns_pct, dtype=np.float64)
    if np.any(np.abs(r) >= 100.0):
        worst = float(np.max(np.abs(r)))
        raise EvaluationError(f"daily return of {worst}% breaks the data contract (|r| < 100)")
    return compound_pct(r)


def evaluate_pair(
    model,
    window: LabeledDataset,
    run_id: str,
    short_on_down: bool = True,
) -> PairEvaluation:
    """Score one trained pair on one chronological window.

    Raises :class:`EvaluationError` when the window's labels are a single
    class; the caller records the pair as failed rather than crashing.
    """
    if len(window) == 0:
        raise EvaluationError("empty window")
    if len(np.unique(window.y)) < 2:
        raise EvaluationError("degenerate window: labels are a single class")

    scores = model.score_samples(window.X)
    predictions = (scores >= 0.5).astype(np.int64)

    accuracy, precision, recall, f1 = confusion_metrics(predictions, window.y)
    balanced = normalized_acc(predictions, window.y)
    area = auc(scores, window.y)
    daily = strategy_returns(predictions, window.returns, short_on_down)
    strat_pct = compound_pct(daily)
    base_pct = nnp(window.returns)

    metrics = MetricSet(
        accuracy=accuracy,
        normalized_acc=balanced,
        precision=precision,
        recall=recall,
        f1=f1,
        auc=area,
        pred_pos_rate=pred_pos_rate(predictions),
        backtest_return_pct=strat_pct,
        nnp_pct=base_pct,
    )
    record = EvaluationRecord(
        run_id=run_id,
        instrument=window.symbol,
        model=model.spec.canonical_id if hasattr(model, "spec") else model.kind,
        window_start=window.dates[0],
        window_end=window.dates[-1],
        metrics=metrics,
        profit_label=1 if strat_pct > 0.0 else 0,
    )
    return PairEvaluation(
        record=record,
        dates=window.dates,
        strategy_cum_pct=equity_curve_pct(daily),
        normal_cum_pct=equity_curve_pct(window.returns),
        predictions=predictions,
    )


def record_row(record: EvaluationRecord) -> list[str]:
    m = record.metrics
    return [
        record.instrument,
        record.model,
        repr(m.accuracy),
        repr(m.normalized_acc),
        repr(m.precision),
        repr(m.recall),
        repr(m.f1),
        repr(m.auc),
        repr(m.pred_pos_rate),
        repr(m.backtest_return_pct),
        repr(m.nnp_pct),
        str(record.profit_label),
    ]


def records_to_csv(records) -> str:
    """Evaluation records in the reporting column order, one per line."""
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for record in records:
        out.write(",".join(record_row(record)) + "\n")
    return out.getvalue()
