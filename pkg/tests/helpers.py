"""Shared builders for the test suite."""

import datetime as dt

import numpy as np

from pairselect.data import OhlcvBar, build_series


def make_bars(closes, start=dt.date(2020, 1, 1), opens=None):
    """Bars whose closes follow the given sequence; opens continue closes."""
    bars = []
    prev_close = float(closes[0])
    day = start
    for i, close in enumerate(closes):
        close = float(close)
        open_ = prev_close if opens is None else float(opens[i])
        hi = max(open_, close) * 1.001
        lo = min(open_, close) * 0.999
        bars.append(OhlcvBar(day, open_, hi, lo, close, close, 100))
        day += dt.timedelta(days=1)
        prev_close = close
    return bars


def make_series(closes, symbol="TEST", **kwargs):
    return build_series(symbol, make_bars(closes, **kwargs))


def random_walk_closes(rng, n, start=100.0, vol=0.01):
    steps = 1.0 + rng.standard_normal(n) * vol
    closes = start * np.cumprod(steps)
    return np.maximum(closes, 1e-3)


def make_separable_2d(rng, n_per_class=200, gap=0.3, spread=2.0):
    """Two uniform squares separated by a margin along both axes."""
    X0 = rng.uniform(-spread, -gap, size=(n_per_class, 2))
    X1 = rng.uniform(gap, spread, size=(n_per_class, 2))
    X = np.vstack([X0, X1])
    y = np.array([0] * n_per_class + [1] * n_per_class)
    perm = rng.permutation(len(y))
    return X[perm], y[perm]
