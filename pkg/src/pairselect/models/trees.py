"""CART trees and the ensembles built on them.

One grower serves both impurity criteria: Gini on binary labels for the
classification tree and forest, variance for the boosting stage's
regression trees.  Splits are exact (every midpoint between distinct
sorted values is a candidate); ties break toward the lower feature index
and then the lower threshold, which keeps training deterministic.
"""

from __future__ import annotations

import numpy as np

from .base import Classifier, as_matrix, check_query, sigmoid

_EPS_IMPROVEMENT = 1e-12


class _Tree:
    """Flat-array binary tree; leaves carry the mean target of their node."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def add_node(self, value: float) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.value) - 1

    def freeze(self) -> None:
        self.feature = np.asarray(self.feature, dtype=np.int64)
        self.threshold = np.asarray(self.threshold, dtype=np.float64)
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.value = np.asarray(self.value, dtype=np.float64)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf id reached by every row."""
        out = np.zeros(len(X), dtype=np.int64)
        frontier = [(0, np.arange(len(X)))]
        while frontier:
            node, idx = frontier.pop()
            if self.feature[node] < 0:
                out[idx] = node
                continue
            go_left = X[idx, self.feature[node]] <= self.threshold[node]
            frontier.append((self.left[node], idx[go_left]))
            frontier.append((self.right[node], idx[~go_left]))
        return out

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]


def _node_score(total_sum: float, total_sq: float, m: int, criterion: str) -> float:
    if criterion == "gini":
        # weighted gini: m * 2p(1-p) with s ones among m
        return 2.0 * total_sum * (m - total_sum) / m
    return total_sq - total_sum * total_sum / m  # sse


def _best_split(X, t, idx, features, min_samples_leaf, criterion):
    """Best (score, feature, threshold) over candidate cuts, or None."""
    m = len(idx)
    best = None
    tt = t[idx]
    tsq = tt * tt
    for f in features:
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xo = xs[order]
        to = tt[order]
        so = tsq[order]
        csum = np.cumsum(to)
        csq = np.cumsum(so)
        pos = np.arange(1, m)  # left part takes pos elements
        valid = xo[:-1] < xo[1:]
        valid &= (pos >= min_samples_leaf) & (m - pos >= min_samples_leaf)
        if not valid.any():
            continue
        ml = pos.astype(np.float64)
        mr = m - ml
        sl = csum[:-1]
        sr = csum[-1] - sl
        if criterion == "gini":
            score = 2.0 * (sl * (ml - sl) / ml + sr * (mr - sr) / mr)
        else:
            sql = csq[:-1]
            sqr = csq[-1] - sql
            score = (sql - sl * sl / ml) + (sqr - sr * sr / mr)
        score = np.where(valid, score, np.inf)
        j = int(np.argmin(score))  # first minimum -> lowest threshold wins ties
        if best is None or score[j] < best[0]:
            best = (float(score[j]), int(f), float((xo[j] + xo[j + 1]) / 2.0))
    return best


def grow_tree(
    X: np.ndarray,
    target: np.ndarray,
    criterion: str,
    max_depth: int,
    min_samples_split: int,
    min_samples_leaf: int,
    max_features: int | None = None,
    rng: np.random.Generator | None = None,
) -> _Tree:
    """Grow one CART tree on ``target`` (binary labels or real residuals)."""
    t = np.asarray(target, dtype=np.float64)
    d = X.shape[1]
    tree = _Tree()

    def build(idx: np.ndarray, depth: int) -> int:
        m = len(idx)
        ssum = float(t[idx].sum())
        node = tree.add_node(ssum / m)
        sq = float((t[idx] * t[idx]).sum())
        parent_score = _node_score(ssum, sq, m, criterion)
        if depth >= max_depth or m < min_samples_split or parent_score <= _EPS_IMPROVEMENT:
            return node
        if max_features is not None and max_features < d:
            features = np.sort(rng.choice(d, size=max_features, replace=False))
        else:
            features = np.arange(d)
        best = _best_split(X, t, idx, features, min_samples_leaf, criterion)
        if best is None or best[0] >= parent_score - _EPS_IMPROVEMENT:
            return node
        _, f, thr = best
        go_left = X[idx, f] <= thr
        tree.feature[node] = f
        tree.threshold[node] = thr
        tree.left[node] = build(idx[go_left], depth + 1)
        tree.right[node] = build(idx[~go_left], depth + 1)
        return node

    build(np.arange(len(X)), 0)
    tree.freeze()
    return tree


class DecisionTreeModel(Classifier):
    """CART classification tree; the score is the leaf's class-1 fraction."""

    kind = "decision_tree"

    def __init__(self, max_depth: int = 12, min_samples_split: int = 6, min_samples_leaf: int = 4):
        self.max_depth = int(max_depth)
        self.min_samples_split = int(min_samples_split)
        self.min_samples_leaf = int(min_samples_leaf)

    def _fit(self, X, y, rng) -> None:
        self._tree = grow_tree(
            X,
            y,
            criterion="gini",
            max_depth=self.max_depth,
            min_samples_split=self.min_samples_split,
            min_samples_leaf=self.min_samples_leaf,
        )

    def score_samples(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_query(X)
        return self._tree.predict_value(X)


class RandomForestModel(Classifier):
    """Bootstrap ensemble of Gini trees with per-split feature subsampling.

    Each tree sees a bootstrap resample and draws ``sqrt(d)`` candidate
    features at every split; the score is the fraction of trees voting
    class 1.
    """

    kind = "random_forest"

    def __init__(
        self,
        n_estimators: int = 500,
        max_depth: int = 10,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
    ):
        self.n_estimators = int(n_estimators)
        self.max_depth = int(max_depth)
        self.min_samples_split = int(min_samples_split)
        self.min_samples_leaf = int(min_samples_leaf)

    def _fit(self, X, y, rng) -> None:
        n, d = X.shape
        mtry = max(1, int(np.sqrt(d)))
        self._trees = []
        for seq in np.random.SeedSequence(rng.integers(2**63)).spawn(self.n_estimators):
            tree_rng = np.random.default_rng(seq)
            boot = tree_rng.integers(0, n, size=n)
            tree = grow_tree(
                X[boot],
                y[boot],
                criterion="gini",
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                min_samples_leaf=self.min_samples_leaf,
                max_features=mtry,
                rng=tree_rng,
            )
            self._trees.append(tree)

    def tree_votes(self, X: np.ndarray) -> np.ndarray:
        """(n_trees, n_samples) matrix of individual tree votes."""
        return np.stack([(t.predict_value(X) >= 0.5).astype(np.int64) for t in self._trees])

    def score_samples(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_query(X)
        return self.tree_votes(X).mean(axis=0)


class GradientBoostingModel(Classifier):
    """Additive regression trees on logistic-loss gradients.

    Starts from the prior log-odds; each round fits a variance-split tree
    to the residual ``y - p`` and replaces leaf values with the Newton
    step ``sum(residual) / sum(p (1-p))``.  The score is the sigmoid of
    the boosted margin.
    """

    kind = "gradient_boosting"

    def __init__(
        self,
        n_estimators: int = 100,
        learning_rate: float = 0.01,
        max_depth: int = 12,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
    ):
        self.n_estimators = int(n_estimators)
        self.learning_rate = float(learning_rate)
        self.max_depth = int(max_depth)
        self.min_samples_split = int(min_samples_split)
        self.min_samples_leaf = int(min_samples_leaf)

    def _fit(self, X, y, rng) -> None:
        p_prior = min(max(float(y.mean()), 1e-12), 1.0 - 1e-12)
        self.base_margin_ = float(np.log(p_prior / (1.0 - p_prior)))
        margin = np.full(len(y), self.base_margin_)
        self._trees = []
        for _ in range(self.n_estimators):
            p = sigmoid(margin)
            residual = y - p
            hessian = p * (1.0 - p)
            tree = grow_tree(
                X,
                residual,
                criterion="sse",
                max_depth=self.max_depth,
                min_samples_split=self.min_samples_split,
                min_samples_leaf=self.min_samples_leaf,
            )
            leaves = tree.apply(X)
            # Newton step per leaf on the logistic loss
            for leaf in np.unique(leaves):
                members = leaves == leaf
                tree.value[leaf] = residual[members].sum() / (hessian[members].sum() + 1e-12)
            margin = margin + self.learning_rate * tree.value[leaves]
            self._trees.append(tree)

    def decision_margin(self, X: np.ndarray) -> np.ndarray:
        margin = np.full(len(X), self.base_margin_)
        for tree in self._trees:
            margin = margin + self.learning_rate * tree.predict_value(X)
        return margin

    def score_samples(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_query(X)
        return sigmoid(self.decision_margin(X))
