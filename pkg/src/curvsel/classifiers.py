"""Small from-scratch classifiers used to score selected feature sets.

Defaults: kNN with k=3, Gini decision tree of depth at most 5, and
one-vs-rest L1 logistic regression fitted by proximal gradient descent.
Other classifiers can be registered with :func:`register_classifier`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from curvsel._backend import kernels
from curvsel.errors import ConfigError, TrainingError

GNB_VAR_FLOOR = 1e-9
BUILTIN = ("gnb", "knn", "dt", "lr")


@dataclass(frozen=True)
class ClassifierKind:
    tag: str
    k_neighbors: int = 3
    dt_max_depth: int = 5
    dt_criterion: str = "gini"
    lr_penalty: str = "l1"
    lr_strength: float = 1.0
    lr_max_iters: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tag", self.tag.strip().lower())
        if self.tag not in _REGISTRY:
            raise ConfigError(
                f"unknown classifier {self.tag!r}; valid names: {', '.join(_REGISTRY)}"
            )
        for name in ("k_neighbors", "dt_max_depth", "lr_max_iters"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.lr_strength <= 0:
            raise ConfigError("lr_strength must be positive")
        if self.dt_criterion != "gini":
            raise ConfigError("only the 'gini' criterion is implemented")
        if self.lr_penalty != "l1":
            raise ConfigError("only the 'l1' penalty is implemented")

    @classmethod
    def parse(cls, name: str, **kw) -> "ClassifierKind":
        return cls(name, **kw)

    @property
    def name(self) -> str:
        return self.tag


@dataclass(frozen=True)
class TrainedModel:
    kind: ClassifierKind
    parameters: Any
    n_features: int
    n_classes: int
    trace: tuple = field(default=(), repr=False)


# -- Gaussian naive Bayes ----------------------------------------------------


def _fit_gnb(kind, X, y, n_classes):
    means = np.stack([X[y == c].mean(axis=0) for c in range(n_classes)])
    var = np.stack([X[y == c].var(axis=0) for c in range(n_classes)])
    var = np.maximum(var, GNB_VAR_FLOOR)
    priors = np.bincount(y, minlength=n_classes) / y.size
    return {"means": means, "var": var, "log_prior": np.log(priors)}, ()


def gnb_log_posterior(params, X) -> np.ndarray:
    """Unnormalised log posterior, shape ``(m, n_classes)``."""
    means, var = params["means"], params["var"]
    diff = X[:, None, :] - means[None, :, :]
    ll = -0.5 * (np.log(2.0 * np.pi * var)[None] + diff * diff / var[None]).sum(axis=2)
    return ll + params["log_prior"][None, :]


def _predict_gnb(model, X):
    return np.argmax(gnb_log_posterior(model.parameters, X), axis=1)


# -- k nearest neighbours ------------------------------------------------------


def _fit_knn(kind, X, y, n_classes):
    return {"X": X.copy(), "y": y.copy()}, ()


def _predict_knn(model, X):
    Xt, yt = model.parameters["X"], model.parameters["y"]
    k = min(model.kind.k_neighbors, Xt.shape[0])
    out = np.empty(X.shape[0], dtype=np.int64)
    for i, row in enumerate(X):
        diff = Xt - row
        d2 = np.einsum("ij,ij->i", diff, diff)
        # equal distances are resolved by label so the neighbour multiset
        # does not depend on training-row order
        nn = np.lexsort((yt, d2))[:k]
        votes = np.bincount(yt[nn], minlength=model.n_classes)
        out[i] = int(np.argmax(votes))
    return out


# -- decision tree -------------------------------------------------------------


def _majority(y, n_classes) -> int:
    return int(np.argmax(np.bincount(y, minlength=n_classes)))


def _grow(X, y, n_classes, depth, max_depth):
    label = _majority(y, n_classes)
    counts = np.bincount(y, minlength=n_classes)
    node = {"leaf": True, "label": label, "n": int(y.size), "counts": counts}
    if depth >= max_depth or np.count_nonzero(counts) <= 1:
        return node
    order = np.argsort(X, axis=0, kind="stable")
    f, t, score = kernels.best_gini_split(X, y, n_classes, order)
    parent = float((counts.astype(np.float64) ** 2).sum()) / y.size
    if f < 0 or not score > parent + 1e-12:
        return node
    go_left = X[:, f] <= t
    return {
        "leaf": False,
        "feature": int(f),
        "threshold": float(t),
        "label": label,
        "n": int(y.size),
        "counts": counts,
        "left": _grow(X[go_left], y[go_left], n_classes, depth + 1, max_depth),
        "right": _grow(X[~go_left], y[~go_left], n_classes, depth + 1, max_depth),
    }


def tree_depth(node) -> int:
    if node["leaf"]:
        return 0
    return 1 + max(tree_depth(node["left"]), tree_depth(node["right"]))


def tree_leaves(node):
    if node["leaf"]:
        yield node
    else:
        yield from tree_leaves(node["left"])
        yield from tree_leaves(node["right"])


def _fit_dt(kind, X, y, n_classes):
    return _grow(X, y, n_classes, 0, kind.dt_max_depth), ()


def _predict_dt(model, X):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i, row in enumerate(X):
        node = model.parameters
        while not node["leaf"]:
            node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
        out[i] = node["label"]
    return out


# -- L1 logistic regression ----------------------------------------------------


def _log_loss_sums(Z, T) -> np.ndarray:
    # per-column sum of log(1 + exp(z)) - t*z, stable for large |z|
    return (np.logaddexp(0.0, Z) - T * Z).sum(axis=0)


def _l1_logistic(Xb, T, strength, max_iters, tol=1e-9):
    """Minimise ``sum log-loss + strength * ||w||_1`` (intercept unpenalised)
    for each column of the 0/1 target matrix ``T`` at once.

    Monotone FISTA with fixed step ``1/L``, ``L = ||Xb||_2**2 / 4``: the
    accelerated proximal step is kept only when it does not raise the
    objective, so each logged trace is non-increasing. The problems share
    ``L`` and the momentum schedule; a column stops once an accepted step
    lowers its objective by less than ``tol`` (relative).
    """
    lipschitz = max(np.linalg.norm(Xb, 2) ** 2 / 4.0, 1e-12)
    step = 1.0 / lipschitz
    n_out = T.shape[1]
    thresh = np.full((Xb.shape[1], 1), step * strength)
    thresh[-1] = 0.0

    def objective(Z, W, T):
        return _log_loss_sums(Z, T) + strength * np.abs(W[:-1]).sum(axis=0)

    W = np.zeros((Xb.shape[1], n_out))
    Z = np.zeros((Xb.shape[0], n_out))
    Wy, Zy = W.copy(), Z.copy()  # extrapolated point and its scores
    F = objective(Z, W, T)
    traces = [[float(v)] for v in F]
    active = np.arange(n_out)
    t = 1.0
    for _ in range(max_iters):
        Ta = T[:, active]
        V = Wy[:, active] - step * (Xb.T @ (0.5 * (1.0 + np.tanh(0.5 * Zy[:, active])) - Ta))
        Wp = np.sign(V) * np.maximum(np.abs(V) - thresh, 0.0)
        Zp = Xb @ Wp
        Fp = objective(Zp, Wp, Ta)
        take = Fp <= F[active]
        W_old, Z_old = W[:, active], Z[:, active]
        W_new = np.where(take, Wp, W_old)
        Z_new = np.where(take, Zp, Z_old)
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        a, b = t / t_next, (t - 1.0) / t_next
        Wy[:, active] = W_new + a * (Wp - W_new) + b * (W_new - W_old)
        Zy[:, active] = Z_new + a * (Zp - Z_new) + b * (Z_new - Z_old)
        W[:, active], Z[:, active] = W_new, Z_new
        t = t_next
        still = []
        for j, c in enumerate(active):
            if take[j]:
                done = F[c] - Fp[j] <= tol * max(1.0, abs(F[c]))
                F[c] = Fp[j]
            else:
                done = False
            traces[c].append(float(F[c]))
            if not done:
                still.append(c)
        if not still:
            break
        active = np.array(still)
    return W.T, traces


def _fit_lr(kind, X, y, n_classes):
    Xb = np.hstack([X, np.ones((X.shape[0], 1))])
    targets = [1] if n_classes == 2 else range(n_classes)
    T = np.column_stack([(y == c).astype(np.float64) for c in targets])
    weights, traces = _l1_logistic(Xb, T, kind.lr_strength, kind.lr_max_iters)
    return weights, tuple(tuple(t) for t in traces)


def lr_decision(model, X) -> np.ndarray:
    Xb = np.hstack([X, np.ones((X.shape[0], 1))])
    return Xb @ model.parameters.T


def _predict_lr(model, X):
    scores = lr_decision(model, X)
    if model.n_classes == 2:
        return (scores[:, 0] > 0).astype(np.int64)
    return np.argmax(scores, axis=1)


# -- registry -------------------------------------------------------------------

FitFn = Callable[[ClassifierKind, np.ndarray, np.ndarray, int], tuple]
PredictFn = Callable[[TrainedModel, np.ndarray], np.ndarray]

_REGISTRY: dict[str, tuple[FitFn, PredictFn]] = {
    "gnb": (_fit_gnb, _predict_gnb),
    "knn": (_fit_knn, _predict_knn),
    "dt": (_fit_dt, _predict_dt),
    "lr": (_fit_lr, _predict_lr),
}


def register_classifier(name: str, fit_fn: FitFn, predict_fn: PredictFn) -> None:
    """Add an external classifier.

    ``fit_fn(kind, X, y, n_classes)`` returns ``(parameters, trace)`` and
    ``predict_fn(model, X)`` returns integer class ids.
    """
    name = name.strip().lower()
    if name in BUILTIN:
        raise ConfigError(f"cannot replace built-in classifier {name!r}")
    _REGISTRY[name] = (fit_fn, predict_fn)


def unregister_classifier(name: str) -> None:
    if name in BUILTIN:
        raise ConfigError(f"cannot remove built-in classifier {name!r}")
    _REGISTRY.pop(name, None)


def available_classifiers() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def fit(kind: ClassifierKind, X, y, n_classes: int | None = None) -> TrainedModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ConfigError(f"shape mismatch: X {X.shape}, y {y.shape}")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    present = np.bincount(y, minlength=n_classes)
    if y.min() < 0 or y.max() >= n_classes:
        raise TrainingError(f"labels must lie in [0, {n_classes})")
    if np.any(present == 0):
        missing = [int(c) for c in np.flatnonzero(present == 0)]
        raise TrainingError(f"class(es) {missing} absent from the training data")
    fit_fn, _ = _REGISTRY[kind.tag]
    params, trace = fit_fn(kind, X, y, n_classes)
    return TrainedModel(kind, params, X.shape[1], n_classes, trace)


def predict(model: TrainedModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ConfigError(f"model expects {model.n_features} features, got shape {X.shape}")
    _, predict_fn = _REGISTRY[model.kind.tag]
    return np.asarray(predict_fn(model, X), dtype=np.int64)
