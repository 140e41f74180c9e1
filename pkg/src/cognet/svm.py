"""Linear SVM trained on the primal hinge objective, plus grid-search CV.

The objective is ||w||^2 / 2 + C * mean(hinge); using the mean rather
than the sum keeps the fit invariant under duplicating every row (the sum
form is recovered by rescaling C).  Optimization is deterministic
full-batch subgradient descent with a 1/t step, returning the best
iterate seen, so recorded objectives never increase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SingleClass(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class TooFewSamples(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    mean: np.ndarray  # per-feature scaler, applied before the dot product
    std: np.ndarray
    C: float
    objective_history: tuple[float, ...] = ()


def _standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return mean, std


def _objective(Z: np.ndarray, ys: np.ndarray, w: np.ndarray, b: float, C: float) -> float:
    margins = ys * (Z @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * float(w @ w) + C * float(hinge.mean())


def fit(X, y, C: float = 1.0, seed: int = 0, passes: int = 2000) -> LinearModel:
    """Fit the linear classifier; deterministic for fixed inputs.

    ``seed`` is accepted for interface consistency; the full-batch solver
    has no stochastic component.
    """
    del seed
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DimensionMismatch(f"X must be a nonempty 2-D matrix, got shape {X.shape}")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"y shape {y.shape} does not match {X.shape[0]} rows")
    if np.isnan(X).any():
        raise ValueError("X contains NaN")
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels are constant")

    mean, std = _standardize(X)
    Z = (X - mean) / std
    ys = np.where(y == 1, 1.0, -1.0)
    n = Z.shape[0]

    w = np.zeros(Z.shape[1])
    b = 0.0
    best_obj = _objective(Z, ys, w, b, C)
    best_w, best_b = w.copy(), b
    history = [best_obj]
    checkpoint = max(1, passes // 40)
    for t in range(1, passes + 1):
        margins = ys * (Z @ w + b)
        active = margins < 1.0
        grad_w = w - (C / n) * (ys[active] @ Z[active])
        grad_b = -(C / n) * float(ys[active].sum())
        eta = 1.0 / t
        w = w - eta * grad_w
        b = b - eta * grad_b
        obj = _objective(Z, ys, w, b, C)
        if obj < best_obj:
            best_obj = obj
            best_w, best_b = w.copy(), b
        if t % checkpoint == 0:
            history.append(best_obj)
    return LinearModel(
        weights=best_w,
        bias=best_b,
        mean=mean,
        std=std,
        C=C,
        objective_history=tuple(history),
    )


def decision_function(model: LinearModel, X) -> np.ndarray | float:
    """w . scale(x) + b; accepts a single vector or a matrix of rows."""
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.weights.shape[0]:
        raise DimensionMismatch(
            f"expected {model.weights.shape[0]} features, got {X.shape[1]}"
        )
    values = ((X - model.mean) / model.std) @ model.weights + model.bias
    return float(values[0]) if single else values


def predict(model: LinearModel, X) -> np.ndarray | int:
    """1 iff the decision function is >= 0."""
    values = decision_function(model, X)
    if np.isscalar(values):
        return int(values >= 0.0)
    return (values >= 0.0).astype(np.int64)


@dataclass(frozen=True)
class GridSearchResult:
    best_C: float
    cv_scores: dict[float, float]
    folds: int


def _stratified_folds(y: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Assign each sample a fold id, dealing each class out round-robin."""
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=np.int64)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        rng.shuffle(idx)
        assignment[idx] = np.arange(len(idx)) % folds
    return assignment


def grid_search_cv(X, y, C_grid=(0.01, 0.1, 1.0, 10.0, 100.0), folds: int = 10,
                   seed: int = 0, passes: int = 2000) -> GridSearchResult:
    """Pick C by mean validation accuracy over stratified folds.

    Ties go to the smallest C.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] < folds:
        raise TooFewSamples(f"{X.shape[0]} samples cannot fill {folds} folds")
    counts = np.bincount(y, minlength=2)
    if counts.min() < 2:
        raise TooFewSamples("each class needs at least 2 samples for stratified folding")
    assignment = _stratified_folds(y, folds, seed)
    cv_scores: dict[float, float] = {}
    for C in C_grid:
        accs = []
        for k in range(folds):
            val = assignment == k
            if not val.any():
                continue
            model = fit(X[~val], y[~val], C=C, passes=passes)
            accs.append(float(np.mean(predict(model, X[val]) == y[val])))
        cv_scores[float(C)] = float(np.mean(accs))
    best_score = max(cv_scores.values())
    best_C = min(c for c, v in cv_scores.items() if v == best_score)
    return GridSearchResult(best_C=best_C, cv_scores=cv_scores, folds=folds)


def save_model(model: LinearModel, path) -> None:
    """Plain-text serialization; floats use repr and round-trip exactly."""
    lines = [
        f"dim\t{model.weights.shape[0]}",
        f"C\t{float(model.C)!r}",
        "mean\t" + "\t".join(repr(float(v)) for v in model.mean),
        "std\t" + "\t".join(repr(float(v)) for v in model.std),
        "weights\t" + "\t".join(repr(float(v)) for v in model.weights),
        f"bias\t{float(model.bias)!r}",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> LinearModel:
    fields: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            fields[parts[0]] = parts[1:]
    dim = int(fields["dim"][0])
    model = LinearModel(
        weights=np.array([float(v) for v in fields["weights"]]),
        bias=float(fields["bias"][0]),
        mean=np.array([float(v) for v in fields["mean"]]),
        std=np.array([float(v) for v in fields["std"]]),
        C=float(fields["C"][0]),
    )
    if model.weights.shape[0] != dim:
        raise ValueError(f"{path}: weight count does not match declared dim {dim}")
    return model
