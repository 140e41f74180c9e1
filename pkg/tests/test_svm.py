import numpy as np
import pytest

from cognet import svm


def _separable(n=40, d=3, seed=0, gap=2.0):
    rng = np.random.default_rng(seed)
    X0 = rng.normal(size=(n // 2, d)) - gap
    X1 = rng.normal(size=(n // 2, d)) + gap
    X = np.vstack([X0, X1])
    y = np.array([0] * (n // 2) + [1] * (n // 2))
    return X, y


def test_two_point_separable():
    X = np.array([[0.0], [1.0]])
    y = np.array([0, 1])
    model = svm.fit(X, y, C=1.0)
    assert np.array_equal(svm.predict(model, X), y)


def test_separable_reaches_full_accuracy():
    X, y = _separable()
    model = svm.fit(X, y, C=1.0)
    assert np.mean(svm.predict(model, X) == y) == 1.0


def test_xor_cannot_exceed_three_quarters():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = np.array([0, 0, 1, 1])
    model = svm.fit(X, y, C=10.0)
    assert np.mean(svm.predict(model, X) == y) <= 0.75


def test_duplicated_rows_leave_predictions_unchanged():
    X, y = _separable(n=30, seed=3)
    model = svm.fit(X, y, C=1.0)
    model_dup = svm.fit(np.vstack([X, X]), np.concatenate([y, y]), C=1.0)
    probe = np.vstack([X, _separable(n=20, seed=4)[0]])
    assert np.array_equal(svm.predict(model, probe), svm.predict(model_dup, probe))
    assert np.allclose(svm.decision_function(model, probe),
                       svm.decision_function(model_dup, probe), atol=1e-9)


def test_fit_errors():
    with pytest.raises(svm.SingleClass):
        svm.fit(np.ones((4, 2)), np.array([1, 1, 1, 1]), C=1.0)
    with pytest.raises(svm.DimensionMismatch):
        svm.fit(np.ones((4, 2)), np.array([0, 1]), C=1.0)
    with pytest.raises(ValueError):
        svm.fit(np.array([[np.nan], [1.0]]), np.array([0, 1]), C=1.0)


def test_standardization_of_training_features():
    X, y = _separable(n=30, seed=5)
    X[:, 1] *= 100.0
    X[:, 2] = 7.0  # zero variance
    model = svm.fit(X, y, C=1.0)
    Z = (X - model.mean) / model.std
    assert np.all(np.abs(Z.mean(axis=0))[:2] < 1e-9)
    assert np.all(np.abs(Z.std(axis=0)[:2] - 1.0) < 1e-9)
    assert model.std[2] == 1.0  # zero-variance convention


def test_zero_variance_feature_is_inert():
    X, y = _separable(n=30, seed=6)
    X[:, 2] = 7.0
    model = svm.fit(X, y, C=1.0)
    probe = X[:5].copy()
    moved = probe.copy()
    moved[:, 2] = 7.0  # unchanged: constant features stay at their fit value
    assert np.array_equal(svm.predict(model, probe), svm.predict(model, moved))


def test_determinism_bit_identical():
    X, y = _separable(n=50, seed=7)
    m1 = svm.fit(X, y, C=10.0, seed=42)
    m2 = svm.fit(X, y, C=10.0, seed=42)
    assert np.array_equal(m1.weights, m2.weights)
    assert m1.bias == m2.bias


def test_objective_history_is_monotone_and_bounded():
    X, y = _separable(n=50, seed=8, gap=0.5)
    model = svm.fit(X, y, C=5.0)
    hist = model.objective_history
    assert all(b <= a * (1 + 1e-6) for a, b in zip(hist, hist[1:]))
    # no worse than the zero solution
    Z = (X - model.mean) / model.std
    ys = np.where(y == 1, 1.0, -1.0)
    obj_zero = 5.0 * np.maximum(0, 1 - ys * 0.0).mean()
    margins = ys * (Z @ model.weights + model.bias)
    obj = 0.5 * model.weights @ model.weights + 5.0 * np.maximum(0, 1 - margins).mean()
    assert obj <= obj_zero + 1e-9


def test_predict_agrees_with_decision_sign():
    X, y = _separable(n=30, seed=9, gap=0.3)
    model = svm.fit(X, y, C=1.0)
    rng = np.random.default_rng(0)
    probe = rng.normal(size=(50, X.shape[1]))
    decisions = svm.decision_function(model, probe)
    assert np.array_equal(svm.predict(model, probe), (decisions >= 0).astype(int))


def test_predict_single_vector():
    X, y = _separable(n=20, seed=10)
    model = svm.fit(X, y, C=1.0)
    centroid0 = X[y == 0].mean(axis=0)
    assert svm.predict(model, centroid0) == 0
    with pytest.raises(svm.DimensionMismatch):
        svm.predict(model, np.zeros(X.shape[1] + 1))


def test_grid_search_separable_prefers_smallest_c():
    X, y = _separable(n=60, seed=11)
    result = svm.grid_search_cv(X, y, C_grid=(0.01, 0.1, 1.0), folds=10, seed=0)
    assert result.best_C == 0.01
    assert all(v == pytest.approx(1.0) for v in result.cv_scores.values())


def test_grid_search_single_value():
    X, y = _separable(n=40, seed=12)
    result = svm.grid_search_cv(X, y, C_grid=(3.0,), folds=10, seed=0)
    assert result.best_C == 3.0


def test_grid_search_fold_partition():
    X, y = _separable(n=46, seed=13)
    assignment = svm._stratified_folds(y, 10, seed=1)
    assert assignment.shape == (46,)
    assert assignment.min() >= 0 and assignment.max() < 10
    # every sample lands in exactly one fold, classes spread across folds
    for cls in (0, 1):
        counts = np.bincount(assignment[y == cls], minlength=10)
        assert counts.max() - counts.min() <= 1


def test_grid_search_shuffled_labels_near_chance():
    rng = np.random.default_rng(14)
    X = rng.normal(size=(80, 5))
    accs = []
    for shuffle_seed in range(20):
        y = np.array([0] * 40 + [1] * 40)
        np.random.default_rng(shuffle_seed).shuffle(y)
        result = svm.grid_search_cv(X, y, C_grid=(1.0,), folds=10, seed=0, passes=300)
        accs.append(max(result.cv_scores.values()))
    assert abs(np.mean(accs) - 0.5) < 0.1


def test_grid_search_errors():
    X, y = _separable(n=8, seed=15)
    with pytest.raises(svm.TooFewSamples):
        svm.grid_search_cv(X, y, folds=10)
    X2 = np.vstack([_separable(n=20, seed=16)[0]])
    y2 = np.array([0] * 19 + [1])
    with pytest.raises(svm.TooFewSamples):
        svm.grid_search_cv(X2, y2, folds=10)


def test_model_file_round_trip(tmp_path):
    X, y = _separable(n=30, seed=17)
    model = svm.fit(X, y, C=0.1)
    path = tmp_path / "model.txt"
    svm.save_model(model, path)
    loaded = svm.load_model(path)
    assert np.array_equal(loaded.weights, model.weights)
    assert loaded.bias == model.bias
    assert np.array_equal(loaded.mean, model.mean)
    assert np.array_equal(loaded.std, model.std)
    assert loaded.C == model.C
    probe = _separable(n=10, seed=18)[0]
    assert np.array_equal(svm.decision_function(loaded, probe),
                          svm.decision_function(model, probe))
