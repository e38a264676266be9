import itertools

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.optimize import linprog

from healthinspect.svm import (
    FeatureSpec,
    SvmConfig,
    SvmModel,
    assemble_features,
    dump_model,
    load_model,
    predict_svm,
    predict_svm_batch,
    train_svm,
)

XOR_X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
XOR_Y = np.array([1, 1, -1, -1])


def separable(x, y):
    """LP oracle: is there (w, b) with y_i (w.x_i + b) >= 1 for all i?"""
    a = -y[:, None] * np.hstack([x, np.ones((len(x), 1))])
    res = linprog(np.zeros(x.shape[1] + 1), A_ub=a, b_ub=-np.ones(len(x)),
                  bounds=[(None, None)] * (x.shape[1] + 1), method="highs")
    return res.status == 0


def qp_oracle(x, y, c):
    """Primal of the same problem through a generic conic solver."""
    cp = pytest.importorskip("cvxpy")
    w = cp.Variable(x.shape[1])
    b = cp.Variable()
    xi = cp.Variable(len(y))
    obj = 0.5 * (cp.sum_squares(w) + cp.square(b)) + c * cp.sum(xi)
    cons = [cp.multiply(y, x @ w + b) >= 1 - xi, xi >= 0]
    cp.Problem(cp.Minimize(obj), cons).solve(solver=cp.CLARABEL)
    return w.value, float(b.value)


def blobs(seed, n=40, gap=3.0):
    rng = np.random.default_rng(seed)
    y = np.array([1] * (n // 2) + [-1] * (n // 2))
    x = rng.normal(size=(n, 2)) * 0.5 + np.outer(y, [gap / 2, gap / 2])
    return x, y


def kkt_violation(x, y, alpha, c):
    """Largest projected-gradient magnitude, recomputed from alpha alone."""
    xa = np.hstack([x, np.ones((len(x), 1))])
    w = (alpha * y) @ xa
    g = y * (xa @ w) - 1
    pg = np.where(alpha <= 0, np.minimum(g, 0), np.where(alpha >= c, np.maximum(g, 0), g))
    return float(np.max(np.abs(pg)))


def test_two_point_symmetric():
    model = train_svm([[1.0], [-1.0]], [1, -1], SvmConfig(c=10, tol=1e-10))
    assert model.b == pytest.approx(0, abs=1e-9)
    assert model.w[0] > 0
    assert predict_svm(model, [0.5])[0] == 1
    assert predict_svm(model, [-0.5])[0] == -1


@pytest.mark.parametrize("seed", range(3))
def test_separable_blobs(seed, backend):
    x, y = blobs(seed)
    assert separable(x, y)
    model = train_svm(x, y, SvmConfig(c=100, tol=1e-6, max_epochs=5000), backend=backend)
    assert np.array_equal(predict_svm_batch(model, x), y)


def test_xor_not_linearly_separable():
    assert not separable(XOR_X, XOR_Y)
    for keep in itertools.combinations(range(4), 3):
        idx = list(keep)
        assert separable(XOR_X[idx], XOR_Y[idx])
    model = train_svm(XOR_X, XOR_Y, SvmConfig(c=100, tol=1e-8, max_epochs=5000))
    assert np.mean(predict_svm_batch(model, XOR_X) == XOR_Y) <= 0.75


@pytest.mark.parametrize("seed", range(4))
def test_dual_objective_monotone(seed, backend):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(50, 4))
    y = np.where(rng.random(50) < 0.5, 1, -1)
    model = train_svm(x, y, SvmConfig(c=1.0, tol=1e-6, max_epochs=200, seed=seed), backend=backend)
    d = np.array(model.info.dual_objective)
    assert np.all(np.diff(d) >= -1e-10 * np.maximum(1, np.abs(d[1:])))


@pytest.mark.parametrize("c", [0.1, 1.0, 10.0])
def test_kkt_at_termination(c):
    x, y = blobs(5, gap=1.0)
    cfg = SvmConfig(c=c, tol=1e-5, max_epochs=20000)
    model = train_svm(x, y, cfg)
    assert model.info.converged
    alpha = model.info.alpha
    assert np.all(alpha >= 0) and np.all(alpha <= c)
    assert kkt_violation(x, y, alpha, c) < cfg.tol
    xa_w = (alpha * y) @ np.hstack([x, np.ones((len(x), 1))])
    np.testing.assert_allclose(xa_w, np.append(model.w, model.b), atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_matches_qp_solver(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(10, 3))
    y = np.where(x[:, 0] + 0.8 * rng.normal(size=10) > 0, 1, -1)
    if len(set(y)) < 2:
        y[0] = -y[0]
    w_ref, b_ref = qp_oracle(x, y, 1.0)
    model = train_svm(x, y, SvmConfig(c=1.0, tol=1e-9, max_epochs=100000))
    ours = model.decision_function(x)
    ref = x @ w_ref + b_ref
    scale = np.max(np.abs(ref))
    assert np.max(np.abs(ours - ref)) / scale <= 1e-3


def test_predict_examples():
    model = SvmModel(np.array([1.0, 0.0]), 0.0)
    assert predict_svm(model, [2.0, 5.0]) == (1, 2.0)
    assert predict_svm(model, [-2.0, 5.0]) == (-1, -2.0)
    assert predict_svm(model, [0.0, 3.0])[0] == 1


def test_mirror_symmetry():
    x, y = blobs(2, n=20)
    a = train_svm(x, y, SvmConfig(c=1, tol=1e-10, max_epochs=10000))
    b = train_svm(x, -y, SvmConfig(c=1, tol=1e-10, max_epochs=10000))
    np.testing.assert_allclose(a.w, -b.w, atol=1e-6)
    assert a.b == pytest.approx(-b.b, abs=1e-6)


def test_errors():
    model = SvmModel(np.zeros(3), 0.0)
    with pytest.raises(ValueError):
        predict_svm(model, [1.0, 2.0])
    with pytest.raises(ValueError):
        train_svm([[1.0], [2.0]], [1, 1])
    with pytest.raises(ValueError):
        train_svm([[1.0], [2.0]], [1, 0])
    with pytest.raises(ValueError):
        SvmConfig(c=0)


class TestFeatures:
    def test_keywords_and_topics(self):
        rows = sp.csr_matrix(np.ones((3, 200)))
        thetas = np.full((3, 20), 0.05)
        out = assemble_features(rows, thetas, FeatureSpec())
        assert out.shape == (3, 220)

    def test_topics_only(self):
        out = assemble_features(None, np.full((2, 20), 0.05), FeatureSpec(use_keywords=False))
        assert out.shape == (2, 20)

    def test_zero_row_with_uniform_theta(self):
        out = assemble_features(np.zeros(200), np.full(20, 0.05), FeatureSpec())
        assert out.shape == (220,)
        assert np.all(out[:200] == 0) and np.allclose(out[200:], 0.05)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            assemble_features(np.zeros((2, 5)), np.zeros((3, 2)), FeatureSpec())
        with pytest.raises(ValueError):
            assemble_features(np.zeros((2, 5)), None, FeatureSpec())
        with pytest.raises(ValueError):
            FeatureSpec(use_keywords=False, use_topics=False)


def test_dump_roundtrip():
    x, y = blobs(1, n=10)
    model = train_svm(x, y)
    back = load_model(dump_model(model))
    assert np.array_equal(back.w, model.w) and back.b == model.b
    with pytest.raises(ValueError):
        load_model("format=svm/9\ndim=1\nb=0.0\n")
