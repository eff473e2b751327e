import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from heisquot.estimator import FamilyClassifier
from heisquot.heisenberg import enum_codim2


def rows(subs):
    return np.array([np.ravel(N.matrix) for N in subs])


def test_params_roundtrip():
    est = FamilyClassifier(p=3, e=5, seed=2)
    assert est.get_params()["e"] == 5
    assert clone(est).get_params() == est.get_params()
    est.set_params(e=3)
    assert est.e == 3


def test_fit_predict_transform():
    est = FamilyClassifier(p=3, e=5).fit()
    subs = est.classification_.subspaces
    X = rows(subs[::50])
    y = est.predict(X)
    assert set(y.tolist()) <= set(est.classes_.tolist())
    labels = est.classification_.labels[::50]
    reps = sorted(set(est.classification_.labels.tolist()))
    assert (y == np.array([reps.index(l) for l in labels])).all()
    T = est.transform(X)
    assert T.shape == (len(X), 6) and (T[:, -1] == 1).all()
    assert est.score(X, y) == 1.0


def test_predict_accepts_non_rref_rows():
    est = FamilyClassifier(p=3, e=3).fit()
    N = enum_codim2(est.ctx_.field)[4]
    X = rows([N]) * 2 % 3
    assert est.predict(X).tolist() == [0]


def test_not_fitted_and_bad_input():
    with pytest.raises(NotFittedError):
        FamilyClassifier().predict(np.zeros((1, 3)))
    est = FamilyClassifier(p=3, e=3).fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((1, 4)))
    with pytest.raises(ValueError):
        est.predict(np.zeros((1, 3)))
