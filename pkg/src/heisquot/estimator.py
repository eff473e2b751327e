"""scikit-learn style front end for classifying codimension-2 subspaces.

Rows of ``X`` are spanning sets of subspaces N of F_q, flattened: a row of
length (e - 2) * e reshapes to an (e - 2) x e matrix over Z_p.  ``fit``
enumerates the whole family and its isomorphism classes; ``predict`` returns
the class index of each row's H/N.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from heisquot.ff import FqField
from heisquot.heisenberg import build, quotient_pencil
from heisquot.isotest import canonical_label, classify_ctx
from heisquot.linal import Subspace


class FamilyClassifier(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Isomorphism classes of H/N for N of codimension 2 in F_{p^e}.

    ``transform`` gives the normalised invariant a(t) of each row (padded
    coefficient vector of length e + 1), ``predict`` the class index in
    ``classes_`` order.
    """

    def __init__(self, p=3, e=3, seed=0, modulus=None, unsafe_scale=False):
        self.p = p
        self.e = e
        self.seed = seed
        self.modulus = modulus
        self.unsafe_scale = unsafe_scale

    def fit(self, X=None, y=None):
        field = FqField.create(self.p, self.e, self.seed, self.modulus)
        self.ctx_ = build(field)
        self.classification_ = classify_ctx(self.ctx_, unsafe=self.unsafe_scale)
        subs = self.classification_.subspaces
        reps = [subs[r] for r, _ in self.classification_.orbits()]
        self.classes_ = np.arange(len(reps))
        self._label_index = {N: i for i, N in enumerate(reps)}
        self.n_features_in_ = (self.e - 2) * self.e
        return self

    def _subspaces(self, X):
        check_is_fitted(self, "classification_")
        X = np.asarray(X, dtype=np.int64)
        width = self.n_features_in_
        if X.ndim != 2 or X.shape[1] != width:
            raise ValueError(f"X must have shape (n_samples, {width}), got {X.shape}")
        out = []
        for row in X:
            N = Subspace.from_rows(row.reshape(self.e - 2, self.e), self.p, self.e)
            if N.codim != 2:
                raise ValueError(f"row {row.tolist()} does not span a codimension-2 subspace")
            out.append(N)
        return out

    def predict(self, X):
        return np.array([self._label_index[canonical_label(self.ctx_, N)] for N in self._subspaces(X)])

    def transform(self, X):
        out = np.zeros((len(X), self.e + 1), dtype=np.int64)
        for i, N in enumerate(self._subspaces(X)):
            a = quotient_pencil(self.ctx_, N).a
            out[i, : len(a)] = a
        return out

    def score(self, X, y, sample_weight=None):
        return float(np.mean(self.predict(X) == np.asarray(y)))
