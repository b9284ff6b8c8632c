"""scikit-learn style wrappers.

Samples are complexes of projectives (a list of :class:`ProjComplex`), not
numeric arrays, so these transformers only compose with pipeline steps
that accept such lists.  :class:`HomDimensionFeatures` turns them into an
integer feature matrix.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .complexes import ProjComplex, hom_dims
from .modules import Module
from .silting import LEFT, SiltingObject, check_spherical, mutate, spherical_twist


def check_complex(X, algebra=None) -> ProjComplex:
    """Validate a single complex, optionally over a given algebra."""
    if not isinstance(X, ProjComplex):
        raise TypeError(f"expected a ProjComplex, got {type(X).__name__}")
    if algebra is not None and X.algebra is not algebra:
        raise ValueError("complex is over a different algebra")
    return X


def check_complexes(Xs, algebra=None) -> list[ProjComplex]:
    """Validate a non-empty sequence of complexes over one algebra."""
    if isinstance(Xs, ProjComplex):
        Xs = [Xs]
    Xs = list(Xs)
    if not Xs:
        raise ValueError("expected at least one complex")
    algebra = algebra if algebra is not None else check_complex(Xs[0]).algebra
    return [check_complex(X, algebra) for X in Xs]


class SphericalTwist(TransformerMixin, BaseEstimator):
    """Twist by a spherical module.  ``fit`` builds and checks the
    certificate; ``transform`` applies the twist ``power`` times."""

    def __init__(self, module=None, d=1, power=1, seed=0):
        self.module = module
        self.d = d
        self.power = power
        self.seed = seed

    def fit(self, X=None, y=None):
        if not isinstance(self.module, Module):
            raise TypeError("module must be a Module")
        self.certificate_ = check_spherical(self.module, self.d, seed=self.seed)
        if not self.certificate_.valid:
            raise ValueError("module is not spherical: " + "; ".join(self.certificate_.reasons))
        return self

    def transform(self, X):
        check_is_fitted(self, "certificate_")
        return [spherical_twist(self.certificate_, Y, self.power)
                for Y in check_complexes(X, self.module.algebra)]

    def inverse_transform(self, X):
        check_is_fitted(self, "certificate_")
        return [spherical_twist(self.certificate_, Y, -self.power)
                for Y in check_complexes(X, self.module.algebra)]


class SiltingMutation(TransformerMixin, BaseEstimator):
    """Mutation of each (presilting) complex at the summands not in ``keep``."""

    def __init__(self, keep=(), direction=LEFT, seed=0):
        self.keep = keep
        self.direction = direction
        self.seed = seed

    def fit(self, X=None, y=None):
        if self.direction not in ("left", "right"):
            raise ValueError("direction must be 'left' or 'right'")
        self.keep_ = tuple(sorted(self.keep))
        return self

    def transform(self, X):
        check_is_fitted(self, "keep_")
        out = []
        for Y in check_complexes(X):
            M = SiltingObject.from_complex(Y, seed=self.seed)
            if not M.presilting_verified:
                raise ValueError("complex is not presilting")
            out.append(mutate(M, self.keep_, self.direction, seed=self.seed).complex)
        return out


class HomDimensionFeatures(TransformerMixin, BaseEstimator):
    """Feature row per complex: dim Hom(P, X[n]) for each probe P and each
    n in ``shifts``."""

    def __init__(self, probes=(), shifts=range(-3, 4)):
        self.probes = probes
        self.shifts = shifts

    def fit(self, X=None, y=None):
        self.probes_ = check_complexes(self.probes)
        self.shifts_ = list(self.shifts)
        return self

    def transform(self, X):
        check_is_fitted(self, "probes_")
        Xs = check_complexes(X, self.probes_[0].algebra)
        rows = []
        for Y in Xs:
            row = []
            for P in self.probes_:
                dims = hom_dims(P, Y)
                row.extend(dims.get(n, 0) for n in self.shifts_)
            rows.append(row)
        return np.array(rows, dtype=np.int64)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "probes_")
        return np.array([f"hom_{i}_{n}" for i in range(len(self.probes_)) for n in self.shifts_], dtype=object)
