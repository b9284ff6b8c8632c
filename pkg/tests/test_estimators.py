import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from siltingkit.complexes import iso_complex, regular, shift, stalk
from siltingkit.estimators import (HomDimensionFeatures, SiltingMutation, SphericalTwist, check_complex,
                                   check_complexes)


def test_check_helpers(a4, a3):
    X = stalk(a4.A, 1)
    assert check_complex(X) is X
    assert check_complexes(X) == [X]
    with pytest.raises(TypeError):
        check_complex("P1")
    with pytest.raises(ValueError):
        check_complexes([])
    with pytest.raises(ValueError):
        check_complexes([X, stalk(a3.A, 1)])


def test_twist_estimator(a4):
    t = SphericalTwist(a4.E, d=3)
    assert t.get_params() == {"module": a4.E, "d": 3, "power": 1, "seed": 0}
    with pytest.raises(NotFittedError):
        t.transform([stalk(a4.A, 1)])
    Xs = [stalk(a4.A, v) for v in a4.A.vertices]
    Ys = t.fit_transform(Xs)
    assert all(iso_complex(Z, X) for Z, X in zip(t.inverse_transform(Ys), Xs))
    c = clone(t).set_params(power=2).fit()
    assert iso_complex(c.transform(Xs[:1])[0], t.transform(Ys[:1])[0])


def test_twist_estimator_rejects_non_spherical(a3):
    with pytest.raises(ValueError):
        SphericalTwist(a3.E, d=2).fit()
    with pytest.raises(TypeError):
        SphericalTwist("E", d=2).fit()


def test_mutation_estimator(a4):
    m = SiltingMutation(keep=[]).fit()
    out = m.transform([regular(a4.A)])
    assert iso_complex(out[0], shift(regular(a4.A), 1))
    with pytest.raises(ValueError):
        SiltingMutation(direction="up").fit()
    with pytest.raises(ValueError):
        m.transform([a4.PE])


def test_features_pipeline(a4):
    pipe = make_pipeline(SphericalTwist(a4.E, d=3), HomDimensionFeatures(probes=[a4.PE], shifts=range(0, 7)))
    F = pipe.fit_transform([stalk(a4.A, v) for v in a4.A.vertices])
    assert F.dtype == np.int64 and F.shape == (4, 7)
    assert (F[:, 5] == 1).all() and F.sum() == 4
    names = pipe[-1].get_feature_names_out()
    assert list(names[:2]) == ["hom_0_0", "hom_0_1"]
