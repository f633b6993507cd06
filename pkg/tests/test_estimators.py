import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hereditary_growth.estimators import AvoidanceGrowth, HereditaryConstruction, as_target, check_lengths
from hereditary_growth.targets import GrowthTarget, builtin


def test_params_round_trip():
    est = HereditaryConstruction(N=4, search="linear")
    assert est.get_params()["N"] == 4
    est.set_params(N=6)
    assert clone(est).get_params() == est.get_params()


def test_fit_family_string():
    est = HereditaryConstruction(N=4).fit("minimal", n_max=40)
    assert est.predict([0, 5, 40]) == [1, 6, 41]
    assert est.transform(3) == [10]
    assert est.violations() == []
    assert est.domination().C == 1
    assert est.language_spec_.n_max == 40


def test_fit_array_uses_its_length():
    values = [2**n for n in range(33)]
    est = HereditaryConstruction(N=4).fit(values)
    assert est.n_max_ == 32
    assert est.fit_transform(values)[-1] <= 2**33 - 1


def test_normalize_option():
    shifted = list(range(5, 200))
    with pytest.raises(ValueError):
        HereditaryConstruction(N=4).fit(shifted, n_max=60)
    est = HereditaryConstruction(N=4, normalize=True).fit(shifted, n_max=60)
    assert est.target_.values(3) == [1, 2, 4, 8]


def test_rule_target_needs_n_max():
    with pytest.raises(ValueError):
        HereditaryConstruction().fit(builtin("power:3"))


def test_unfitted_and_out_of_range():
    with pytest.raises(NotFittedError):
        HereditaryConstruction().predict([1])
    est = HereditaryConstruction(N=4).fit("minimal", n_max=20)
    with pytest.raises(ValueError):
        est.predict([21])


def test_avoidance():
    est = AvoidanceGrowth().fit(["yy"])
    assert str(est.growth_) == "exponential"
    assert est.transform(range(7)) == [1, 2, 3, 5, 8, 13, 21]
    assert est.predict([30])[0] == 2178309
    assert AvoidanceGrowth(alphabet="ab").fit(["ba"]).predict(5) == [6]


def test_helpers():
    assert isinstance(as_target([1, 2, 3]), GrowthTarget)
    assert check_lengths(4) == [4]
    with pytest.raises(ValueError):
        check_lengths([-1])
