import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import FIG4
from lnec import LnecEncoder, as_network
from lnec.exceptions import DimensionError, ParameterError


@pytest.fixture(scope="module")
def fitted():
    return LnecEncoder(rate=3, field_order=29, random_state=0).fit(str(FIG4))


def test_params_and_clone():
    enc = LnecEncoder(rate=2, beta=(1, 1), field_order=7)
    assert enc.get_params()["beta"] == (1, 1)
    assert clone(enc).get_params() == enc.get_params()


def test_fit_defaults_to_mds(fitted):
    assert fitted.beta_ == {"t1": 2, "t2": 2}
    assert fitted.min_distance_ == {"t1": 3, "t2": 3}


def test_default_field_is_bound_prime_power():
    enc = LnecEncoder(rate=3, random_state=0).fit(FIG4)
    assert enc.field_.order == enc.bound_.min_prime_power


def test_encode_decode_with_errors(fitted):
    net = fitted.network_
    X = np.array([[1, 2, 3], [0, 0, 0], [28, 5, 9]])
    Z = np.zeros((3, net.n_edges), dtype=np.int64)
    Z[0, net.position("e2")] = 7
    Z[2, net.position("e14")] = 1
    Z[2, net.position("e17")] = 3
    S = fitted.transform(X, Z)
    for t in net.sinks:
        assert np.array_equal(fitted.predict(fitted.received(S, t), sink=t), X)


def test_not_fitted_and_shapes(fitted):
    with pytest.raises(NotFittedError):
        LnecEncoder().transform([[1]])
    with pytest.raises(DimensionError):
        fitted.transform([[1, 2]])
    with pytest.raises(DimensionError):
        fitted.transform([[1, 2, 3]], np.zeros((2, 21), dtype=np.int64))


def test_as_network_inputs():
    text = FIG4.read_text()
    assert as_network(text) == as_network(FIG4) == as_network(str(FIG4))
    with pytest.raises(ParameterError):
        as_network(42)
