import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from asepdual.asep import RateParameters, build_generator
from asepdual.expm import expm_taylor


@given(arrays(np.float64, (5, 5), elements=st.floats(-3, 3)))
def test_matches_scipy(A):
    E, _ = expm_taylor(A)
    ref = scipy.linalg.expm(A)
    assert np.allclose(E, ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


def test_zero_matrix():
    E, info = expm_taylor(np.zeros((3, 3)))
    assert np.array_equal(E, np.eye(3))
    assert info.squarings == 0


def test_large_norm_scales():
    A = -build_generator(4, RateParameters.from_tau(3.0, gamma=2.0)).to_numpy() * 5.0
    E, info = expm_taylor(A)
    assert info.squarings > 0 and info.scaled_norm <= 0.5
    assert np.allclose(E, scipy.linalg.expm(A), atol=1e-10)
    # a probability kernel: columns sum to one
    assert np.allclose(E.sum(axis=0), 1.0, atol=1e-10)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        expm_taylor(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        expm_taylor(np.eye(2), order=6)
    with pytest.raises(ArithmeticError):
        expm_taylor(np.array([[np.inf, 0], [0, 0]]))
