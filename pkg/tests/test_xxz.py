from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from asepdual.asep import RateParameters, build_generator, build_V
from asepdual.results import InternalConsistencyError
from asepdual.scalar_ring import TAU, LaurentScalar
from asepdual.xxz import (
    boundary_parameters,
    build_conjugated_generator,
    build_hamiltonian_2H,
    check_prop1,
    expected_prop1_constant,
    solve_zeta_parameter,
    verify_proof_scalar_identities,
    xxz_form,
    zeta_from_root,
    zeta_relation_residual,
)

SYM = RateParameters.symbolic_rates()


def test_prop1_constant_frozen():
    assert expected_prop1_constant(1, SYM) == LaurentScalar({4: Fraction(-1, 2), 0: Fraction(-1, 2)})
    assert expected_prop1_constant(2, SYM) == LaurentScalar(
        {4: Fraction(-1, 2), 2: Fraction(-1, 4), 0: Fraction(-1, 2), -2: Fraction(-1, 4)})


@pytest.mark.parametrize("L", [1, 2, 3])
def test_prop1_exact_small(L):
    r = check_prop1(L, SYM)
    assert r.passed
    assert r.derived["C"] == expected_prop1_constant(L, SYM)


def test_prop1_numeric_with_zeta_roots():
    r = check_prop1(4, RateParameters.from_tau(3.0, gamma=2.0))
    assert r.passed and r.residual <= 1e-12
    w_plus, w_minus = r.derived["zeta_roots"]
    assert w_plus * w_minus == pytest.approx(-1.0, abs=1e-14)


def test_prop1_needs_unit_sqrt_pq():
    with pytest.raises(ValueError):
        check_prop1(2, RateParameters.symbolic_rates(c=2))


def test_prop1_breaks_off_regime():
    r = check_prop1(2, RateParameters.from_tau(3.0).replace(alpha=9.0 * 1.01))
    assert not r.passed


def test_boundary_parameters_vanishing_A1_minus():
    bp = boundary_parameters(3, SYM)
    assert bp.a1_minus == 0
    assert bp.aL_plus == 0 and bp.aL_minus == 0


@pytest.mark.parametrize("c", [Fraction(1), Fraction(3, 2)])
def test_conjugated_generator_two_paths(c):
    r = RateParameters.symbolic_rates(c=c, gamma=Fraction(1, 2)).replace(beta=Fraction(1, 3), delta=2)
    for L in (1, 2, 3):
        V, Vi = build_V(L, 1, r.tau), build_V(L, -1, r.tau)
        assert V @ build_generator(L, r) @ Vi == xxz_form(L, r)
        build_conjugated_generator(L, r)


def test_conjugated_generator_raises_on_disagreement(monkeypatch):
    import asepdual.xxz as xxz

    monkeypatch.setattr(xxz, "xxz_form", lambda L, r: build_generator(L, r))
    with pytest.raises(InternalConsistencyError):
        xxz.build_conjugated_generator(2, SYM)


def test_hamiltonian_is_symmetric():
    H = build_hamiltonian_2H(3, TAU, 1)
    assert H == H.T


@pytest.mark.parametrize("gamma", [Fraction(1), Fraction(1, 2), Fraction(3)])
def test_scalar_identities_exact(gamma):
    assert verify_proof_scalar_identities(TAU, gamma).passed


@given(st.floats(0.05, 20), st.floats(1.05, 10))
def test_zeta_roots(gamma, tau):
    alpha = gamma * tau ** 2
    w_plus, w_minus = solve_zeta_parameter(gamma, alpha, tau)
    assert w_plus > 0 > w_minus
    assert abs(w_plus * w_minus + 1) <= 1e-12
    for w in (w_plus, w_minus):
        assert abs(zeta_relation_residual(w, gamma, alpha, tau)) <= 1e-12 * max(1.0, tau, abs(w), 1 / abs(w))
    zeta = zeta_from_root(w_plus, tau)
    assert np.isclose(tau ** (2 * zeta), w_plus, rtol=1e-12)


def test_zeta_rejects_bad_tau():
    with pytest.raises(ValueError):
        solve_zeta_parameter(1.0, 1.0, 0.0)
