import math
from fractions import Fraction

import pytest

from asepdual.asep import RateParameters
from asepdual.results import InternalConsistencyError
from asepdual.scalar_ring import TAU, LaurentScalar
from asepdual.verification import (
    RunConfig,
    check_corollary,
    check_detailed_balance,
    check_duality,
    run_all,
    run_example_L1,
    run_example_N1,
    semigroup_check,
)

SYM = RateParameters.symbolic_rates()


@pytest.mark.parametrize("L,N", [(1, 1), (2, 1), (2, 2), (3, 2)])
def test_duality_symbolic(L, N):
    r = check_duality(L, N, SYM)
    assert r.passed and r.residual == 0


def test_duality_regime_violation_fails_with_residual():
    rates = RateParameters.from_rates(Fraction(2), Fraction(1, 2), Fraction(1), Fraction(1))
    r = check_duality(3, 1, rates)
    assert not r.passed
    assert r.residual != 0
    assert r.derived == {"in_duality_regime": False, "identity_holds": False}


def test_detailed_balance_and_its_failure():
    assert check_detailed_balance(3, SYM).passed
    broken = check_detailed_balance(2, SYM.replace(alpha=LaurentScalar({4: 2})))
    assert not broken.passed and broken.derived["elementwise_violations"] > 0


def test_detailed_balance_paths_must_agree(monkeypatch):
    import asepdual.verification as v

    monkeypatch.setattr(v, "detailed_balance_violations", lambda g, w: [(0, 1)])
    with pytest.raises(InternalConsistencyError):
        v.check_detailed_balance(2, SYM)


def test_corollary_and_transpose_report():
    r = check_corollary(2, 2, SYM)
    assert r.passed
    assert r.derived["pi_L_pi_equals_reflected"]
    assert not r.derived["pi_L_pi_equals_transpose"]


def test_example_L1_sign():
    r = run_example_L1(4)
    assert r.passed
    for N, vals in r.derived.items():
        assert vals["lhs"] == (-1) ** N and vals["rhs"] == (-1) ** N
        assert vals["matrix_element"] == -(-1) ** N


def test_example_N1_value_is_entry_term():
    r = run_example_N1(4, SYM)
    assert r.passed
    assert all(v == 0 for v in r.derived["telescoping"].values())
    # with the boundary on, the common value is gamma at x = 1 and alpha tau^-L beyond
    vals = r.derived["full_rate_value"]
    assert vals[1] == 1
    for x in (2, 3, 4):
        assert vals[x] == LaurentScalar({4: 1}) * TAU ** -4


def test_example_N1_needs_three_sites():
    with pytest.raises(ValueError):
        run_example_N1(2, SYM)


def test_semigroup_numeric():
    r = semigroup_check(3, 1, RateParameters.from_tau(2.0), 0.5)
    assert r.passed and r.residual <= 1e-8
    assert semigroup_check(2, 1, RateParameters.from_tau(2.0), 0.0).residual == 0
    with pytest.raises(ValueError):
        semigroup_check(2, 1, SYM, 0.5)


def test_run_all_default_all_pass():
    results = run_all(RunConfig(Ls=(1, 2, 3), Ns=(1, 2)))
    assert results and all(r.passed for r in results)
    names = [r.name for r in results]
    assert names[0] == "representation_conventions"
    assert names[-1] == "semigroup"


def test_run_all_empty_grid():
    assert run_all(RunConfig(Ls=(), Ns=(1,))) == []


def test_run_all_deterministic():
    a = run_all(RunConfig(Ls=(1, 2), Ns=(1,)))
    b = run_all(RunConfig(Ls=(1, 2), Ns=(1,)))
    assert [(r.name, r.passed, str(r.residual)) for r in a] == [(r.name, r.passed, str(r.residual)) for r in b]


def test_run_all_broken_alpha_fails():
    results = run_all(RunConfig(Ls=(1, 2), Ns=(1,), alpha=LaurentScalar({4: Fraction(101, 100)})))
    failed = {r.name for r in results if not r.passed}
    assert "duality" in failed


def test_run_all_numeric_mode():
    results = run_all(RunConfig(Ls=(1, 2, 3), Ns=(1, 2), mode="numeric", tau=math.sqrt(3)))
    assert all(r.passed for r in results)
