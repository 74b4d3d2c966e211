"""Named checks of the duality theory and the suite runner."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .asep import (
    RateParameters,
    build_generator,
    build_involution,
    build_reflected_generator,
    build_V,
    detailed_balance_violations,
)
from .expm import expm_taylor
from .results import EXPONENTIAL_TOL, CheckResult, InternalConsistencyError, operator_residual
from .scalar_ring import TAU, is_exact, scalar_pow
from .symmetry import (
    build_DN,
    check_explicit_SN,
    check_symmetry_commutation,
    diagnose_representation_conventions,
    q1_site_matrix,
    verify_coproduct_identity,
    verify_shift_relation,
)
from .xxz import check_prop1, verify_proof_scalar_identities

__all__ = [
    "CheckResult",
    "RunConfig",
    "check_corollary",
    "check_detailed_balance",
    "check_duality",
    "run_all",
    "run_example_L1",
    "run_example_N1",
    "semigroup_check",
]


def _params(L, N, rates: RateParameters, **extra):
    out = {"L": L}
    if N is not None:
        out["N"] = N
    out.update(mode=rates.mode, tau=str(rates.tau), gamma=str(rates.gamma))
    for key in ("alpha", "beta", "delta"):
        val = getattr(rates, key)
        if key == "alpha" or val != 0:
            out[key] = str(val)
    if rates.sqrt_pq != 1:
        out["sqrt_pq"] = str(rates.sqrt_pq)
    out.update(extra)
    return out


def check_duality(L: int, N: int, rates: RateParameters) -> CheckResult:
    """``L^T D_N = D_N L``.

    Outside the duality regime the check fails, but the residual is still
    measured so that negative controls show the identity actually breaks.
    """
    gen = build_generator(L, rates)
    D = build_DN(L, N, rates.tau)
    ok, res = operator_residual(gen.T @ D - D @ gen)
    regime = rates.in_duality_regime()
    return CheckResult("duality", _params(L, N, rates), ok and regime, res,
                       {"in_duality_regime": regime, "identity_holds": ok})


def check_detailed_balance(L: int, rates: RateParameters) -> CheckResult:
    """``V^2 L V^-2 = L^T`` and entrywise balance with weights ``tau^(2 sum j n_j)``."""
    gen = build_generator(L, rates)
    op_ok, res = operator_residual(build_V(L, 2, rates.tau) @ gen @ build_V(L, -2, rates.tau) - gen.T)
    weights = build_V(L, -2, rates.tau).diagonal_values()
    violations = detailed_balance_violations(gen, weights)
    elem_ok = not violations
    if op_ok != elem_ok:
        raise InternalConsistencyError(
            f"operator and entrywise detailed balance disagree at L={L}: {op_ok} vs {elem_ok}"
        )
    hypothesis = rates.beta == 0 and rates.delta == 0
    return CheckResult("detailed_balance", _params(L, None, rates), op_ok, res,
                       {"elementwise_violations": len(violations), "beta_delta_zero": hypothesis})


def check_corollary(L: int, N: int, rates: RateParameters) -> CheckResult:
    """``L^T D_N Pi = D_N Pi L~`` with ``L~`` the particle-hole reflected ASEP."""
    gen = build_generator(L, rates)
    refl = build_reflected_generator(L, rates)
    Pi = build_involution(L)
    DPi = build_DN(L, N, rates.tau) @ Pi
    ok, res = operator_residual(gen.T @ DPi - DPi @ refl)
    conj = Pi @ gen @ Pi
    derived = {
        "pi_L_pi_equals_reflected": operator_residual(conj - refl)[0],
        "pi_L_pi_equals_transpose": operator_residual(conj - gen.T)[0],
    }
    return CheckResult("corollary", _params(L, N, rates), ok and rates.in_duality_regime(), res, derived)


def run_example_L1(N_max: int, tau=TAU, gamma=1) -> CheckResult:
    """Single site, ``alpha = gamma tau^2``: both sides of the ``<0|...|1>`` identity are ``(-1)^N gamma``.

    With ``M^N = [[a, b], [c, d]]`` the sides are
    ``-gamma b/tau + gamma a`` and ``-alpha c/tau + alpha d/tau^2``.  The
    matching entries of ``L^T D_N`` and ``D_N L`` are also compared; under
    this generator's sign they equal ``-(-1)^N gamma``.
    """
    alpha = gamma * tau * tau
    inv = scalar_pow(tau, -1)
    M = q1_site_matrix(0, tau)
    rates = RateParameters(p=tau, q=inv, alpha=alpha, beta=0, gamma=gamma, delta=0, tau=tau, sqrt_pq=1)
    gen = build_generator(1, rates)
    per_N = {}
    ok_all = True
    residual = 0
    power = M
    for N in range(1, N_max + 1):
        if N > 1:
            power = power @ M
        a, b, c, d = power[0, 0], power[0, 1], power[1, 0], power[1, 1]
        lhs = -gamma * b * inv + gamma * a
        rhs = -alpha * c * inv + alpha * d * inv * inv
        target = (-1) ** N * gamma
        D = build_DN(1, N, tau)
        m_lhs, m_rhs = (gen.T @ D)[0, 1], (D @ gen)[0, 1]
        ok = _is_zero(lhs - target) and _is_zero(rhs - target) and _is_zero(m_lhs - m_rhs)
        if not ok and residual == 0:
            residual = lhs - target if not _is_zero(lhs - target) else rhs - target
        ok_all = ok_all and ok
        per_N[N] = {"lhs": lhs, "rhs": rhs, "matrix_element": m_lhs}
    params = {"N_max": N_max, "tau": str(tau), "gamma": str(gamma)}
    return CheckResult("example_L1", params, ok_all, residual, per_N)


def run_example_N1(L: int, rates: RateParameters) -> CheckResult:
    """``N = 1``, empty configuration against single-particle configurations.

    Checks (a) the three-term bulk expression for every interior ``x`` is the
    zero polynomial; (b) ``<0|L^T D_1|x> = <0|D_1 L|x>`` for every ``x``;
    (c) with the boundary switched off both sides vanish for interior ``x``.
    The common full-rate value is recorded: the entry term at site 1
    contributes ``alpha <0|D_1|x>`` on both sides.
    """
    if L < 3:
        raise ValueError("the interior identity needs L >= 3")
    p, q = rates.p, rates.q
    ti = scalar_pow(rates.tau, -1)
    telescoping = {}
    for x in range(2, L):
        expr = (p * scalar_pow(ti, x) * scalar_pow(ti, L - (x + 1))
                + q * scalar_pow(ti, x - 2) * scalar_pow(ti, L - (x - 1))
                - (p + q) * scalar_pow(ti, x - 1) * scalar_pow(ti, L - x))
        telescoping[x] = expr
    D = build_DN(L, 1, rates.tau)
    gen = build_generator(L, rates)
    bulk = build_generator(L, rates.replace(alpha=0 * rates.alpha, gamma=0 * rates.gamma,
                                            beta=0 * rates.beta, delta=0 * rates.delta))
    full, bulk_vals = {}, {}
    sides_equal = True
    for x in range(1, L + 1):
        col = 1 << (x - 1)
        a, b = (gen.T @ D)[0, col], (D @ gen)[0, col]
        sides_equal = sides_equal and _is_zero(a - b)
        full[x] = a
        if 1 < x < L:
            bulk_vals[x] = ((bulk.T @ D)[0, col], (D @ bulk)[0, col])
    tele_ok = all(_is_zero(v) for v in telescoping.values())
    bulk_ok = all(_is_zero(u) and _is_zero(v) for u, v in bulk_vals.values())
    residual = next((v for v in telescoping.values() if not _is_zero(v)), 0)
    return CheckResult("example_N1", _params(L, 1, rates), tele_ok and sides_equal and bulk_ok, residual,
                       {"telescoping": telescoping, "full_rate_value": full,
                        "sides_equal": sides_equal, "bulk_only_zero": bulk_ok})


def semigroup_check(L: int, N: int, rates: RateParameters, t_time: float,
                    tol: float = EXPONENTIAL_TOL) -> CheckResult:
    """``exp(t L^T) D_N = D_N exp(t L)`` in floating point."""
    if t_time < 0:
        raise ValueError("time must be nonnegative")
    if rates.symbolic:
        raise ValueError("semigroup check needs numeric (or rational) rates")
    gen = build_generator(L, rates).to_numpy()
    D = build_DN(L, N, rates.tau).to_numpy()
    if t_time == 0:
        diff = D - D
        info = None
    else:
        left, info = expm_taylor(t_time * gen.T)
        right, _ = expm_taylor(t_time * gen)
        diff = left @ D - D @ right
    res = float(np.abs(diff).max())
    derived = {"taylor_order": info.order, "squarings": info.squarings} if info else {}
    return CheckResult("semigroup", _params(L, N, rates, t=t_time), res <= tol, res, derived)


def _is_zero(x) -> bool:
    if is_exact(x):
        return x == 0
    return abs(float(x)) <= 1e-10


# suite ---------------------------------------------------------------------

@dataclass
class RunConfig:
    """Parameter grid for :func:`run_all`.

    ``tau=None`` means symbolic ``tau = t^2`` (exact mode only).  ``alpha``
    overrides the regime value ``gamma tau^2`` (negative controls).
    ``fixed_rates`` replaces the whole rate construction; ``gammas`` then only
    sets how many times the rate-dependent checks repeat.
    """

    Ls: Sequence[int] = (1, 2, 3, 4)
    Ns: Sequence[int] = (1, 2)
    mode: str = "exact"
    gammas: Sequence = (Fraction(1),)
    c: object = 1
    tau: object = None
    alpha: object = None
    beta: object = 0
    delta: object = 0
    semigroup_times: Sequence[float] = (0.5, 1.0)
    semigroup_Lmax: int = 3
    numeric_t0: float = math.sqrt(2.0)
    l_range: Tuple[int, int] = (-3, 3)
    fixed_rates: Optional[RateParameters] = None
    extra: dict = field(default_factory=dict)

    def rates(self, gamma) -> RateParameters:
        if self.fixed_rates is not None:
            return self.fixed_rates
        if self.mode == "exact":
            if self.tau is None:
                r = RateParameters.symbolic_rates(c=self.c, gamma=gamma)
            else:
                r = RateParameters.from_tau(Fraction(self.tau), Fraction(gamma), Fraction(self.c))
        elif self.mode == "numeric":
            tau = 2.0 if self.tau is None else float(self.tau)
            r = RateParameters.from_tau(tau, float(gamma), float(self.c))
        else:
            raise ValueError(f"unknown mode {self.mode!r}")
        changes = {"beta": self.beta, "delta": self.delta}
        if self.alpha is not None:
            changes["alpha"] = self.alpha
        if self.mode == "numeric":
            changes = {k: float(v) for k, v in changes.items()}
        return r.replace(**changes)

    def tau_value(self):
        return self.rates(self.gammas[0]).tau


def run_all(config: Optional[RunConfig] = None) -> List[CheckResult]:
    """Every check over the grid, in a fixed order.

    An :class:`InternalConsistencyError` (two construction paths of the same
    operator disagreeing) aborts the run.
    """
    cfg = config or RunConfig()
    Ls, Ns = list(cfg.Ls), list(cfg.Ns)
    if not Ls or not Ns or not cfg.gammas:
        return []
    tau = cfg.tau_value()
    out: List[CheckResult] = []
    out.append(diagnose_representation_conventions(tau))
    out.append(verify_shift_relation(range(cfg.l_range[0], cfg.l_range[1] + 1), tau))
    out.append(verify_coproduct_identity(tau))
    for gamma in cfg.gammas:
        g = cfg.rates(gamma).gamma
        out.append(verify_proof_scalar_identities(tau, g))
    for gamma in cfg.gammas:
        rates = cfg.rates(gamma)
        if rates.sqrt_pq == 1:
            out.extend(check_prop1(L, rates) for L in Ls)
    for gamma in cfg.gammas:
        rates = cfg.rates(gamma)
        out.extend(check_detailed_balance(L, rates) for L in Ls)
    base = cfg.rates(cfg.gammas[0])
    for L in Ls:
        for N in Ns:
            out.append(check_symmetry_commutation(L, N, base))
    for gamma in cfg.gammas:
        rates = cfg.rates(gamma)
        for L in Ls:
            for N in Ns:
                out.append(check_duality(L, N, rates))
    for L in Ls:
        for N in Ns:
            out.append(check_corollary(L, N, base))
    for L in Ls:
        for N in Ns:
            out.append(check_explicit_SN(L, N, tau))
    out.append(run_example_L1(max(Ns), tau, base.gamma))
    for L in Ls:
        if L >= 3:
            out.append(run_example_N1(L, base))
    numeric = base.evaluate(cfg.numeric_t0) if base.symbolic else base
    for L in Ls:
        if L > cfg.semigroup_Lmax:
            continue
        for N in Ns:
            for t in cfg.semigroup_times:
                out.append(semigroup_check(L, N, numeric, t))
    return out
