"""Symmetry operators ``S_N`` and duality operators ``D_N``.

One-site matrices use the evaluation image with ``k1^2 = diag(1/tau, tau)``
in the (hole, particle) basis, i.e. ``tau`` on particles and ``1/tau`` on
holes.  Then

    Q(l) := rho(Q1(tau**(l - 1/2))) = [[1/tau - 1, tau**-l], [tau**l, tau - 1]]

and ``Q(0)`` is the matrix ``M`` of the L = 1 duality example.

Multi-site operators are written as literal Kronecker products
``A1 (x) A2 (x) ... (x) AL`` (numpy ``kron`` order).  Under the package basis
(site 1 least significant) the leftmost factor acts on site L, so in
``Delta^(L)(Q1)`` the ``k1^2`` factors sit on the sites to the right of the
site carrying ``Q1``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Iterator, Sequence, Tuple

from .asep import RateParameters, build_V
from .operators import (
    IDENTITY,
    SIGMA_MINUS,
    SIGMA_PLUS,
    Operator,
    commutator,
    embed_chain,
    site_matrix,
)
from .results import CheckResult, operator_residual
from .scalar_ring import LaurentScalar, is_exact, rational_sqrt, scalar_pow

#: shift of the index ``l`` each time a ``k1^2`` is moved from the right of
#: ``Q(l)`` to its left: ``Q(l) k^2 = k^2 Q(l + KSQ_SHIFT)``
KSQ_SHIFT = -2


def kron(factors: Sequence[Operator]) -> Operator:
    """Literal Kronecker product ``factors[0] (x) factors[1] (x) ...``."""
    return embed_chain(list(reversed(factors)))


def tau_sqrt(tau):
    """``tau**(1/2)`` in the ring of ``tau``; exact inputs must be perfect squares."""
    if isinstance(tau, LaurentScalar):
        if tau.is_monomial():
            (e, c), = tau.items()
            root = rational_sqrt(Fraction(c))
            if e % 2 == 0 and root is not None:
                return LaurentScalar({e // 2: root})
        if tau.is_constant():
            return tau_sqrt(Fraction(tau.constant_value()))
        raise ValueError(f"{tau} has no square root in Q[t, 1/t]")
    if is_exact(tau):
        root = rational_sqrt(Fraction(tau))
        if root is None:
            raise ValueError(f"{tau} has no rational square root")
        return root
    return math.sqrt(float(tau))


def k_squared(tau) -> Operator:
    return Operator.diagonal([scalar_pow(tau, -1), tau])


def q1_site_matrix(l: int, tau) -> Operator:
    inv = scalar_pow(tau, -1)
    return site_matrix([[inv - 1, scalar_pow(tau, -l)], [scalar_pow(tau, l), tau - 1]])


def rho_k1(tau, convention: str = "particle") -> Operator:
    """One-site image of ``k1``.

    ``"particle"``: ``diag(tau^-1/2, tau^1/2)``, i.e. ``k1^2`` is ``tau`` on
    particles.  ``"sigma_z"``: ``tau**(sigma^z/2) = diag(tau^1/2, tau^-1/2)``.
    """
    r = tau_sqrt(tau)
    inv = scalar_pow(r, -1)
    if convention == "particle":
        return Operator.diagonal([inv, r])
    if convention == "sigma_z":
        return Operator.diagonal([r, inv])
    raise ValueError(f"unknown convention {convention!r}")


def q1_from_generators(s, k: Operator, x1=1) -> Operator:
    """``s^-1 k e + s k f + x1 k^2 - x1`` with ``e = sigma^+``, ``f = sigma^-``."""
    ke, kf = k @ SIGMA_PLUS, k @ SIGMA_MINUS
    return ke.scale(scalar_pow(s, -1)) + kf.scale(s) + (k @ k - IDENTITY).scale(x1)


def verify_shift_relation(l_range: Sequence[int], tau) -> CheckResult:
    """``Q(l - KSQ_SHIFT) k^2 = k^2 Q(l)`` for each ``l`` (as 2x2 matrices).

    Also records whether the unit shift ``Q(l + 1) k^2 = k^2 Q(l)`` holds; in
    this representation it cannot, since conjugating by ``k^2`` scales the
    off-diagonal entries by ``tau^{+-2}``.
    """
    k2 = k_squared(tau)
    failures: Dict[int, object] = {}
    unit_shift: Dict[int, bool] = {}
    for l in l_range:
        ok, res = operator_residual(q1_site_matrix(l - KSQ_SHIFT, tau) @ k2 - k2 @ q1_site_matrix(l, tau))
        if not ok:
            failures[l] = res
        unit_shift[l] = q1_site_matrix(l + 1, tau) @ k2 == k2 @ q1_site_matrix(l, tau)
    params = {"l_range": [min(l_range), max(l_range)] if l_range else [], "tau": str(tau)}
    residual = next(iter(failures.values()), 0)
    return CheckResult("shift_relation", params, not failures, residual,
                       {"shift_per_k2": KSQ_SHIFT, "failures": failures,
                        "unit_shift_holds": all(unit_shift.values()) if unit_shift else None})


def coproduct_of_q1(s, k: Operator) -> Operator:
    """``(rho (x) rho)(Delta(Q1(s)))`` from the coproduct of the generators.

    ``Delta(x) = k (x) x + x (x) k^-1`` for ``x = e, f`` and
    ``Delta(k) = k (x) k``; ``x1 = 1``.
    """
    k_inv = Operator.diagonal([scalar_pow(v, -1) for v in k.diagonal_values()])
    d_k = kron([k, k])
    d_e = kron([k, SIGMA_PLUS]) + kron([SIGMA_PLUS, k_inv])
    d_f = kron([k, SIGMA_MINUS]) + kron([SIGMA_MINUS, k_inv])
    return (d_k @ d_e).scale(scalar_pow(s, -1)) + (d_k @ d_f).scale(s) + d_k @ d_k - Operator.identity(4)


def verify_coproduct_identity(tau) -> CheckResult:
    """``Delta(Q1(tau^-1/2)) = k^2 (x) Q1 + Q1 (x) 1`` at the 4x4 level.

    Three matrices must agree: the coproduct expanded from the generators,
    the right-hand side, and ``build_S1(2, tau)``.
    """
    k = rho_k1(tau)
    s = scalar_pow(tau_sqrt(tau), -1)
    M = q1_site_matrix(0, tau)
    rhs = kron([k_squared(tau), M]) + kron([M, IDENTITY])
    ok1, res1 = operator_residual(coproduct_of_q1(s, k) - rhs)
    ok2, res2 = operator_residual(build_S1(2, tau) - rhs)
    residual = res1 if not ok1 else res2
    return CheckResult("coproduct_identity", {"tau": str(tau)}, ok1 and ok2, residual,
                       {"from_generators": ok1, "matches_S1": ok2})


def build_S1(L: int, tau) -> Operator:
    """``sum_x k^2 (x) ... (x) k^2 (x) Q(0) (x) 1 (x) ... (x) 1`` (x-1 leading ``k^2``)."""
    if L < 1:
        raise ValueError("need at least one site")
    k2, M = k_squared(tau), q1_site_matrix(0, tau)
    out = Operator.zero(2 ** L)
    for x in range(1, L + 1):
        out = out + kron([k2] * (x - 1) + [M] + [IDENTITY] * (L - x))
    return out


def build_SN(L: int, N: int, tau) -> Operator:
    if N < 1:
        raise ValueError("N must be at least 1")
    S1 = build_S1(L, tau)
    out = S1
    for _ in range(N - 1):
        out = out @ S1
    return out


def _tuples_bounded(a: int, b: int) -> Iterator[Tuple[int, ...]]:
    """Nonnegative integer ``a``-tuples with sum at most ``b``."""
    for ls in itertools.product(range(b + 1), repeat=a):
        if sum(ls) <= b:
            yield ls


def build_Q_ab(a: int, b: int, tau, shift: int = KSQ_SHIFT) -> Operator:
    """One-site factor of ``S_N``: ``a`` copies of ``Q`` interleaved with ``b`` copies of ``k^2``.

    Written with every ``k^2`` moved to the left:
    ``sum (k^2)^b Q(shift*(l1+...+la)) Q(shift*(l2+...+la)) ... Q(shift*la)``
    over ``l1 + ... + la <= b``.  ``shift`` is exposed only to diagnose other
    shift conventions.
    """
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    k2b = Operator.identity(2)
    for _ in range(b):
        k2b = k2b @ k_squared(tau)
    if a == 0:
        return k2b
    out = Operator.zero(2)
    for ls in _tuples_bounded(a, b):
        term = k2b
        for i in range(a):
            term = term @ q1_site_matrix(shift * sum(ls[i:]), tau)
        out = out + term
    return out


def q_ab_by_words(a: int, b: int, tau) -> Operator:
    """Oracle for :func:`build_Q_ab`: sum of all words with ``a`` Q(0)'s and ``b`` k^2's."""
    M, k2 = q1_site_matrix(0, tau), k_squared(tau)
    out = Operator.zero(2)
    for q_slots in itertools.combinations(range(a + b), a):
        word = Operator.identity(2)
        for pos in range(a + b):
            word = word @ (M if pos in q_slots else k2)
        out = out + word
    return out


def compositions(N: int, L: int) -> Iterator[Tuple[int, ...]]:
    """Weak compositions ``(m_1, ..., m_L)`` of ``N`` in lexicographic order."""
    for m in itertools.product(range(N + 1), repeat=L):
        if sum(m) == N:
            yield m


def build_SN_explicit(L: int, N: int, tau, shift: int = KSQ_SHIFT) -> Operator:
    """``sum_m Q^{m_1, m_[2,L]} (x) Q^{m_2, m_[3,L]} (x) ... (x) Q^{m_L, 0}``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    cache: Dict[Tuple[int, int], Operator] = {}
    out = Operator.zero(2 ** L)
    for m in compositions(N, L):
        factors = []
        for i in range(L):
            key = (m[i], sum(m[i + 1:]))
            if key not in cache:
                cache[key] = build_Q_ab(*key, tau, shift=shift)
            factors.append(cache[key])
        out = out + kron(factors)
    return out


def check_explicit_SN(L: int, N: int, tau) -> CheckResult:
    ok, res = operator_residual(build_SN_explicit(L, N, tau) - build_SN(L, N, tau))
    derived = {"shift_per_k2": KSQ_SHIFT}
    if N > 1 and L > 1:
        derived["unit_shift_matches"] = build_SN_explicit(L, N, tau, shift=1) == build_SN(L, N, tau)
    return CheckResult("explicit_SN", {"L": L, "N": N, "tau": str(tau)}, ok, res, derived)


def build_DN(L: int, N: int, tau) -> Operator:
    V = build_V(L, 1, tau)
    return V @ build_SN(L, N, tau) @ V


def check_symmetry_commutation(L: int, N: int, rates: RateParameters) -> CheckResult:
    """``[V L V^-1, S_N] = 0``."""
    from .xxz import build_conjugated_generator

    S = build_SN(L, N, rates.tau)
    ok, res = operator_residual(commutator(build_conjugated_generator(L, rates), S))
    params = {"L": L, "N": N, "mode": rates.mode, "tau": str(rates.tau), "gamma": str(rates.gamma)}
    return CheckResult("symmetry_commutation", params, ok, res)


def _same(A: Operator, B: Operator) -> bool:
    return bool(operator_residual(A - B)[0])


def diagnose_representation_conventions(tau) -> CheckResult:
    """Test both images of ``k1`` against the anchors they should satisfy.

    Anchors per convention: reproducing ``M`` from ``Q1(tau^-1/2)``; the
    commutator ``(tau - 1/tau)[e, f] = k^2 - k^-2``; the relation
    ``k e = tau e k``; and which power ``d`` makes ``Q1(s tau^d) k^2 = k^2 Q1(s)``.
    A second section compares the two placements of ``k^2`` in ``S_1``
    (sites right vs left of ``Q``) through ``[V L V^-1, S_1] = 0`` at L = 2, 3.
    The check passes when the adopted choice (``"particle"``, ``k^2`` on the
    right) satisfies its anchors.
    """
    from .xxz import build_conjugated_generator

    report: Dict[str, Dict[str, object]] = {}
    root = tau_sqrt(tau)
    M = q1_site_matrix(0, tau)
    inv_tau = scalar_pow(tau, -1)
    for conv in ("particle", "sigma_z"):
        k = rho_k1(tau, conv)
        k2 = k @ k
        k2_inv = Operator.diagonal([scalar_pow(v, -1) for v in k2.diagonal_values()])
        q = lambda s: q1_from_generators(s, k)  # noqa: E731
        s0 = scalar_pow(root, -1)
        ef = SIGMA_PLUS @ SIGMA_MINUS - SIGMA_MINUS @ SIGMA_PLUS
        shifts = [d for d in (-2, -1, 1, 2) if _same(q(s0 * scalar_pow(tau, d)) @ k2, k2 @ q(s0))]
        report[conv] = {
            "k1_squared": [str(v) for v in k2.diagonal_values()],
            "reproduces_M": _same(q(s0), M),
            "commutator_relation": _same(ef.scale(tau - inv_tau), k2 - k2_inv),
            "k_e_equals_tau_e_k": _same(k @ SIGMA_PLUS, (SIGMA_PLUS @ k).scale(tau)),
            "unit_shift_holds": _same(q(s0 * inv_tau) @ k2, k2 @ q(s0)),
            "working_shift_powers": shifts,
        }
    rates = (RateParameters.symbolic_rates() if isinstance(tau, LaurentScalar) and not tau.is_constant()
             else RateParameters.from_tau(tau))
    placement: Dict[str, bool] = {}
    for L in (2, 3):
        H = build_conjugated_generator(L, rates)
        k2, Mq = k_squared(tau), q1_site_matrix(0, tau)
        right = build_S1(L, tau)
        left = Operator.zero(2 ** L)
        for x in range(1, L + 1):
            left = left + embed_chain([k2] * (x - 1) + [Mq] + [IDENTITY] * (L - x))
        placement[f"k2_right_commutes_L{L}"] = _same(H @ right, right @ H)
        placement[f"k2_left_commutes_L{L}"] = _same(H @ left, left @ H)
    report["k2_placement"] = placement
    adopted_ok = bool(report["particle"]["reproduces_M"]) and all(
        v for key, v in placement.items() if key.startswith("k2_right"))
    return CheckResult("representation_conventions", {"tau": str(tau)}, adopted_ok, 0, report)
