"""Open ASEP generator, ground-state conjugation, particle-hole involution.

The generator is built in the "Hamiltonian" sign convention: off-diagonal
entries are minus the jump rates and each column sums to zero.  Column
``eta`` holds the jumps out of configuration ``eta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence

from .operators import (
    HOLE,
    NUMBER,
    SIGMA_MINUS,
    SIGMA_PLUS,
    Operator,
    embed_bond,
    embed_site,
)
from .scalar_ring import TAU, LaurentScalar, evaluate_scalar, is_exact, rational_sqrt, scalar_pow

# relative tolerance for the numeric duality-regime test alpha*q == gamma*p
REGIME_RTOL = 1e-12


# configurations -----------------------------------------------------------

def config_index(occupancies: Sequence[int]) -> int:
    """Basis index of an occupancy word; ``occupancies[0]`` is site 1."""
    idx = 0
    for j, n in enumerate(occupancies):
        if n not in (0, 1):
            raise ValueError(f"occupancy must be 0 or 1, got {n}")
        idx |= n << j
    return idx


def config_from_index(idx: int, L: int) -> List[int]:
    if not 0 <= idx < 2 ** L:
        raise ValueError(f"index {idx} outside a chain of {L} sites")
    return [(idx >> j) & 1 for j in range(L)]


def site_weight(idx: int, L: int) -> int:
    """``sum_j j * n_j`` for the configuration with basis index ``idx``."""
    return sum(j + 1 for j in range(L) if (idx >> j) & 1)


# rates --------------------------------------------------------------------

@dataclass(frozen=True)
class RateParameters:
    p: object
    q: object
    alpha: object
    beta: object
    gamma: object
    delta: object
    tau: object
    sqrt_pq: object

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in (self.p, self.q, self.alpha, self.beta, self.gamma, self.delta, self.tau))

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "numeric"

    @property
    def symbolic(self) -> bool:
        return isinstance(self.tau, LaurentScalar) and not self.tau.is_constant()

    @classmethod
    def symbolic_rates(cls, c=1, gamma=1, alpha=None, beta=0, delta=0) -> "RateParameters":
        """Exact rates with symbolic ``tau = t**2``.

        ``p = c t^2``, ``q = c t^-2``; ``alpha`` defaults to ``gamma t^4``,
        which puts the chain in the duality regime.
        """
        c, gamma = Fraction(c), Fraction(gamma)
        if c <= 0:
            raise ValueError("sqrt(pq) must be positive")
        if alpha is None:
            alpha = gamma * TAU ** 2
        return cls(
            p=c * TAU, q=c * TAU.inverse(), alpha=alpha, beta=beta, gamma=gamma,
            delta=delta, tau=TAU, sqrt_pq=LaurentScalar.constant(c),
        )

    @classmethod
    def from_tau(cls, tau, gamma=1, c=1) -> "RateParameters":
        """Duality-regime rates ``p = c tau``, ``q = c/tau``, ``alpha = gamma tau^2``."""
        if is_exact(tau) and is_exact(gamma) and is_exact(c):
            tau, gamma, c = Fraction(tau), Fraction(gamma), Fraction(c)
            return cls(p=c * tau, q=c / tau, alpha=gamma * tau ** 2, beta=0, gamma=gamma,
                       delta=0, tau=tau, sqrt_pq=c)
        tau, gamma, c = float(tau), float(gamma), float(c)
        return cls(p=c * tau, q=c / tau, alpha=gamma * tau ** 2, beta=0.0, gamma=gamma,
                   delta=0.0, tau=tau, sqrt_pq=c)

    @classmethod
    def from_rates(cls, p, q, alpha, gamma, beta=0, delta=0) -> "RateParameters":
        """Rates given directly.

        All-rational input stays exact, which requires ``p/q`` to be the
        square of a rational; any float makes the whole record numeric.
        """
        vals = (p, q, alpha, gamma, beta, delta)
        if all(is_exact(v) for v in vals):
            p, q, alpha, gamma, beta, delta = (Fraction(v) for v in vals)
            _check_signs(p, q, alpha, beta, gamma, delta)
            tau = rational_sqrt(p / q)
            if tau is None:
                raise ValueError(f"p/q = {p / q} has no rational square root; use numeric mode")
            return cls(p=p, q=q, alpha=alpha, beta=beta, gamma=gamma, delta=delta,
                       tau=tau, sqrt_pq=p / tau)
        p, q, alpha, gamma, beta, delta = (float(v) for v in vals)
        _check_signs(p, q, alpha, beta, gamma, delta)
        return cls(p=p, q=q, alpha=alpha, beta=beta, gamma=gamma, delta=delta,
                   tau=math.sqrt(p / q), sqrt_pq=math.sqrt(p * q))

    def replace(self, **changes) -> "RateParameters":
        d = dict(self.__dict__)
        d.update(changes)
        return RateParameters(**d)

    def evaluate(self, t0: float) -> "RateParameters":
        """Numeric copy at ``t = t0`` (``tau = t0**2`` for symbolic rates)."""
        return RateParameters(**{k: evaluate_scalar(v, t0) for k, v in self.__dict__.items()})

    def in_duality_regime(self) -> bool:
        """``beta = delta = 0`` and ``alpha q = gamma p``."""
        if self.exact:
            return self.beta == 0 and self.delta == 0 and self.alpha * self.q == self.gamma * self.p
        lhs, rhs = float(self.alpha) * float(self.q), float(self.gamma) * float(self.p)
        return (
            float(self.beta) == 0.0
            and float(self.delta) == 0.0
            and abs(lhs - rhs) <= REGIME_RTOL * max(abs(lhs), abs(rhs), 1e-300)
        )

    def as_params(self) -> Dict[str, str]:
        return {k: str(v) for k, v in self.__dict__.items()}


def _check_signs(p, q, alpha, beta, gamma, delta) -> None:
    if not (p > 0 and q > 0):
        raise ValueError("hopping rates p, q must be positive")
    if min(alpha, beta, gamma, delta) < 0:
        raise ValueError("boundary rates must be nonnegative")


# operators ----------------------------------------------------------------

def build_generator(L: int, rates: RateParameters) -> Operator:
    """The open ASEP generator with bulk sum over bonds ``j = 1..L-1``."""
    if L < 1:
        raise ValueError("need at least one site")
    r = rates
    dim = 2 ** L
    Id = Operator.identity(dim)
    gen = Operator.zero(dim)
    left_coeff = r.sqrt_pq * scalar_pow(r.tau, -1)
    right_coeff = r.sqrt_pq * r.tau
    for j in range(1, L):
        left_hop = embed_bond(SIGMA_MINUS, SIGMA_PLUS, j, L) - embed_bond(HOLE, NUMBER, j, L)
        right_hop = embed_bond(SIGMA_PLUS, SIGMA_MINUS, j, L) - embed_bond(NUMBER, HOLE, j, L)
        gen = gen - (left_hop.scale(left_coeff) + right_hop.scale(right_coeff))
    n1, nL = embed_site(NUMBER, 1, L), embed_site(NUMBER, L, L)
    gen = gen - (embed_site(SIGMA_MINUS, 1, L) - Id + n1).scale(r.alpha)
    gen = gen - (embed_site(SIGMA_PLUS, 1, L) - n1).scale(r.gamma)
    gen = gen - (embed_site(SIGMA_MINUS, L, L) - Id + nL).scale(r.delta)
    gen = gen - (embed_site(SIGMA_PLUS, L, L) - nL).scale(r.beta)
    return gen


def build_reflected_generator(L: int, rates: RateParameters) -> Operator:
    """ASEP with the roles of particles and holes exchanged.

    Particles jump left at rate ``p`` and right at rate ``q``, exit at the
    left at rate ``alpha`` and enter there at rate ``gamma``.  The right
    boundary carries ``beta``/``delta`` with exchanged roles (closed when both
    vanish).  Built from rates directly, not by conjugation.
    """
    if L < 1:
        raise ValueError("need at least one site")
    r = rates
    dim = 2 ** L
    entries: Dict = {}

    def jump(src: int, dst: int, rate) -> None:
        if rate == 0:
            return
        entries[(dst, src)] = entries.get((dst, src), 0) - rate
        entries[(src, src)] = entries.get((src, src), 0) + rate

    for eta in range(dim):
        for j in range(L - 1):
            a, b = (eta >> j) & 1, (eta >> (j + 1)) & 1
            swapped = eta ^ (0b11 << j)
            if a == 0 and b == 1:
                jump(eta, swapped, r.p)   # particle at j+1 hops left
            elif a == 1 and b == 0:
                jump(eta, swapped, r.q)   # particle at j hops right
        first = eta & 1
        jump(eta, eta ^ 1, r.alpha if first else r.gamma)
        last = (eta >> (L - 1)) & 1
        jump(eta, eta ^ (1 << (L - 1)), r.delta if last else r.beta)
    return Operator(dim, entries)


def build_V(L: int, power: int, tau) -> Operator:
    """Diagonal ``V**power`` with ``V = tau**(-sum_j j n_j)``."""
    return Operator.diagonal([scalar_pow(tau, -power * site_weight(i, L)) for i in range(2 ** L)])


def build_involution(L: int) -> Operator:
    """Particle-hole involution: flips every occupancy bit."""
    if L < 1:
        raise ValueError("need at least one site")
    mask = 2 ** L - 1
    return Operator(2 ** L, {(i ^ mask, i): 1 for i in range(2 ** L)})


def reversible_weights(L: int, rates: RateParameters) -> List:
    """Unnormalized reversible measure ``tau**(2 sum_j j n_j)``.

    Only defined in the duality regime, where the chain is reversible.
    """
    if not rates.in_duality_regime():
        raise ValueError("reversible weights need beta = delta = 0 and alpha/gamma = p/q")
    return build_V(L, -2, rates.tau).diagonal_values()


def detailed_balance_violations(generator: Operator, weights: Sequence) -> List:
    """Pairs ``(eta, eta')`` where ``pi(eta) L[eta', eta] != pi(eta') L[eta, eta']``.

    Exact comparison for exact entries; floats are compared with a relative
    tolerance of 1e-12.
    """
    bad = []
    seen = set()
    for (r, c), v in generator.items():
        if r == c:
            continue
        key = (min(r, c), max(r, c))
        if key in seen:
            continue
        seen.add(key)
        lhs = weights[c] * generator[r, c]
        rhs = weights[r] * generator[c, r]
        if is_exact(lhs) and is_exact(rhs):
            if lhs != rhs:
                bad.append(key)
        elif abs(float(lhs) - float(rhs)) > 1e-12 * max(abs(float(lhs)), abs(float(rhs)), 1.0):
            bad.append(key)
    return bad
