"""Sparse square operators on the 2**L configuration space.

Basis convention (used everywhere in the package): site ``j`` (1-based) is
bit ``j-1`` of the basis index, hole = 0, particle = 1.  Site 1 is therefore
the least significant bit, and ``embed_chain([f1, ..., fL])`` equals
``numpy.kron(fL, ..., f1)``.

Entries may be any scalar supporting ``+``, ``*`` and ``== 0``: exact
:class:`~asepdual.scalar_ring.LaurentScalar`, ``int``/``Fraction``, or
``float``.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from .scalar_ring import LaurentScalar, evaluate_scalar

Rows = Dict[int, Dict[int, object]]


class Operator:
    """Immutable sparse square matrix with deterministic row-major iteration."""

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, entries: Dict[Tuple[int, int], object] | None = None):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        rows: Rows = {}
        for (r, c), v in sorted((entries or {}).items()):
            if not (0 <= r < dim and 0 <= c < dim):
                raise ValueError(f"entry ({r}, {c}) outside a {dim}x{dim} operator")
            if v == 0:
                continue
            rows.setdefault(r, {})[c] = v
        self.dim = dim
        self._rows = rows

    @classmethod
    def _from_rows(cls, dim: int, rows: Rows) -> "Operator":
        # rows must be zero-free; keys are sorted here for reproducible output
        obj = cls.__new__(cls)
        obj.dim = dim
        obj._rows = {r: dict(sorted(rows[r].items())) for r in sorted(rows) if rows[r]}
        return obj

    @classmethod
    def identity(cls, dim: int, one=1) -> "Operator":
        return cls._from_rows(dim, {i: {i: one} for i in range(dim)})

    @classmethod
    def zero(cls, dim: int) -> "Operator":
        return cls._from_rows(dim, {})

    @classmethod
    def diagonal(cls, values: Sequence) -> "Operator":
        return cls(len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "Operator":
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ValueError("matrix must be square")
        return cls(dim, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)})

    # access -----------------------------------------------------------------

    def __getitem__(self, key: Tuple[int, int]):
        r, c = key
        if not (0 <= r < self.dim and 0 <= c < self.dim):
            raise IndexError(key)
        return self._rows.get(r, {}).get(c, 0)

    def items(self) -> Iterator[Tuple[Tuple[int, int], object]]:
        for r, row in self._rows.items():
            for c, v in row.items():
                yield (r, c), v

    def row(self, r: int) -> Dict[int, object]:
        return dict(self._rows.get(r, {}))

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def diagonal_values(self) -> List:
        return [self[i, i] for i in range(self.dim)]

    def to_dense(self) -> List[List]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for (r, c), v in self.items():
            out[r][c] = v
        return out

    def to_numpy(self, t0: float | None = None) -> np.ndarray:
        """Dense float array; exact entries are evaluated at ``t = t0``."""
        out = np.zeros((self.dim, self.dim))
        for (r, c), v in self.items():
            if isinstance(v, LaurentScalar):
                if t0 is None:
                    if not v.is_constant():
                        raise ValueError("symbolic entries need an evaluation point t0")
                    v = v.constant_value()
                else:
                    v = evaluate_scalar(v, t0)
            out[r, c] = float(v)
        return out

    def evaluate(self, t0: float) -> "Operator":
        return Operator._from_rows(
            self.dim,
            {r: {c: evaluate_scalar(v, t0) for c, v in row.items()} for r, row in self._rows.items()},
        )

    def map(self, fn) -> "Operator":
        return Operator(self.dim, {k: fn(v) for k, v in self.items()})

    # algebra ----------------------------------------------------------------

    def _check_dim(self, other: "Operator") -> None:
        if not isinstance(other, Operator):
            raise TypeError(f"expected Operator, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._check_dim(other)
        rows: Rows = {r: dict(row) for r, row in self._rows.items()}
        for r, orow in other._rows.items():
            row = rows.setdefault(r, {})
            for c, v in orow.items():
                s = row[c] + v if c in row else v
                if s == 0:
                    row.pop(c, None)
                else:
                    row[c] = s
        return Operator._from_rows(self.dim, rows)

    def __neg__(self) -> "Operator":
        return Operator._from_rows(self.dim, {r: {c: -v for c, v in row.items()} for r, row in self._rows.items()})

    def __sub__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "Operator":
        if s == 0:
            return Operator.zero(self.dim)
        rows: Rows = {}
        for r, row in self._rows.items():
            new = {c: v * s for c, v in row.items()}
            rows[r] = {c: v for c, v in new.items() if v != 0}
        return Operator._from_rows(self.dim, rows)

    def __mul__(self, s) -> "Operator":
        if isinstance(s, Operator):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        self._check_dim(other)
        orows = other._rows
        rows: Rows = {}
        for r, row in self._rows.items():
            acc: Dict[int, object] = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for c, b in brow.items():
                    p = a * b
                    acc[c] = acc[c] + p if c in acc else p
            acc = {c: v for c, v in acc.items() if v != 0}
            if acc:
                rows[r] = acc
        return Operator._from_rows(self.dim, rows)

    def __pow__(self, n: int) -> "Operator":
        if not isinstance(n, int) or n < 0:
            raise ValueError("operator powers need a nonnegative integer exponent")
        out = Operator.identity(self.dim)
        for _ in range(n):
            out = out @ self
        return out

    @property
    def T(self) -> "Operator":
        rows: Rows = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return Operator._from_rows(self.dim, rows)

    def transpose(self) -> "Operator":
        return self.T

    # comparison -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        if self.dim != other.dim:
            return False
        return self._rows == other._rows

    def __hash__(self):
        return hash((self.dim, tuple((k, v) for k, v in self.items())))

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim}, nnz={self.nnz})"


def site_matrix(rows: Sequence[Sequence]) -> Operator:
    """A 2x2 operator in the (hole, particle) basis."""
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("site matrices are 2x2")
    return Operator.from_dense(rows)


# one-site operators; integer entries so they live in every scalar ring
IDENTITY = site_matrix([[1, 0], [0, 1]])
SIGMA_X = site_matrix([[0, 1], [1, 0]])
SIGMA_Z = site_matrix([[1, 0], [0, -1]])
SIGMA_PLUS = site_matrix([[0, 1], [0, 0]])   # annihilates a particle
SIGMA_MINUS = site_matrix([[0, 0], [1, 0]])  # creates a particle
NUMBER = site_matrix([[0, 0], [0, 1]])
HOLE = site_matrix([[1, 0], [0, 0]])


def embed_chain(factors: Sequence[Operator]) -> Operator:
    """Tensor product with ``factors[j-1]`` acting on site ``j``."""
    if not factors:
        raise ValueError("embed_chain needs at least one site factor")
    for f in factors:
        if f.dim != 2:
            raise ValueError("every factor must be a 2x2 site matrix")
    entries: Dict[Tuple[int, int], object] = {(0, 0): 1}
    for j, f in enumerate(factors):
        site = list(f.items())
        nxt: Dict[Tuple[int, int], object] = {}
        for (r, c), v in entries.items():
            for (a, b), w in site:
                nxt[(r | (a << j), c | (b << j))] = v * w
        entries = nxt
    return Operator(2 ** len(factors), entries)


def embed_site(op: Operator, site: int, L: int) -> Operator:
    """``op`` acting on ``site`` (1-based) with identities elsewhere."""
    if not 1 <= site <= L:
        raise ValueError(f"site {site} outside 1..{L}")
    return embed_chain([op if j == site else IDENTITY for j in range(1, L + 1)])


def embed_bond(op1: Operator, op2: Operator, site: int, L: int) -> Operator:
    """``op1`` on ``site`` and ``op2`` on ``site + 1``."""
    if not 1 <= site < L:
        raise ValueError(f"bond ({site}, {site + 1}) outside 1..{L}")
    factors = [IDENTITY] * L
    factors[site - 1] = op1
    factors[site] = op2
    return embed_chain(factors)


def operator_algebra(kind: str, A: Operator, B=None) -> Operator:
    if kind == "add":
        return A + B
    if kind == "mul":
        return A @ B
    if kind == "scale":
        return A.scale(B)
    if kind == "transpose":
        return A.T
    raise ValueError(f"unknown operation {kind!r}")


def commutator(A: Operator, B: Operator) -> Operator:
    return A @ B - B @ A


def max_abs_entry(A: Operator) -> float:
    return max((abs(float(v)) for _, v in A.items()), default=0.0)


def identity_multiple_test(A: Operator, tol: float = 0.0):
    """Decide whether ``A`` is a scalar multiple of the identity.

    Returns ``(is_multiple, constant, max_offdiag_residual)``.  With the
    default ``tol=0`` the test is exact; numeric callers pass a tolerance,
    which bounds both off-diagonal magnitudes and the diagonal spread.
    """
    offdiag = [v for (r, c), v in A.items() if r != c]
    diag = A.diagonal_values()
    if tol == 0:
        if offdiag or any(d != diag[0] for d in diag):
            return False, None, offdiag[0] if offdiag else 0
        return True, diag[0], 0
    off = max((abs(float(v)) for v in offdiag), default=0.0)
    spread = max(float(d) for d in diag) - min(float(d) for d in diag)
    ok = off <= tol and spread <= tol
    return ok, (sum(float(d) for d in diag) / len(diag) if ok else None), max(off, spread)


def first_nonzero(A: Operator):
    """First nonzero entry in row-major order, or 0; the exact-mode residual."""
    for _, v in A.items():
        return v
    return 0


def kron_numpy(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Dense reference Kronecker chain under the package's site ordering."""
    out = np.ones((1, 1))
    for f in factors:
        out = np.kron(f, out)
    return out
