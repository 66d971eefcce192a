"""Finite fields GF(p) and GF(2^m) with exact dense linear algebra.

Field elements are plain integers: residues ``0..p-1`` for prime fields and
bit-packed polynomials (bit ``i`` = coefficient of ``x^i``) for binary
extension fields.  Matrices are ``numpy`` int64 arrays of such integers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exceptions import DimensionError, FieldError

__all__ = [
    "GF",
    "field_arith",
    "is_prime",
    "prime_power",
    "least_prime_power_above",
    "rref",
    "rank",
    "trivial_intersection",
    "solve_left",
    "in_row_space",
]

MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int):
    """Return ``(p, m)`` with ``q == p**m``, or ``None`` if q is not a prime power."""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    m = 0
    while q % p == 0:
        q //= p
        m += 1
    return (p, m) if q == 1 else None


def least_prime_power_above(n: int) -> int:
    """Smallest prime power strictly greater than ``n``."""
    q = max(n + 1, 2)
    while prime_power(q) is None:
        q += 1
    return q


def _gf2_polymod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _gf2_irreducible(f: int) -> bool:
    deg = f.bit_length() - 1
    for d in range(1, deg // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _gf2_polymod(f, g) == 0:
                return False
    return True


@lru_cache(maxsize=None)
def _smallest_binary_modulus(m: int) -> int:
    for f in range((1 << m) + 1, 1 << (m + 1), 2):
        if _gf2_irreducible(f):
            return f
    raise FieldError(f"no irreducible polynomial of degree {m}")  # pragma: no cover


class GF:
    """Arithmetic context for the field of order ``q``.

    Supports prime ``q < 2**16`` and ``q = 2**m`` with ``m <= 16``.  Extension
    moduli are the lexicographically smallest irreducible polynomials, so
    ``GF(4)`` uses ``x^2 + x + 1`` and ``GF(32)`` uses ``x^5 + x^2 + 1``.

    All operations accept Python ints or integer arrays and broadcast.
    """

    def __init__(self, order: int):
        pm = prime_power(int(order))
        if pm is None:
            raise FieldError(f"{order} is not a prime power")
        p, m = pm
        if m > 1 and p != 2:
            raise FieldError(f"GF({order}): only prime fields and GF(2^m) are supported")
        if order > MAX_ORDER:
            raise FieldError(f"GF({order}): order above {MAX_ORDER} is not supported")
        self.order = int(order)
        self.characteristic = p
        self.degree = m
        if m == 1:
            self.modulus = (0, 1)  # x, i.e. plain residues
            self._poly = None
            self._inv = None
        else:
            self._poly = _smallest_binary_modulus(m)
            self.modulus = tuple((self._poly >> i) & 1 for i in range(m + 1))
            self._build_tables()

    def _build_tables(self):
        q, f = self.order, self._poly
        for g in range(2, q):
            exp = np.empty(2 * (q - 1), dtype=np.int64)
            a = 1
            ok = True
            for i in range(q - 1):
                if i and a == 1:
                    ok = False
                    break
                exp[i] = a
                a = _gf2_polymod(_clmul(a, g), f)
            if ok and a == 1:
                break
        exp[q - 1 :] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        self._exp, self._log = exp, log

    # -- scalar / elementwise arithmetic ----------------------------------
    def add(self, a, b):
        if self.characteristic == 2:
            return np.bitwise_xor(a, b)
        return np.add(a, b) % self.order

    def sub(self, a, b):
        if self.characteristic == 2:
            return np.bitwise_xor(a, b)
        return np.subtract(a, b) % self.order

    def neg(self, a):
        if self.characteristic == 2:
            return a
        return np.negative(a) % self.order

    def mul(self, a, b):
        if self.degree == 1:
            return np.multiply(a, b) % self.order
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.degree == 1:
            if self._inv is None:
                p = self.order
                self._inv = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
            return self._inv[a]
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        result = np.ones_like(np.asarray(a, dtype=np.int64))
        base = np.asarray(a, dtype=np.int64)
        if n < 0:
            base, n = self.inv(base), -n
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def random(self, size, rng):
        return rng.integers(0, self.order, size=size, dtype=np.int64)

    # -- matrix helpers ----------------------------------------------------
    def asarray(self, M) -> np.ndarray:
        M = np.array(M, dtype=np.int64)
        if M.size and (M.min() < 0 or M.max() >= self.order):
            raise FieldError(f"entries outside GF({self.order})")
        return M

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
        if self.degree == 1:
            return (A @ B) % self.order
        out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        for k in range(B.shape[0]):
            out ^= self.mul(A[..., k, None], B[k])
        return out

    def __eq__(self, other):
        return isinstance(other, GF) and other.order == self.order

    def __hash__(self):
        return hash(("GF", self.order))

    def __repr__(self):
        return f"GF({self.order})"

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "characteristic": self.characteristic,
            "degree": self.degree,
            "modulus": list(self.modulus),
        }


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


@lru_cache(maxsize=None)
def field_arith(q: int) -> GF:
    """Shared arithmetic context for GF(q)."""
    return GF(q)


def rref(F: GF, M):
    """Reduced row echelon form.

    Pivots are taken at the first nonzero entry in column order, scanning rows
    top-down, so the result is deterministic.

    Returns
    -------
    R : ndarray
        Same shape as ``M``; nonzero rows come first.
    pivots : list of int
        Pivot column of each nonzero row of ``R``.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise DimensionError("rref expects a 2-D matrix")
    n_rows, n_cols = R.shape
    pivots = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        nz = np.nonzero(R[row:, col])[0]
        if not nz.size:
            continue
        k = row + nz[0]
        if k != row:
            R[[row, k]] = R[[k, row]]
        R[row] = F.mul(R[row], F.inv(R[row, col]))
        others = np.nonzero(R[:, col])[0]
        for i in others:
            if i != row:
                R[i] = F.sub(R[i], F.mul(R[i, col], R[row]))
        pivots.append(col)
        row += 1
    return R, pivots


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def trivial_intersection(F: GF, A, B) -> bool:
    """True iff the row spaces of ``A`` and ``B`` meet only in the zero vector."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[1]:
        raise DimensionError(f"column counts differ: {A.shape} vs {B.shape}")
    return rank(F, A) + rank(F, B) == rank(F, np.vstack([A, B]))


def solve_left(F: GF, M, y):
    """One solution ``x`` of ``x @ M == y``, or ``None`` if there is none."""
    M = np.asarray(M, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    n_rows, n_cols = M.shape
    if y.shape != (n_cols,):
        raise DimensionError(f"right-hand side has shape {y.shape}, expected ({n_cols},)")
    if n_rows == 0:
        return np.zeros(0, dtype=np.int64) if not y.any() else None
    # Row-reduce [M^T | y]; the system is M^T x^T = y^T.
    aug = np.hstack([M.T, y[:, None]])
    R, pivots = rref(F, aug)
    if n_rows in pivots:
        return None
    x = np.zeros(n_rows, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, n_rows]
    return x


def in_row_space(F: GF, M, y) -> bool:
    return solve_left(F, M, y) is not None
