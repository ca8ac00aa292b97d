"""Exact determinants over Z, Q(zeta_N), and F_{q^k}.

Three routes, all exact:

* det_integer: fraction-free Bareiss elimination on Python ints.
* det_field: Gaussian elimination with first-nonzero pivoting over any
  field whose elements support +, -, *, invert and is_zero.
* det_modular_filtered: the image of an integral cyclotomic determinant
  in F_ell for a prime ell = 1 (mod N).  A nonzero residue certifies the
  exact determinant nonzero (ring homomorphism); a zero residue proves
  nothing and the caller must fall back to an exact route.

The module also holds the fraction-free Bareiss elimination over
Z[zeta_N] (exact divisions done via conjugate products and integer
norms) that the scanners use for exact fallbacks, plus the vectorized
batch elimination mod ell that powers the big scans.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInputError
from .exactring import CycElem, CycField
from .numbertheory import least_prime_congruent_one


class DetMethod(Enum):
    FRACTION_FREE_INTEGER = "fraction_free_integer"
    GAUSS_FIELD = "gauss_field"
    MODULAR_FILTERED = "modular_filtered"


@dataclass(frozen=True)
class DetResult:
    value: object
    pivot_count: int
    method: DetMethod


def det_integer(matrix) -> int:
    """Exact integer determinant (Bareiss); entries must be Python ints."""
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise InvalidInputError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_integer_result(matrix) -> DetResult:
    return DetResult(det_integer(matrix), len(matrix), DetMethod.FRACTION_FREE_INTEGER)


def det_field(matrix) -> object:
    """Exact field determinant by Gaussian elimination, first-nonzero pivot."""
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise InvalidInputError("matrix must be square")
    if n == 0:
        raise InvalidInputError("empty matrix has no field determinant")
    sample = m[0][0]
    field = sample.field
    det = field.one()
    for c in range(n):
        pivot_row = None
        for r in range(c, n):
            if not m[r][c].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            return field.zero()
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        pivot = m[c][c]
        det = det * pivot
        inv = pivot.invert()
        for r in range(c + 1, n):
            if not m[r][c].is_zero():
                factor = m[r][c] * inv
                row_r = m[r]
                row_c = m[c]
                for j in range(c, n):
                    row_r[j] = row_r[j] - factor * row_c[j]
    return det


def det_field_result(matrix) -> DetResult:
    value = det_field(matrix)
    pivots = 0 if value.is_zero() else len(matrix)
    return DetResult(value, pivots, DetMethod.GAUSS_FIELD)


def det_cyclotomic_integral(matrix, field: CycField):
    """Fraction-free Bareiss over Z[zeta_N] on integer coefficient vectors.

    matrix entries are integer coefficient tuples in the power basis.
    Exact division by the previous pivot is performed by multiplying with
    the pivot's conjugate product and dividing coefficients by its integer
    norm; any inexact division would be a soundness bug and raises.
    Returns the determinant as an integer coefficient tuple.
    """
    n = len(matrix)
    zero = (0,) * field.degree
    if n == 0:
        raise InvalidInputError("empty matrix")
    m = [list(row) for row in matrix]
    sign = 1
    prev_conj = None
    prev_norm = 1
    mul = field.mul_ivec
    for k in range(n - 1):
        if m[k][k] == zero:
            for i in range(k + 1, n):
                if m[i][k] != zero:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                t = [x - y for x, y in zip(mul(pivot, row_i[j]), mul(lead, row_k[j]))]
                if prev_conj is not None:
                    t = mul(tuple(t), prev_conj)
                    reduced = []
                    for x in t:
                        q, r = divmod(x, prev_norm)
                        if r != 0:
                            raise ArithmeticError("inexact Bareiss division")
                        reduced.append(q)
                    t = reduced
                row_i[j] = tuple(t)
        prev_conj, prev_norm = field.conj_product_norm_ivec(pivot)
    final = m[n - 1][n - 1]
    return tuple(sign * x for x in final)


# --- modular filtering -------------------------------------------------------


class ModularFilter:
    """Homomorphic image Z[zeta_N] -> F_ell with ell = 1 (mod N).

    zeta_N is sent to the least element of multiplicative order N, which
    is a root of the cyclotomic polynomial mod ell, so the map is a ring
    homomorphism and nonzero residues certify nonzero preimages.
    """

    def __init__(self, N: int, ell: int | None = None, prime_floor: int = 10 ** 4):
        if ell is None:
            ell = least_prime_congruent_one(N, prime_floor)
        if (ell - 1) % N != 0:
            raise InvalidInputError(f"{ell} is not congruent to 1 mod {N}")
        self.N = N
        self.ell = ell
        self.root = self._least_order_N_element()
        self.root_powers = [pow(self.root, k, ell) for k in range(N)]

    def _least_order_N_element(self) -> int:
        N, ell = self.N, self.ell
        divisors = sorted(
            d for d in range(1, N + 1) if N % d == 0 and d < N)
        for w in range(1, ell):
            if pow(w, N, ell) != 1:
                continue
            if all(pow(w, d, ell) != 1 for d in divisors):
                return w
        raise ArithmeticError("no element of the required order")  # unreachable

    def image_of_ivec(self, ivec) -> int:
        ell = self.ell
        acc = 0
        for power, coeff in zip(self.root_powers, ivec):
            if coeff:
                acc += coeff * power
        return acc % ell

    def image_of_element(self, value: CycElem) -> int:
        return self.image_of_ivec(value.ivec())

    def residue_matrix(self, matrix_ivecs) -> np.ndarray:
        return np.array([[self.image_of_ivec(v) for v in row] for row in matrix_ivecs],
                        dtype=np.int64)


def det_modular_filtered(matrix, ell: int | None = None,
                         prime_floor: int = 10 ** 4) -> tuple[bool, int]:
    """(nonzero_certified, residue) for an integral cyclotomic matrix.

    ell must be congruent to 1 mod N; when omitted the least such prime
    above prime_floor is chosen.  nonzero_certified True proves the exact
    determinant nonzero; False (residue 0) is inconclusive.
    """
    sample = matrix[0][0]
    if not isinstance(sample, CycElem):
        raise InvalidInputError("modular filtering expects cyclotomic entries")
    field = sample.field
    filt = ModularFilter(field.N, ell, prime_floor)
    ivecs = [[v.ivec() for v in row] for row in matrix]
    residues = filt.residue_matrix(ivecs)
    residue = _det_mod(residues, filt.ell)
    return residue != 0, residue


def det_modular_result(matrix, ell: int | None = None) -> DetResult:
    certified, residue = det_modular_filtered(matrix, ell)
    return DetResult(residue, len(matrix) if certified else 0, DetMethod.MODULAR_FILTERED)


def _det_mod(matrix: np.ndarray, ell: int) -> int:
    m = [[int(x) % ell for x in row] for row in matrix]
    n = len(m)
    det = 1
    for c in range(n):
        pivot_row = next((r for r in range(c, n) if m[r][c]), None)
        if pivot_row is None:
            return 0
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = ell - det
        pivot = m[c][c]
        det = det * pivot % ell
        inv = pow(pivot, ell - 2, ell)
        for r in range(c + 1, n):
            if m[r][c]:
                factor = m[r][c] * inv % ell
                m[r] = [(x - factor * y) % ell for x, y in zip(m[r], m[c])]
    return det


def inverse_table(ell: int) -> np.ndarray:
    """inv[x] = x^(-1) mod ell for x in 1..ell-1 (inv[0] = 0)."""
    table = np.zeros(ell, dtype=np.int64)
    table[1:] = np.array([pow(x, ell - 2, ell) for x in range(1, ell)], dtype=np.int64)
    return table


def batch_nonsingular_mod(subs: np.ndarray, ell: int, inv: np.ndarray) -> np.ndarray:
    """Boolean vector: which of the stacked k x k matrices are nonsingular mod ell.

    subs has shape (batch, k, k) with entries already reduced mod ell.
    Gaussian elimination runs across the whole batch at once; matrices
    that lose a pivot are marked singular and their remaining arithmetic
    is garbage that never escapes the mask.
    """
    a = np.array(subs, dtype=np.int64)
    batch, k, _ = a.shape
    alive = np.ones(batch, dtype=bool)
    rows = np.arange(batch)
    for i in range(k):
        col = a[:, i:, i]
        nz = col != 0
        alive &= nz.any(axis=1)
        rel = np.argmax(nz, axis=1)
        src = i + rel
        need = src != i
        if need.any():
            picked = np.nonzero(need)[0]
            tmp = a[picked, i, :].copy()
            a[picked, i, :] = a[picked, src[need], :]
            a[picked, src[need], :] = tmp
        if i + 1 < k:
            piv_inv = inv[a[:, i, i]]
            factor = (a[:, i + 1:, i] * piv_inv[:, None]) % ell
            a[:, i + 1:, i:] = (a[:, i + 1:, i:]
                                - factor[:, :, None] * a[:, i, i:][:, None, :]) % ell
    return alive


__all__ = [
    "DetMethod", "DetResult", "det_integer", "det_integer_result",
    "det_field", "det_field_result", "det_cyclotomic_integral",
    "ModularFilter", "det_modular_filtered", "det_modular_result",
    "inverse_table", "batch_nonsingular_mod",
]
