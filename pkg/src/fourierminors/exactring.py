"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are rational-coefficient polynomials of degree < phi(N) in the
power basis, reduced modulo the N-th cyclotomic polynomial.  Working
modulo the cyclotomic polynomial (rather than x^N - 1) keeps the
representation canonical: an element is zero exactly when every
coefficient is zero, with no tolerance anywhere.

The module also exposes integer-vector kernels (suffix ``_ivec``) on the
field object.  They operate on plain tuples of Python ints and back the
fraction-free determinant code, which never touches Fraction arithmetic.
"""

import math
from fractions import Fraction
from pathlib import Path

from .caching import JsonCache, default_cache_dir
from .errors import FieldMismatchError, InvalidInputError, ResourceLimitError
from .numbertheory import euler_phi

DEFAULT_CONDUCTOR_BOUND = 128

_cyclo_memo: dict[int, tuple[int, ...]] = {}


def _poly_div_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division of integer polynomials, constant term first.
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q, r = divmod(c, den[dn])
        if r != 0:
            raise ArithmeticError("inexact polynomial division")
        out[i - dn] = q
        for j in range(dn + 1):
            num[i - dn + j] -= q * den[j]
    if any(num[: dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


def cyclotomic_polynomial(N: int, cache: JsonCache | None = None,
                          conductor_bound: int = DEFAULT_CONDUCTOR_BOUND) -> tuple[int, ...]:
    """Coefficients of the N-th cyclotomic polynomial, constant term first.

    Computed by dividing x^N - 1 by the cyclotomic polynomials of the
    proper divisors of N.  Results are memoized in-process and, when a
    cache is supplied, persisted as JSON keyed by N.
    """
    if N < 1:
        raise InvalidInputError("conductor must be a positive integer")
    if N > conductor_bound:
        raise ResourceLimitError(
            f"conductor {N} exceeds the configured bound {conductor_bound}")
    if N in _cyclo_memo:
        return _cyclo_memo[N]
    if cache is not None:
        hit = cache.get(str(N))
        if hit is not None:
            poly = tuple(int(c) for c in hit)
            _cyclo_memo[N] = poly
            return poly
    poly = [-1] + [0] * (N - 1) + [1]  # x^N - 1
    for d in range(1, N):
        if N % d == 0:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d, cache, conductor_bound))
    result = tuple(poly)
    _cyclo_memo[N] = result
    if cache is not None:
        cache.put(str(N), list(result))
    return result


def open_cyclotomic_cache(cache_dir=None) -> JsonCache:
    base = Path(default_cache_dir() if cache_dir is None else cache_dir)
    return JsonCache(base / "cyclotomic_polynomials.json")


class CycField:
    """The field Q(zeta_N), immutable and shareable across workers."""

    def __init__(self, N: int, cache: JsonCache | None = None,
                 conductor_bound: int = DEFAULT_CONDUCTOR_BOUND):
        self.N = N
        self.modulus = cyclotomic_polynomial(N, cache, conductor_bound)
        self.degree = len(self.modulus) - 1
        assert self.degree == euler_phi(N)
        # zeta^k in the power basis for every k mod N (integer vectors).
        mono = []
        cur = [1] + [0] * (self.degree - 1)
        for _ in range(N):
            mono.append(tuple(cur))
            top = cur[self.degree - 1]
            cur = [0] + cur[: self.degree - 1]
            if top:
                for j in range(self.degree):
                    cur[j] -= top * self.modulus[j]
        self._monomials = tuple(mono)
        self._units = tuple(u for u in range(1, N) if math.gcd(u, N) == 1) or (0,)
        self._zero = CycElem(self, (Fraction(0),) * self.degree)
        self._one = CycElem(self, tuple(Fraction(c) for c in self._monomials[0]))

    def __repr__(self):
        return f"CycField(N={self.N})"

    def __eq__(self, other):
        return isinstance(other, CycField) and other.N == self.N

    def __hash__(self):
        return hash(("CycField", self.N))

    def zero(self) -> "CycElem":
        return self._zero

    def one(self) -> "CycElem":
        return self._one

    def from_rational(self, value) -> "CycElem":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(value)
        return CycElem(self, tuple(coeffs))

    def element(self, coeffs) -> "CycElem":
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.degree:
            raise InvalidInputError(
                f"expected {self.degree} coefficients, got {len(coeffs)}")
        return CycElem(self, coeffs)

    def root_power(self, k: int) -> "CycElem":
        """Canonical representative of zeta_N^k (k taken mod N)."""
        return CycElem(self, tuple(Fraction(c) for c in self._monomials[k % self.N]))

    def root_power_ivec(self, k: int) -> tuple[int, ...]:
        return self._monomials[k % self.N]

    # --- integer-vector kernels -------------------------------------------

    def mul_ivec(self, a, b) -> tuple[int, ...]:
        d = self.degree
        conv = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                for j in range(d):
                    conv[k - d + j] -= c * mod[j]
        return tuple(conv[:d])

    def galois_ivec(self, a, u: int) -> tuple[int, ...]:
        """Image of a under zeta -> zeta^u (u a unit mod N)."""
        d = self.degree
        out = [0] * d
        for i, x in enumerate(a):
            if x:
                m = self._monomials[(i * u) % self.N]
                for j in range(d):
                    out[j] += x * m[j]
        return tuple(out)

    def conj_product_norm_ivec(self, a) -> tuple[tuple[int, ...], int]:
        """(product of the nontrivial conjugates of a, integer field norm).

        For nonzero integral a this gives 1/a = conj_product / norm, which
        is how the fraction-free determinant performs its exact divisions.
        """
        if self.degree == 1:
            return (1,), a[0]
        prod = None
        for u in self._units[1:]:
            g = self.galois_ivec(a, u)
            prod = g if prod is None else self.mul_ivec(prod, g)
        norm_vec = self.mul_ivec(prod, a)
        if any(norm_vec[1:]):
            raise ArithmeticError("field norm is not rational; conjugate set broken")
        return prod, norm_vec[0]

    # --- Fraction-vector kernels (used by CycElem) ------------------------

    def _mul_frac(self, a, b):
        d = self.degree
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        mod = self.modulus
        for k in range(2 * d - 2, d - 1, -1):
            c = conv[k]
            if c:
                conv[k] = Fraction(0)
                for j in range(d):
                    conv[k - d + j] -= c * mod[j]
        return tuple(conv[:d])

    def _galois_frac(self, a, u: int):
        d = self.degree
        out = [Fraction(0)] * d
        for i, x in enumerate(a):
            if x:
                m = self._monomials[(i * u) % self.N]
                for j in range(d):
                    out[j] += x * m[j]
        return tuple(out)


class CycElem:
    """An element of Q(zeta_N); immutable, all operations pure and exact."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other) -> "CycElem":
        if not isinstance(other, CycElem):
            if isinstance(other, (int, Fraction)):
                return self.field.from_rational(other)
            raise TypeError(f"cannot combine CycElem with {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"elements of Q(zeta_{self.field.N}) and Q(zeta_{other.field.N})")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycElem(self.field, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return CycElem(self.field, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return CycElem(self.field, tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycElem(self.field, tuple(x * other for x in self.coeffs))
        other = self._check(other)
        return CycElem(self.field, self.field._mul_frac(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycElem(self.field, tuple(x / other for x in self.coeffs))
        other = self._check(other)
        return self * other.invert()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = self.field.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return (isinstance(other, CycElem) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.field.N, self.coeffs))

    def __repr__(self):
        return f"CycElem(N={self.field.N}, {list(self.coeffs)})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_integral(self) -> bool:
        """True when the element lies in Z[zeta_N] (all denominators one)."""
        return all(c.denominator == 1 for c in self.coeffs)

    def invert(self) -> "CycElem":
        """Multiplicative inverse via conjugate product over field norm."""
        if self.is_zero():
            raise ZeroDivisionError("invert(0) in a cyclotomic field")
        field = self.field
        if field.degree == 1:
            return CycElem(field, (Fraction(1) / self.coeffs[0],))
        prod = None
        for u in field._units[1:]:
            g = field._galois_frac(self.coeffs, u)
            prod = g if prod is None else field._mul_frac(prod, g)
        norm_vec = field._mul_frac(prod, self.coeffs)
        assert all(c == 0 for c in norm_vec[1:])
        norm = norm_vec[0]
        return CycElem(field, tuple(c / norm for c in prod))

    def conjugate(self) -> "CycElem":
        """Complex conjugation, zeta -> zeta^(N-1)."""
        if self.field.N <= 2:
            return self
        return CycElem(self.field, self.field._galois_frac(self.coeffs, self.field.N - 1))

    def ivec(self) -> tuple[int, ...]:
        """Integer coefficient vector; requires an integral element."""
        if not self.is_integral():
            raise InvalidInputError("element is not in Z[zeta_N]")
        return tuple(int(c) for c in self.coeffs)

    def to_coeff_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_coeff_strings(cls, field: CycField, strings) -> "CycElem":
        return field.element([Fraction(s) for s in strings])


def evaluate_poly(coeffs, point: CycElem) -> CycElem:
    """Horner evaluation of an integer-coefficient polynomial at a CycElem."""
    acc = point.field.zero()
    for c in reversed(list(coeffs)):
        acc = acc * point + point.field.from_rational(c)
    return acc
