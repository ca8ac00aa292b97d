"""Arithmetic in F_{q^k} for odd prime q.

A field is a monic irreducible modulus of degree k over F_q; elements are
coefficient tuples of length k (constant term first).  The modulus is the
lexicographically least irreducible with the constant term compared
first, so field construction is reproducible and cacheable.

Beyond the four operations the module provides multiplicative orders,
deterministic primitive roots of unity, and the root-multiplicity versus
coefficient-support bound checker used by the certification pipeline.
"""

import itertools
from dataclasses import dataclass
from pathlib import Path

from .caching import JsonCache, default_cache_dir
from .errors import FieldMismatchError, InvalidInputError
from .numbertheory import factorize, is_prime

# --- dense polynomial helpers over F_q (coefficient lists, constant first) --


def _ptrim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, q: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return _ptrim(out)


def _pdivmod(a, b, q: int):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], q - 2, q)
    quo = [0] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv % q
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % q
    return _ptrim(quo), _ptrim(a[:db] if db else [0])


def _pgcd(a, b, q: int) -> list[int]:
    a, b = list(a), list(b)
    while b != [0]:
        _, r = _pdivmod(a, b, q)
        a, b = b, r
    # monic normalization
    inv = pow(a[-1], q - 2, q)
    return [c * inv % q for c in a]


def _ppow_x_q(t, modulus, q: int) -> list[int]:
    # t(x)^q mod modulus via square-and-multiply on the exponent q.
    result = [1]
    base = list(t)
    e = q
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, q), modulus, q)[1]
        base = _pdivmod(_pmul(base, base, q), modulus, q)[1]
        e >>= 1
    return result


def _is_irreducible(modulus, q: int) -> bool:
    """Standard criterion: x^(q^k) = x mod f and gcd(x^(q^i) - x, f) = 1
    for every i up to k/2."""
    k = len(modulus) - 1
    if k == 1:
        return True
    x = [0, 1]
    t = list(x)
    for i in range(1, k + 1):
        t = _ppow_x_q(t, modulus, q)  # now t = x^(q^i) mod f
        if i <= k // 2:
            diff = [(u - v) % q for u, v in itertools.zip_longest(t, x, fillvalue=0)]
            diff = _ptrim(diff)
            if diff != [0] and _pgcd(modulus, diff, q) != [1]:
                return False
    return t == x


def find_irreducible(q: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_q.

    Ordering compares the coefficient tuple with the constant term most
    significant; for k = 1 this yields the polynomial x.
    """
    for tail in itertools.product(range(q), repeat=k):
        candidate = list(tail) + [1]
        if _is_irreducible(candidate, q):
            return tuple(candidate)
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


def open_irreducible_cache(cache_dir=None) -> JsonCache:
    base = Path(default_cache_dir() if cache_dir is None else cache_dir)
    return JsonCache(base / "irreducible_polynomials.json")


class FqField:
    """F_{q^k} for odd prime q; immutable, shareable, all operations pure."""

    def __init__(self, q: int, k: int = 1, cache: JsonCache | None = None):
        if not is_prime(q):
            raise InvalidInputError(f"{q} is not prime")
        if q == 2:
            raise InvalidInputError("characteristic 2 is out of scope")
        if k < 1:
            raise InvalidInputError("extension degree must be positive")
        self.q = q
        self.k = k
        self.order = q ** k
        modulus = None
        key = f"{q},{k}"
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                modulus = tuple(int(c) for c in hit)
        if modulus is None:
            modulus = find_irreducible(q, k)
            if cache is not None:
                cache.put(key, list(modulus))
        self.modulus = modulus
        self._zero = FqElem(self, (0,) * k)
        self._one = FqElem(self, (1,) + (0,) * (k - 1))

    def __repr__(self):
        return f"FqField(q={self.q}, k={self.k})"

    def __eq__(self, other):
        return (isinstance(other, FqField) and other.q == self.q and other.k == self.k
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("FqField", self.q, self.k))

    def zero(self) -> "FqElem":
        return self._zero

    def one(self) -> "FqElem":
        return self._one

    def element(self, coeffs) -> "FqElem":
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise InvalidInputError(f"at most {self.k} coefficients expected")
        coeffs += [0] * (self.k - len(coeffs))
        return FqElem(self, tuple(c % self.q for c in coeffs))

    def from_int(self, value: int) -> "FqElem":
        return self.element([value])

    def element_at_index(self, index: int) -> "FqElem":
        """The index-th element in canonical order (base-q digit expansion,
        constant coefficient least significant)."""
        coeffs = []
        for _ in range(self.k):
            coeffs.append(index % self.q)
            index //= self.q
        return FqElem(self, tuple(coeffs))

    def elements(self):
        for index in range(self.order):
            yield self.element_at_index(index)


class FqElem:
    """An element of F_{q^k}; coefficient tuple in [0, q)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other) -> "FqElem":
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, FqElem):
            raise TypeError(f"cannot combine FqElem with {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError("elements of different finite fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        q = self.field.q
        return FqElem(self.field, tuple((x + y) % q for x, y in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        q = self.field.q
        return FqElem(self.field, tuple((x - y) % q for x, y in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        q = self.field.q
        return FqElem(self.field, tuple(-x % q for x in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            q = self.field.q
            return FqElem(self.field, tuple(x * other % q for x in self.coeffs))
        other = self._check(other)
        field = self.field
        q, k = field.q, field.k
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    conv[i + j] += x * y
        mod = field.modulus
        for idx in range(2 * k - 2, k - 1, -1):
            c = conv[idx] % q
            if c:
                for j in range(k):
                    conv[idx - k + j] -= c * mod[j]
        return FqElem(field, tuple(c % q for c in conv[:k]))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.invert() ** (-exponent)
        result = self.field.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.invert()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        return (isinstance(other, FqElem) and other.field == self.field
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.field.q, self.field.k, self.coeffs))

    def __repr__(self):
        return f"FqElem(q={self.field.q}, k={self.field.k}, {list(self.coeffs)})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def invert(self) -> "FqElem":
        if self.is_zero():
            raise ZeroDivisionError("invert(0) in a finite field")
        return self ** (self.field.order - 2)


def multiplicative_order(a: FqElem) -> int:
    """Least t >= 1 with a^t = 1; factors the group order and descends."""
    if a.is_zero():
        raise ZeroDivisionError("the zero element has no multiplicative order")
    group_order = a.field.order - 1
    one = a.field.one()
    t = group_order
    for p in factorize(group_order):
        while t % p == 0 and a ** (t // p) == one:
            t //= p
    return t


def primitive_root_of_unity(field: FqField, p: int) -> FqElem:
    """Deterministic element of exact multiplicative order p.

    Scans candidates in canonical element order, raises each to
    (q^k - 1)/p, and returns the first power that verifies as order p.
    """
    group_order = field.order - 1
    if p < 1 or group_order % p != 0:
        raise InvalidInputError(
            f"{p} does not divide the multiplicative group order {group_order}")
    if p == 1:
        return field.one()
    cofactor = group_order // p
    for index in range(1, field.order):
        candidate = field.element_at_index(index)
        e = candidate ** cofactor
        if e != field.one() and multiplicative_order(e) == p:
            return e
    raise ArithmeticError("cyclic group exhausted without an order-p element")  # unreachable


@dataclass(frozen=True)
class SupportBoundReport:
    """Outcome of the multiplicity-versus-support check."""
    multiplicity: int
    nonzero_coefficients: int
    bound_holds: bool
    hypothesis_met: bool  # polynomial degree < field characteristic


def multiplicity_vs_support(coeffs, a: FqElem) -> SupportBoundReport:
    """Root multiplicity of a in the polynomial versus its coefficient support.

    coeffs lists polynomial coefficients (constant first) as FqElem or int.
    When the degree is below the characteristic, the multiplicity is
    strictly less than the number of nonzero coefficients; that bound is
    asserted.  Degrees >= q fall outside the hypothesis, so the report is
    returned with hypothesis_met False and nothing asserted.
    """
    field = a.field
    if a.is_zero():
        raise InvalidInputError("the root must be nonzero")
    poly = [c if isinstance(c, FqElem) else field.from_int(c) for c in coeffs]
    while len(poly) > 1 and poly[-1].is_zero():
        poly.pop()
    if all(c.is_zero() for c in poly):
        raise InvalidInputError("the zero polynomial has no support bound")
    degree = len(poly) - 1
    h = sum(1 for c in poly if not c.is_zero())
    hypothesis_met = degree < field.q

    # repeated exact synthetic division by (x - a)
    m = 0
    current = poly
    while len(current) > 1:
        d = len(current) - 1
        quotient = [field.zero()] * d
        quotient[d - 1] = current[d]
        for i in range(d - 1, 0, -1):
            quotient[i - 1] = current[i] + a * quotient[i]
        remainder = current[0] + a * quotient[0]
        if not remainder.is_zero():
            break
        current = quotient
        m += 1
    bound_holds = m < h
    if hypothesis_met and not bound_holds:
        raise AssertionError(
            f"support bound violated: multiplicity {m} >= support {h}")
    return SupportBoundReport(m, h, bound_holds, hypothesis_met)


def evaluate_poly(coeffs, a: FqElem) -> FqElem:
    """Horner evaluation of a polynomial (constant first) at a."""
    field = a.field
    acc = field.zero()
    for c in reversed(list(coeffs)):
        c = c if isinstance(c, FqElem) else field.from_int(c)
        acc = acc * a + c
    return acc
