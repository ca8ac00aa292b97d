"""Elementary number theory: primality, factoring, orders, CRT.

Everything here is exact and deterministic.  The primality test is the
deterministic Miller-Rabin variant valid for all n < 3.3 * 10^24, far
beyond any desk-scale input this package accepts.
"""

import math
from functools import lru_cache

# Witness set proving primality for every n < 3317044064679887385961981.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n must be composite and odd.
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"pollard rho failed on {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: exponent}; trial division then rho."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p < 10 ** 6:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += wheel[i]
        i = (i + 1) % len(wheel)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi expects a positive integer")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def multiplicative_order_mod(a: int, n: int) -> int:
    """Least t >= 1 with a^t = 1 (mod n); a must be a unit mod n."""
    a %= n
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    t = euler_phi(n)
    for p in factorize(t):
        while t % p == 0 and pow(a, t // p, n) == 1:
            t //= p
    return t


def order_from_group_order(pow_fn, group_order: int) -> int:
    """Order of an element given x -> x^e as pow_fn(e) -> is_identity bool."""
    t = group_order
    for p in factorize(group_order):
        while t % p == 0 and pow_fn(t // p):
            t //= p
    return t


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Unique x mod m1*m2 with x = r1 (mod m1), x = r2 (mod m2); coprime moduli."""
    g = math.gcd(m1, m2)
    if g != 1:
        raise ValueError("crt_pair needs coprime moduli")
    inv = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def least_prime_congruent_one(modulus: int, floor: int) -> int:
    """Least prime ell > floor with ell = 1 (mod modulus)."""
    ell = floor + 1
    ell += (1 - ell) % modulus
    while not is_prime(ell):
        ell += modulus
    return ell


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0
