"""Elementary number theory: factorization, square roots mod N, subgroup tools.

Desk-scale only: deterministic Miller-Rabin below 2^64, Pollard rho with
Brent's cycle detection for the composite splits, brute force square roots
below a million and Tonelli-Shanks plus CRT lifting above.
"""

from __future__ import annotations

import math
import random

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for n < 2^64 with the standard base set."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, rng: random.Random) -> int:
    """One nontrivial factor of an odd composite n (Brent's variant)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: multiplicity}; trial division then rho."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES + list(range(41, 1000, 2)):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return dict(sorted(out.items()))
    rng = random.Random(0xF10E)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m, rng)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(out.items()))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def _tonelli_shanks(a: int, p: int) -> int | None:
    """One square root of a mod an odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod(a: int, N: int) -> list[int]:
    """All residues x with x^2 = a mod N, for squarefree N (sorted).

    Brute force for small N, Tonelli-Shanks on each prime factor plus CRT
    recombination otherwise.
    """
    a %= N
    if N < 10 ** 6:
        return sorted(x for x in range(N) if x * x % N == a)
    fac = factorize(N)
    if any(e > 1 for e in fac.values()):
        raise ValueError("sqrt_mod beyond brute force needs squarefree N")
    parts: list[tuple[int, list[int]]] = []
    for p in fac:
        if p == 2:
            roots = [x for x in range(2) if x * x % 2 == a % 2]
        else:
            r = _tonelli_shanks(a, p)
            if r is None:
                return []
            roots = sorted({r, p - r})
        parts.append((p, roots))
    sols = [0]
    mod = 1
    for p, roots in parts:
        new = []
        inv = pow(mod, -1, p) if mod > 1 else 1
        for x in sols:
            for r in roots:
                t = (r - x) * inv % p if mod > 1 else r
                new.append(x + mod * t)
        sols = new
        mod *= p
    return sorted(s % N for s in sols)


def sqrt_minus_one(N: int) -> list[int]:
    """All residues b with b^2 = -1 mod N, sorted."""
    if N < 2:
        raise ValueError("sqrt_minus_one needs N >= 2")
    return sqrt_mod(N - 1, N)


def units(N: int) -> list[int]:
    return [u for u in range(1, N) if math.gcd(u, N) == 1]
