"""Integer-side classification: factorization, sieves, and P-number predicates.

An integer n is a 2-generated number when every group of order n has a
generating set of size at most two.  Everything in this module decides that
(and the companion cyclic/abelian/nilpotent-number predicates) from the prime
factorization of n alone; the group-side cross-check lives in `verifier`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

# Largest sieve allocation accepted by default (~400 MB of int32 at the cap).
SIEVE_CAP = 100_000_000

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 64-bit-sized inputs."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of composite odd n; deterministic parameter walk."""
    if n % 2 == 0:
        return 2
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
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
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")  # unreachable for composite n


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n, primes strictly decreasing.

    The descending order makes the largest prime the first entry, which is the
    convention every pair predicate below indexes against.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = None
        for p, e in self.factors:
            if e < 1:
                raise ValueError(f"exponent {e} < 1 in factorization of {self.n}")
            if prev is not None and p >= prev:
                raise ValueError("factor primes must be strictly decreasing")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            prod *= p**e
            prev = p
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factorize(n: int) -> Factorization:
    """Factor n >= 1 by trial division plus deterministic rho splitting."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}: need n >= 1")
    counts: dict[int, int] = {}
    rest = n
    for p in _SMALL_PRIMES:
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _brent_rho(m)
        stack.append(d)
        stack.append(m // d)
    factors = tuple(sorted(counts.items(), reverse=True))
    return Factorization(n, factors)


# --------------------------------------------------------------------------
# failure reasons


@dataclass(frozen=True)
class NotCubeFree:
    """A prime cube divides n."""

    p: int

    def __str__(self) -> str:
        return f"NotCubeFree(p={self.p})"


@dataclass(frozen=True)
class BadPair:
    """Primes p > q with p^2 | n and q | (p - 1)."""

    p: int
    q: int

    def __str__(self) -> str:
        return f"BadPair(p={self.p}, q={self.q})"


FailureReason = Optional[Union[NotCubeFree, BadPair]]


def failure_to_dict(reason: FailureReason) -> Optional[dict]:
    if reason is None:
        return None
    if isinstance(reason, NotCubeFree):
        return {"kind": "not_cube_free", "p": reason.p}
    return {"kind": "bad_pair", "p": reason.p, "q": reason.q}


# --------------------------------------------------------------------------
# predicates on a factorization


def is_square_free(f: Factorization) -> bool:
    return all(e <= 1 for _, e in f.factors)


def is_cube_free(f: Factorization) -> bool:
    return all(e <= 2 for _, e in f.factors)


def has_nilpotent_factorization(f: Factorization) -> bool:
    """No prime power p^a (a <= e_p) is congruent to 1 modulo another prime divisor."""
    for p, e in f.factors:
        pa = 1
        for _ in range(e):
            pa *= p
            for q, _eq in f.factors:
                if q != p and pa % q == 1:
                    return False
    return True


def is_cyclic_number(f: Factorization) -> bool:
    return is_square_free(f) and has_nilpotent_factorization(f)


def is_abelian_number(f: Factorization) -> bool:
    return is_cube_free(f) and has_nilpotent_factorization(f)


def is_nilpotent_number(f: Factorization) -> bool:
    return has_nilpotent_factorization(f)


def euler_phi(f: Factorization) -> int:
    phi = 1
    for p, e in f.factors:
        phi *= p ** (e - 1) * (p - 1)
    return phi


def euler_phi_coprime(n: int) -> bool:
    """gcd(n, phi(n)) == 1, computed via phi rather than the pair predicate."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return math.gcd(n, euler_phi(factorize(n))) == 1


def violating_pair(f: Factorization) -> Optional[tuple[int, int]]:
    """Smallest pair (p, q), p > q, with p^2 | n and q | (p - 1), else None."""
    best = None
    for p, e in f.factors:
        if e < 2:
            continue
        for q, _eq in f.factors:
            if q < p and (p - 1) % q == 0:
                if best is None or (p, q) < best:
                    best = (p, q)
    return best


def violating_pair_larger_divisor(f: Factorization) -> Optional[tuple[int, int]]:
    """Pair condition with the divisor role on the *larger* prime: q > p, p^2 | n, q | (p-1).

    Provably always None (a larger prime cannot divide p - 1), kept callable so
    the asymmetry between the two index conventions stays testable.
    """
    for p, e in f.factors:
        if e < 2:
            continue
        for q, _eq in f.factors:
            if q > p and (p - 1) % q == 0:
                return (p, q)
    return None


def is_two_generated_number(f: Factorization) -> tuple[bool, FailureReason]:
    """Unified rule: cube-free and no pair p > q with p^2 | n and q | (p - 1).

    Returns the verdict together with a deterministic failure witness: the
    smallest prime whose cube divides n, else the lexicographically smallest
    (p, q) violation.
    """
    cubed = [p for p, e in f.factors if e >= 3]
    if cubed:
        return False, NotCubeFree(min(cubed))
    pair = violating_pair(f)
    if pair is not None:
        return False, BadPair(*pair)
    return True, None


def is_two_generated_parity_split(f: Factorization) -> bool:
    """Dual route to is_two_generated_number with separate odd/even rules.

    Odd n: cube-free, and no prime with exponent 2 has a smaller prime divisor
    of (p - 1) among the other prime factors.  Even n: n = 2^a * m with m odd
    and square-free and a <= 2.
    """
    if f.n % 2 == 1:
        if not all(e <= 2 for _, e in f.factors):
            return False
        for p, e in f.factors:
            if e == 2 and any(q != p and (p - 1) % q == 0 for q, _ in f.factors):
                return False
        return True
    alpha = next(e for p, e in f.factors if p == 2)
    if alpha > 2:
        return False
    return all(e == 1 for p, e in f.factors if p != 2)


@dataclass(frozen=True)
class ClassificationRecord:
    """Every P-number verdict for one n, plus a machine-readable failure witness."""

    n: int
    cube_free: bool
    square_free: bool
    nilpotent_factorization: bool
    cyclic_number: bool
    abelian_number: bool
    nilpotent_number: bool
    two_generated_number: bool
    failure_reason: FailureReason

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "cube_free": self.cube_free,
            "square_free": self.square_free,
            "nilpotent_factorization": self.nilpotent_factorization,
            "cyclic_number": self.cyclic_number,
            "abelian_number": self.abelian_number,
            "nilpotent_number": self.nilpotent_number,
            "two_generated_number": self.two_generated_number,
            "failure_reason": failure_to_dict(self.failure_reason),
        }


def classify(n: int) -> ClassificationRecord:
    """Classify one integer against every predicate in this module."""
    f = factorize(n)
    nilp = has_nilpotent_factorization(f)
    two_gen, reason = is_two_generated_number(f)
    return ClassificationRecord(
        n=n,
        cube_free=is_cube_free(f),
        square_free=is_square_free(f),
        nilpotent_factorization=nilp,
        cyclic_number=is_square_free(f) and nilp,
        abelian_number=is_cube_free(f) and nilp,
        nilpotent_number=nilp,
        two_generated_number=two_gen,
        failure_reason=reason,
    )


# --------------------------------------------------------------------------
# sieves


def _check_cap(limit: int, cap: int) -> None:
    if limit < 1:
        raise ValueError(f"need limit >= 1, got {limit}")
    if limit > cap:
        raise ValueError(f"limit {limit} exceeds the sieve cap {cap}")


def spf_sieve(limit: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit, built in one marking pass."""
    _check_cap(limit, cap)
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[1:2] = 1
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p] = p
            if p * p <= limit:
                sl = spf[p * p :: p]
                sl[sl == 0] = p
    return spf


def _primes_from_spf(spf: np.ndarray) -> np.ndarray:
    idx = np.arange(len(spf), dtype=np.int32)
    return np.nonzero((spf == idx) & (idx >= 2))[0]


def _spf_factor(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    """Ascending (prime, exponent) pairs of n read off the SPF chain."""
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def two_generated_flags(limit: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """Boolean array: flags[n] iff n is a 2-generated number, for 0 <= n <= limit.

    Vectorized form of the unified rule: strike multiples of p^3, then strike
    multiples of p^2 * q for every prime q dividing p - 1.
    """
    spf = spf_sieve(limit, cap)
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in _primes_from_spf(spf):
        p = int(p)
        if p * p > limit:
            break
        if p**3 <= limit:
            flags[p**3 :: p**3] = False
        for q, _ in _spf_factor(p - 1, spf):
            step = p * p * q
            if step <= limit:
                flags[step::step] = False
    return flags


def parity_split_flags(limit: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """Boolean array for the odd/even split rule; dual route to two_generated_flags."""
    spf = spf_sieve(limit, cap)
    n_arr = np.arange(limit + 1)
    flags = np.zeros(limit + 1, dtype=bool)
    odd = (n_arr & 1) == 1

    ok_odd = np.ones(limit + 1, dtype=bool)
    for p in _primes_from_spf(spf):
        p = int(p)
        if p == 2 or p * p > limit:
            continue
        if p**3 <= limit:
            ok_odd[p**3 :: p**3] = False
        for q, _ in _spf_factor(p - 1, spf):
            if q == 2:
                continue
            step = p * p * q
            if step <= limit:
                ok_odd[step::step] = False
    flags[odd] = ok_odd[odd]

    odd_square = np.zeros(limit + 1, dtype=bool)
    for p in _primes_from_spf(spf):
        p = int(p)
        if p > 2 and p * p <= limit:
            odd_square[p * p :: p * p] = True
    ok_even = (n_arr % 8 != 0) & ~odd_square
    flags[~odd] = ok_even[~odd]
    flags[0] = False
    return flags


@dataclass(frozen=True)
class SieveClassification:
    """Bulk predicate arrays over 0..limit (index n)."""

    limit: int
    square_free: np.ndarray
    cube_free: np.ndarray
    nilpotent: np.ndarray
    cyclic: np.ndarray
    abelian: np.ndarray
    two_generated: np.ndarray


def classification_flags(limit: int, cap: int = SIEVE_CAP) -> SieveClassification:
    """All predicate arrays at once, sharing one SPF sieve."""
    spf = spf_sieve(limit, cap)
    primes = _primes_from_spf(spf)

    square_free = np.ones(limit + 1, dtype=bool)
    cube_free = np.ones(limit + 1, dtype=bool)
    nilpotent = np.ones(limit + 1, dtype=bool)
    for z in (square_free, cube_free, nilpotent):
        z[0] = False
    for p in primes:
        p = int(p)
        if p * p <= limit:
            square_free[p * p :: p * p] = False
        if p**3 <= limit:
            cube_free[p**3 :: p**3] = False
        pa = p
        while pa <= limit:
            for q, _ in _spf_factor(pa - 1, spf):
                step = pa * q
                if step <= limit:
                    nilpotent[step::step] = False
            pa *= p

    two_gen = two_generated_flags(limit, cap)
    return SieveClassification(
        limit=limit,
        square_free=square_free,
        cube_free=cube_free,
        nilpotent=nilpotent,
        cyclic=square_free & nilpotent,
        abelian=cube_free & nilpotent,
        two_generated=two_gen,
    )


def totient_sieve(limit: int, cap: int = SIEVE_CAP) -> np.ndarray:
    """Euler phi for 0..limit via in-place multiplicative marking (no factorization)."""
    _check_cap(limit, cap)
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:  # untouched by any smaller prime, hence prime
            sl = phi[p::p]
            sl -= sl // p
    return phi


def enumerate_two_generated(limit: int, cap: int = SIEVE_CAP) -> list[int]:
    """Ascending list of all 2-generated numbers <= limit."""
    flags = two_generated_flags(limit, cap)
    return [int(x) for x in np.nonzero(flags)[0]]
