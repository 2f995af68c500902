"""Euler-product densities of S_n number fields (n = 3, 4, 5).

Assembles the exact per-prime local masses into a rigorous two-sided
rational interval for the density coefficient

    lim N(X; A) / X  =  1/2 * (archimedean mass) * prod_p m_{A,p},

where A is the subgroup of Q^x generated by the given rationals and
m_{A,p} = ((q-1)/q) * premass of the degree-n etale algebras over Q_p
whose norm groups contain A.  Primes up to the bound B are computed
exactly; the tail p > B is enclosed using the engineering bound

    |m_{A,p} - 1| <= C_n / p^2   for p > B,

with C_n = 4(n-1) * max_d Part(d, n-d).  The constant is deliberately
loose; the doubling property (the interval for 2B is contained in the
interval for B) is what certifies the enclosures in practice, and it
holds exactly for these bounds because
sum_{p>B} p^{-2} <= sum_{m>B} 1/(m(m-1)) = 1/B telescopes.

The proportion lim N(X; A)/N(X) is enclosed via the product of the
per-prime ratios m_{A,p}/m_p, each of which lies in (0, 1].

Everything is a ``Fraction``; decimal rendering is display-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .massprime import partition_count, premass_ell_total
from .massquartic import premass4
from .padic import LocalField


SUPPORTED_DEGREES = (3, 4, 5)


# ---------------------------------------------------------------------------
# small number-theory helpers over the rationals
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def primes_up_to(bound: int) -> tuple:
    """All primes <= bound, by sieve."""
    if bound < 2:
        return ()
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for m in range(2, int(bound**0.5) + 1):
        if flags[m]:
            flags[m * m :: m] = bytearray(len(flags[m * m :: m]))
    return tuple(m for m in range(2, bound + 1) if flags[m])


def prime_factors(n: int) -> set:
    """The set of primes dividing |n| (trial division)."""
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out


def rational_valuation(r: Fraction, p: int) -> int:
    """The exact p-adic valuation of a nonzero rational."""
    if r == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = r.numerator, r.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_nth_power_rational(r: Fraction, n: int) -> bool:
    """Whether r is an n-th power in Q^x (exact)."""
    r = Fraction(r)
    if r == 0:
        return False
    if r < 0:
        if n % 2 == 0:
            return False
        return is_nth_power_rational(-r, n)

    def _root_ok(m: int) -> bool:
        if m < 2:
            return True
        # exact floor n-th root by integer Newton iteration
        x = 1 << -(-m.bit_length() // n)
        while True:
            y = ((n - 1) * x + m // x ** (n - 1)) // n
            if y >= x:
                break
            x = y
        return x**n == m

    return _root_ok(r.numerator) and _root_ok(r.denominator)


# ---------------------------------------------------------------------------
# spec and result types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlobalSpec:
    """A global counting problem over Q.

    ``n`` is the field degree, ``gens`` the rationals generating the
    prescribed norm subgroup, and ``prime_bound`` the cutoff B: primes
    p <= B get exact local masses, the rest are enclosed by the tail
    bound.  The base field is Q (one real place, residue 1 at s = 1).
    """

    n: int
    gens: tuple
    prime_bound: int

    def __post_init__(self):
        if self.n not in SUPPORTED_DEGREES:
            raise ValueError(f"degree must be one of {SUPPORTED_DEGREES}")
        gens = tuple(Fraction(g) for g in self.gens)
        if any(g == 0 for g in gens):
            raise ValueError("generators must be nonzero")
        object.__setattr__(self, "gens", gens)
        bad = set()
        for g in gens:
            bad |= prime_factors(g.numerator) | prime_factors(g.denominator)
        floor = max([self.n] + sorted(bad)) + 1
        if self.prime_bound < floor:
            raise ValueError(
                f"prime_bound must be at least {floor} for these generators"
            )


@dataclass(frozen=True)
class DensityInterval:
    """Exact rational enclosures of the density and the proportion.

    ``coeff_lo <= lim N(X;A)/X <= coeff_hi`` and
    ``prop_lo <= lim N(X;A)/N(X) <= prop_hi``; ``per_prime`` lists the
    exact local mass factors (p, m_{A,p}) for p up to the bound.
    ``prop_hi == 1`` exactly when every computed local mass equals the
    full mass and the archimedean factor is unconstrained.
    """

    coeff_lo: Fraction
    coeff_hi: Fraction
    prop_lo: Fraction
    prop_hi: Fraction
    per_prime: tuple

    def __post_init__(self):
        if not (0 <= self.coeff_lo <= self.coeff_hi):
            raise ValueError("bad coefficient interval")
        if not (0 <= self.prop_lo <= self.prop_hi <= 1):
            raise ValueError("bad proportion interval")


# ---------------------------------------------------------------------------
# archimedean and per-prime factors
# ---------------------------------------------------------------------------


def archimedean_mass(n: int, all_positive: bool = True, place: str = "real") -> Fraction:
    """Mass of the degree-n etale algebras over R or C meeting A.

    Over C every algebra C^n works: 1/n!.  Over R the algebras are
    R^{n-2s} x C^s; each contributes 1/(s!(n-2s)!2^s), and a negative
    generator needs at least one real factor, which only matters for
    even n (it excludes s = n/2).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if place == "complex":
        return Fraction(1, factorial(n))
    if place != "real":
        raise ValueError(f"unknown place {place!r}")
    top = n // 2 if all_positive else -(-n // 2) - 1
    return sum(
        (
            Fraction(1, factorial(s) * factorial(n - 2 * s) * 2**s)
            for s in range(top + 1)
        ),
        Fraction(0),
    )


def local_profile_at_prime(gens, p: int, n: int):
    """Embed rational generators into Q_p exactly.

    Returns (F, embedded) where F is the local field Q_p and each
    generator is mapped with its exact valuation, read off from the
    factorization of numerator and denominator.
    """
    gens = tuple(Fraction(g) for g in gens)
    if any(g == 0 for g in gens):
        raise ValueError("generators must be nonzero")
    F = LocalField(p, 1, 1)
    embedded = []
    for g in gens:
        x = F.from_rational(g)
        v = rational_valuation(g, p)
        if F.val(x) != v:
            raise ValueError(f"generator {g} exceeds the working precision at {p}")
        embedded.append(x)
    return F, tuple(embedded)


def full_local_factor(n: int, p: int) -> Fraction:
    """The unconstrained (full-norm-group) local mass factor at p."""
    q = Fraction(p)
    if n == 3:
        return 1 - q**-3
    if n == 4:
        return 1 + q**-2 - q**-3 - q**-4
    if n == 5:
        return 1 + q**-2 - q**-4 - q**-5
    raise ValueError(f"degree must be one of {SUPPORTED_DEGREES}")


def local_mass(n: int, p: int, gens=(), algo: str = "auto") -> Fraction:
    """The exact local mass m_{A,p} = ((q-1)/q) * premass at p."""
    if not gens:
        return full_local_factor(n, p)
    F, embedded = local_profile_at_prime(gens, p, n)
    if n == 4:
        pre = premass4(F, embedded, algo=algo).total
    else:
        pre = premass_ell_total(F, n, embedded).total
    return Fraction(p - 1, p) * pre


@lru_cache(maxsize=None)
def tail_constant(n: int) -> int:
    """C_n = 4(n-1) * max_d Part(d, n-d), the loose tail bound constant."""
    return 4 * (n - 1) * max(partition_count(d, n - d) for d in range(n + 1))


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------


def euler_density(spec: GlobalSpec, algo: str = "auto") -> DensityInterval:
    """Enclose the density coefficient and the proportion for ``spec``.

    The finite product over p <= B is exact.  The tail multiplier lies
    in [1 - C_n/B, 1/(1 - C_n/B)] since each omitted factor is within
    C_n/p^2 of 1 and sum_{p>B} p^{-2} <= 1/B; the tail of the ratio
    product lies in [1 - C_n/B, 1] since each ratio is in (0, 1].
    """
    n, bound = spec.n, spec.prime_bound
    c_n = tail_constant(n)
    if bound <= c_n:
        raise ValueError(
            f"prime bound {bound} is below the tail guard C_{n} = {c_n}"
        )
    per_prime = tuple(
        (p, local_mass(n, p, spec.gens, algo=algo)) for p in primes_up_to(bound)
    )
    finite = Fraction(1)
    ratio = Fraction(1)
    for p, m in per_prime:
        full = full_local_factor(n, p)
        assert 0 < m <= full, (p, m, full)
        finite *= m
        ratio *= m / full

    arch = archimedean_mass(n, all_positive=all(g > 0 for g in spec.gens))
    arch_ratio = arch / archimedean_mass(n, all_positive=True)
    point = Fraction(1, 2) * arch * finite
    slack = Fraction(c_n, bound)

    prop_point = arch_ratio * ratio
    if all(is_nth_power_rational(g, n) for g in spec.gens):
        # an n-th power is a norm from every etale algebra, at every
        # place: the constraint is empty and the proportion is exactly 1
        assert prop_point == 1
        prop_lo = prop_hi = Fraction(1)
    else:
        prop_hi = prop_point
        prop_lo = max(Fraction(0), prop_point * (1 - slack))
    return DensityInterval(
        coeff_lo=point * (1 - slack),
        coeff_hi=point / (1 - slack),
        prop_lo=prop_lo,
        prop_hi=prop_hi,
        per_prime=per_prime,
    )


def is_power_pathological(n: int, k: str = "Q") -> bool:
    """Whether the local-global principle for n-th powers can fail over k.

    Pathology requires 8 | n together with conditions on how 2 behaves
    in the 2-power cyclotomic towers of k.  Over Q the prime 2 is
    totally ramified in every Q(mu_{2^r}), r >= 3, so the decomposition
    condition fails and no n is pathological.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n % 8:
        return False
    if k == "Q":
        return False
    raise NotImplementedError("general base fields need user-supplied local data")
