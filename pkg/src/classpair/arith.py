"""Exact integer arithmetic: Kronecker symbols, multiplicative functions,
and cubic residue characters in the Eisenstein integers Z[w], w = (-1+sqrt(-3))/2.

The cubic machinery follows the classical dictionary between the +-1-valued
cubic residue symbol mod p and the genuine order-3 character mod an
Eisenstein prime:

    p = 1 (mod 3):  p = pi * conj(pi),  (n|p)_3 = (2/3) chi_pi(n) + (2/3) chi_conj(pi)(n) - 1/3
    p = 2 (mod 3):  p inert, every integer is a cubic residue mod p.
"""

from dataclasses import dataclass
from math import isqrt

from sympy import factorint

__all__ = [
    "kronecker_symbol",
    "mobius",
    "squarefree_divisor_count",
    "is_squarefree",
    "is_fundamental_discriminant",
    "EisensteinInt",
    "eisenstein_prime_above",
    "primary_associate",
    "cubic_character",
    "cubic_residue_symbol",
    "omega_hat",
]


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all n != 0.

    Agrees with the Legendre symbol for odd prime n and is completely
    multiplicative in both arguments; (a|-1) = sign(a), (a|2) by a mod 8.
    """
    if n == 0:
        raise ValueError("Kronecker symbol undefined for n = 0")
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            t = -t
    # n odd positive: Jacobi algorithm
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def mobius(n: int) -> int:
    """Moebius function mu(n) for n >= 1."""
    if n < 1:
        raise ValueError("mobius requires n >= 1")
    if n == 1:
        return 1
    fac = factorint(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def squarefree_divisor_count(w: int) -> int:
    """Number of positive square-free divisors of w, i.e. 2^omega(|w|)."""
    if w == 0:
        raise ValueError("squarefree_divisor_count requires w != 0")
    return 1 << len(factorint(abs(w)))


# Trial-division bound for the certified squarefree test.  With all primes
# up to B removed, a cofactor below B^3 has at most two prime factors, so
# "not a perfect square" decides squarefreeness exactly.
_SQF_TRIAL_BOUND = 10**6


def is_squarefree(n: int, trial_bound: int = _SQF_TRIAL_BOUND) -> bool:
    """True iff no prime square divides n (n >= 1).

    Certified by trial division up to min(n^(1/3), trial_bound) plus a
    perfect-square test on the cofactor; falls back to a full factorization
    for n large enough that the cofactor could hide three prime factors.
    """
    if n < 1:
        raise ValueError("is_squarefree requires n >= 1")
    if n == 1:
        return True
    if n % 4 == 0 or n % 9 == 0 or n % 25 == 0:
        return False
    bound = min(trial_bound, _icbrt(n) + 1)
    m = n
    p = 2
    while p <= bound:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
        p += 1 if p == 2 else 2
    if m == 1:
        return True
    if m > trial_bound**3:
        # cofactor may have three large factors; certify by factoring
        return all(e == 1 for e in factorint(m).values())
    r = isqrt(m)
    return r * r != m


def _icbrt(n: int) -> int:
    r = round(n ** (1.0 / 3.0))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def is_fundamental_discriminant(d: int) -> bool:
    """True iff d < 0 is the discriminant of an imaginary quadratic field.

    Either d = 1 (mod 4) squarefree, or d = 4*d0 with d0 = 2, 3 (mod 4)
    squarefree.
    """
    if d >= 0:
        raise ValueError("expected a negative discriminant")
    if d % 4 == 1:
        return is_squarefree(-d)
    if d % 4 == 0:
        d0 = d // 4
        return d0 % 4 in (2, 3) and is_squarefree(-d0)
    return False


# ---------------------------------------------------------------------------
# Eisenstein integers


@dataclass(frozen=True)
class EisensteinInt:
    """x + y*w with w^2 + w + 1 = 0; norm x^2 - x*y + y^2."""

    x: int
    y: int

    def __add__(self, other):
        return EisensteinInt(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return EisensteinInt(self.x - other.x, self.y - other.y)

    def __mul__(self, other):
        # (x1 + y1 w)(x2 + y2 w), w^2 = -1 - w
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        return EisensteinInt(x1 * x2 - y1 * y2, x1 * y2 + y1 * x2 - y1 * y2)

    def __neg__(self):
        return EisensteinInt(-self.x, -self.y)

    def conjugate(self):
        # conj(w) = w^2 = -1 - w
        return EisensteinInt(self.x - self.y, -self.y)

    def norm(self) -> int:
        n = self.x * self.x - self.x * self.y + self.y * self.y
        assert n >= 0
        return n

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


_EISENSTEIN_UNITS = (
    EisensteinInt(1, 0),
    EisensteinInt(-1, 0),
    EisensteinInt(0, 1),
    EisensteinInt(0, -1),
    EisensteinInt(-1, -1),
    EisensteinInt(1, 1),
)


def primary_associate(z: EisensteinInt) -> EisensteinInt:
    """The unique associate congruent to 2 mod 3 (x = 2, y = 0 mod 3).

    Exists for every z coprime to 3; pins a reproducible generator of the
    ideal (z) so characters defined mod z are deterministic.
    """
    if z.norm() % 3 == 0:
        raise ValueError("no primary associate for elements above 3")
    for u in _EISENSTEIN_UNITS:
        c = z * u
        if c.x % 3 == 2 and c.y % 3 == 0:
            return c
    raise AssertionError("unit orbit must contain a primary element")


def eisenstein_prime_above(p: int) -> EisensteinInt:
    """A primary Eisenstein prime dividing the rational prime p != 3.

    For p = 1 (mod 3) solves p = x^2 - x*y + y^2 by bounded search; for
    p = 2 (mod 3) the rational p itself is inert (and already primary).
    """
    if p == 3:
        raise ValueError("p = 3 is ramified; no prime of norm != 3 above it")
    if p % 3 == 2:
        return EisensteinInt(p, 0)
    bound = isqrt(4 * p // 3) + 1
    for x in range(-bound, bound + 1):
        # x^2 - xy + y^2 = p  <=>  (2y - x)^2 = 4p - 3x^2
        rhs = 4 * p - 3 * x * x
        if rhs < 0:
            continue
        r = isqrt(rhs)
        if r * r != rhs:
            continue
        for s in {r, -r}:
            if (s + x) % 2 == 0:
                cand = EisensteinInt(x, (s + x) // 2)
                if cand.norm() == p:
                    return primary_associate(cand)
    raise AssertionError(f"no Eisenstein prime found above {p}")


def _classify_prime(pi: EisensteinInt):
    """Return ('split', p) if N(pi) = p prime = 1 mod 3, ('inert', q) if pi
    is an associate of a rational prime q = 2 mod 3; reject anything else."""
    n = pi.norm()
    if n % 3 == 0:
        raise ValueError("norm divisible by 3 is not allowed here")
    if _is_prime(n):
        # prime norms away from 3 are 1 mod 3 (norms are never 2 mod 3)
        return "split", n
    q = isqrt(n)
    if q * q == n and _is_prime(q) and q % 3 == 2:
        # associate of the inert rational prime q
        for u in _EISENSTEIN_UNITS:
            c = pi * u
            if c.y == 0 and abs(c.x) == q:
                return "inert", q
    raise ValueError("pi is not an Eisenstein prime of norm coprime to 3")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for 64-bit-and-beyond desk inputs
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


def cubic_character(beta: EisensteinInt, pi: EisensteinInt):
    """Cubic residue character chi_pi(beta) in {0, 1, w, w^2}.

    Returns 0 if pi | beta, otherwise the exponent representation
    EisensteinInt of w^k where beta^((N(pi)-1)/3) = w^k (mod pi).
    Multiplicative in beta.
    """
    k = cubic_character_exponent(beta, pi)
    if k is None:
        return EisensteinInt(0, 0)
    return (EisensteinInt(1, 0), EisensteinInt(0, 1), EisensteinInt(-1, -1))[k]


def cubic_character_exponent(beta: EisensteinInt, pi: EisensteinInt):
    """Exponent k in chi_pi(beta) = w^k, or None when pi | beta."""
    kind, p = _classify_prime(pi)
    if kind == "split":
        # Z[w]/(pi) = F_p via w -> r, where pi = x + y*w forces r = -x/y
        r = (-pi.x) * pow(pi.y, -1, p) % p
        assert (r * r + r + 1) % p == 0
        b = (beta.x + beta.y * r) % p
        if b == 0:
            return None
        t = pow(b, (p - 1) // 3, p)
        for k, root in enumerate((1, r, r * r % p)):
            if t == root:
                return k
        raise AssertionError("character value is not a cube root of unity")
    # inert: F_{q^2} arithmetic directly in Z[w]/(q)
    q = p
    bx, by = beta.x % q, beta.y % q
    if bx == 0 and by == 0:
        return None
    val = _eis_pow_mod(EisensteinInt(bx, by), (q * q - 1) // 3, q)
    table = {(1, 0): 0, (0, 1): 1, ((-1) % q, (-1) % q): 2}
    key = (val.x % q, val.y % q)
    if key not in table:
        raise AssertionError("character value is not a cube root of unity")
    return table[key]


def _eis_pow_mod(base: EisensteinInt, e: int, q: int) -> EisensteinInt:
    result = EisensteinInt(1, 0)
    while e:
        if e & 1:
            result = result * base
            result = EisensteinInt(result.x % q, result.y % q)
        base = base * base
        base = EisensteinInt(base.x % q, base.y % q)
        e >>= 1
    return result


def cubic_residue_symbol(b: int, p: int) -> int:
    """(b|p)_3 in {-1, 0, 1}: 0 if p | b, +1 if b is a cube mod p, else -1.

    For p = 2 (mod 3) cubing is a bijection mod p, so the symbol is 1 for
    every b coprime to p.
    """
    if not _is_prime(p):
        raise ValueError("cubic_residue_symbol requires a prime modulus")
    b %= p
    if b == 0:
        return 0
    if p == 3:
        return 1  # cubes mod 3 are 0, 1, 2
    if p % 3 == 2:
        return 1
    return 1 if pow(b, (p - 1) // 3, p) == 1 else -1


def omega_hat(alpha: EisensteinInt) -> int:
    """Number of distinct Eisenstein primes coprime to sqrt(-3) dividing alpha.

    Every prime ideal away from 3 has exactly one generator congruent to
    1 mod 3, so this equals the count of such prime ideals.  Used only by
    empirical character-sum checks.
    """
    if alpha.is_zero():
        raise ValueError("omega_hat undefined at 0")
    n = alpha.norm()
    count = 0
    for p, _ in factorint(n).items():
        if p == 3:
            continue
        if p % 3 == 2:
            # inert: p | alpha iff p divides both coordinates
            if alpha.x % p == 0 and alpha.y % p == 0:
                count += 1
        else:
            pi = eisenstein_prime_above(p)
            for gen in (pi, pi.conjugate()):
                if _divides(gen, alpha):
                    count += 1
    return count


def _divides(d: EisensteinInt, z: EisensteinInt) -> bool:
    # d | z  iff  z * conj(d) = 0 (mod N(d)) coordinatewise
    n = d.norm()
    prod = z * d.conjugate()
    return prod.x % n == 0 and prod.y % n == 0


def euler_criterion(a: int, p: int) -> int:
    """Legendre symbol via a^((p-1)/2) mod p, used as an independent oracle."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1
