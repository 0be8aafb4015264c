"""Pure Python scan kernel: reference implementation and big-integer fallback.

Must stay semantically identical to the compiled kernel (_scan_core); the
test suite compares their outputs verbatim.
"""

from math import gcd, isqrt

__all__ = ["enumerate_solutions"]


def _squarefree_status(d: int, primes) -> int:
    """1 = certified squarefree, 0 = certified not, -1 = uncertified."""
    rem = d
    covered = False
    for p in primes:
        if p * p * p > rem:
            covered = True
            break
        if rem % p == 0:
            rem //= p
            if rem % p == 0:
                return 0
    if rem == 1:
        return 1
    r = isqrt(rem)
    if r * r == rem:
        return 0
    if covered:
        return 1
    # trial primes exhausted below rem^(1/3): a cofactor with three large
    # prime factors cannot be excluded
    last = primes[-1] if len(primes) else 1
    if rem < last * last * last:
        return 1
    return -1


def enumerate_solutions(a, X, t_lo, t_hi, m_lo, m_hi, n_lo, n_hi, h, modulus, primes):
    """All (m, n, t, d) with -d t^2 = m^3 - a n^6 in the given boxes.

    Conditions: m = h, n = 0 (mod modulus); gcd(t, 6am) = gcd(n, am) = 1;
    t^2 | a n^6 - m^3 with quotient d squarefree, 0 < d < X.  Returns
    (solutions, uncertified) where uncertified counts candidates whose
    squarefree status could not be certified (they are excluded).
    """
    out = []
    uncertified = 0
    h_red = h % modulus
    n = n_lo + (-n_lo) % modulus
    if n == 0:
        n = modulus
    while n <= n_hi:
        an6 = a * n**6
        ga = gcd(n, a)
        if ga != 1:
            n += modulus
            continue
        m = m_lo + (h_red - m_lo) % modulus
        while m <= m_hi:
            if m >= 1 and gcd(n, m) == 1:
                rhs = an6 - m * m * m
                if rhs > 0:
                    for t in range(t_lo, t_hi + 1):
                        if gcd(t, 6 * a * m) != 1:
                            continue
                        tt = t * t
                        if rhs % tt:
                            continue
                        d = rhs // tt
                        if d <= 0 or d >= X:
                            continue
                        status = _squarefree_status(d, primes)
                        if status == 1:
                            out.append((m, n, t, d))
                        elif status == -1:
                            uncertified += 1
            m += modulus
        n += modulus
    return out, uncertified
