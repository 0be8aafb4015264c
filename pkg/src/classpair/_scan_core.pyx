# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scan kernel: int64 hot loop for the (m, n, t, d) enumeration.

Semantically identical to _scan_py.enumerate_solutions; selected at import
time by classpair.scan when the ranges fit machine integers.
"""

from libc.math cimport sqrt


cdef inline long long c_gcd(long long a, long long b) noexcept nogil:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline long long c_isqrt(long long n) noexcept nogil:
    cdef long long r = <long long> sqrt(<double> n)
    while r > 0 and r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


cdef inline int c_squarefree_status(long long d, const long long[::1] primes) noexcept nogil:
    cdef long long rem = d
    cdef long long p, r, last
    cdef Py_ssize_t i
    cdef bint covered = 0
    for i in range(primes.shape[0]):
        p = primes[i]
        if p * p * p > rem:
            covered = 1
            break
        if rem % p == 0:
            rem //= p
            if rem % p == 0:
                return 0
    if rem == 1:
        return 1
    r = c_isqrt(rem)
    if r * r == rem:
        return 0
    if covered:
        return 1
    last = primes[primes.shape[0] - 1] if primes.shape[0] else 1
    if rem < last * last * last:
        return 1
    return -1


def enumerate_solutions(long long a, long long X, long long t_lo, long long t_hi,
                        long long m_lo, long long m_hi, long long n_lo, long long n_hi,
                        long long h, long long modulus, const long long[::1] primes):
    """See _scan_py.enumerate_solutions; this is the compiled twin."""
    cdef list out = []
    cdef long long uncertified = 0
    cdef long long n, m, t, an6, rhs, tt, d
    cdef long long h_red = h % modulus
    cdef int status

    n = n_lo + (-n_lo) % modulus
    if n == 0:
        n = modulus
    while n <= n_hi:
        if c_gcd(n, a) == 1:
            an6 = a * n * n * n * n * n * n
            m = m_lo + (h_red - m_lo) % modulus
            while m <= m_hi:
                if m >= 1 and c_gcd(n, m) == 1:
                    rhs = an6 - m * m * m
                    if rhs > 0:
                        for t in range(t_lo, t_hi + 1):
                            if c_gcd(t, 6 * a) != 1 or c_gcd(t, m) != 1:
                                continue
                            tt = t * t
                            if rhs % tt:
                                continue
                            d = rhs // tt
                            if d <= 0 or d >= X:
                                continue
                            status = c_squarefree_status(d, primes)
                            if status == 1:
                                out.append((m, n, t, d))
                            elif status == -1:
                                uncertified += 1
                m += modulus
        n += modulus
    return out, uncertified
