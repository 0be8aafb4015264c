"""Scanner for the Diophantine equation -d t^2 = m^3 - a n^6 and the
counting function behind its solution statistics.

A scan walks the boxes

    T <= t <= 2T,   M <= m <= 2M,   N <= n <= 2N,
    M = (1/4) T^A X^(1/3),   N = (1/2) a^(-1/6) T^B X^(1/6),

subject to m = h and n = 0 (mod `modulus`), gcd(t, 6am) = gcd(n, am) = 1,
with 0 < A < 2B < 2/3, and keeps the (m, n, t) for which (a n^6 - m^3)/t^2
is a positive squarefree d < X.  Each solution yields a twist discriminant
and a rational point on the twist:

    d = 3 (mod 4):  -D = -d   and  Q = (m/n^2, 2t/n^3),
    d = 1, 2 (mod 4):  -D = -4d  and  Q = (m/n^2, t/n^3),

which is fed to the bound machinery and the parity sign filter.

The paper-exact congruence modulus is 4 * conductor; test configurations
may relax it (any modulus >= 1) so that nonempty boxes exist at desk-scale
X, and such runs are marked `modulus_relaxed` in their summary.

Two interchangeable kernels drive the inner loop: a compiled int64 core
(classpair._scan_core, Cython) and a pure Python fallback; outputs are
identical and the choice never affects results.  Sharding over n-ranges
plus a final (m, n, t) sort keeps output independent of worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from mpmath import mp, mpf

from sympy import factorint

from .arith import kronecker_symbol
from .bounds import BoundReport, CurveProfile, class_number_lower_bound, is_suitable
from .curve import TwistPoint, mordell_curve, twist_point_on_curve
from .forms import class_number

try:
    from . import _scan_core
except ImportError:  # extension not built; pure Python kernel only
    _scan_core = None
from . import _scan_py

__all__ = [
    "ScanConfig",
    "ScanRecord",
    "scan",
    "summatory_count",
    "parity_sign",
    "stewart_top_coefficient",
    "root_count_closed",
    "root_count_brute",
    "RhoUnhandledCase",
    "IntegralityError",
    "EnumerationCapError",
    "compiled_kernel_available",
]

PER_D_FLAG_CAP = 16  # observed per-discriminant multiplicity cap; exceeding is flagged


class RhoUnhandledCase(ValueError):
    """Prime-power case without a covered closed form (p in {2,3} dividing am)."""


class IntegralityError(ValueError):
    """A family coefficient that must be integral is not."""


class EnumerationCapError(RuntimeError):
    pass


def compiled_kernel_available() -> bool:
    return _scan_core is not None


@dataclass(frozen=True)
class ScanConfig:
    a: int
    X: int
    T: int = 1
    A: Fraction = Fraction(3, 10)
    B: Fraction = Fraction(8, 25)
    h: int = 1
    modulus: int | None = None  # defaults to 4 * conductor
    conductor: int = 3
    root_number: int = 1
    profile: CurveProfile | None = None
    workers: int = 1
    class_number_cap: int = 0
    kernel: str | None = None  # None = auto, else "c" / "py"

    def __post_init__(self):
        if self.a < 1 or self.X < 1 or self.T < 1:
            raise ValueError("a, X, T must be positive integers")
        A, B = Fraction(self.A), Fraction(self.B)
        if not (0 < A < 2 * B < Fraction(2, 3)):
            raise ValueError("exponents must satisfy 0 < A < 2B < 2/3")
        if self.conductor <= 0 or self.conductor % 3 != 0:
            raise ValueError("conductor must be a positive multiple of 3")
        if self.root_number not in (-1, 1):
            raise ValueError("root number must be +-1")
        mod = self.effective_modulus()
        if mod < 1:
            raise ValueError("modulus must be >= 1")
        if gcd(self.h, mod) != 1:
            raise ValueError("h must be coprime to the modulus")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.kernel not in (None, "c", "py"):
            raise ValueError("kernel must be None, 'c' or 'py'")
        if self.profile is not None and self.profile.curve.a4 != 0:
            raise ValueError("scan profiles must belong to the family y^2 = x^3 - a")

    def effective_modulus(self) -> int:
        return 4 * self.conductor if self.modulus is None else self.modulus

    def modulus_relaxed(self) -> bool:
        return self.effective_modulus() != 4 * self.conductor

    def ranges(self):
        """Integer boxes ((m_lo, m_hi), (n_lo, n_hi), (t_lo, t_hi))."""
        with mp.workdps(40):
            TA = mpf(self.T) ** (mpf(self.A.numerator) / self.A.denominator)
            TB = mpf(self.T) ** (mpf(self.B.numerator) / self.B.denominator)
            M = TA * mpf(self.X) ** (mpf(1) / 3) / 4
            N = TB * mpf(self.X) ** (mpf(1) / 6) / (2 * mpf(self.a) ** (mpf(1) / 6))
            m_lo, m_hi = _ceil_mpf(M), _floor_mpf(2 * M)
            n_lo, n_hi = _ceil_mpf(N), _floor_mpf(2 * N)
        return (max(1, m_lo), m_hi), (max(1, n_lo), n_hi), (self.T, 2 * self.T)


def _ceil_mpf(x) -> int:
    n = int(x)
    return n if n >= x else n + 1


def _floor_mpf(x) -> int:
    n = int(x)
    return n if n <= x else n - 1


@dataclass(frozen=True)
class ScanRecord:
    """One solution of -d t^2 = m^3 - a n^6 with its twist data and bound."""

    a: int
    m: int
    n: int
    t: int
    d: int
    D: int
    Q: TwistPoint
    suitable: bool
    parity_even_rank: bool | None
    report: BoundReport | None
    class_number: int | None = None


def _sieve(limit: int):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, limit + 1) if sieve[i]]


def _icbrt(n: int) -> int:
    r = round(n ** (1.0 / 3.0))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def _pick_kernel(config: ScanConfig, n_hi: int, m_hi: int):
    fits = (
        config.a * max(n_hi, 1) ** 6 < 2**62
        and max(m_hi, 1) ** 3 < 2**62
        and config.X < 2**62
    )
    if config.kernel == "py":
        return _scan_py.enumerate_solutions, False
    if config.kernel == "c":
        if _scan_core is None:
            raise RuntimeError("compiled kernel requested but not built")
        if not fits:
            raise RuntimeError("ranges exceed the compiled kernel's int64 domain")
        return _scan_core.enumerate_solutions, True
    if _scan_core is not None and fits:
        return _scan_core.enumerate_solutions, True
    return _scan_py.enumerate_solutions, False


def raw_solutions(config: ScanConfig):
    """Kernel driver: sorted (m, n, t, d) list plus the uncertified count."""
    (m_lo, m_hi), (n_lo, n_hi), (t_lo, t_hi) = config.ranges()
    if m_lo > m_hi or n_lo > n_hi:
        return [], 0
    kernel, compiled = _pick_kernel(config, n_hi, m_hi)
    prime_limit = min(10**6, _icbrt(config.X) + 1)
    primes = _sieve(max(prime_limit, 3))
    if compiled:
        from array import array

        primes = array("q", primes)
    mod = config.effective_modulus()

    shards = _shard_n_range(n_lo, n_hi, mod, config.workers)
    args = [
        (config.a, config.X, t_lo, t_hi, m_lo, m_hi, lo, hi, config.h, mod, primes)
        for lo, hi in shards
    ]
    if config.workers == 1 or len(args) <= 1:
        parts = [kernel(*a) for a in args]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(lambda a: kernel(*a), args))
    solutions = []
    uncertified = 0
    for sols, unc in parts:
        solutions.extend(sols)
        uncertified += unc
    solutions.sort()
    return solutions, uncertified


def _shard_n_range(n_lo: int, n_hi: int, mod: int, workers: int):
    start = n_lo + (-n_lo) % mod
    if start == 0:
        start = mod
    values = [n for n in range(start, n_hi + 1, mod) if n >= 1]
    if not values:
        return [(n_lo, n_hi)]
    chunks = max(1, min(workers, len(values)))
    size = (len(values) + chunks - 1) // chunks
    shards = []
    for i in range(0, len(values), size):
        block = values[i : i + size]
        shards.append((block[0], block[-1]))
    return shards


def solution_to_record(config: ScanConfig, m: int, n: int, t: int, d: int) -> ScanRecord:
    assert -d * t * t == m**3 - config.a * n**6
    if d % 4 == 3:
        D, v = d, 2 * t
    else:
        D, v = 4 * d, t
    Q = TwistPoint(m, v, n, D)
    E = config.profile.curve if config.profile is not None else mordell_curve(config.a)
    assert twist_point_on_curve(E, Q)
    report = None
    if config.profile is not None and config.profile.rank >= 1:
        report = class_number_lower_bound(config.profile, D, Q)
        suitable = report.suitable
    elif config.profile is not None:
        suitable = is_suitable(config.profile, D, Q)
    else:
        suitable = False
    try:
        sign = parity_sign(D, config.conductor, config.root_number)
        even = sign == 1
    except ValueError:
        even = None  # gcd(D, conductor) > 1: unfilterable
    h_val = None
    if config.class_number_cap and D <= config.class_number_cap:
        h_val = class_number(D)
    return ScanRecord(
        a=config.a, m=m, n=n, t=t, d=d, D=D, Q=Q,
        suitable=suitable, parity_even_rank=even, report=report,
        class_number=h_val,
    )


def scan(config: ScanConfig):
    """All scan records for the configuration, in (m, n, t) order.

    Returns (records, uncertified_count).  Unsuitable solutions are
    emitted with suitable=False, never dropped; only candidates whose d
    could not be certified squarefree are excluded (and counted).
    """
    solutions, uncertified = raw_solutions(config)
    records = [solution_to_record(config, *s) for s in solutions]
    return records, uncertified


def summatory_count(config: ScanConfig):
    """Aggregate the scan by d: (table d -> count, flagged d list, total).

    Discriminant classes with more than PER_D_FLAG_CAP solutions are
    reported in the flagged list (a structure check, not an error).
    """
    solutions, _ = raw_solutions(config)
    table: dict = {}
    for m, n, t, d in solutions:
        table[d] = table.get(d, 0) + 1
    flagged = sorted(d for d, c in table.items() if c > PER_D_FLAG_CAP)
    return table, flagged, len(solutions)


def parity_sign(D: int, conductor: int, root_number: int) -> int:
    """Sign of the functional equation of the -D twist:
    (-D | conductor) * root_number, defined when gcd(D, conductor) = 1."""
    if root_number not in (-1, 1):
        raise ValueError("root number must be +-1")
    if conductor <= 0 or conductor % 3 != 0:
        raise ValueError("conductor must be a positive multiple of 3")
    if gcd(D, conductor) != 1:
        raise ValueError("parity sign requires gcd(D, conductor) = 1")
    return kronecker_symbol(-D, conductor) * root_number


# ---------------------------------------------------------------------------
# Stewart-Top family coefficients (rank 3, 4, 5 twist families)

_ST4 = [
    -9261, 23814, 52353, 84834, 89181, 58968, 27270, 39528, 67797,
    83106, 81513, 38070, 6075,
]  # a_4 coefficients, degree 0..12


def stewart_top_coefficient(r: int, t: int) -> int:
    """Family coefficient a_r(t) for r in {3, 4, 5}.

    a_5 carries a rational factor 64/27; the result is asserted integral
    and a non-integral value (a transcription defect in the source data)
    raises IntegralityError rather than silently rounding.
    """
    if r == 3:
        return 2**4 * 3**3 * (4 * t**6 - 8 * t**4 + 40 * t**2 - 31)
    if r == 4:
        return sum(c * t**k for k, c in enumerate(_ST4))
    if r == 5:
        val = Fraction(64, 27) * (t**18 + 2973 * t**12 - 369249 * t**6 + 11764900)
        if val.denominator != 1:
            raise IntegralityError(
                f"a_5({t}) = {val} is not an integer (27 does not divide the bracket)")
        return int(val)
    raise ValueError("r must be 3, 4 or 5")


# ---------------------------------------------------------------------------
# The counting function rho(a, m; M) = #{n mod M : a n^6 = m^3 (mod M)}

BRUTE_CAP = 4 * 10**6


def root_count_brute(a: int, m: int, modulus: int, cap: int = BRUTE_CAP) -> int:
    """Direct count of n mod modulus with a n^6 = m^3; the defining oracle."""
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    if modulus > cap:
        raise EnumerationCapError(f"modulus {modulus} exceeds the brute cap {cap}")
    if m == 0 or a == 0:
        raise ValueError("a and m must be nonzero")
    target = pow(m, 3, modulus)
    return sum(1 for n in range(modulus) if a * pow(n, 6, modulus) % modulus == target)


def brute_table(a: int, modulus: int, cap: int = BRUTE_CAP):
    """Counts of a n^6 mod modulus over all n, for grid sweeps: one pass
    per (a, modulus) instead of one per (a, m, modulus)."""
    if modulus > cap:
        raise EnumerationCapError(f"modulus {modulus} exceeds the brute cap {cap}")
    table = [0] * modulus
    for n in range(modulus):
        table[a * pow(n, 6, modulus) % modulus] += 1
    return table


def root_count_closed(a: int, m: int, modulus: int) -> int:
    """Closed-form rho via multiplicativity and prime-power formulas.

    Covered cases: p = 2, 3 with p coprime to a*m, and every p >= 5.  The
    uncovered small-prime cases raise RhoUnhandledCase (the scan never
    needs them: there gcd(t, 6am) = 1).
    """
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    if a < 1:
        raise ValueError("a must be a positive integer")
    if m == 0:
        raise ValueError("m must be nonzero")
    total = 1
    for p, alpha in factorint(modulus).items():
        total *= _root_count_prime_power(a, m, p, alpha)
        if total == 0:
            return 0
    return total


def _legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def _cubic_unit_symbol(x: int, p: int) -> int:
    # +-1 cubic residue symbol for x coprime to p >= 5
    if p % 3 != 1:
        return 1
    return 1 if pow(x % p, (p - 1) // 3, p) == 1 else -1


def _ord(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _root_count_unit(a: int, m: int, p: int, s: int) -> int:
    """p >= 5, p coprime to a*m: Hensel makes the count independent of s."""
    assert s >= 1
    ai = pow(a, -1, p)
    return ((1 + _cubic_unit_symbol(ai, p)) * (1 + _legendre(ai * m, p)) * (2 + _legendre(-3, p))) // 2


def _root_count_prime_power(a: int, m: int, p: int, alpha: int) -> int:
    if p == 2:
        if (a * m) % 2 == 0:
            raise RhoUnhandledCase("no closed form for p = 2 dividing a*m")
        if alpha == 1:
            return 1
        if alpha == 2:
            return 2 if (a * m) % 4 == 1 else 0
        # for 2^alpha, alpha >= 3: sixth powers are the units = 1 (mod 8),
        # each with four roots; cubing is the identity on (Z/8)^*
        return 4 if (a - m) % 8 == 0 else 0
    if p == 3:
        if (a * m) % 3 == 0:
            raise RhoUnhandledCase("no closed form for p = 3 dividing a*m")
        if alpha == 1:
            return 2 if (a * m) % 3 == 1 else 0
        # alpha >= 2 reduces to the condition m^3 = a (mod 9), six roots
        return 6 if (m**3 - a) % 9 == 0 else 0
    j = _ord(a, p)
    k = _ord(abs(m), p)
    if 3 * k >= alpha and j >= alpha:
        return p**alpha
    if 3 * k >= alpha:
        # a n^6 = 0 (mod p^alpha): ord_p(n) >= ceil((alpha - j)/6)
        return p ** (alpha - (alpha - j + 5) // 6)
    if 3 * k < j or (3 * k - j) % 6:
        return 0
    eps = (3 * k - j) // 6
    m0 = m // p**k  # exact (sign-safe: p^k | m)
    return _root_count_unit(a // p**j, m0, p, alpha - 3 * k) * p ** (3 * k - eps)
