"""Exact elliptic curve arithmetic over Q for integral short Weierstrass models
y^2 = x^3 + a4*x + a6, together with the -D quadratic twist model

    -D * (y/2)^2 = x^3 + a4*x + a6

whose rational points are carried as triples (u, v, w) with x = u/w^2,
y = v/w^3 and no sixth power dividing gcd(u^3, v^2, w^6).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint

__all__ = [
    "CurveQ",
    "RationalPoint",
    "TwistPoint",
    "curve_from_string",
    "point_from_string",
    "add_points",
    "negate_point",
    "multiply_point",
    "on_curve",
    "count_points_mod_p",
    "torsion_subgroup_order",
    "torsion_points",
    "twist_point_on_curve",
    "normalize_twist_point",
]


@dataclass(frozen=True)
class CurveQ:
    """y^2 = x^3 + a4*x + a6 with integer coefficients and nonzero discriminant."""

    a4: int
    a6: int
    conductor: int | None = None

    def __post_init__(self):
        if self.discriminant() == 0:
            raise ValueError("singular curve: discriminant vanishes")
        if self.conductor is not None:
            if self.conductor <= 0:
                raise ValueError("conductor must be positive")
            if self.a4 == 0 and self.conductor % 3 != 0:
                # j = 0 curves have conductor divisible by 3
                raise ValueError("conductor of a j=0 curve must be divisible by 3")

    def discriminant(self) -> int:
        return -16 * (4 * self.a4**3 + 27 * self.a6**2)

    def j_invariant(self) -> Fraction:
        return Fraction(-1728 * (4 * self.a4) ** 3, self.discriminant())

    def __str__(self):
        return f"{self.a4},{self.a6}"


def mordell_curve(a: int, conductor: int | None = None) -> CurveQ:
    """The curve y^2 = x^3 - a (the scanned family), a > 0."""
    if a <= 0:
        raise ValueError("family parameter must be positive")
    return CurveQ(0, -a, conductor)


def curve_from_string(text: str) -> CurveQ:
    parts = text.strip().split(",")
    if len(parts) != 2:
        raise ValueError(f"cannot parse curve literal {text!r} (want 'a4,a6')")
    return CurveQ(int(parts[0]), int(parts[1]))


@dataclass(frozen=True)
class RationalPoint:
    """(A/C^2, B/C^3) in height normal form with gcd(A,C) = gcd(B,C) = 1,
    or the point at infinity (flagged, coordinates all zero)."""

    A: int
    B: int
    C: int
    infinity: bool = False

    def __post_init__(self):
        if self.infinity:
            if (self.A, self.B, self.C) != (0, 0, 0):
                raise ValueError("infinity carries no coordinates")
            return
        if self.C <= 0:
            raise ValueError("denominator root C must be positive")
        if gcd(self.A, self.C) != 1 or gcd(self.B, self.C) != 1:
            raise ValueError("coordinates not in height normal form")

    @classmethod
    def at_infinity(cls):
        return cls(0, 0, 0, infinity=True)

    @classmethod
    def from_xy(cls, x: Fraction, y: Fraction):
        x, y = Fraction(x), Fraction(y)
        C = isqrt(x.denominator)
        if C * C != x.denominator or y.denominator != C**3:
            raise ValueError(f"({x}, {y}) is not in (A/C^2, B/C^3) shape")
        return cls(x.numerator, y.numerator, C)

    def x(self) -> Fraction:
        if self.infinity:
            raise ValueError("infinity has no x-coordinate")
        return Fraction(self.A, self.C * self.C)

    def y(self) -> Fraction:
        if self.infinity:
            raise ValueError("infinity has no y-coordinate")
        return Fraction(self.B, self.C**3)

    def __str__(self):
        if self.infinity:
            return "inf"
        return f"{self.x()},{self.y()}"


def point_from_string(text: str) -> RationalPoint:
    """Parse "x,y" with rational coordinates, or "inf"; exact round-trip."""
    text = text.strip().removeprefix("(").removesuffix(")")
    if text == "inf":
        return RationalPoint.at_infinity()
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"cannot parse point literal {text!r}")
    return RationalPoint.from_xy(Fraction(parts[0].strip()), Fraction(parts[1].strip()))


def on_curve(E: CurveQ, P: RationalPoint) -> bool:
    if P.infinity:
        return True
    x, y = P.x(), P.y()
    return y * y == x**3 + E.a4 * x + E.a6


def add_points(E: CurveQ, P: RationalPoint, Q: RationalPoint) -> RationalPoint:
    """Group law; infinity is the identity, vertical chords return infinity."""
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    x1, y1, x2, y2 = P.x(), P.y(), Q.x(), Q.y()
    if x1 == x2:
        if y1 + y2 == 0:
            return RationalPoint.at_infinity()
        lam = (3 * x1 * x1 + E.a4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return RationalPoint.from_xy(x3, y3)


def negate_point(P: RationalPoint) -> RationalPoint:
    if P.infinity:
        return P
    return RationalPoint(P.A, -P.B, P.C)


def multiply_point(E: CurveQ, n: int, P: RationalPoint) -> RationalPoint:
    if n < 0:
        return multiply_point(E, -n, negate_point(P))
    R = RationalPoint.at_infinity()
    Q = P
    while n:
        if n & 1:
            R = add_points(E, R, Q)
        Q = add_points(E, Q, Q)
        n >>= 1
    return R


def count_points_mod_p(E: CurveQ, p: int) -> int:
    """|E(F_p)| including infinity, for any prime p (bad reduction allowed).

    For p > 3 uses the quadratic character sum p + 1 + sum chi(x^3+a4 x+a6);
    tiny p are counted directly.
    """
    if p < 2:
        raise ValueError("p must be prime")
    if p <= 3:
        count = 1
        for x in range(p):
            fx = (x**3 + E.a4 * x + E.a6) % p
            for y in range(p):
                if (y * y - fx) % p == 0:
                    count += 1
        return count
    count = p + 1
    half = (p - 1) // 2
    for x in range(p):
        fx = (x**3 + E.a4 * x + E.a6) % p
        if fx == 0:
            continue
        count += 1 if pow(fx, half, p) == 1 else -1
    return count


def _integer_roots(c3: int, c1: int, c0: int) -> list:
    """Integer roots of x^3 + c1*x + c0 (monic, c3 kept for clarity = 1)."""
    assert c3 == 1
    if c0 == 0:
        roots = [0]
        if c1 < 0:
            r = isqrt(-c1)
            if r * r == -c1:
                roots += [r, -r]
        return roots
    roots = []
    for d in sorted(_divisors(abs(c0))):
        for r in (d, -d):
            if r**3 + c1 * r + c0 == 0:
                roots.append(r)
    return roots


def _divisors(n: int) -> list:
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def torsion_points(E: CurveQ) -> list:
    """E_tor(Q) by Nagell-Lutz: integral candidates with y = 0 or y^2 | Delta,
    kept when some multiple n <= 12 hits infinity (Mazur bound)."""
    disc = abs(E.discriminant())
    candidates = set()
    for x in _integer_roots(1, E.a4, E.a6):
        candidates.add((x, 0))
    ys = set()
    for combo in _square_divisor_roots(disc):
        ys.add(combo)
    for y in ys:
        for x in _integer_roots(1, E.a4, E.a6 - y * y):
            candidates.add((x, y))
            candidates.add((x, -y))
    points = [RationalPoint.at_infinity()]
    for x, y in sorted(candidates):
        P = RationalPoint(x, y, 1)
        if not on_curve(E, P):
            continue
        Q = P
        for _ in range(1, 13):  # rational torsion has order <= 12 (Mazur)
            if Q.infinity:
                points.append(P)
                break
            if Q.C != 1:
                break  # non-integral multiple: infinite order by Nagell-Lutz
            Q = add_points(E, Q, P)
    return points


def _square_divisor_roots(n: int):
    """Positive y with y^2 | n."""
    fac = factorint(n)
    ys = [1]
    for p, e in fac.items():
        ys = [y * p**k for y in ys for k in range(e // 2 + 1)]
    return sorted(set(ys))


def torsion_subgroup_order(E: CurveQ) -> int:
    order = len(torsion_points(E))
    assert order <= 16, "Mazur bound violated; torsion search is wrong"
    return order


# ---------------------------------------------------------------------------
# Twist model


@dataclass(frozen=True)
class TwistPoint:
    """Point (u/w^2, v/w^3) on -D (y/2)^2 = x^3 + a4 x + a6, normalized so
    that no sixth power divides gcd(u^3, v^2, w^6)."""

    u: int
    v: int
    w: int
    D: int

    def __post_init__(self):
        if self.w <= 0:
            raise ValueError("w must be positive")
        if self.D <= 0:
            raise ValueError("twists are by -D with D positive")
        # p^6 | gcd(u^3, v^2, w^6)  <=>  p | w, p^2 | u, p^3 | v
        for p in factorint(self.w):
            if self.u % p**2 == 0 and self.v % p**3 == 0:
                raise ValueError("sixth power divides gcd(u^3, v^2, w^6)")
        if self.D % 2 == 1 and self.v % 2 != 0:
            raise ValueError("v must be even when the twist -D is odd")

    def x(self) -> Fraction:
        return Fraction(self.u, self.w**2)

    def y(self) -> Fraction:
        return Fraction(self.v, self.w**3)

    def __str__(self):
        return f"{self.x()},{self.y()}"


def twist_point_on_curve(E: CurveQ, Q: TwistPoint) -> bool:
    """Cleared-denominator identity -D v^2 = 4(u^3 + a4 u w^4 + a6 w^6)."""
    u, v, w = Q.u, Q.v, Q.w
    return -Q.D * v * v == 4 * (u**3 + E.a4 * u * w**4 + E.a6 * w**6)


def normalize_twist_point(E: CurveQ, D: int, x, y) -> TwistPoint:
    """Canonical (u, v, w) for a rational point (x, y) on the -D twist model.

    w is minimal positive with w^2 x and w^3 y integral, which is exactly
    the sixth-power-free normalization.  Rejects points off the model or
    with u*v = 0.
    """
    x, y = Fraction(x), Fraction(y)
    if D <= 0:
        raise ValueError("D must be positive")
    w = 1
    for p, e in factorint(x.denominator).items():
        w *= p ** ((e + 1) // 2)
    for p, e in factorint(y.denominator).items():
        w = _lcm_prime_power(w, p, (e + 2) // 3)
    u = x * w * w
    v = y * w**3
    if u.denominator != 1 or v.denominator != 1:
        raise ValueError("denominators are not of the (w^2, w^3) shape")
    Q = TwistPoint(int(u), int(v), w, D)
    if not twist_point_on_curve(E, Q):
        raise ValueError(f"({x}, {y}) does not lie on the -{D} twist model")
    if Q.u == 0 or Q.v == 0:
        raise ValueError("pairing requires u*v != 0")
    return Q


def _lcm_prime_power(w: int, p: int, e: int) -> int:
    have = 0
    ww = w
    while ww % p == 0:
        ww //= p
        have += 1
    return w * p ** max(0, e - have)
