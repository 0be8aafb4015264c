"""Heights on E(Q): naive and Weil heights, the canonical height, height
pairing, regulator, diameter, and bounded-height point enumeration.

Canonical height normalization.  canonical_height returns

    hhat(P) = (1/2) lim h_W(nP) / n^2,

the normalization for which the Silverman comparison window

    -h_W(j)/8 - h_W(Delta)/12 - 0.973 <= hhat(P) - h_W(P)/2
                                       <= h_W(j)/12 + h_W(Delta)/12 + 1.07

holds.  The height pairing, regulator and diameter use the conventional
Neron-Tate pairing <P,Q> = hhat(P+Q) - hhat(P) - hhat(Q) (twice the
polarization above), which is the normalization under which the rank-3
reference curve y^2 = x^3 - 174 has regulator 46.1056.

Algorithm.  hhat is assembled from local contributions:

  * archimedean: the absolutely convergent series over the real doubling
    orbit x_j = x(2^j P),

        lam_inf(P) = sum_j 4^-(j+1) [ log|2 y_j| - (1/4) log|Delta| ],

  * finite p with p coprime to 2*Delta: ord_p of the x-denominator,
  * finite p | 2*Delta: push P into the kernel of reduction with a small
    multiple m (found by p-adic point addition), then use the division
    polynomial transformation

        lam_p(P) = D_p/12 + (e_p(mP) - ord_p(psi_m(P))) / m^2

    (in units of log p), where D_p = ord_p(Delta) and e_p is half the
    denominator valuation.

Every value carries a rigoros-in-practice error bound: exact rational
finite parts, series tail bound plus a two-precision agreement check for
the archimedean part.  The exact-doubling estimator of the definition is
kept as canonical_height_doubling and serves as an independent oracle.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from mpmath import mp, mpf, log, sqrt as msqrt

from sympy import factorint

from .curve import (
    CurveQ,
    RationalPoint,
    add_points,
    multiply_point,
    on_curve,
)

__all__ = [
    "HeightValue",
    "naive_height",
    "weil_height",
    "curve_offset",
    "silverman_window",
    "canonical_height",
    "canonical_height_doubling",
    "height_pairing",
    "gram_matrix",
    "regulator",
    "diameter",
    "bounded_height_points",
    "BitCapExceeded",
    "LinearDependenceError",
    "EnumerationCapError",
]

DOUBLING_BIT_CAP = 10**6
DIAMETER_CAP_RANK = 12  # 3^12 sign vectors is the enumeration ceiling


class BitCapExceeded(RuntimeError):
    pass


class LinearDependenceError(ValueError):
    pass


class EnumerationCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class HeightValue:
    """A real value together with a bound on its distance to the truth."""

    value: object  # mpf
    error_bound: object  # mpf >= 0

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return f"{self.value}+-{self.error_bound}"


def naive_height(P: RationalPoint) -> int:
    if P.infinity:
        raise ValueError("infinity has no naive height")
    return max(abs(P.A), P.C * P.C)


def weil_height(P: RationalPoint):
    """h_W(P) = log max(|A|, C^2)."""
    return log(mpf(naive_height(P)))


def _log_frac_height(q: Fraction):
    return log(mpf(max(abs(q.numerator), q.denominator)))


def curve_offset(E: CurveQ) -> HeightValue:
    """h_W(j)/2 + h_W(Delta)/3 + 20/3, the curve constant entering the
    height budget and the suitability window."""
    with mp.workdps(mp.dps + 10):
        v = _log_frac_height(E.j_invariant()) / 2
        v += log(mpf(abs(E.discriminant()))) / 3
        v += mpf(20) / 3
    return HeightValue(v, mpf(10) ** (-mp.dps))


def silverman_window(E: CurveQ):
    """(lo, hi) with lo <= hhat(P) - h_W(P)/2 <= hi for all P."""
    hj = _log_frac_height(E.j_invariant())
    hd = log(mpf(abs(E.discriminant())))
    lo = -(hj / 8 + hd / 12 + mpf("0.973"))
    hi = hj / 12 + hd / 12 + mpf("1.07")
    return lo, hi


# ---------------------------------------------------------------------------
# torsion shortcut


def _is_torsion(E: CurveQ, P: RationalPoint) -> bool:
    if P.infinity:
        return True
    if P.C != 1:
        return False  # Nagell-Lutz: rational torsion is integral
    Q = P
    for _ in range(1, 13):
        if Q.infinity:
            return True
        if Q.C != 1:
            return False
        Q = add_points(E, Q, P)
    return False


# ---------------------------------------------------------------------------
# archimedean local height


def _lam_inf_once(E: CurveQ, x0: Fraction, terms: int):
    logD = log(mpf(abs(E.discriminant())))
    a4, a6 = mpf(E.a4), mpf(E.a6)
    x = mpf(x0.numerator) / mpf(x0.denominator)
    acc = mpf(0)
    weight = mpf(1)
    max_term = mpf(0)
    for _ in range(terms):
        weight /= 4
        g = x**3 + a4 * x + a6
        g = abs(g)  # clamp rounding noise; real points have g >= 0
        term = log(2 * msqrt(g)) - logD / 4
        acc += weight * term
        if abs(term) > max_term:
            max_term = abs(term)
        num = x**4 - 2 * a4 * x * x - 8 * a6 * x + a4 * a4
        x = num / (4 * g)
    tail = (max_term + 40) * weight / 3
    return acc, tail


def _lam_inf(E: CurveQ, x0: Fraction, tol):
    """Archimedean local height with error bound: series truncation plus a
    two-precision agreement estimate for rounding drift."""
    terms = 40
    while (mpf(80) * mpf(4) ** (-terms)) > tol / 8:
        terms += 8
    base_dps = mp.dps
    dps = max(30, base_dps, int(terms * 0.65) + 25)
    with mp.workdps(dps):
        v1, tail = _lam_inf_once(E, x0, terms)
    with mp.workdps(dps + 15):
        v2, _ = _lam_inf_once(E, x0, terms)
        noise = abs(v1 - v2)
    return v2, tail + noise + mpf(10) ** (-(dps - 5))


# ---------------------------------------------------------------------------
# p-adic scaffolding for the bad finite places

_INF_ORD = 10**9


class _PrecisionLoss(ArithmeticError):
    pass


class _PAdic:
    """p^ord * unit with the unit known mod p^prec (capped-precision p-adic)."""

    __slots__ = ("p", "ord", "unit", "prec")

    def __init__(self, p, ordv, unit, prec):
        if unit % p == 0:
            raise _PrecisionLoss("unit must be a p-unit")
        self.p = p
        self.ord = ordv
        self.unit = unit % p**prec
        self.prec = prec

    @classmethod
    def zero(cls, p, prec):
        z = object.__new__(cls)
        z.p, z.ord, z.unit, z.prec = p, _INF_ORD, 1, prec
        return z

    @classmethod
    def from_frac(cls, q: Fraction, p: int, prec: int):
        if q == 0:
            return cls.zero(p, prec)
        num, den = q.numerator, q.denominator
        vn = _ord_int(num, p)
        vd = _ord_int(den, p)
        mod = p**prec
        unit = (num // p**vn) * pow(den // p**vd, -1, mod) % mod
        return cls(p, vn - vd, unit, prec)

    def is_zero(self):
        return self.ord >= _INF_ORD

    def __mul__(self, o):
        if self.is_zero() or o.is_zero():
            return _PAdic.zero(self.p, min(self.prec, o.prec))
        prec = min(self.prec, o.prec)
        return _PAdic(self.p, self.ord + o.ord, self.unit * o.unit % self.p**prec, prec)

    def __truediv__(self, o):
        if o.is_zero():
            raise ZeroDivisionError("p-adic division by zero")
        if self.is_zero():
            return _PAdic.zero(self.p, min(self.prec, o.prec))
        prec = min(self.prec, o.prec)
        mod = self.p**prec
        return _PAdic(self.p, self.ord - o.ord, self.unit * pow(o.unit, -1, mod) % mod, prec)

    def __neg__(self):
        if self.is_zero():
            return self
        return _PAdic(self.p, self.ord, -self.unit % self.p**self.prec, self.prec)

    def __add__(self, o):
        if self.is_zero():
            return o
        if o.is_zero():
            return self
        lo = min(self.ord, o.ord)
        prec = min(self.prec - (self.ord - lo), o.prec - (o.ord - lo))
        if prec <= 0:
            raise _PrecisionLoss("alignment exhausts precision")
        mod = self.p**prec
        v = (self.unit * self.p ** (self.ord - lo) + o.unit * self.p ** (o.ord - lo)) % mod
        if v == 0:
            raise _PrecisionLoss("cancellation exhausts precision")
        sh = _ord_int(v, self.p)
        return _PAdic(self.p, lo + sh, v // self.p**sh, prec - sh)

    def __sub__(self, o):
        return self + (-o)


def _ord_int(n: int, p: int) -> int:
    assert n != 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _padic_add_points(E, P, Q, p, prec):
    """Affine addition over Q_p; None is the point at infinity."""
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    cst = lambda k: _PAdic.from_frac(Fraction(k), p, prec)
    try:
        dx = x2 - x1
    except _PrecisionLoss:
        dx = _PAdic.zero(p, prec)
    if dx.is_zero():
        try:
            ysum = y1 + y2
            vertical = ysum.is_zero()
        except _PrecisionLoss:
            vertical = True
        if vertical:
            return None
        lam = (cst(3) * x1 * x1 + cst(E.a4)) / (cst(2) * y1)
    else:
        lam = (y2 - y1) / dx
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


_MULTIPLE_SEARCH_CAP = 4000


def _multiple_into_kernel(E, P: RationalPoint, p: int, prec: int):
    """Smallest m >= 1 with mP in the kernel of reduction mod p, together
    with e_p(mP) = -ord_p(x(mP))/2.  Exists because E(Q_p)/E_1 is finite."""
    base = (_PAdic.from_frac(P.x(), p, prec), _PAdic.from_frac(P.y(), p, prec))
    Q = base
    for m in range(1, _MULTIPLE_SEARCH_CAP + 1):
        if Q is None:
            raise ValueError("point is torsion; no kernel multiple needed")
        if Q[0].ord < 0:
            assert Q[0].ord % 2 == 0
            return m, -Q[0].ord // 2
        Q = _padic_add_points(E, Q, base, p, prec)
    raise EnumerationCapError(f"no multiple of P lands in the kernel mod {p} below {_MULTIPLE_SEARCH_CAP}")


def _psi_ladder(E, P: RationalPoint, p: int, prec: int, upto: int):
    """Division polynomial values psi_j(P) as p-adics, 0 <= j <= upto."""
    cst = lambda k: _PAdic.from_frac(Fraction(k), p, prec)
    x = _PAdic.from_frac(P.x(), p, prec)
    y = _PAdic.from_frac(P.y(), p, prec)
    A, B = cst(E.a4), cst(E.a6)
    x2 = x * x
    x3 = x2 * x
    x4 = x2 * x2
    x6 = x3 * x3
    psi = {
        0: _PAdic.zero(p, prec),
        1: cst(1),
        2: cst(2) * y,
        3: cst(3) * x4 + cst(6) * A * x2 + cst(12) * B * x - A * A,
        4: cst(4) * y * (x6 + cst(5) * A * x4 + cst(20) * B * x3
                         - cst(5) * A * A * x2 - cst(4) * A * B * x
                         - cst(8) * B * B - A * A * A),
    }
    two_y = psi[2]

    def get(n):
        if n not in psi:
            k = n // 2
            if n % 2:
                psi[n] = get(k + 2) * get(k) * get(k) * get(k) \
                    - get(k - 1) * get(k + 1) * get(k + 1) * get(k + 1)
            else:
                psi[n] = get(k) * (get(k + 2) * get(k - 1) * get(k - 1)
                                   - get(k - 2) * get(k + 1) * get(k + 1)) / two_y
        return psi[n]

    return get(upto)


def _lam_p(E, P: RationalPoint, p: int) -> Fraction:
    """Finite local height at p in units of log p (our fixed model)."""
    Dp = _ord_int(abs(E.discriminant()), p)
    e = _ord_int(P.C, p) if P.C % p == 0 else 0
    if e > 0:
        return Fraction(e) + Fraction(Dp, 12)
    if Dp == 0 and p != 2:
        return Fraction(0)
    prec = 120
    while True:
        try:
            m, e_m = _multiple_into_kernel(E, P, p, prec)
            psi_m = _psi_ladder(E, P, p, prec, m)
            if psi_m.is_zero():
                raise _PrecisionLoss("psi_m vanished to working precision")
            return Fraction(Dp, 12) + Fraction(e_m - psi_m.ord, m * m)
        except _PrecisionLoss:
            prec *= 2
            if prec > 40000:
                raise


def _bad_primes(E: CurveQ):
    return sorted(factorint(2 * abs(E.discriminant())).keys())


def canonical_height(E: CurveQ, P: RationalPoint, tol=mpf("1e-12")) -> HeightValue:
    """hhat(P) = (1/2) lim h_W(nP)/n^2, via local height decomposition.

    Torsion points (detected by the integral Nagell-Lutz criterion) return
    exactly 0.  The error bound combines the archimedean series tail with
    the exact rational finite parts.
    """
    if not on_curve(E, P):
        raise ValueError("point is not on the curve")
    if P.infinity or _is_torsion(E, P):
        return HeightValue(mpf(0), mpf(0))
    tol = mpf(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    with mp.workdps(max(mp.dps, 40)):
        total, err = _lam_inf(E, P.x(), tol)
        bad = _bad_primes(E)
        rem = P.C
        for p in bad:
            while rem % p == 0:
                rem //= p
        for p, e in factorint(rem).items():
            total += e * log(mpf(p))
        for p in bad:
            lam = _lam_p(E, P, p)
            if lam:
                total += mpf(lam.numerator) / lam.denominator * log(mpf(p))
    return HeightValue(total, err)


def canonical_height_doubling(E: CurveQ, P: RationalPoint, tol=mpf("1e-4"),
                              bit_cap: int = DOUBLING_BIT_CAP) -> HeightValue:
    """The definition computed literally: h_W(2^k P) / (2*4^k), with the
    Silverman window divided by 4^k as the error bound.

    Independent of the local-height path, hence usable as an oracle; the
    window shrinks only geometrically, so coordinate sizes grow fast and
    the bit cap bounds the reachable tolerance.
    """
    if not on_curve(E, P):
        raise ValueError("point is not on the curve")
    if P.infinity or _is_torsion(E, P):
        return HeightValue(mpf(0), mpf(0))
    lo, hi = silverman_window(E)
    center = (lo + hi) / 2
    radius = (hi - lo) / 2
    Q = P
    k = 0
    while radius / mpf(4) ** k >= tol:
        Q = add_points(E, Q, Q)
        k += 1
        if max(abs(Q.A).bit_length(), 2 * Q.C.bit_length()) > bit_cap:
            raise BitCapExceeded(
                f"coordinates exceed {bit_cap} bits at k={k} before reaching tol={tol}")
    est = weil_height(Q) / (2 * mpf(4) ** k)
    return HeightValue(est + center / mpf(4) ** k, radius / mpf(4) ** k)


def height_pairing(E: CurveQ, P: RationalPoint, Q: RationalPoint, tol=mpf("1e-12")) -> HeightValue:
    """Neron-Tate pairing <P,Q> = hhat(P+Q) - hhat(P) - hhat(Q).

    Symmetric and bilinear; <P,P> = 2 hhat(P).  This is the conventional
    regulator normalization (twice the polarization of hhat).
    """
    hs = canonical_height(E, add_points(E, P, Q), tol)
    hp = canonical_height(E, P, tol)
    hq = canonical_height(E, Q, tol)
    return HeightValue(hs.value - hp.value - hq.value,
                       hs.error_bound + hp.error_bound + hq.error_bound)


def gram_matrix(E: CurveQ, basis: list, tol=mpf("1e-12")):
    n = len(basis)
    G = [[None] * n for _ in range(n)]
    for i in range(n):
        hii = canonical_height(E, basis[i], tol)
        G[i][i] = HeightValue(2 * hii.value, 2 * hii.error_bound)
        for j in range(i + 1, n):
            G[i][j] = G[j][i] = height_pairing(E, basis[i], basis[j], tol)
    return G


def _det_with_error(G):
    """Determinant of a matrix of HeightValue entries, with first-order
    error propagation through cofactors."""
    n = len(G)
    if n == 0:
        return HeightValue(mpf(1), mpf(0))
    vals = [[G[i][j].value for j in range(n)] for i in range(n)]
    errs = [[G[i][j].error_bound for j in range(n)] for i in range(n)]

    def det(m):
        k = len(m)
        if k == 1:
            return m[0][0]
        total = mpf(0)
        for j in range(k):
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            sign = -1 if j % 2 else 1
            total += sign * m[0][j] * det(minor)
        return total

    d = det(vals)
    err = mpf(0)
    for i in range(n):
        for j in range(n):
            minor = [[vals[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det(minor) if minor else mpf(1)
            err += abs(cof) * errs[i][j]
    # second-order terms are negligible at these error scales; double as slack
    return HeightValue(d, 2 * err)


def regulator(E: CurveQ, basis: list, tol=mpf("1e-12")) -> HeightValue:
    """det of the Neron-Tate Gram matrix of the basis; 1 for an empty basis.

    Raises LinearDependenceError when the determinant is numerically
    indistinguishable from 0 (below 1e-8 after tightening), which signals a
    dependent input set.
    """
    if not basis:
        return HeightValue(mpf(1), mpf(0))
    for P in basis:
        if P.infinity or _is_torsion(E, P):
            raise LinearDependenceError("basis contains a torsion point")
    det = _det_with_error(gram_matrix(E, basis, tol))
    if det.value < mpf("1e-8"):
        det = _det_with_error(gram_matrix(E, basis, mpf(tol) / 100))
        if det.value < mpf("1e-8"):
            raise LinearDependenceError(
                f"Gram determinant {det.value} below 1e-8: dependent points suspected")
    return det


def diameter(E: CurveQ, basis: list, tol=mpf("1e-12")) -> HeightValue:
    """max over sign vectors delta in {-1,0,1}^r of 2*hhat(sum delta_i P_i),
    computed through the Gram quadratic form (2*hhat = delta^T G delta)."""
    r = len(basis)
    if r == 0:
        return HeightValue(mpf(0), mpf(0))
    if r > DIAMETER_CAP_RANK:
        raise EnumerationCapError(f"3^{r} sign vectors exceed the enumeration cap")
    G = gram_matrix(E, basis, tol)
    best = HeightValue(mpf(0), mpf(0))
    deltas = [0] * r

    def rec(i):
        nonlocal best
        if i == r:
            v = mpf(0)
            e = mpf(0)
            for a in range(r):
                if deltas[a] == 0:
                    continue
                for b in range(r):
                    if deltas[b] == 0:
                        continue
                    v += deltas[a] * deltas[b] * G[a][b].value
                    e += G[a][b].error_bound
            if v > best.value:
                best = HeightValue(v, e)
            return
        for s in (-1, 0, 1):
            deltas[i] = s
            rec(i + 1)

    rec(0)
    return best


def bounded_height_points(E: CurveQ, basis: list, torsion: list, T, w: int,
                          cap: int = 200000) -> list:
    """All P = sum n_i P_i + t with hhat(P) <= T/4 and gcd(C(P), w) = 1.

    Membership is decided through the Gram quadratic form (hhat is
    invariant under torsion translation), so only accepted lattice vectors
    are expanded into exact points.  Points are returned in lexicographic
    order of the coefficient vector, then torsion index; the point at
    infinity satisfies the gcd condition by convention.
    """
    T = mpf(T)
    if T <= 0:
        raise ValueError("T must be positive")
    r = len(basis)
    quarter = T / 4
    results = []
    if r == 0:
        boxes = [()]
    else:
        G = gram_matrix(E, basis)
        inv = _invert(G)
        bound = [int(msqrt(abs(inv[i][i]) * 2 * quarter)) + 2 for i in range(r)]
        boxes = _integer_box(bound)

    def qform(n):
        v = mpf(0)
        e = mpf(0)
        for a in range(r):
            if n[a] == 0:
                continue
            for b in range(r):
                if n[b] == 0:
                    continue
                v += n[a] * n[b] * G[a][b].value
                e += abs(n[a] * n[b]) * G[a][b].error_bound
        return v / 2, e / 2

    count = 0
    for n in boxes:
        if r:
            q, qe = qform(n)
            if q - qe > quarter:
                continue
            # include only certified members; the tiny error bounds make
            # borderline vectors a measure-zero concern
            if q + qe > quarter:
                continue
        S = RationalPoint.at_infinity()
        for ni, Pi in zip(n, basis):
            if ni:
                S = add_points(E, S, multiply_point(E, ni, Pi))
        for tpt in torsion:
            P = add_points(E, S, tpt)
            if P.infinity or gcd(P.C, w) == 1:
                results.append(P)
                count += 1
                if count > cap:
                    raise EnumerationCapError(f"more than {cap} points")
    return results


def _integer_box(bounds):
    out = [()]
    for b in bounds:
        out = [t + (k,) for t in out for k in range(-b, b + 1)]
    return out


def _invert(G):
    n = len(G)
    a = [[G[i][j].value for j in range(n)] + [mpf(1) if k == i else mpf(0) for k in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda rr: abs(a[rr][col]))
        if abs(a[piv][col]) == 0:
            raise LinearDependenceError("Gram matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for rr in range(n):
            if rr != col and a[rr][col] != 0:
                f = a[rr][col]
                a[rr] = [v - f * u for v, u in zip(a[rr], a[col])]
    return [row[n:] for row in a]
