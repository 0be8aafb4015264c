"""Effective class number lower bounds from a rank-r curve profile and a
twist point of small y-height.

For a curve E with rank r, regulator R, torsion order T0, diameter d(E) and
offset delta(E) (see heights.curve_offset), and a twist point
Q = (u/w^2, v/w^3) on the -D model, the certified bound is

    h(-D) >= c(E,Q) * T^(r/2) - chat(E,Q) * T^((r-1)/2),
    T = log(D / (|u| + w^2)) - delta(E),

valid whenever Q is *suitable*:

    (|u| + w^2) exp(delta(E) + d(E)) < D < (|u| + w^2)^2 max(|u|, w^2)^2 / v^4.

Constants:  c(E) = T0 * Omega_r / (2^(r+1) sqrt(R)),
            c(E,Q) = c(E) * prod_{p | w} (1 - 1/|E(F_p)|),
            chat(E,Q) = 2 * 3^r * r * sqrt(d(E)) * c(E) * S(w),
with Omega_r the unit ball volume and S(w) the number of squarefree
divisors of w.  The left suitability comparison is decided by interval
arithmetic (the right one is exact integer arithmetic); reported bound
values are lower endpoints, so a printed bound is always a valid claim.
"""

from dataclasses import dataclass
from math import isqrt

from mpmath import mp, mpf, log, exp, pi, sqrt as msqrt

from sympy import factorint

from .arith import squarefree_divisor_count
from .curve import CurveQ, TwistPoint, count_points_mod_p, on_curve, torsion_subgroup_order
from .heights import HeightValue, curve_offset, diameter, regulator

__all__ = [
    "CurveProfile",
    "BoundReport",
    "profile_curve",
    "unit_ball_volume",
    "leading_constant",
    "twisted_leading_constant",
    "error_constant",
    "height_budget",
    "is_suitable",
    "class_number_lower_bound",
    "asymptotic_lower_bound",
    "goldfeld_gross_zagier_bound",
    "ratio_threshold",
    "UndecidableComparison",
]

# Analytic constants quoted by the ratio argument behind ratio_threshold;
# recorded for the empirical check only, never re-derived here.
ROSSER_SCHOENFELD_PI_BOUND = 1.255056  # pi(x) <= 1.255056 x / log x
EULER_MASCHERONI = 0.5772156649015329
RATIO_CONSTANT = 0.2158  # c(E,Q)/c(E) > RATIO_CONSTANT / log log D for scan points


class UndecidableComparison(ArithmeticError):
    """A strict inequality could not be certified at working precision."""


@dataclass(frozen=True)
class CurveProfile:
    """Everything the bound formulas need to know about E(Q)."""

    curve: CurveQ
    rank: int
    basis: tuple
    torsion_order: int
    regulator: HeightValue
    diameter: HeightValue
    offset: HeightValue
    ball_volume: HeightValue


def unit_ball_volume(r: int) -> HeightValue:
    """Volume of the unit ball in R^r via Omega_r = Omega_{r-2} * 2 pi / r."""
    if r < 0:
        raise ValueError("dimension must be nonnegative")
    with mp.workdps(mp.dps + 10):
        vols = [mpf(1), mpf(2)]
        for k in range(2, r + 1):
            vols.append(vols[k - 2] * 2 * pi / k)
        v = vols[r]
    return HeightValue(v, abs(v) * mpf(10) ** (-mp.dps - 2))


def profile_curve(E: CurveQ, basis: list, tol=mpf("1e-12")) -> CurveProfile:
    for i, P in enumerate(basis):
        if not on_curve(E, P):
            raise ValueError(f"basis point {i} ({P}) is not on the curve")
    return CurveProfile(
        curve=E,
        rank=len(basis),
        basis=tuple(basis),
        torsion_order=torsion_subgroup_order(E),
        regulator=regulator(E, list(basis), tol),
        diameter=diameter(E, list(basis), tol),
        offset=curve_offset(E),
        ball_volume=unit_ball_volume(len(basis)),
    )


def _mul(a: HeightValue, b: HeightValue) -> HeightValue:
    v = a.value * b.value
    e = abs(a.value) * b.error_bound + abs(b.value) * a.error_bound + a.error_bound * b.error_bound
    return HeightValue(v, e)


def _scale(a: HeightValue, k) -> HeightValue:
    return HeightValue(a.value * k, a.error_bound * abs(mpf(k)))


def _sqrt(a: HeightValue) -> HeightValue:
    if a.value <= 0:
        raise ValueError("square root of a nonpositive bound input")
    v = msqrt(a.value)
    return HeightValue(v, a.error_bound / (2 * v) * mpf("1.01"))


def leading_constant(profile: CurveProfile) -> HeightValue:
    """c(E) = |E_tor| * Omega_r / (2^(r+1) sqrt(R))."""
    r = profile.rank
    if r < 1:
        raise ValueError("the leading constant requires rank >= 1")
    sq = _sqrt(profile.regulator)
    num = _scale(profile.ball_volume, profile.torsion_order)
    v = num.value / (2 ** (r + 1) * sq.value)
    e = (num.error_bound / sq.value + abs(num.value) * sq.error_bound / sq.value**2) / 2 ** (r + 1)
    return HeightValue(v, e * mpf("1.01"))


def twisted_leading_constant(profile: CurveProfile, Q: TwistPoint) -> HeightValue:
    """c(E,Q) = c(E) * prod over primes p | w of (1 - 1/|E(F_p)|)."""
    c = leading_constant(profile)
    for p in sorted(factorint(Q.w)):
        npts = count_points_mod_p(profile.curve, p)
        c = _scale(c, mpf(npts - 1) / npts)
    return c


def error_constant(profile: CurveProfile, Q: TwistPoint) -> HeightValue:
    """chat(E,Q) = 2 * 3^r * r * sqrt(d(E)) * c(E) * S(w)."""
    r = profile.rank
    if r < 1:
        raise ValueError("the error constant requires rank >= 1")
    base = _mul(_sqrt(profile.diameter), leading_constant(profile))
    return _scale(base, 2 * 3**r * r * squarefree_divisor_count(Q.w))


def height_budget(profile: CurveProfile, D: int, Q: TwistPoint) -> HeightValue:
    """T(-D, Q) = log(D / (|u| + w^2)) - delta(E); may be negative."""
    if D <= 0:
        raise ValueError("D must be positive")
    width = abs(Q.u) + Q.w * Q.w
    v = log(mpf(D) / width) - profile.offset.value
    return HeightValue(v, profile.offset.error_bound + mpf(10) ** (-mp.dps + 2))


def is_suitable(profile: CurveProfile, D: int, Q: TwistPoint) -> bool:
    """The two-sided smallness condition on Q enabling the bound.

    Left side ((|u|+w^2) exp(delta+d) < D) is certified by interval
    arithmetic; right side (D < (|u|+w^2)^2 max(|u|,w^2)^2 / v^4) is exact.
    """
    if Q.u == 0 or Q.v == 0:
        return False
    width = abs(Q.u) + Q.w * Q.w
    # right inequality, exactly: D * v^4 < width^2 * max(|u|, w^2)^2
    if D * Q.v**4 >= width**2 * max(abs(Q.u), Q.w * Q.w) ** 2:
        return False
    ex = profile.offset.value + profile.diameter.value
    err = profile.offset.error_bound + profile.diameter.error_bound
    with mp.workdps(mp.dps + 15):
        hi = width * exp(ex + err) * (1 + mpf(10) ** (-mp.dps - 5))
        lo = width * exp(ex - err) * (1 - mpf(10) ** (-mp.dps - 5))
    if hi < D:
        return True
    if lo >= D:
        return False
    raise UndecidableComparison(
        f"D = {D} lies inside the interval [{lo}, {hi}] of the left suitability bound")


@dataclass(frozen=True)
class BoundReport:
    """Assembled bound data for one (E, Q, D); lower_bound is certified
    (interval lower endpoint) and only present when the point is suitable."""

    D: int
    Q: TwistPoint
    budget: HeightValue
    leading: HeightValue
    error_term: HeightValue
    suitable: bool
    lower_bound: HeightValue | None
    ggz: object = None  # display-only comparison value


def class_number_lower_bound(profile: CurveProfile, D: int, Q: TwistPoint,
                             with_ggz: bool = True) -> BoundReport:
    """h(-D) >= c(E,Q) T^(r/2) - chat(E,Q) T^((r-1)/2) when Q is suitable.

    Unsuitable points get a report with suitable=False and no bound.
    """
    r = profile.rank
    budget = height_budget(profile, D, Q)
    c = twisted_leading_constant(profile, Q)
    chat = error_constant(profile, Q)
    suitable = is_suitable(profile, D, Q)
    lower = None
    if suitable:
        T = budget
        assert T.value > 0, "suitability forces a positive budget"
        main = _mul(c, _power_half(T, r))
        err = _mul(chat, _power_half(T, r - 1))
        lower = HeightValue(main.value - err.value, main.error_bound + err.error_bound)
    return BoundReport(
        D=D,
        Q=Q,
        budget=budget,
        leading=c,
        error_term=chat,
        suitable=suitable,
        lower_bound=lower,
        ggz=goldfeld_gross_zagier_bound(D) if with_ggz else None,
    )


def _power_half(T: HeightValue, k: int) -> HeightValue:
    """T^(k/2) with error propagation (T > 0)."""
    if k == 0:
        return HeightValue(mpf(1), mpf(0))
    v = T.value ** (mpf(k) / 2)
    deriv = (mpf(k) / 2) * T.value ** (mpf(k) / 2 - 1)
    return HeightValue(v, abs(deriv) * T.error_bound * mpf("1.01"))


def asymptotic_lower_bound(profile: CurveProfile, D: int) -> HeightValue:
    """(c(E)/5) * (log D)^(r/2) / log log D, the simplified comparison bound."""
    if D < 16:
        raise ValueError("need D >= 16 so that log log D > 0")
    r = profile.rank
    c = leading_constant(profile)
    scale = log(mpf(D)) ** (mpf(r) / 2) / log(log(mpf(D))) / 5
    return _scale(c, scale)


def goldfeld_gross_zagier_bound(D: int):
    """(1/7000) log D * prod over p | D, p != D of (1 - floor(2 sqrt p)/(p+1)).

    Display-only classical comparison value, never certified by this
    package.
    """
    if D <= 1:
        raise ValueError("D must exceed 1")
    v = log(mpf(D)) / 7000
    for p in sorted(factorint(D)):
        if p == D:
            continue
        v *= 1 - mpf(isqrt(4 * p)) / (p + 1)
    return v


def ratio_threshold(D: int):
    """0.2158 / log log D: the proven floor for c(E,Q)/c(E) on scan output
    with bounded t (empirically checked by the acceptance suite)."""
    if D < 16:
        raise ValueError("need D >= 16")
    return mpf(RATIO_CONSTANT) / log(log(mpf(D)))
