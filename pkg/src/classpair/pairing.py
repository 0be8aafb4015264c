"""The ideal class pairing E(Q) x E_{-D}(Q) -> CL(-D).

Given P = (A/C^2, B/C^3) on E and Q = (u/w^2, v/w^3) on the -D twist model
with u*v != 0, set

    alpha = |A w^2 - u C^2|,   G = gcd(alpha, C^6 v^2),   g = alpha / G.

Then there are integers l for which

    F(X,Y) = g X^2 + b XY + ((b^2 + D) / (4g)) Y^2,
    b = (2 w^3 B + l g) / (C^3 v),

is an integral positive definite form of discriminant -D.  Solving for l
amounts to the linear congruence l g = -2 w^3 B (mod C^3 v) together with
the classical form condition b^2 = -D (mod 4g); the joint condition on l
is periodic with period dividing 4 |C^3 v|, so a bounded deterministic
search (smallest nonnegative l first) either finds l or certifies a
precondition violation.
"""

from dataclasses import dataclass
from math import gcd

from .curve import CurveQ, RationalPoint, TwistPoint, on_curve, twist_point_on_curve
from .forms import QuadForm, reduce_form

__all__ = [
    "PairingInput",
    "PairingOutput",
    "PairingError",
    "DegeneratePairing",
    "EllSearchExhausted",
    "pair",
    "pair_batch",
    "check_inequivalence_criterion",
]


class PairingError(ValueError):
    pass


class DegeneratePairing(PairingError):
    """Inputs outside the pairing's domain (infinity, u*v = 0, alpha = 0)."""


class EllSearchExhausted(PairingError):
    """No valid l in a full period: some precondition must be violated."""


@dataclass(frozen=True)
class PairingInput:
    E: CurveQ
    P: RationalPoint
    Q: TwistPoint
    D: int

    def __post_init__(self):
        if self.D != self.Q.D:
            raise PairingError(f"Q lives on the -{self.Q.D} twist, not -{self.D}")
        if self.P.infinity:
            raise DegeneratePairing("P must be a finite point")
        if self.Q.u == 0 or self.Q.v == 0:
            raise DegeneratePairing("pairing requires u*v != 0")
        if not on_curve(self.E, self.P):
            raise PairingError(f"P = {self.P} is not on E")
        if not twist_point_on_curve(self.E, self.Q):
            raise PairingError(f"Q = {self.Q} is not on the -{self.D} twist model")
        w2, w3 = self.Q.w**2, self.Q.w**3
        if self.D % gcd(self.Q.u, w2) or self.D % gcd(self.Q.v, w3):
            raise PairingError("gcd(u, w^2) and gcd(v, w^3) must divide D")


@dataclass(frozen=True)
class PairingOutput:
    form: QuadForm
    alpha: int
    G: int
    ell: int

    def leading(self) -> int:
        return self.alpha // self.G


def pair(inp: PairingInput, ell: int | None = None) -> PairingOutput:
    """Build the discriminant -D form attached to (P, Q).

    When ell is given it is validated and used verbatim (the worked
    regression in the test suite pins specific l values); otherwise the
    smallest nonnegative valid l is found by the bounded search described
    in the module docstring.
    """
    E, P, Q, D = inp.E, inp.P, inp.Q, inp.D
    A, B, C = P.A, P.B, P.C
    u, v, w = Q.u, Q.v, Q.w
    alpha = abs(A * w * w - u * C * C)
    if alpha == 0:
        raise DegeneratePairing("alpha = 0: the pairing form is undefined here")
    G = gcd(alpha, C**6 * v * v)
    g = alpha // G
    V = C**3 * v  # signed
    s0 = 2 * w**3 * B

    def build(l: int) -> PairingOutput | None:
        s = s0 + l * g
        if s % V:
            return None
        b = s // V
        if (b * b + D) % (4 * g):
            return None
        form = QuadForm(g, b, (b * b + D) // (4 * g))
        assert form.discriminant() == -D
        return PairingOutput(form, alpha, G, l)

    if ell is not None:
        out = build(ell)
        if out is None:
            raise PairingError(f"l = {ell} does not make the form integral")
        return out

    # solve l g = -s0 (mod |V|), then scan one full period of the joint
    # condition (period | 4|V|), smallest nonnegative representative first
    aV = abs(V)
    d1 = gcd(g, aV)
    if (-s0) % d1:
        raise EllSearchExhausted("the linear congruence for l has no solution")
    mod = aV // d1
    l0 = ((-s0 // d1) * pow(g // d1, -1, mod)) % mod if mod > 1 else 0
    limit = l0 + max(4 * aV, 2 * aV * g) + mod
    l = l0
    while l <= limit:
        out = build(l)
        if out is not None:
            return out
        l += mod
    raise EllSearchExhausted(
        f"no valid l in a full period (searched l = {l0} step {mod} up to {limit})")


def pair_batch(E: CurveQ, points: list, Q: TwistPoint, D: int) -> list:
    """Distinct reduced forms obtained by pairing each finite point with Q.

    The count of the returned list is a certified lower bound for h(-D)
    when the points come from the bounded-height set of the main theorem
    and Q is suitable.  Points at infinity are skipped (their pairing is
    undefined); +-P collapse to one class.
    """
    seen = {}
    for P in points:
        if P.infinity:
            continue
        out = pair(PairingInput(E, P, Q, D))
        red = reduce_form(out.form)
        seen.setdefault(red.as_tuple(), red)
    return [seen[k] for k in sorted(seen)]


def check_inequivalence_criterion(o1: PairingOutput, o2: PairingOutput, D: int) -> bool:
    """Test oracle for the separation property of the pairing: if the two
    forms are SL2(Z)-equivalent then g1 = g2 or g1*g2 >= D/4."""
    if reduce_form(o1.form) != reduce_form(o2.form):
        return True
    g1, g2 = o1.leading(), o2.leading()
    return g1 == g2 or 4 * g1 * g2 >= D
