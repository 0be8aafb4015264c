"""Integral positive definite binary quadratic forms of negative discriminant:
reduction, SL2(Z)-equivalence, and class numbers by enumeration of reduced forms.

A form (a, b, c) is a*X^2 + b*XY + c*Y^2 with b^2 - 4ac < 0 and a > 0.  The
reduced representative satisfies |b| <= a <= c, with b >= 0 when |b| = a or
a = c, and is unique in its class, so equality of reductions decides
equivalence.
"""

from dataclasses import dataclass
from math import isqrt

__all__ = [
    "QuadForm",
    "reduce_form",
    "equivalent",
    "class_number",
    "all_reduced_forms",
    "form_from_string",
]


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant() >= 0:
            raise ValueError(f"form {self.as_tuple()} is not positive definite")

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def as_tuple(self):
        return (self.a, self.b, self.c)

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def form_from_string(text: str) -> QuadForm:
    """Parse "(a,b,c)" (parentheses optional); exact round-trip with str()."""
    inner = text.strip().removeprefix("(").removesuffix(")")
    parts = [p.strip() for p in inner.split(",")]
    if len(parts) != 3:
        raise ValueError(f"cannot parse form literal {text!r}")
    a, b, c = (int(p) for p in parts)
    return QuadForm(a, b, c)


def reduce_form(f: QuadForm) -> QuadForm:
    """The unique reduced representative of the SL2(Z)-class of f."""
    a, b, c = f.a, f.b, f.c
    while True:
        # normalize: shift b into (-a, a]
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c = a * r * r + b * r + c
            b = b2
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        break
    g = QuadForm(a, b, c)
    assert g.is_reduced() and g.discriminant() == f.discriminant()
    return g


def equivalent(f: QuadForm, g: QuadForm) -> bool:
    """SL2(Z)-equivalence, decided by comparing reduced representatives."""
    return reduce_form(f) == reduce_form(g)


def _check_discriminant(D: int) -> None:
    if D <= 0 or D % 4 not in (0, 3):
        raise ValueError(f"-{D} is not a negative discriminant (need D = 0, 3 mod 4)")


def all_reduced_forms(D: int) -> list:
    """All reduced forms of discriminant -D, in lexicographic (a, b, c) order.

    D need not be fundamental; callers wanting field discriminants should
    check is_fundamental_discriminant(-D) themselves.
    """
    _check_discriminant(D)
    forms = []
    a = 1
    while 4 * a * a <= 3 * D:  # a <= sqrt(D/3)
        # b = D mod 2, b^2 = -D mod 4a, c = (b^2 + D) / (4a)
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            forms.append(QuadForm(a, b, c))
        a += 1
    forms.sort(key=QuadForm.as_tuple)
    return forms


def class_number(D: int) -> int:
    """h(-D): the number of reduced positive definite forms of discriminant -D."""
    return len(all_reduced_forms(D))


def class_number_by_b_sweep(D: int) -> int:
    """Independent second route: enumerate by b and factor (b^2 + D)/4 = a*c.

    Counts pairs a <= c with a*c = (b^2+D)/4, |b| <= a, and the reduction
    tie-break; used as a cross-check oracle for class_number.
    """
    _check_discriminant(D)
    count = 0
    b = D % 2
    while 3 * b * b <= D:  # |b| <= a <= c forces 3b^2 <= D
        m4 = b * b + D
        assert m4 % 4 == 0
        m = m4 // 4
        for a in range(max(b, 1), isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            # count both signs of b where the class is genuinely distinct
            if b == 0 or a == b or a == c:
                count += 1
            else:
                count += 2
        b += 2
    return count
