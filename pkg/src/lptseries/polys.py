"""Exact scalars and bivariate polynomials used by all recursions.

Scalars are arbitrary-precision rationals, represented by the standard
library's ``fractions.Fraction`` (always canonical: reduced, positive
denominator).  ``str()`` of a Fraction is the textual interchange form
used everywhere in this package: ``"p/q"``, or ``"p"`` when the
denominator is 1.  ``parse_rational`` is the strict inverse; it rejects
floating-point literals on purpose, so exact data can never silently
lose precision on the way in.

``BiPoly`` is a sparse polynomial in two formal symbols:

* ``n``   -- the quantum number (level index), kept symbolic so one
             recursion run covers the ground state and every excitation;
* ``lam`` -- the coupling constant of the anharmonic terms.

Terms live in a dict mapping ``(deg_n, deg_lam)`` to a nonzero Fraction,
so structural equality of two polynomials is exactly mathematical
equality.  Values are immutable after construction and every operation
is a pure function; instances can be shared freely between threads.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse a strict ``"p"`` or ``"p/q"`` string into a Fraction.

    Rejects anything else, in particular decimal literals such as
    ``"0.5"`` (use ``1/2``) and zero denominators.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(
            f"not an integer or p/q rational: {text!r} "
            "(floating-point literals are not accepted)"
        )
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in rational: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact scalar, got {type(value).__name__}")


class BiPoly:
    """Sparse exact polynomial in the symbols ``n`` and ``lam``.

    The term map never stores a zero coefficient, so ``==`` on two
    instances is polynomial identity.  Arithmetic accepts ints and
    Fractions wherever a polynomial is expected.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | Iterable = ()):
        clean: dict[tuple[int, int], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (deg_n, deg_lam), coeff in items:
            if deg_n < 0 or deg_lam < 0:
                raise ValueError(f"negative exponent in term {(deg_n, deg_lam)}")
            key = (int(deg_n), int(deg_lam))
            total = clean.get(key, Fraction(0)) + _as_fraction(coeff)
            if total == 0:
                clean.pop(key, None)
            else:
                clean[key] = total
        self._terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar) -> "BiPoly":
        return cls({(0, 0): _as_fraction(value)})

    @classmethod
    def monomial(cls, coeff: Scalar, deg_n: int = 0, deg_lam: int = 0) -> "BiPoly":
        return cls({(deg_n, deg_lam): _as_fraction(coeff)})

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "BiPoly":
        """Rebuild a polynomial from its machine-format term records."""
        return cls(
            ((int(r["deg_n"]), int(r["deg_lam"])), parse_rational(str(r["coeff"])))
            for r in records
        )

    # -- coercion helper ------------------------------------------------

    @staticmethod
    def _coerce(value) -> "BiPoly":
        if isinstance(value, BiPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return BiPoly.constant(value)
        return NotImplemented  # type: ignore[return-value]

    # -- ring operations ------------------------------------------------

    def __add__(self, other) -> "BiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            total = out.get(key, Fraction(0)) + coeff
            if total == 0:
                out.pop(key, None)
            else:
                out[key] = total
        result = BiPoly.__new__(BiPoly)
        result._terms = out
        return result

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        result = BiPoly.__new__(BiPoly)
        result._terms = {key: -coeff for key, coeff in self._terms.items()}
        return result

    def __sub__(self, other) -> "BiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "BiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "BiPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict[tuple[int, int], Fraction] = {}
        for (an, al), ac in self._terms.items():
            for (bn, bl), bc in other._terms.items():
                key = (an + bn, al + bl)
                total = out.get(key, Fraction(0)) + ac * bc
                if total == 0:
                    out.pop(key, None)
                else:
                    out[key] = total
        result = BiPoly.__new__(BiPoly)
        result._terms = out
        return result

    __rmul__ = __mul__

    def scale_div(self, scalar: Scalar) -> "BiPoly":
        """Divide every coefficient exactly by a nonzero scalar."""
        s = _as_fraction(scalar)
        if s == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        result = BiPoly.__new__(BiPoly)
        result._terms = {key: coeff / s for key, coeff in self._terms.items()}
        return result

    # -- queries ----------------------------------------------------------

    def evaluate(self, n_value: Scalar, lam_value: Scalar) -> Fraction:
        """Exact substitution of both symbols."""
        n_val = _as_fraction(n_value)
        lam_val = _as_fraction(lam_value)
        total = Fraction(0)
        for (deg_n, deg_lam), coeff in self._terms.items():
            total += coeff * n_val**deg_n * lam_val**deg_lam
        return total

    def coefficient(self, deg_n: int, deg_lam: int) -> Fraction:
        return self._terms.get((deg_n, deg_lam), Fraction(0))

    def terms_sorted(self) -> list[tuple[int, int, Fraction]]:
        """Terms as ``(deg_n, deg_lam, coeff)``, ascending exponent order."""
        return [(dn, dl, self._terms[(dn, dl)]) for dn, dl in sorted(self._terms)]

    def to_records(self) -> list[dict]:
        """Machine-format term records, ascending exponent order."""
        return [
            {"deg_n": dn, "deg_lam": dl, "coeff": str(c)}
            for dn, dl, c in self.terms_sorted()
        ]

    def degree_n(self) -> int:
        """Degree in ``n``; -1 for the zero polynomial."""
        return max((dn for dn, _ in self._terms), default=-1)

    def degree_lam(self) -> int:
        """Degree in ``lam``; -1 for the zero polynomial."""
        return max((dl for _, dl in self._terms), default=-1)

    def is_lam_only(self) -> bool:
        """True when the polynomial does not involve the symbol ``n``."""
        return all(dn == 0 for dn, _ in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        keys = sorted(self._terms, key=lambda k: (k[0], k[1]), reverse=True)
        pieces: list[str] = []
        for dn, dl in keys:
            coeff = self._terms[(dn, dl)]
            symbols = []
            if dn:
                symbols.append("n" if dn == 1 else f"n^{dn}")
            if dl:
                symbols.append("lam" if dl == 1 else f"lam^{dl}")
            magnitude = abs(coeff)
            if symbols and magnitude == 1:
                body = "*".join(symbols)
            elif symbols:
                body = "*".join([str(magnitude)] + symbols)
            else:
                body = str(magnitude)
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"BiPoly<{self}>"


ZERO = BiPoly()
ONE = BiPoly.constant(1)
N = BiPoly.monomial(1, deg_n=1)
LAM = BiPoly.monomial(1, deg_lam=1)
