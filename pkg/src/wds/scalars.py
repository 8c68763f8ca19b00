"""Exact scalar arithmetic: the field Q(p1, ..., pk) of rational functions.

Scalars are quotients num/den of sparse multivariate polynomials with
Fraction coefficients over a fixed, lexicographically ordered tuple of
parameter names.  Canonical form: gcd(num, den) = 1 and den monic under
graded-lex monomial order, so equality of values is equality of
representations.  With no parameters everything collapses to plain
rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Expo = tuple  # exponent tuple, one entry per parameter
MP = dict  # sparse polynomial {exponent tuple: Fraction}


class ParamRing:
    """A fixed ordered set of parameter names (possibly empty)."""

    __slots__ = ("names", "nvars", "_zero_expo")

    def __init__(self, names: Iterable[str] = ()):
        ordered = tuple(sorted(set(names)))
        self.names = ordered
        self.nvars = len(ordered)
        self._zero_expo = (0,) * self.nvars

    def __eq__(self, other):
        return isinstance(other, ParamRing) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"ParamRing{self.names}"

    # -- constructors ------------------------------------------------

    def zero(self) -> "Scalar":
        return Scalar(self, {}, {self._zero_expo: Fraction(1)}, True)

    def one(self) -> "Scalar":
        return self.const(1)

    def const(self, q) -> "Scalar":
        q = Fraction(q)
        num = {} if q == 0 else {self._zero_expo: q}
        return Scalar(self, num, {self._zero_expo: Fraction(1)}, True)

    def param(self, name: str) -> "Scalar":
        i = self.names.index(name)
        expo = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Scalar(self, {expo: Fraction(1)}, {self._zero_expo: Fraction(1)}, True)


# ---------------------------------------------------------------------------
# polynomial helpers, operating on raw dicts
# ---------------------------------------------------------------------------


def _grlex_key(e: Expo):
    return (sum(e), e)


def mp_add(a: MP, b: MP) -> MP:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v = v + c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def mp_neg(a: MP) -> MP:
    return {e: -c for e, c in a.items()}

def mp_mul(a: MP, b: MP) -> MP:
    if not a or not b:
        return {}
    out: MP = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[e] = v
                else:
                    del out[e]
    return out


def mp_scale(a: MP, q: Fraction) -> MP:
    if not q:
        return {}
    return {e: c * q for e, c in a.items()}


def mp_is_const(a: MP) -> bool:
    return len(a) == 0 or (len(a) == 1 and not any(next(iter(a))))


def mp_leading(a: MP) -> tuple[Expo, Fraction]:
    e = max(a, key=_grlex_key)
    return e, a[e]


def mp_div_exact(a: MP, b: MP) -> MP:
    """Exact division a / b; raises ArithmeticError if not divisible."""
    if not a:
        return {}
    eb, cb = mp_leading(b)
    rem = dict(a)
    quo: MP = {}
    while rem:
        ea, ca = mp_leading(rem)
        de = tuple(x - y for x, y in zip(ea, eb))
        if any(x < 0 for x in de):
            raise ArithmeticError("inexact polynomial division")
        q = ca / cb
        quo[de] = quo.get(de, Fraction(0)) + q
        rem = mp_add(rem, mp_neg(mp_mul({de: q}, b)))
    return {e: c for e, c in quo.items() if c}


def _degree_in(a: MP, v: int) -> int:
    return max((e[v] for e in a), default=-1)


def _to_uni(a: MP, v: int) -> list[MP]:
    """View a as a polynomial in variable v with MP coefficients."""
    d = _degree_in(a, v)
    coeffs: list[MP] = [{} for _ in range(d + 1)]
    for e, c in a.items():
        rest = e[:v] + (0,) + e[v + 1 :]
        coeffs[e[v]][rest] = coeffs[e[v]].get(rest, Fraction(0)) + c
    return [{e: c for e, c in p.items() if c} for p in coeffs]


def _from_uni(coeffs: list[MP], v: int) -> MP:
    out: MP = {}
    for k, p in enumerate(coeffs):
        for e, c in p.items():
            ee = e[:v] + (k,) + e[v + 1 :]
            out[ee] = out.get(ee, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def _uni_trim(p: list[MP]) -> list[MP]:
    while p and not p[-1]:
        p.pop()
    return p


def _uni_prem(a: list[MP], b: list[MP]) -> list[MP]:
    """Pseudo-remainder of a by b (univariate over MP coefficients)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and _uni_trim(a):
        da, la = len(a) - 1, a[-1]
        a = [mp_mul(c, lb) for c in a]
        shift = da - db
        for i, c in enumerate(b):
            a[i + shift] = mp_add(a[i + shift], mp_neg(mp_mul(c, la)))
        _uni_trim(a)
        if len(a) - 1 == da and a:  # no progress should be impossible
            raise ArithmeticError("pseudo-division failed")
    return a


def _content(p: list[MP]) -> MP:
    g: MP = {}
    for c in p:
        if c:
            g = mp_gcd(g, c)
    return g


def mp_gcd(a: MP, b: MP) -> MP:
    """Monic gcd over Q; returns {(): 1}-style unit for coprime input."""
    if not a and not b:
        return {}
    if not a:
        return _mp_monic(b)
    if not b:
        return _mp_monic(a)
    if mp_is_const(a) or mp_is_const(b):
        e = next(iter(a))
        return {(0,) * len(e): Fraction(1)}
    # main variable: highest index occurring in either
    nv = len(next(iter(a)))
    v = max(
        i for i in range(nv) if _degree_in(a, i) > 0 or _degree_in(b, i) > 0
    )
    ua, ub = _to_uni(a, v), _to_uni(b, v)
    ca, cb = _content(ua), _content(ub)
    pa = [mp_div_exact(c, ca) if c else {} for c in ua]
    pb = [mp_div_exact(c, cb) if c else {} for c in ub]
    if len(pa) < len(pb):
        pa, pb = pb, pa
    while any(pb):
        r = _uni_prem(pa, pb)
        if not any(r):
            pa, pb = pb, []
            break
        cr = _content(r)
        pa, pb = pb, [mp_div_exact(c, cr) if c else {} for c in r]
    cpart = mp_gcd(ca, cb)
    return _mp_monic(mp_mul(_from_uni(pa, v), cpart))


def _mp_monic(a: MP) -> MP:
    if not a:
        return a
    _, lc = mp_leading(a)
    if lc == 1:
        return a
    inv = 1 / lc
    return {e: c * inv for e, c in a.items()}


# ---------------------------------------------------------------------------
# the field element
# ---------------------------------------------------------------------------


class Scalar:
    """Element of Q(p1,...,pk) in canonical form."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: ParamRing, num: MP, den: MP, _canonical: bool = False):
        self.ring = ring
        if _canonical:
            self.num = num
            self.den = den
            return
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num = {}
            self.den = {ring._zero_expo: Fraction(1)}
            return
        if not mp_is_const(den):
            g = mp_gcd(num, den)
            if not mp_is_const(g):
                num = mp_div_exact(num, g)
                den = mp_div_exact(den, g)
        _, lc = mp_leading(den)
        if lc != 1:
            inv = 1 / lc
            num = {e: c * inv for e, c in num.items()}
            den = {e: c * inv for e, c in den.items()}
        self.num = num
        self.den = den

    # -- predicates ---------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    def is_const(self) -> bool:
        return mp_is_const(self.num) and mp_is_const(self.den)

    def as_fraction(self) -> Fraction:
        if not self.num:
            return Fraction(0)
        if not self.is_const():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.num.values()))

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise ValueError("scalars from different parameter rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return Scalar(self.ring, mp_add(self.num, other.num), dict(self.den))
        num = mp_add(mp_mul(self.num, other.den), mp_mul(other.num, self.den))
        return Scalar(self.ring, num, mp_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ring, mp_neg(self.num), self.den, True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.num or not other.num:
            return self.ring.zero()
        return Scalar(
            self.ring, mp_mul(self.num, other.num), mp_mul(self.den, other.den)
        )

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inverting zero scalar")
        return Scalar(self.ring, dict(self.den), dict(self.num))

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(
            (
                tuple(sorted(self.num.items())),
                tuple(sorted(self.den.items())),
            )
        )

    # -- rendering ----------------------------------------------------

    def _poly_str(self, p: MP) -> str:
        if not p:
            return "0"
        parts = []
        for e in sorted(p, key=_grlex_key, reverse=True):
            c = p[e]
            factors = []
            for name, k in zip(self.ring.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __str__(self):
        ns = self._poly_str(self.num)
        if mp_is_const(self.den):
            return ns
        ds = self._poly_str(self.den)
        if len(self.num) > 1:
            ns = f"({ns})"
        return f"{ns}/({ds})"

    def __repr__(self):
        return f"Scalar({self})"


Q = ParamRing()  # the plain rational field, shared default

ScalarLike = Union[Scalar, int, Fraction]
