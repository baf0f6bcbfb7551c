"""Exact arithmetic in towers of field extensions of the rationals.

A tower is a chain Q = L_0 < L_1 < ... < L_k where each L_i is the quotient
of L_{i-1}[X] by a monic polynomial of degree >= 2.  Elements are nested
dense coefficient tuples bottoming out at ``fractions.Fraction``, always
reduced modulo every level's minimal polynomial and zero-padded to the full
level degree, so equality is plain structural comparison.

Irreducibility of adjoined polynomials is *not* decided eagerly (dynamic
evaluation).  When an inversion exposes a proper factor of some level's
minimal polynomial, a :class:`~isotower.errors.ReducibilityError` is raised
carrying the factor; callers may split the level with :func:`refine_tower`
and retry.

All values are immutable after construction and all operations are pure, so
towers and elements can be shared freely across threads and processes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ReducibilityError, ReducibilityWitness, ZeroInverse

F0 = Fraction(0)
F1 = Fraction(1)

KIND_SQRT = "quadratic-sqrt"
KIND_BASE = "base-root"

RationalLike = Union[int, Fraction]

# ---------------------------------------------------------------------------
# raw nested-data arithmetic
#
# A raw value at level 0 is a Fraction; at level k >= 1 it is a tuple of
# exactly deg_k raw values at level k-1.  The per-level context carries the
# zero/one constants and the reduction data for the level's minimal
# polynomial, precomputed once per tower.
# ---------------------------------------------------------------------------


class _LevelCtx:
    __slots__ = (
        "degree",
        "kind",
        "zero",
        "one",
        "minpoly",
        "red_tail",
        "sqrt_const",
        "sqrt_const_rat",
    )

    def __init__(self, degree, kind, zero, one, minpoly, red_tail, sqrt_const, sqrt_const_rat):
        self.degree = degree
        self.kind = kind
        self.zero = zero          # zero of the level *below*
        self.one = one            # one of the level below
        self.minpoly = minpoly    # raw coeffs over level below, monic, len degree+1
        self.red_tail = red_tail  # nonzero (index, coeff) pairs of minpoly below X^deg
        self.sqrt_const = sqrt_const        # c for minpoly X^2 - c, else None
        self.sqrt_const_rat = sqrt_const_rat  # Fraction if c is rational-valued


def _raw_zero(ctx, lv):
    if lv == 0:
        return F0
    below = _raw_zero(ctx, lv - 1)
    return tuple(below for _ in range(ctx[lv - 1].degree))


def _raw_one(ctx, lv):
    if lv == 0:
        return F1
    below = _raw_zero(ctx, lv - 1)
    return ((_raw_one(ctx, lv - 1),) + (below,) * (ctx[lv - 1].degree - 1))


def _is_zero(a, lv):
    if lv == 0:
        return not a
    return all(_is_zero(x, lv - 1) for x in a)


def _add(ctx, lv, a, b):
    if lv == 0:
        return a + b
    return tuple(_add(ctx, lv - 1, x, y) for x, y in zip(a, b))


def _sub(ctx, lv, a, b):
    if lv == 0:
        return a - b
    return tuple(_sub(ctx, lv - 1, x, y) for x, y in zip(a, b))


def _neg(ctx, lv, a):
    if lv == 0:
        return -a
    return tuple(_neg(ctx, lv - 1, x) for x in a)


def _scale(ctx, lv, a, q):
    """Multiply by a plain Fraction, cheaply."""
    if lv == 0:
        return a * q
    return tuple(_scale(ctx, lv - 1, x, q) for x in a)


def _mul(ctx, lv, a, b):
    if lv == 0:
        return a * b
    lc = ctx[lv - 1]
    if lc.sqrt_const is not None:
        # level X^2 - c: Karatsuba with one extra scale by c
        a0, a1 = a
        b0, b1 = b
        lo = lv - 1
        a1z = _is_zero(a1, lo)
        b1z = _is_zero(b1, lo)
        if a1z and b1z:
            return (_mul(ctx, lo, a0, b0), lc.zero)
        if a1z:
            return (_mul(ctx, lo, a0, b0), _mul(ctx, lo, a0, b1))
        if b1z:
            return (_mul(ctx, lo, a0, b0), _mul(ctx, lo, a1, b0))
        p00 = _mul(ctx, lo, a0, b0)
        p11 = _mul(ctx, lo, a1, b1)
        cross = _sub(
            ctx,
            lo,
            _mul(ctx, lo, _add(ctx, lo, a0, a1), _add(ctx, lo, b0, b1)),
            _add(ctx, lo, p00, p11),
        )
        if lc.sqrt_const_rat is not None:
            hi = _add(ctx, lo, p00, _scale(ctx, lo, p11, lc.sqrt_const_rat))
        else:
            hi = _add(ctx, lo, p00, _mul(ctx, lo, p11, lc.sqrt_const))
        return (hi, cross)
    # generic level: schoolbook product then fold X^d = -tail
    d = lc.degree
    lo = lv - 1
    zero = lc.zero
    prod = [zero] * (2 * d - 1)
    for i, x in enumerate(a):
        if _is_zero(x, lo):
            continue
        for j, y in enumerate(b):
            if _is_zero(y, lo):
                continue
            prod[i + j] = _add(ctx, lo, prod[i + j], _mul(ctx, lo, x, y))
    for i in range(2 * d - 2, d - 1, -1):
        top = prod[i]
        if _is_zero(top, lo):
            continue
        for j, mc in lc.red_tail:
            prod[i - d + j] = _sub(ctx, lo, prod[i - d + j], _mul(ctx, lo, top, mc))
    return tuple(prod[:d])


def _sqr(ctx, lv, a):
    if lv == 0:
        return a * a
    lc = ctx[lv - 1]
    if lc.sqrt_const is not None:
        a0, a1 = a
        lo = lv - 1
        if _is_zero(a1, lo):
            return (_sqr(ctx, lo, a0), lc.zero)
        p0 = _sqr(ctx, lo, a0)
        p1 = _sqr(ctx, lo, a1)
        cr = _mul(ctx, lo, a0, a1)
        if lc.sqrt_const_rat is not None:
            hi = _add(ctx, lo, p0, _scale(ctx, lo, p1, lc.sqrt_const_rat))
        else:
            hi = _add(ctx, lo, p0, _mul(ctx, lo, p1, lc.sqrt_const))
        return (hi, _add(ctx, lo, cr, cr))
    return _mul(ctx, lv, a, a)


def _embed_up(ctx, lv_from, a, lv_to):
    """View a level lv_from value at level lv_to >= lv_from."""
    for lv in range(lv_from, lv_to):
        pad = _raw_zero(ctx, lv)
        a = (a,) + (pad,) * (ctx[lv].degree - 1)
    return a


# -- dense polynomial helpers over a fixed level (raw coefficient lists) -----


def _ptrim(coeffs, lv):
    n = len(coeffs)
    while n and _is_zero(coeffs[n - 1], lv):
        n -= 1
    return list(coeffs[:n])


def _pdivmod(ctx, lv, num, den):
    """Exact division with remainder over the level-lv field (den nonzero)."""
    num = _ptrim(num, lv)
    den = _ptrim(den, lv)
    if not den:
        raise ZeroInverse("polynomial division by zero")
    inv_lead = _inv(ctx, lv, den[-1])
    quot = [_raw_zero(ctx, lv)] * max(0, len(num) - len(den) + 1)
    rem = list(num)
    dd = len(den) - 1
    while len(rem) >= len(den) and rem:
        c = _mul(ctx, lv, rem[-1], inv_lead)
        k = len(rem) - len(den)
        quot[k] = c
        for j in range(dd):
            rem[k + j] = _sub(ctx, lv, rem[k + j], _mul(ctx, lv, c, den[j]))
        rem.pop()
        rem = _ptrim(rem, lv)
    return quot, rem


def _pmul(ctx, lv, a, b):
    if not a or not b:
        return []
    zero = _raw_zero(ctx, lv)
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _is_zero(x, lv):
            continue
        for j, y in enumerate(b):
            out[i + j] = _add(ctx, lv, out[i + j], _mul(ctx, lv, x, y))
    return _ptrim(out, lv)


def _psub(ctx, lv, a, b):
    n = max(len(a), len(b))
    zero = _raw_zero(ctx, lv)
    aa = list(a) + [zero] * (n - len(a))
    bb = list(b) + [zero] * (n - len(b))
    return _ptrim([_sub(ctx, lv, x, y) for x, y in zip(aa, bb)], lv)


def _pmonic(ctx, lv, a):
    a = _ptrim(a, lv)
    if not a:
        return a
    inv_lead = _inv(ctx, lv, a[-1])
    return [_mul(ctx, lv, c, inv_lead) for c in a]


def _inv(ctx, lv, a):
    """Exact inverse; raises ZeroInverse on 0 and ReducibilityError on a
    zero divisor exposing a proper minpoly factor."""
    if lv == 0:
        if not a:
            raise ZeroInverse("inverse of zero")
        return 1 / a
    if _is_zero(a, lv):
        raise ZeroInverse("inverse of zero")
    lo = lv - 1
    lc = ctx[lv - 1]
    acoeffs = _ptrim(a, lo)
    if len(acoeffs) == 1:
        inv0 = _inv(ctx, lo, acoeffs[0])
        pad = _raw_zero(ctx, lo)
        return (inv0,) + (pad,) * (lc.degree - 1)
    # extended Euclid against the minimal polynomial, tracking only the
    # cofactor of a:  s*a = r (mod minpoly)
    r0 = list(lc.minpoly)
    r1 = acoeffs
    s0: list = []
    s1 = [_raw_one(ctx, lo)]
    while len(r1) > 1:
        q, r = _pdivmod(ctx, lo, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(ctx, lo, s0, _pmul(ctx, lo, q, s1))
    if not r1:
        factor = _pmonic(ctx, lo, r0)
        raise ReducibilityError(ReducibilityWitness(level=lv, factor=tuple(factor)))
    inv_g = _inv(ctx, lo, r1[0])
    out = [_mul(ctx, lo, c, inv_g) for c in s1]
    pad = _raw_zero(ctx, lo)
    out = out + [pad] * (lc.degree - len(out))
    return tuple(out[: lc.degree])


def _pow(ctx, lv, a, n):
    if n < 0:
        return _pow(ctx, lv, _inv(ctx, lv, a), -n)
    result = _raw_one(ctx, lv)
    base = a
    while n:
        if n & 1:
            result = _mul(ctx, lv, result, base)
        base = _sqr(ctx, lv, base)
        n >>= 1
    return result


# ---------------------------------------------------------------------------
# public wrappers
# ---------------------------------------------------------------------------


class Level:
    """One tower level: a monic minimal polynomial over the level below."""

    __slots__ = ("label", "minpoly", "kind", "degree")

    def __init__(self, label: str, minpoly: tuple, kind: str):
        self.label = label
        self.minpoly = minpoly
        self.kind = kind
        self.degree = len(minpoly) - 1

    def __eq__(self, other):
        return (
            isinstance(other, Level)
            and self.label == other.label
            and self.minpoly == other.minpoly
            and self.kind == other.kind
        )

    def __hash__(self):
        return hash((self.label, self.minpoly, self.kind))

    def __repr__(self):
        return f"Level({self.label!r}, deg={self.degree}, kind={self.kind})"


class TowerField:
    """A chain of extensions of Q, each a quotient by a monic polynomial.

    Immutable; :meth:`extend` returns a new tower sharing this one as a
    prefix, so elements of the old tower remain valid in the new one.
    """

    __slots__ = ("levels", "_ctx", "_hash")

    def __init__(self, levels: Sequence[Level] = ()):
        self.levels = tuple(levels)
        ctx: list = []
        for i, level in enumerate(self.levels):
            lv_below = i  # element level of the coefficients
            zero = _raw_zero(ctx, lv_below)
            one = _raw_one(ctx, lv_below)
            d = level.degree
            tail = level.minpoly[:d]
            red = tuple((j, c) for j, c in enumerate(tail) if not _is_zero(c, lv_below))
            sqrt_const = None
            sqrt_rat = None
            if level.kind == KIND_SQRT:
                sqrt_const = _neg(ctx, lv_below, level.minpoly[0])
                sqrt_rat = _rational_value_raw(sqrt_const, lv_below)
            ctx.append(
                _LevelCtx(d, level.kind, zero, one, level.minpoly, red, sqrt_const, sqrt_rat)
            )
        self._ctx = tuple(ctx)
        self._hash = hash(self.levels)

    # -- structure ----------------------------------------------------------

    @property
    def height(self) -> int:
        return len(self.levels)

    def degree_of_level(self, lv: int) -> int:
        return self.levels[lv - 1].degree

    def absolute_degree(self, level: int | None = None) -> int:
        """Product of level degrees up to ``level`` (default: whole tower)."""
        if level is None:
            level = len(self.levels)
        d = 1
        for lev in self.levels[:level]:
            d *= lev.degree
        return d

    def is_prefix_of(self, other: "TowerField") -> bool:
        return self.levels == other.levels[: len(self.levels)]

    def __eq__(self, other):
        return isinstance(other, TowerField) and self.levels == other.levels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        chain = " < ".join(["Q"] + [f"{lev.label}(deg {lev.degree})" for lev in self.levels])
        return f"TowerField[{chain}]"

    # -- element constructors -------------------------------------------------

    def zero(self, level: int | None = None) -> "TowerElement":
        lv = self.height if level is None else level
        return TowerElement(self, lv, _raw_zero(self._ctx, lv))

    def one(self, level: int | None = None) -> "TowerElement":
        lv = self.height if level is None else level
        return TowerElement(self, lv, _raw_one(self._ctx, lv))

    def rational(self, q: RationalLike, level: int | None = None) -> "TowerElement":
        lv = self.height if level is None else level
        return TowerElement(self, lv, _embed_up(self._ctx, 0, Fraction(q), lv))

    def gen(self, level: int | None = None) -> "TowerElement":
        """The generator (root of the minimal polynomial) of a level."""
        lv = self.height if level is None else level
        if lv < 1:
            raise ValueError("the rational base has no generator")
        lc = self._ctx[lv - 1]
        pad = lc.zero
        data = (pad, lc.one) + (pad,) * (lc.degree - 2)
        return TowerElement(self, lv, data)

    def element(self, level: int, data) -> "TowerElement":
        """Wrap raw nested data (validated for shape) as an element."""
        _check_shape(self._ctx, level, data)
        return TowerElement(self, level, data)

    def from_coeffs(self, level: int, coeffs: Sequence["TowerElement"]) -> "TowerElement":
        """Element of ``level`` from coefficients over the level below."""
        if level < 1:
            raise ValueError("from_coeffs needs level >= 1")
        d = self.degree_of_level(level)
        if len(coeffs) > d:
            raise ValueError("too many coefficients")
        pad = _raw_zero(self._ctx, level - 1)
        data = []
        for c in coeffs:
            if isinstance(c, TowerElement):
                data.append(c.embed(level - 1).data)
            else:
                data.append(_embed_up(self._ctx, 0, Fraction(c), level - 1))
        data += [pad] * (d - len(data))
        return TowerElement(self, level, tuple(data))


def _check_shape(ctx, lv, data):
    if lv == 0:
        if not isinstance(data, Fraction):
            raise TypeError("level-0 data must be a Fraction")
        return
    if not isinstance(data, tuple) or len(data) != ctx[lv - 1].degree:
        raise TypeError(f"level-{lv} data must be a tuple of length {ctx[lv - 1].degree}")
    for x in data:
        _check_shape(ctx, lv - 1, x)


def _rational_value_raw(data, lv):
    """The Fraction a raw value equals, or None if it is not constant."""
    if lv == 0:
        return data
    head = _rational_value_raw(data[0], lv - 1)
    if head is None:
        return None
    for x in data[1:]:
        if not _is_zero(x, lv - 1):
            return None
    return head


class TowerElement:
    """An element of a tower level; immutable, exact, hashable."""

    __slots__ = ("tower", "level", "data")

    def __init__(self, tower: TowerField, level: int, data):
        self.tower = tower
        self.level = level
        self.data = data

    # -- structural helpers ---------------------------------------------------

    def is_zero(self) -> bool:
        return _is_zero(self.data, self.level)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def rational_value(self) -> Fraction | None:
        """The Fraction this element equals, or None if non-constant."""
        return _rational_value_raw(self.data, self.level)

    def embed(self, level: int) -> "TowerElement":
        """The same value viewed at a higher level of the same tower."""
        if level < self.level:
            raise ValueError("cannot embed downward")
        if level > self.tower.height:
            raise ValueError("embedding level exceeds the tower height")
        if level == self.level:
            return self
        return TowerElement(
            self.tower, level, _embed_up(self.tower._ctx, self.level, self.data, level)
        )

    def in_tower(self, tower: TowerField) -> "TowerElement":
        """Retag into any tower agreeing with this one up to the element's level."""
        if tower is self.tower:
            return self
        if self.tower.levels[: self.level] != tower.levels[: self.level]:
            raise ValueError("towers disagree below the element's level")
        return TowerElement(tower, self.level, self.data)

    def coeffs(self) -> tuple["TowerElement", ...]:
        """Coefficients over the level below (level >= 1)."""
        if self.level < 1:
            raise ValueError("a rational has no coefficient vector")
        return tuple(TowerElement(self.tower, self.level - 1, c) for c in self.data)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.tower is self.tower or other.tower == self.tower:
                pass
            elif self.tower.is_prefix_of(other.tower):
                return self.in_tower(other.tower)._coerce(other)
            elif other.tower.is_prefix_of(self.tower):
                other = other.in_tower(self.tower)
            else:
                raise ValueError("elements of incompatible towers")
            lv = max(self.level, other.level)
            return self.embed(lv), other.embed(lv)
        if isinstance(other, (int, Fraction)):
            return self, self.tower.rational(other, self.level)
        return self, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return TowerElement(a.tower, a.level, _add(a.tower._ctx, a.level, a.data, b.data))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return TowerElement(a.tower, a.level, _sub(a.tower._ctx, a.level, a.data, b.data))

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return TowerElement(a.tower, a.level, _sub(a.tower._ctx, a.level, b.data, a.data))

    def __neg__(self):
        return TowerElement(self.tower, self.level, _neg(self.tower._ctx, self.level, self.data))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElement(
                self.tower, self.level, _scale(self.tower._ctx, self.level, self.data, Fraction(other))
            )
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return TowerElement(a.tower, a.level, _mul(a.tower._ctx, a.level, a.data, b.data))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, n: int):
        return TowerElement(self.tower, self.level, _pow(self.tower._ctx, self.level, self.data, n))

    def inverse(self) -> "TowerElement":
        return TowerElement(self.tower, self.level, _inv(self.tower._ctx, self.level, self.data))

    def square(self) -> "TowerElement":
        return TowerElement(self.tower, self.level, _sqr(self.tower._ctx, self.level, self.data))

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower.rational(other, self.level)
        if not isinstance(other, TowerElement):
            return NotImplemented
        try:
            a, b = self._coerce(other)
        except ValueError:
            return False
        return a.level == b.level and a.data == b.data

    def __hash__(self):
        return hash((self.level, self.data))

    def __repr__(self):
        return f"TowerElement(level={self.level}, {self})"

    def __str__(self):
        return _render(self.tower, self.level, self.data)


def _render(tower, lv, data):
    if lv == 0:
        return str(data)
    label = tower.levels[lv - 1].label
    parts = []
    for i, c in enumerate(data):
        if _is_zero(c, lv - 1):
            continue
        cs = _render(tower, lv - 1, c)
        if i == 0:
            parts.append(cs)
        else:
            mono = label if i == 1 else f"{label}^{i}"
            parts.append(mono if cs == "1" else f"({cs})*{mono}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# dense univariate polynomials over a tower level
# ---------------------------------------------------------------------------


class Poly:
    """Dense univariate polynomial with coefficients at one tower level.

    Coefficients are lowest degree first; the leading coefficient of a
    nonzero polynomial is nonzero.
    """

    __slots__ = ("tower", "level", "coeffs")

    def __init__(self, tower: TowerField, level: int, coeffs: Iterable):
        norm = []
        for c in coeffs:
            if isinstance(c, TowerElement):
                norm.append(c.in_tower(tower).embed(level))
            else:
                norm.append(tower.rational(c, level))
        while norm and norm[-1].is_zero():
            norm.pop()
        self.tower = tower
        self.level = level
        self.coeffs = tuple(norm)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> TowerElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.tower.zero(self.level)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.level == other.level
            and len(self.coeffs) == len(other.coeffs)
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.level, tuple(c.data for c in self.coeffs)))

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.tower, self.level, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.tower, self.level, [self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return Poly(self.tower, self.level, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TowerElement)):
            s = other if isinstance(other, TowerElement) else self.tower.rational(other, self.level)
            return Poly(self.tower, self.level, [c * s for c in self.coeffs])
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.tower, self.level, [])
        zero = self.tower.zero(self.level)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.tower, self.level, out)

    __rmul__ = __mul__

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly(self.tower, self.level, [other])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        ctx = self.tower._ctx
        num = [c.data for c in self.coeffs]
        den = [c.data for c in other.coeffs]
        q, r = _pdivmod(ctx, self.level, num, den)
        wrap = lambda cs: Poly(
            self.tower, self.level, [TowerElement(self.tower, self.level, c) for c in cs]
        )
        return wrap(q), wrap(r)

    def __call__(self, x: TowerElement) -> TowerElement:
        """Horner evaluation; x may live at a higher level or extension tower."""
        if not self.coeffs:
            return x.tower.zero(x.level)
        acc = x.tower.zero(x.level)
        for c in reversed(self.coeffs):
            acc = acc * x + c.in_tower(x.tower).embed(x.level)
        return acc

    def raw_coeffs(self) -> tuple:
        return tuple(c.data for c in self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "1" if i == 0 else ("X" if i == 1 else f"X^{i}")
            terms.append(f"({c})*{mono}" if i else f"{c}")
        return "Poly(" + " + ".join(terms) + ")"


# ---------------------------------------------------------------------------
# tower construction operations
# ---------------------------------------------------------------------------


def tower_extend(
    tower: TowerField,
    minpoly: Poly | Sequence,
    kind: str | None = None,
    label: str | None = None,
) -> TowerField:
    """Adjoin a root of a monic polynomial of degree >= 2 over the current top.

    Irreducibility is not verified eagerly; a reducible minpoly surfaces later
    as a :class:`ReducibilityError` during some inversion.
    """
    top = tower.height
    if isinstance(minpoly, Poly):
        if minpoly.level != top:
            raise ValueError("minpoly coefficients must live at the current top level")
        coeffs = list(minpoly.coeffs)
    else:
        coeffs = [
            c.in_tower(tower).embed(top) if isinstance(c, TowerElement) else tower.rational(c, top)
            for c in minpoly
        ]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 2:
        raise ValueError("minimal polynomial must have degree >= 2")
    if coeffs[-1] != 1:
        raise ValueError("minimal polynomial must be monic")
    is_sqrt_shape = deg == 2 and coeffs[1].is_zero()
    if kind is None:
        kind = KIND_SQRT if is_sqrt_shape else KIND_BASE
    if kind == KIND_SQRT and not is_sqrt_shape:
        raise ValueError("quadratic-sqrt levels require shape X^2 - c")
    if kind not in (KIND_SQRT, KIND_BASE):
        raise ValueError(f"unknown level kind {kind!r}")
    taken = {level.label for level in tower.levels}
    if label is None:
        n = top + 1
        while f"g{n}" in taken:
            n += 1
        label = f"g{n}"
    if label in taken:
        raise ValueError(f"duplicate level label {label!r}")
    raw = tuple(c.data for c in coeffs)
    return TowerField(tower.levels + (Level(label, raw, kind),))


def absolute_degree(tower: TowerField, level: int | None = None) -> int:
    return tower.absolute_degree(level)


def embed(x: TowerElement, target_level: int) -> TowerElement:
    return x.embed(target_level)


def elem_arith(x: TowerElement, y: TowerElement, op: str) -> TowerElement:
    """Named arithmetic entry point: op in {add, sub, mul}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown op {op!r}")


def elem_inv(x: TowerElement) -> TowerElement:
    return x.inverse()


def _project_raw(ctx, data, level, lv, factor):
    """Reduce raw data at ``level`` modulo a factor of the level-``lv`` minpoly.

    For a linear factor the witnessed level disappears (evaluation at the
    root); otherwise coefficient vectors at that level shrink to deg(factor).
    """
    deg = len(factor) - 1
    if level < lv:
        return data
    if level == lv:
        if deg == 1:
            root = _neg(ctx, lv - 1, factor[0])
            acc = _raw_zero(ctx, lv - 1)
            for c in reversed(data):
                acc = _add(ctx, lv - 1, _mul(ctx, lv - 1, acc, root), c)
            return acc
        _, rem = _pdivmod(ctx, lv - 1, list(data), list(factor))
        pad = _raw_zero(ctx, lv - 1)
        rem = rem + [pad] * (deg - len(rem))
        return tuple(rem[:deg])
    return tuple(_project_raw(ctx, c, level - 1, lv, factor) for c in data)


def refine_tower(tower: TowerField, witness: ReducibilityWitness) -> TowerField:
    """Split a level by a discovered proper factor of its minimal polynomial.

    Returns the tower where the witnessed level's minpoly is replaced by the
    factor (the level is dropped entirely when the factor is linear); the
    minimal polynomials of higher levels are reduced along.  Elements of the
    old tower are carried over with :func:`project_element`.
    """
    lv = witness.level
    factor = tuple(witness.factor)
    deg = len(factor) - 1
    ctx = tower._ctx
    new_levels = list(tower.levels[: lv - 1])
    old = tower.levels[lv - 1]
    if deg >= 2:
        kind = KIND_SQRT if (deg == 2 and _is_zero(factor[1], lv - 1)) else KIND_BASE
        new_levels.append(Level(old.label, factor, kind))
    for j in range(lv, tower.height):
        higher = tower.levels[j]
        minpoly = tuple(_project_raw(ctx, c, j, lv, factor) for c in higher.minpoly)
        new_levels.append(Level(higher.label, minpoly, higher.kind))
    return TowerField(new_levels)


def project_element(x: TowerElement, witness: ReducibilityWitness, refined: TowerField) -> TowerElement:
    """Carry an element into the refined tower (reduce modulo the factor)."""
    lv = witness.level
    factor = tuple(witness.factor)
    deg = len(factor) - 1
    new_level = x.level - 1 if deg == 1 and x.level >= lv else x.level
    return TowerElement(refined, new_level, _project_raw(x.tower._ctx, x.data, x.level, lv, factor))


QQ = TowerField(())

__all__ = [
    "F0",
    "F1",
    "KIND_SQRT",
    "KIND_BASE",
    "Level",
    "TowerField",
    "TowerElement",
    "Poly",
    "QQ",
    "tower_extend",
    "absolute_degree",
    "embed",
    "elem_arith",
    "elem_inv",
    "refine_tower",
    "project_element",
]
