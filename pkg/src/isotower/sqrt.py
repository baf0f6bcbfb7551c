"""Square testing and square-root adjunction over tower fields.

Three tiers, dispatched on the level where the element lives:

1. rational base: integer square detection on numerator and denominator;
2. quadratic-sqrt levels K0(sqrt(d)): the complete denesting recursion,
   so the test is a decision procedure on chains of sqrt adjunctions;
3. general levels: modular square-root lifting (square root modulo a
   well-chosen prime, Hensel lift, rational reconstruction, exact
   verification).  When reconstruction fails at three independent primes
   and the precision cap, NonSquare is returned; the only failure mode is
   a false NonSquare, which at worst adds a collapsing tower level that
   dynamic evaluation detects later.

Every returned root is verified exactly (s*s == c) before it leaves this
module, so Sqrt answers are unconditionally sound.  All modular choices are
derived deterministically from the input data.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from math import gcd, isqrt

from .tower import (
    KIND_SQRT,
    TowerElement,
    TowerField,
    _embed_up,
    _inv,
    _is_zero,
    _mul,
    _neg,
    _scale,
    _sqr,
    _sub,
    _add,
    tower_extend,
)

# -- tier 1: rationals -------------------------------------------------------

_SMALL_PRIMES: list[int] = []


def _small_primes() -> list[int]:
    global _SMALL_PRIMES
    if not _SMALL_PRIMES:
        limit = 10000
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for i in range(2, isqrt(limit) + 1):
            if sieve[i]:
                sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
        _SMALL_PRIMES = [i for i in range(limit + 1) if sieve[i]]
    return _SMALL_PRIMES


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None."""
    if q < 0:
        return None
    rn = isqrt(q.numerator)
    if rn * rn != q.numerator:
        return None
    rd = isqrt(q.denominator)
    if rd * rd != q.denominator:
        return None
    return Fraction(rn, rd)


def squarefree_reduce(n: int) -> tuple[int, int]:
    """Write n = d * m^2 with the square part found by small-prime division.

    d keeps the sign of n.  Large square factors hiding behind primes above
    the trial bound stay inside d; that only costs minpoly minimality, never
    correctness.
    """
    if n == 0:
        raise ValueError("zero has no squarefree decomposition")
    sign = -1 if n < 0 else 1
    n = abs(n)
    d, m = 1, 1
    for p in _small_primes():
        if p * p > n:
            break
        if n % p:
            continue
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        m *= p ** (e // 2)
        if e % 2:
            d *= p
    r = isqrt(n)
    if r * r == n:
        m *= r
    else:
        d *= n
    return sign * d, m


# -- deterministic prime machinery -------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_stream(tag: bytes):
    """Deterministic stream of ~40-bit primes derived from the input data."""
    counter = 0
    while True:
        h = hashlib.sha256(tag + counter.to_bytes(8, "big")).digest()
        cand = (int.from_bytes(h[:8], "big") % (1 << 39)) | (1 << 39) | 1
        while not _is_prime(cand):
            cand += 2
        yield cand
        counter += 1


def _stream_tag(minpolys, data) -> bytes:
    return repr((minpolys, data)).encode()


# -- polynomial arithmetic mod p ----------------------------------------------


def _ptrim_mod(c: list[int], p: int) -> list[int]:
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _prem(out, f, p)


def _prem(a, f, p):
    a = _ptrim_mod(a, p)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        k = len(a) - 1 - df
        for j in range(df):
            a[k + j] = (a[k + j] - c * f[j]) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _pgcd_mod(a, b, p):
    a = _ptrim_mod(a, p)
    b = _ptrim_mod(b, p)
    while b:
        a = _prem(a, b, p)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _ppowmod(base, e, f, p):
    result = [1]
    b = _prem(list(base), f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, b, f, p)
        b = _pmulmod(b, b, f, p)
        e >>= 1
    return result


def _poly_roots_mod_p(coeffs: list[int], p: int) -> list[int] | None:
    """Distinct roots mod p of an integer polynomial; None if it vanishes mod p."""
    c = _ptrim_mod(coeffs, p)
    if not c:
        return None
    if len(c) == 1:
        return []
    inv = pow(c[-1], -1, p)
    c = [x * inv % p for x in c]
    xp = _ppowmod([0, 1], p, c, p)
    xp_minus_x = list(xp)
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _pgcd_mod(xp_minus_x, c, p)
    if len(g) <= 1:
        return []
    roots: list[int] = []
    stack = [g]
    shift = 0
    while stack:
        f = stack.pop()
        if len(f) == 2:
            roots.append((-f[0]) * pow(f[1], -1, p) % p)
            continue
        while True:
            base = [shift % p, 1]
            shift += 1
            h = _ppowmod(base, (p - 1) // 2, f, p)
            h = list(h)
            if not h:
                h = [0]
            h[0] = (h[0] - 1) % p
            h = _pgcd_mod(h, f, p)
            if 0 < len(h) - 1 < len(f) - 1:
                q, _ = _pdivmod_mod(f, h, p)
                stack.append(h)
                stack.append(q)
                break
    return sorted(roots)


def _pdivmod_mod(a, b, p):
    a = _ptrim_mod(a, p)
    b = _ptrim_mod(b, p)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for j in range(len(b) - 1):
            a[k + j] = (a[k + j] - c * b[j]) % p
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return q, a


# -- reduction of tower data mod p^k ------------------------------------------


class _BadPrime(Exception):
    pass


def _eval_mod(data, lv, point, m):
    """Evaluate raw tower data at a modular point; ValueError on bad denominators."""
    if lv == 0:
        num, den = data.numerator, data.denominator
        if den % m == 0 or gcd(den, m) != 1:
            raise _BadPrime
        return num % m * pow(den, -1, m) % m
    acc = 0
    r = point[lv - 1]
    for c in reversed(data):
        acc = (acc * r + _eval_mod(c, lv - 1, point, m)) % m
    return acc


def _minpoly_mod(minpoly, lv_below, point, m):
    return [_eval_mod(c, lv_below, point, m) for c in minpoly]


def _find_points(levels, p, need_all: bool):
    """Points of the tower over F_p with simple coordinates at every level.

    ``levels`` is a list of (minpoly raw data, degree).  Returns a list of
    complete points (all of them if need_all, else the first found), or None
    when p is unusable (bad reduction, multiple or missing roots).
    """
    results: list[tuple[int, ...]] = []

    def rec(depth: int, point: tuple[int, ...]) -> bool:
        if depth == len(levels):
            results.append(point)
            return not need_all
        minpoly, deg = levels[depth]
        try:
            f = _minpoly_mod(minpoly, depth, point, p)
        except _BadPrime:
            raise
        roots = _poly_roots_mod_p(f, p)
        if roots is None:
            raise _BadPrime
        if need_all and len(roots) != deg:
            raise _BadPrime
        fprime = [c * i % p for i, c in enumerate(f)][1:]
        for r in roots:
            dv = 0
            for c in reversed(fprime):
                dv = (dv * r + c) % p
            if dv == 0:
                if need_all:
                    raise _BadPrime
                continue
            if rec(depth + 1, point + (r,)):
                return True
        return False

    try:
        rec(0, ())
    except _BadPrime:
        return None
    return results if need_all else results[:1]


def _lift_point(levels, point, p, k):
    """Hensel-lift a mod-p point to mod p^k (coordinates stay simple roots)."""
    m = p
    cur = list(point)
    while m < p**k:
        m = min(m * m, p**k)
        for depth, (minpoly, _deg) in enumerate(levels):
            f = _minpoly_mod(minpoly, depth, tuple(cur), m)
            r = cur[depth]
            fv = 0
            for c in reversed(f):
                fv = (fv * r + c) % m
            fp = [c * i % m for i, c in enumerate(f)][1:]
            dv = 0
            for c in reversed(fp):
                dv = (dv * r + c) % m
            r = (r - fv * pow(dv, -1, m)) % m
            cur[depth] = r
    return tuple(cur)


def _tonelli(a: int, p: int) -> int | None:
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m_, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m_ - i - 1), p)
        m_, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _rat_reconstruct(a: int, m: int) -> Fraction | None:
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    num, den = r1, t1
    if den < 0:
        num, den = -num, -den
    return Fraction(num, den)


# -- tier 3 --------------------------------------------------------------------

_CERT_TRIES = 18
_MAX_PATTERN_DIM = 13
_PRECISIONS = (2, 8)


def _subtower_levels(tower: TowerField, lv: int):
    return [(tower.levels[i].minpoly, tower.levels[i].degree) for i in range(lv)]


def _unflatten(ctx, coords, lv):
    if lv == 0:
        return coords[0]
    d = ctx[lv - 1].degree
    block = len(coords) // d
    return tuple(_unflatten(ctx, coords[i * block : (i + 1) * block], lv - 1) for i in range(d))


def _monomial_row(levels, point, m):
    """Values of all basis monomials at a point, ordered to match _unflatten."""
    row = [1]
    for depth, (_mp, deg) in enumerate(levels):
        r = point[depth]
        powers = [1] * deg
        for i in range(1, deg):
            powers[i] = powers[i - 1] * r % m
        row = [pw * v % m for pw in powers for v in row]
    return row


def _mat_inv_mod(rows, p, m):
    """Inverse of a matrix invertible mod p, computed mod m (p | m)."""
    n = len(rows)
    a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] % p != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], -1, m)
        a[col] = [x * inv % m for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [(x - f * y) % m for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _sqrt_tier3(tower: TowerField, lv: int, data):
    ctx = tower._ctx
    levels = _subtower_levels(tower, lv)
    tag = _stream_tag(tuple(l[0] for l in levels), data)
    stream = _prime_stream(tag)

    # (a) sound NonSquare certification: a single nonresidue value certifies
    qr_passes = 0
    seen = 0
    while qr_passes < _CERT_TRIES and seen < 6 * _CERT_TRIES:
        p = next(stream)
        seen += 1
        pts = _find_points(levels, p, need_all=False)
        if not pts:
            continue
        try:
            val = _eval_mod(data, lv, pts[0], p)
        except _BadPrime:
            continue
        if val == 0:
            continue
        if pow(val, (p - 1) // 2, p) == p - 1:
            return None
        qr_passes += 1

    # (b) recovery: completely split prime, lift, reconstruct, verify
    dim = 1
    for _mp, deg in levels:
        dim *= deg
    if dim > _MAX_PATTERN_DIM:
        return None
    split_found = 0
    tried = 0
    stream_b = _prime_stream(tag + b"/split")
    while split_found < 3 and tried < 400:
        p = next(stream_b)
        tried += 1
        points = _find_points(levels, p, need_all=True)
        if points is None or len(points) != dim:
            continue
        try:
            vals_p = [_eval_mod(data, lv, pt, p) for pt in points]
        except _BadPrime:
            continue
        if any(v == 0 for v in vals_p):
            continue
        legendres = [pow(v, (p - 1) // 2, p) for v in vals_p]
        if any(s == p - 1 for s in legendres):
            return None  # certified nonsquare after all
        split_found += 1
        roots_p = [_tonelli(v, p) for v in vals_p]
        for prec in _PRECISIONS:
            m = p**prec
            lifted = [_lift_point(levels, pt, p, prec) for pt in points]
            try:
                vals = [_eval_mod(data, lv, pt, m) for pt in lifted]
            except _BadPrime:
                break
            sqrts = []
            for t0, v in zip(roots_p, vals):
                t = t0
                mm = p
                while mm < m:
                    mm = min(mm * mm, m)
                    t = (t + v * pow(t, -1, mm)) * pow(2, -1, mm) % mm
                sqrts.append(t)
            vmat = [_monomial_row(levels, pt, m) for pt in lifted]
            vinv = _mat_inv_mod(vmat, p, m)
            if vinv is None:
                break
            found = _pattern_search(ctx, lv, data, sqrts, vinv, m, dim)
            if found is not None:
                return found
    return None


def _pattern_search(ctx, lv, data, sqrts, vinv, m, dim):
    for pattern in range(1 << (dim - 1)):
        svec = [sqrts[0]]
        for e in range(1, dim):
            t = sqrts[e]
            if (pattern >> (e - 1)) & 1:
                t = (-t) % m
            svec.append(t)
        coords = []
        ok = True
        for row in vinv:
            x = 0
            for a, b in zip(row, svec):
                x += a * b
            q = _rat_reconstruct(x % m, m)
            if q is None:
                ok = False
                break
            coords.append(q)
        if not ok:
            continue
        cand = _unflatten(ctx, coords, lv)
        if _sqr(ctx, lv, cand) == data:
            return cand
    return None


# -- tier 2 --------------------------------------------------------------------


def _half(ctx, lv, a):
    return _scale(ctx, lv, a, Fraction(1, 2))


def _sqrt_tier2(tower: TowerField, lv: int, data):
    ctx = tower._ctx
    lo = lv - 1
    d = ctx[lv - 1].sqrt_const
    a, b = data
    if _is_zero(b, lo):
        r = _sqrt_raw(tower, lo, a)
        if r is not None:
            return (r, ctx[lv - 1].zero)
        ad = _mul(ctx, lo, a, d)
        r2 = _sqrt_raw(tower, lo, ad)
        if r2 is not None:
            y = _mul(ctx, lo, r2, _inv(ctx, lo, d))
            cand = (ctx[lv - 1].zero, y)
            if _sqr(ctx, lv, cand) == data:
                return cand
        return None
    n = _sub(ctx, lo, _sqr(ctx, lo, a), _mul(ctx, lo, _sqr(ctx, lo, b), d))
    s = _sqrt_raw(tower, lo, n)
    if s is None:
        return None
    for signed in (s, _neg(ctx, lo, s)):
        half = _half(ctx, lo, _add(ctx, lo, a, signed))
        r = _sqrt_raw(tower, lo, half)
        if r is None or _is_zero(r, lo):
            continue
        y = _mul(ctx, lo, _half(ctx, lo, b), _inv(ctx, lo, r))
        cand = (r, y)
        if _sqr(ctx, lv, cand) == data:
            return cand
    return None


# -- dispatch -------------------------------------------------------------------


def _sqrt_raw(tower: TowerField, lv: int, data):
    if lv == 0:
        return rational_sqrt(data)
    # cheap first try for constants: a root below embeds upward (the converse
    # fails, e.g. at even-degree base-root levels, so no early NonSquare here)
    if all(_is_zero(c, lv - 1) for c in data[1:]):
        r = _sqrt_raw(tower, lv - 1, data[0])
        if r is not None:
            return _embed_up(tower._ctx, lv - 1, r, lv)
    if tower.levels[lv - 1].kind == KIND_SQRT:
        return _sqrt_tier2(tower, lv, data)
    return _sqrt_tier3(tower, lv, data)


def sqrt_or_nonsquare(c: TowerElement) -> TowerElement | None:
    """An exact square root of c, or None when X^2 - c is treated as
    irreducible at c's level.

    Rejects c = 0; callers handle zero separately.  Returned roots always
    satisfy root * root == c (verified on every call path).
    """
    if c.is_zero():
        raise ValueError("sqrt_or_nonsquare requires c != 0")
    data = _sqrt_raw(c.tower, c.level, c.data)
    if data is None:
        return None
    root = TowerElement(c.tower, c.level, data)
    assert root * root == c
    return root


def adjoin_sqrt(
    tower: TowerField,
    c: TowerElement,
    label: str | None = None,
    assume_nonsquare: bool = False,
) -> tuple[TowerField, TowerElement, bool]:
    """Return (tower', sqrt(c), level_added).

    When c is already a square the tower is unchanged and the existing root
    is returned (the level is "saved").  Rational constants are reduced by
    their square part first, so e.g. sqrt(-4) adjoins X^2 + 1 and returns
    2*gen.  ``assume_nonsquare`` skips the (possibly expensive) tier-3 square
    test when the caller has a proof of nonsquareness; rational values are
    always tested since tier 1 is instant.
    """
    if c.is_zero():
        raise ValueError("cannot adjoin a square root of zero")
    c = c.in_tower(tower)
    top = tower.height
    q = c.rational_value()
    if q is not None:
        r = rational_sqrt(q)
        if r is not None:
            return tower, tower.rational(r, top), False
    if not assume_nonsquare:
        # full tower-level test: a rational nonsquare can still be a square
        # higher up the chain, and stacking it would collapse
        s = sqrt_or_nonsquare(c.embed(top))
        if s is not None:
            return tower, s, False
    if q is not None:
        d, mfac = squarefree_reduce(q.numerator * q.denominator)
        new = tower_extend(tower, [tower.rational(-d), tower.rational(0), tower.rational(1)],
                           kind=KIND_SQRT, label=label)
        root = new.gen() * Fraction(mfac, q.denominator)
        return new, root, True
    ce = c.embed(top)
    new = tower_extend(
        tower,
        [-ce, tower.zero(top), tower.one(top)],
        kind=KIND_SQRT,
        label=label,
    )
    return new, new.gen(), True


__all__ = [
    "rational_sqrt",
    "squarefree_reduce",
    "sqrt_or_nonsquare",
    "adjoin_sqrt",
]
