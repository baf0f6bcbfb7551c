"""Quaternion algebras over a finite extension K of Q and their splitting
over composita with 2-extension towers.

The pipeline keeps two towers in step: the F-side (a chain of square-root
adjunctions over the rationals, whose exact degree is the certified
[F':F]) and the compositum side (K's tower with the same adjunctions
stacked on top, where the isotropic norm vector lives).  Each F-side
generator carries an image element on the compositum side, so witnesses
transport by evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import linalg
from .errors import (
    DegreeTooLarge,
    DisjointnessViolation,
    Missing2PartDeclaration,
    PreconditionError,
)
from .quadforms import (
    LinearFunctionalBasis,
    QFSystem,
    QuadraticForm,
    _basis_element,
    clear_denominators,
    diagonalize,
    flatten_between,
    isotropy_2ext,
    transfer_system,
)
from .sqrt import adjoin_sqrt
from .tower import (
    KIND_SQRT,
    Poly,
    TowerElement,
    TowerField,
    _neg,
    tower_extend,
)

# ---------------------------------------------------------------------------
# quaternion presentations and norm forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuaternionAlgebra:
    """A degree-2 central simple algebra in bracket or standard presentation.

    bracket(a, b):  i^2 - i = a,  j^2 = b,  ji = (1 - i)j, with 1 + 4a != 0;
    standard(u, v): I^2 = u, J^2 = v, JI = -IJ, with u, v != 0.
    """

    presentation: str
    x: TowerElement
    y: TowerElement

    def __post_init__(self):
        if self.presentation not in ("standard", "bracket"):
            raise ValueError(f"unknown presentation {self.presentation!r}")
        top = self.x.tower.height
        object.__setattr__(self, "x", self.x.embed(top))
        object.__setattr__(self, "y", self.y.in_tower(self.x.tower).embed(top))
        if self.presentation == "standard":
            if self.x.is_zero() or self.y.is_zero():
                raise ValueError("standard presentation requires u, v != 0")
        else:
            if not (1 + 4 * self.x):
                raise ValueError("bracket presentation requires 1 + 4a != 0")
            if self.y.is_zero():
                raise ValueError("bracket presentation requires b != 0")

    @property
    def field(self) -> TowerField:
        return self.x.tower

    @property
    def level(self) -> int:
        return self.x.level

    def standard_pair(self) -> tuple[TowerElement, TowerElement]:
        """(u, v) with the algebra isomorphic to standard(u, v); the bracket
        form converts by u = 1 + 4a, v = b (valid in characteristic 0)."""
        if self.presentation == "standard":
            return self.x, self.y
        return 1 + 4 * self.x, self.y


def standard_quaternion(u: TowerElement, v: TowerElement) -> QuaternionAlgebra:
    return QuaternionAlgebra("standard", u, v.in_tower(u.tower))


def bracket_quaternion(a: TowerElement, b: TowerElement) -> QuaternionAlgebra:
    return QuaternionAlgebra("bracket", a, b.in_tower(a.tower))


@dataclass(frozen=True)
class PfisterForm2:
    """The norm form <1, -u, -v, uv> in the basis (1, I, J, IJ)."""

    u: TowerElement
    v: TowerElement
    form: QuadraticForm

    def __post_init__(self):
        d = [self.form.gram[i][i] for i in range(4)]
        if d[0] != 1 or d[3] != d[1] * d[2]:
            raise ValueError("not a 2-fold Pfister shape")


def norm_form(q: QuaternionAlgebra) -> PfisterForm2:
    u, v = q.standard_pair()
    form = QuadraticForm.diagonal(q.field, q.level, [q.field.one(q.level), -u, -v, u * v])
    return PfisterForm2(u=u, v=v, form=form)


def norm_value(q: QuaternionAlgebra, witness, tower: TowerField) -> TowerElement:
    """N_Q at a vector over an extension tower of q's field."""
    u, v = q.standard_pair()
    top = tower.height
    ue, ve = u.in_tower(tower).embed(top), v.in_tower(tower).embed(top)
    w = [x.in_tower(tower).embed(top) for x in witness]
    return w[0].square() - ue * w[1].square() - ve * w[2].square() + (ue * ve) * w[3].square()


# ---------------------------------------------------------------------------
# descent from an isotropic Pfister vector to the 3-dimensional subform
# ---------------------------------------------------------------------------


def pfister_descend(alpha: TowerElement, beta: TowerElement, w):
    """From a nonzero zero of <1, a, b, ab> produce one of <1, a, b>.

    Norm-quotient descent: with w = (x, y, z, t) and D = z^2 + a t^2, the
    vector ((xz + a y t)/D, (yz - x t)/D, 1) works when D != 0; otherwise
    (z, t, 0) when (z, t) != 0, else (x, y, 0).
    """
    if len(w) != 4:
        raise ValueError("need a 4-vector")
    x, y, z, t = w
    if not any((x, y, z, t)):
        raise PreconditionError("w must be nonzero")
    val = x * x + alpha * (y * y) + beta * (z * z) + (alpha * beta) * (t * t)
    if not val.is_zero():
        raise PreconditionError("w is not isotropic for the Pfister form")
    one = val.tower.one(val.level)
    zero = val.tower.zero(val.level)
    d = z * z + alpha * (t * t)
    if not d.is_zero():
        dinv = d.inverse()
        out = ((x * z + alpha * (y * t)) * dinv, (y * z - x * t) * dinv, one)
    elif z or t:
        out = (z + zero, t + zero, zero)
    else:
        out = (x + zero, y + zero, zero)
    check = out[0] * out[0] + alpha * (out[1] * out[1]) + beta * (out[2] * out[2])
    assert check.is_zero() and any(out)
    return out


# ---------------------------------------------------------------------------
# paired towers: F-side sqrt chain mirrored onto the compositum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Pair:
    f_tower: TowerField
    c_tower: TowerField
    shared: int                       # F-side levels [0, shared) are comp levels
    comp_base: int                    # comp height before any mirrored level
    images: tuple[TowerElement, ...]  # comp image of each F-side generator above
    guaranteed: bool                  # no-quadratic-subextension hypothesis holds
    collapsed: bool = False           # some mirrored level was already a square

    def _gen_mirrored(self, j: int) -> bool:
        """First j F-side adjunctions sit as plain generators of successive
        compositum levels of matching degree (then lifting is restructuring)."""
        if j > len(self.images) or self.comp_base + j > self.c_tower.height:
            return False
        for i in range(j):
            level = self.comp_base + i + 1
            img = self.images[i]
            if img.level != level:
                return False
            if self.f_tower.levels[self.shared + i].degree != self.c_tower.levels[level - 1].degree:
                return False
            if img.data != self.c_tower.gen(level).data:
                return False
        return True

    def lift(self, x: TowerElement) -> TowerElement:
        """Carry an F-side element into the compositum top."""
        top = self.c_tower.height
        j = x.level - self.shared
        if j <= 0:
            return TowerElement(self.c_tower, x.level, x.data).embed(top)
        if self._gen_mirrored(j):
            # generator-for-generator: re-nest the shared-level coefficients
            # through the K levels, no field arithmetic needed
            from .tower import _embed_up

            ctx = self.c_tower._ctx

            def restructure(data, jj):
                if jj == 0:
                    return _embed_up(ctx, self.shared, data, self.comp_base)
                return tuple(restructure(c, jj - 1) for c in data)

            return TowerElement(
                self.c_tower, self.comp_base + j, restructure(x.data, j)
            ).embed(top)

        def rec(data, lv):
            if lv <= self.shared:
                return TowerElement(self.c_tower, lv, data).embed(top)
            img = self.images[lv - 1 - self.shared].in_tower(self.c_tower).embed(top)
            acc = self.c_tower.zero(top)
            for c in reversed(data):
                acc = acc * img + rec(c, lv - 1)
            return acc

        return rec(x.data, x.level)

    def adjoin_sqrt(self, c: TowerElement) -> tuple["_Pair", TowerElement]:
        """Adjoin sqrt(c) on the F-side and mirror it onto the compositum.

        Returns (pair, F-side root).  The root's compositum image is reached
        through :meth:`lift`.
        """
        f2, root, added = adjoin_sqrt(self.f_tower, c.in_tower(self.f_tower))
        if not added:
            return self, root
        return self._mirror_one(f2), root.in_tower(f2)

    def _mirror_one(self, f2: TowerField) -> "_Pair":
        idx = f2.height - 1
        level = f2.levels[idx]
        d_elem = TowerElement(self.f_tower, idx, _neg(f2._ctx, idx, level.minpoly[0]))
        c_comp = self.lift(d_elem)
        if self.guaranteed:
            # K/K0 has no quadratic subextension, hence K0-2-extensions stay
            # linearly disjoint: the mirrored level cannot collapse
            c2 = tower_extend(
                self.c_tower,
                [-c_comp, self.c_tower.zero(), self.c_tower.one()],
                kind=KIND_SQRT,
            )
            img: TowerElement = c2.gen()
            collapsed = self.collapsed
        else:
            c2, img, added_c = adjoin_sqrt(self.c_tower, c_comp)
            collapsed = self.collapsed or not added_c
        return _Pair(f2, c2, self.shared, self.comp_base, self.images + (img,), self.guaranteed, collapsed)

    def mirror_to(self, f_ext: TowerField) -> "_Pair":
        """Mirror every F-side level of f_ext beyond the current height."""
        if not self.f_tower.is_prefix_of(f_ext):
            raise ValueError("mirror target does not extend the F-side tower")
        pair = self
        while pair.f_tower.height < f_ext.height:
            idx = pair.f_tower.height
            level = f_ext.levels[idx]
            if level.kind != KIND_SQRT:
                raise PreconditionError("only sqrt levels can be mirrored")
            pair = pair._mirror_one(TowerField(f_ext.levels[: idx + 1]))
        return pair

    def added_count(self) -> int:
        return self.f_tower.height - self.shared


# ---------------------------------------------------------------------------
# the explicit 3-slot witness of <1, alpha, g(alpha)>
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SlotSplitResult:
    two_tower: TowerField
    comp_tower: TowerField
    witness: tuple[TowerElement, TowerElement, TowerElement]


def _slot_split(pair: _Pair, alpha_comp: TowerElement, g_coeffs) -> tuple[_Pair, tuple]:
    """Witness of <1, alpha, g(alpha)> over the compositum, adjoining at most
    deg(g) + 1 square roots on the F-side.  g_coeffs live on the F-side top,
    highest degree coefficient nonzero, deg <= 2."""
    coeffs = list(g_coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if not coeffs:
        raise PreconditionError("g must be nonzero")
    if len(coeffs) > 3:
        raise PreconditionError("g must have degree <= 2")

    def lift_top(pair_, e):
        return pair_.lift(e.in_tower(pair_.f_tower))

    top = pair.f_tower.height
    coeffs = [c.in_tower(pair.f_tower).embed(top) for c in coeffs]
    if len(coeffs) == 1:
        pair, s = pair.adjoin_sqrt(-coeffs[0])
        w = (lift_top(pair, s), _czero(pair), _cone(pair))
    elif len(coeffs) == 2:
        a = coeffs[1]
        b = coeffs[0] / a
        pair, sa = pair.adjoin_sqrt(-a)
        if b.is_zero():
            sb = pair.f_tower.zero()
        else:
            pair, sb = pair.adjoin_sqrt(b)
        la = lift_top(pair, sa)
        w = (la * lift_top(pair, sb), la, _cone(pair))
    else:
        a = coeffs[2]
        b = coeffs[1] / a
        c = coeffs[0] / a
        pair, sa = pair.adjoin_sqrt(-a)
        if c.is_zero():
            sc = pair.f_tower.zero()
        else:
            pair, sc = pair.adjoin_sqrt(c)
        e = b.in_tower(pair.f_tower).embed(pair.f_tower.height) - 2 * sc.embed(pair.f_tower.height)
        if e.is_zero():
            se = pair.f_tower.zero()
        else:
            pair, se = pair.adjoin_sqrt(e)
        la = lift_top(pair, sa)
        alpha_t = alpha_comp.in_tower(pair.c_tower).embed(pair.c_tower.height)
        w = (la * (alpha_t + lift_top(pair, sc)), la * lift_top(pair, se), _cone(pair))
    return pair, w


def _czero(pair: _Pair) -> TowerElement:
    return pair.c_tower.zero()


def _cone(pair: _Pair) -> TowerElement:
    return pair.c_tower.one()


def quadratic_slot_split(alpha: TowerElement, g: Poly) -> SlotSplitResult:
    """Constructive isotropy of <1, alpha, g(alpha)> over K F' with F' a
    2-extension of the field g lives over ([F':F] <= 2^(deg g + 1)).

    alpha lives at the top of K's tower; g's coefficients live at a lower
    level F of that same tower; g(alpha) must be nonzero.
    """
    k_tower = alpha.tower
    if alpha.level != k_tower.height:
        alpha = alpha.embed(k_tower.height)
    f_level = g.level
    if g.tower != k_tower and not g.tower.is_prefix_of(k_tower):
        raise ValueError("g must live inside alpha's tower")
    if g.is_zero() or g.degree > 2:
        raise PreconditionError("g must be nonzero of degree <= 2")
    if g(alpha).is_zero():
        raise PreconditionError("g(alpha) = 0: the direct witness (0, ..., v) applies")
    f_tower = TowerField(k_tower.levels[:f_level])
    pair = _Pair(f_tower, k_tower, shared=f_level, comp_base=k_tower.height, images=(), guaranteed=False)
    g_f = [c.in_tower(f_tower) if c.level <= f_level else c for c in g.coeffs]
    for c in g_f:
        if c.level > f_level:
            raise ValueError("g coefficients must live at the declared F level")
    pair, w = _slot_split(pair, alpha.in_tower(pair.c_tower), g_f)
    # exactness of the constructed witness
    top = pair.c_tower.height
    a_t = alpha.in_tower(pair.c_tower).embed(top)
    ge = pair.c_tower.zero(top)
    for i, c in enumerate(g_f):
        ge = ge + c.in_tower(pair.c_tower).embed(top) * a_t**i
    val = w[0].square() + a_t * w[1].square() + ge * w[2].square()
    assert val.is_zero()
    return SlotSplitResult(pair.f_tower, pair.c_tower, w)


# ---------------------------------------------------------------------------
# the splitting pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitCertificate:
    """Everything needed to re-check that N_Q vanishes over K F'.

    ``tower`` is the compositum (K's tower with the adjunctions stacked on
    top) carrying the witness; ``two_tower`` is the F-side recipe whose exact
    degree over Q is ``degree_over_F``.
    """

    quaternion: QuaternionAlgebra
    tower: TowerField
    two_tower: TowerField
    witness: tuple[TowerElement, ...]
    degree_over_F: int
    claimed_bound: int


def split_over_2ext(q: QuaternionAlgebra, two_part_levels: int | None = None) -> SplitCertificate:
    """Split certificate for a quaternion over K with [K:Q] <= 8.

    K is q's whole tower over the rational base F = Q.  Even-degree K must
    declare its maximal 2-subextension as the first ``two_part_levels``
    levels of the tower (a chain of quadratic levels); odd-degree K needs no
    declaration since no quadratic subextension can exist.
    """
    k_tower = q.field
    k_height = k_tower.height
    d = k_tower.absolute_degree()
    if d > 8:
        raise DegreeTooLarge(f"[K:F] = {d} > 8 is not supported")
    if two_part_levels is None:
        if d % 2 == 0:
            raise Missing2PartDeclaration(
                "even-degree K needs a declared maximal 2-subextension chain"
            )
        two_part_levels = 0
    t = two_part_levels
    if not 0 <= t <= k_height:
        raise PreconditionError("two_part_levels out of range")
    if any(k_tower.levels[i].degree != 2 for i in range(t)):
        raise Missing2PartDeclaration("declared 2-part levels must be quadratic")
    r = 1
    for i in range(t, k_height):
        r *= k_tower.levels[i].degree
    pair = _Pair(
        f_tower=TowerField(k_tower.levels[:t]),
        c_tower=k_tower,
        shared=t,
        comp_base=k_height,
        images=(),
        guaranteed=(r % 2 == 1),
    )
    nf = norm_form(q)
    if r <= 6:
        pair, witness = _split_small(nf, pair, t, k_height, r)
    else:
        pair, witness = _split_large(nf, pair, t, k_height, r)
    witness = clear_denominators(witness)
    assert any(witness), "split witness is zero"
    val = norm_value(q, witness, pair.c_tower)
    if not val.is_zero():
        raise DisjointnessViolation(
            "constructed vector does not annihilate the norm form; "
            "the declared 2-part was not maximal"
        )
    degree_over_f = pair.f_tower.absolute_degree()
    claimed = 2**d
    assert degree_over_f <= claimed
    return SplitCertificate(
        quaternion=q,
        tower=pair.c_tower,
        two_tower=pair.f_tower,
        witness=witness,
        degree_over_F=degree_over_f,
        claimed_bound=claimed,
    )


def _retag_system(system: QFSystem, f_tower: TowerField, level: int) -> QFSystem:
    forms = tuple(
        QuadraticForm(
            f_tower,
            level,
            tuple(tuple(TowerElement(f_tower, level, g.data) for g in row) for row in f.gram),
        )
        for f in system.forms
    )
    return QFSystem(forms)


def _split_small(nf: PfisterForm2, pair: _Pair, t: int, k_height: int, r: int):
    """Transfer the whole norm form through a K0-basis of K: r forms in 4r
    variables (4r > r(r+1)/2 for r <= 6), then one isotropy certificate."""
    k_tower = pair.c_tower
    basis = LinearFunctionalBasis.standard(k_tower, t, k_height)
    system = transfer_system(nf.form, basis)
    cert = isotropy_2ext(_retag_system(system, pair.f_tower, t))
    pair = pair.mirror_to(cert.tower)
    top = pair.c_tower.height
    basis_comp = [b.in_tower(pair.c_tower).embed(top) for b in basis.elements]
    witness = []
    for i in range(4):
        acc = pair.c_tower.zero(top)
        for j in range(r):
            w = cert.witness[i * r + j]
            if w.is_zero():
                continue
            acc = acc + pair.lift(w) * basis_comp[j]
        witness.append(acc)
    return pair, tuple(witness)


def _split_large(nf: PfisterForm2, pair: _Pair, t: int, k_height: int, r: int):
    """r in {7, 8}: peel <1, alpha> off the diagonalized norm form, transfer
    the 2-dimensional rest through functionals 3..r-1, finish with the
    explicit 3-slot witness."""
    k_tower = pair.c_tower
    diag, p_mat = diagonalize(nf.form)
    assert diag[0] == 1
    alpha = diag[1]
    d3, d4 = diag[2], diag[3]

    one_k = k_tower.one(k_height)
    pows = [one_k, alpha, alpha * alpha]
    coord_rows = [flatten_between(x, t) for x in pows]
    if linalg.rank(coord_rows) < 3:
        pair, w_diag = _dependent_alpha_witness(pair, t, alpha, coord_rows)
    else:
        # complete (1, alpha, alpha^2) to a K0-basis with standard vectors
        chosen = list(pows)
        rows = list(coord_rows)
        m = len(coord_rows[0])
        for idx in range(m):
            if len(chosen) == m:
                break
            cand = _basis_element(k_tower, t, k_height, idx)
            trial = rows + [flatten_between(cand, t)]
            if linalg.rank(trial) == len(trial):
                chosen.append(cand)
                rows = trial
        basis = LinearFunctionalBasis.from_elements(k_tower, t, k_height, chosen)
        rest = QuadraticForm.diagonal(k_tower, k_height, [d3, d4])
        system = transfer_system(rest, basis, indices=range(3, r))
        cert = isotropy_2ext(_retag_system(system, pair.f_tower, t))
        pair = pair.mirror_to(cert.tower)
        top = pair.c_tower.height
        basis_comp = [b.in_tower(pair.c_tower).embed(top) for b in basis.elements]
        v3 = pair.c_tower.zero(top)
        v4 = pair.c_tower.zero(top)
        for j in range(r):
            wj = cert.witness[j]
            if wj:
                v3 = v3 + pair.lift(wj) * basis_comp[j]
            wj = cert.witness[r + j]
            if wj:
                v4 = v4 + pair.lift(wj) * basis_comp[j]
        d3t = d3.in_tower(pair.c_tower).embed(top)
        d4t = d4.in_tower(pair.c_tower).embed(top)
        value = d3t * v3.square() + d4t * v4.square()
        g_coeffs = _extract_quadratic_in_alpha(pair, basis, value, k_height)
        if all(c.is_zero() for c in g_coeffs):
            w_diag = (pair.c_tower.zero(top), pair.c_tower.zero(top), v3, v4)
        else:
            alpha_c = alpha.in_tower(pair.c_tower).embed(top)
            pair, w3 = _slot_split(pair, alpha_c, g_coeffs)
            top = pair.c_tower.height
            z = w3[2]
            w_diag = (
                w3[0],
                w3[1],
                z * v3.in_tower(pair.c_tower).embed(top),
                z * v4.in_tower(pair.c_tower).embed(top),
            )
    # back through the diagonalizing base change
    top = pair.c_tower.height
    p_cols = tuple(
        tuple(x.in_tower(pair.c_tower).embed(top) for x in row) for row in p_mat
    )
    w_full = tuple(w.in_tower(pair.c_tower).embed(top) for w in w_diag)
    witness = linalg.matvec(p_cols, w_full)
    return pair, tuple(witness)


def _dependent_alpha_witness(pair: _Pair, t: int, alpha: TowerElement, coord_rows):
    """(1, alpha, alpha^2) K0-linearly dependent: alpha has degree <= 2 over
    K0, and <1, alpha> is killed by adjoining sqrt(-alpha)."""
    if linalg.rank(coord_rows[:2]) == 1:
        # alpha lies in K0
        alpha0 = coord_rows[1][0].in_tower(pair.f_tower)
        pair, s = pair.adjoin_sqrt(-alpha0)
        top = pair.c_tower.height
        w = (pair.lift(s), pair.c_tower.one(top), pair.c_tower.zero(top), pair.c_tower.zero(top))
        return pair, w
    # degree exactly 2: alpha^2 = e1 alpha + e0 over K0; the F-side gets the
    # quartic minpoly of sqrt(-alpha), whose reducibility (if the declared
    # 2-part was not maximal after all) is caught by dynamic evaluation
    sol = linalg.solve(
        tuple(zip(*coord_rows[:2])), coord_rows[2], pair.c_tower, t
    )
    if sol is None:
        raise PreconditionError("dependent triple without a degree-2 relation")
    e0, e1 = sol[0].in_tower(pair.f_tower), sol[1].in_tower(pair.f_tower)
    f_top = pair.f_tower.height
    quartic = [
        -e0.embed(f_top),
        pair.f_tower.zero(f_top),
        e1.embed(f_top),
        pair.f_tower.zero(f_top),
        pair.f_tower.one(f_top),
    ]
    f2 = tower_extend(pair.f_tower, quartic)
    c2, img, _added = adjoin_sqrt(pair.c_tower, -alpha.embed(pair.c_tower.height))
    pair = _Pair(f2, c2, pair.shared, pair.comp_base, pair.images + (img,), pair.guaranteed, pair.collapsed)
    top = pair.c_tower.height
    w = (
        img.in_tower(pair.c_tower).embed(top),
        pair.c_tower.one(top),
        pair.c_tower.zero(top),
        pair.c_tower.zero(top),
    )
    return pair, w


def _extract_quadratic_in_alpha(pair: _Pair, basis: LinearFunctionalBasis, value, k_height: int):
    """Write a compositum element as g(alpha) with g of degree <= 2 over the
    F-side: per sqrt-monomial the K-part's functional coordinates 3..r-1 must
    vanish, and coordinates 0..2 rebuild the F-side coefficients."""
    if pair.collapsed:
        raise DisjointnessViolation(
            "a mirrored level collapsed; coefficients cannot be pulled back"
        )
    k_parts = flatten_between(value.embed(pair.c_tower.height), k_height)
    f_top = pair.f_tower.height
    coeffs = [pair.f_tower.zero(f_top) for _ in range(3)]
    for mono_idx, k_part in enumerate(k_parts):
        part = TowerElement(pair.c_tower, k_height, k_part.data)
        coords = basis.coordinates(part)
        for i in range(3, basis.size):
            if coords[i]:
                raise DisjointnessViolation(
                    "transfer coordinates above degree 2 did not vanish"
                )
        mono_f = _basis_element(pair.f_tower, pair.shared, f_top, mono_idx)
        for j in range(3):
            cj = coords[j]
            if cj:
                coeffs[j] = coeffs[j] + cj.in_tower(pair.f_tower).embed(f_top) * mono_f
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# rational Hilbert symbol oracle
# ---------------------------------------------------------------------------


def _factor(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 17
    while f * f <= n and f < 100000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out.update(_factor_large(n, out))
    return out


def _factor_large(n: int, acc: dict[int, int]) -> dict[int, int]:
    # Pollard rho for the residual cofactor
    stack = [n]
    out: dict[int, int] = {}
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime_int(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


def _is_prime_int(n: int) -> bool:
    from .sqrt import _is_prime

    return _is_prime(n)


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x, y, d = 2, 2, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _hilbert_local(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p for integers a, b != 0 at a prime p (2 allowed)."""
    al = 0
    while a % p == 0:
        a //= p
        al += 1
    be = 0
    while b % p == 0:
        b //= p
        be += 1
    if p == 2:
        eps = lambda x: ((x - 1) // 2) & 1
        om = lambda x: ((x * x - 1) // 8) & 1
        e = eps(a) * eps(b) + al * om(b) + be * om(a)
        return -1 if e & 1 else 1
    e = ((p - 1) // 2) * al * be
    sym = (-1) ** (e & 1)
    if be & 1:
        sym *= _legendre(a, p)
    if al & 1:
        sym *= _legendre(b, p)
    return sym


def hilbert_symbol_Q(u, v) -> str:
    """Decide split/division for the rational quaternion (u, v), via Hilbert
    symbols at -1, 2 and the odd primes dividing the entries, with the
    product formula as a self-check."""
    u, v = Fraction(u), Fraction(v)
    if u == 0 or v == 0:
        raise PreconditionError("hilbert_symbol_Q requires nonzero entries")
    a = u.numerator * u.denominator
    b = v.numerator * v.denominator
    primes = {2}
    primes.update(_factor(a))
    primes.update(_factor(b))
    primes.discard(2)
    symbols = {}
    symbols["inf"] = -1 if (a < 0 and b < 0) else 1
    symbols[2] = _hilbert_local(a, b, 2)
    for p in sorted(primes):
        symbols[p] = _hilbert_local(a, b, p)
    prod = 1
    for s in symbols.values():
        prod *= s
    assert prod == 1, "Hilbert product formula violated (factorization bug)"
    return "split" if all(s == 1 for s in symbols.values()) else "division"


def rational_norm_zero_search(u, v, boxes=(48, 800)):
    """Bounded integer search for a nonzero rational zero of <1,-u,-v,uv>.

    Works on the squarefree parts a, b of u, v via X^2 = a Y^2 + b Z^2 and
    unscales; small solutions exist for isotropic ternary forms, so the
    escalating boxes cover the split cases in practice.  Returns a verified
    4-vector of Fractions or None."""
    from .sqrt import squarefree_reduce

    u, v = Fraction(u), Fraction(v)
    if u == 0 or v == 0:
        raise PreconditionError("nonzero entries required")
    a, ma = squarefree_reduce(u.numerator * u.denominator)
    b, mb = squarefree_reduce(v.numerator * v.denominator)
    # u = a * (ma / den_u)^2 and likewise for v
    su = Fraction(ma, u.denominator)
    sv = Fraction(mb, v.denominator)

    def unscale(x, y, z):
        w = (Fraction(x), Fraction(y) / su, Fraction(z) / sv, Fraction(0))
        check = w[0] ** 2 - u * w[1] ** 2 - v * w[2] ** 2
        assert check == 0
        return w

    if a == 1:
        return unscale(1, 1, 0)
    if b == 1:
        return unscale(1, 0, 1)
    for box in boxes:
        for yz in range(1, 2 * box + 1):
            for y in range(max(0, yz - box), min(yz, box) + 1):
                z = yz - y
                val = a * y * y + b * z * z
                if val < 0:
                    continue
                x = isqrt(val)
                if x * x == val:
                    return unscale(x, y, z)
    return None


__all__ = [
    "QuaternionAlgebra",
    "standard_quaternion",
    "bracket_quaternion",
    "PfisterForm2",
    "norm_form",
    "norm_value",
    "pfister_descend",
    "SlotSplitResult",
    "quadratic_slot_split",
    "SplitCertificate",
    "split_over_2ext",
    "hilbert_symbol_Q",
    "rational_norm_zero_search",
]
