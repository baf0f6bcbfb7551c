import random
from fractions import Fraction

import pytest

from isotower.certjson import (
    quaternion_doc,
    quaternion_from_doc,
    split_certificate_doc,
    verify_split_certificate,
)
from isotower.errors import (
    DegreeTooLarge,
    Missing2PartDeclaration,
    PreconditionError,
)
from isotower.generate import random_quaternion
from isotower.presets import field_cubic, field_quintic, field_septic
from isotower.splitting import (
    bracket_quaternion,
    hilbert_symbol_Q,
    norm_form,
    norm_value,
    pfister_descend,
    quadratic_slot_split,
    rational_norm_zero_search,
    split_over_2ext,
    standard_quaternion,
)
from isotower.tower import KIND_BASE, QQ, Poly, tower_extend
from isotower import verify


def q_rat(u, v):
    return standard_quaternion(QQ.rational(u), QQ.rational(v))


# -- presentations and norm forms --------------------------------------------------


def test_norm_form_standard():
    nf = norm_form(q_rat(-1, -1))
    assert [nf.form.gram[i][i] for i in range(4)] == [1, 1, 1, 1]
    nf2 = norm_form(q_rat(2, 3))
    assert [str(nf2.form.gram[i][i]) for i in range(4)] == ["1", "-2", "-3", "6"]


def test_norm_form_bracket_conversion():
    nf = norm_form(bracket_quaternion(QQ.rational(0), QQ.rational(5)))
    assert [str(nf.form.gram[i][i]) for i in range(4)] == ["1", "-1", "-5", "5"]


def test_presentation_invariants():
    with pytest.raises(ValueError):
        standard_quaternion(QQ.zero(), QQ.rational(1))
    with pytest.raises(ValueError):
        bracket_quaternion(QQ.rational(Fraction(-1, 4)), QQ.rational(1))  # 1 + 4a = 0
    with pytest.raises(ValueError):
        bracket_quaternion(QQ.rational(1), QQ.zero())


# -- pfister descent -----------------------------------------------------------------


def test_descend_degenerate_plane():
    out = pfister_descend(QQ.rational(-1), QQ.rational(7), tuple(QQ.rational(c) for c in (1, 1, 1, 1)))
    assert [str(c) for c in out] == ["1", "1", "0"]


def test_descend_unit_denominator():
    out = pfister_descend(QQ.rational(2), QQ.rational(-3), tuple(QQ.rational(c) for c in (1, 1, 1, 0)))
    assert [str(c) for c in out] == ["1", "1", "1"]


def test_descend_rejects_nonisotropic():
    # pi = <1,1,1,1> has no nonzero rational zero: (1,0,0,1) is not isotropic
    with pytest.raises(PreconditionError):
        pfister_descend(QQ.rational(1), QQ.rational(1), tuple(QQ.rational(c) for c in (1, 0, 0, 1)))
    with pytest.raises(PreconditionError):
        pfister_descend(QQ.rational(1), QQ.rational(1), tuple(QQ.rational(0) for _ in range(4)))


def test_descend_exhaustive_cases():
    rng = random.Random(13)
    one = Fraction(1)
    for _ in range(40):
        beta = Fraction(rng.randint(-9, 9) or 1)
        # family 1: alpha = -a^2, witness (a, 1, 0, 0): hits the z = t = 0 branch
        a = Fraction(rng.randint(1, 9))
        out = pfister_descend(
            QQ.rational(-a * a), QQ.rational(beta), tuple(QQ.rational(c) for c in (a, 1, 0, 0))
        )
        assert any(out)
        # family 2: alpha = -z^2, w = (z y, y, z, 1): hits the D = 0, (z,t) != 0 branch
        z = Fraction(rng.randint(1, 9))
        y = Fraction(rng.randint(-9, 9))
        out = pfister_descend(
            QQ.rational(-z * z), QQ.rational(beta), tuple(QQ.rational(c) for c in (z * y, y, z, 1))
        )
        assert any(out)
    # family 3: D != 0 through a split quaternion zero
    w = rational_norm_zero_search(2, 7)
    out = pfister_descend(QQ.rational(-2), QQ.rational(-7), tuple(QQ.rational(c) for c in w))
    assert any(out)


# -- the quadratic slot -----------------------------------------------------------------


@pytest.fixture
def cubic():
    return field_cubic()


def test_slot_split_constant(cubic):
    alpha = cubic.gen()
    res = quadratic_slot_split(alpha, Poly(QQ, 0, [1]))
    assert res.two_tower.absolute_degree() == 2
    assert res.two_tower.levels[0].minpoly == (Fraction(1), Fraction(0), Fraction(1))
    w = res.witness
    assert w[1].is_zero() and w[2] == 1


def test_slot_split_linear_zero_shift(cubic):
    alpha = cubic.gen()
    res = quadratic_slot_split(alpha, Poly(QQ, 0, [0, 1]))  # g = X
    assert res.two_tower.absolute_degree() == 2  # sqrt(0) level skipped
    assert res.witness[0].is_zero()


def test_slot_split_quadratic_example(cubic):
    alpha = cubic.gen()
    res = quadratic_slot_split(alpha, Poly(QQ, 0, [1, 0, 1]))  # X^2 + 1
    # sqrt(c) = sqrt(1) is rational: only sqrt(-1) and sqrt(-2) are adjoined
    assert res.two_tower.absolute_degree() == 4
    mins = [lev.minpoly for lev in res.two_tower.levels]
    assert mins[0] == (Fraction(1), Fraction(0), Fraction(1))
    from isotower.tower import TowerElement

    assert TowerElement(res.two_tower, 1, mins[1][0]).rational_value() == 2  # X^2 + 2


def test_slot_split_bound(cubic):
    rng = random.Random(5)
    alpha = cubic.gen()
    for _ in range(5):
        coeffs = [Fraction(rng.randint(-9, 9)) for _ in range(3)]
        coeffs[2] = coeffs[2] or Fraction(1)
        g = Poly(QQ, 0, coeffs)
        if g(alpha).is_zero():
            continue
        res = quadratic_slot_split(alpha, g)
        assert res.two_tower.absolute_degree() <= 2 ** (g.degree + 1) <= 8


def test_slot_split_rejects_gzero(cubic):
    alpha = cubic.gen()
    with pytest.raises(PreconditionError):
        quadratic_slot_split(alpha, Poly(QQ, 0, []))  # the zero polynomial
    # a genuine g(alpha) = 0: alpha = sqrt2 with g = X^2 - 2
    q_s = tower_extend(QQ, [-2, 0, 1], label="s2")
    with pytest.raises(PreconditionError):
        quadratic_slot_split(q_s.gen(), Poly(QQ, 0, [-2, 0, 1]))


# -- the pipeline --------------------------------------------------------------------


def test_split_r1_division_case():
    cert = split_over_2ext(q_rat(-1, -1))
    assert cert.degree_over_F == 2
    assert cert.claimed_bound == 2
    assert verify.verify_split(split_certificate_doc(cert))[0]


def test_split_r1_u_square():
    cert = split_over_2ext(q_rat(1, 7))
    assert cert.degree_over_F == 1
    assert [str(w) for w in cert.witness] == ["1", "1", "0", "0"]


def test_split_cubic_example(cubic):
    q = standard_quaternion(cubic.gen(), cubic.rational(2))
    cert = split_over_2ext(q)
    assert cert.degree_over_F <= 8
    assert norm_value(q, cert.witness, cert.tower).is_zero()
    assert verify_split_certificate(q, cert)


def test_split_odd_degrees_bound():
    rng = random.Random(2024)
    for tower, bound in ((field_cubic(), 8), (field_quintic(), 32)):
        q = random_quaternion(rng, tower)
        cert = split_over_2ext(q)
        assert cert.degree_over_F <= bound
        assert verify_split_certificate(q, cert)


def test_split_septic_large_branch():
    rng = random.Random(99)
    q = random_quaternion(rng, field_septic())
    cert = split_over_2ext(q)
    assert cert.degree_over_F <= 128
    assert verify_split_certificate(q, cert)


def test_split_septic_dependent_alpha():
    # u rational makes (1, alpha, alpha^2) dependent in the large branch
    tower = field_septic()
    q = standard_quaternion(tower.rational(3), tower.gen() + 1)
    cert = split_over_2ext(q)
    assert cert.degree_over_F <= 128
    assert verify_split_certificate(q, cert)


def test_split_declared_two_part():
    # K = Q(sqrt2, sqrt3) with the full tower declared as its own 2-part
    t = tower_extend(QQ, [-2, 0, 1], label="s2")
    t = tower_extend(t, [t.rational(-3), t.rational(0), t.rational(1)], label="s3")
    q = standard_quaternion(t.gen() + 1, t.rational(-1))
    cert = split_over_2ext(q, two_part_levels=2)
    assert cert.degree_over_F <= 16
    assert verify_split_certificate(q, cert)


def test_split_even_degree_requires_declaration():
    t = tower_extend(QQ, [-2, 0, 1], label="s2")
    q = standard_quaternion(t.gen(), t.rational(3))
    with pytest.raises(Missing2PartDeclaration):
        split_over_2ext(q)
    cert = split_over_2ext(q, two_part_levels=1)
    assert cert.degree_over_F <= 4
    assert verify_split_certificate(q, cert)


def test_split_even_degree_without_quadratic_subfield():
    # x^4 - x - 1 and x^6 - x - 1 have no proper subfields, so declaring an
    # empty 2-part is honest; the mirrored levels go through the tripwire path
    for coeffs, bound in (([-1, -1, 0, 0, 1], 16), ([-1, -1, 0, 0, 0, 0, 1], 64)):
        t = tower_extend(QQ, coeffs)
        q = standard_quaternion(t.gen(), t.rational(2))
        cert = split_over_2ext(q, two_part_levels=0)
        assert cert.degree_over_F <= bound
        assert verify_split_certificate(q, cert)


def test_split_degree_too_large():
    t = tower_extend(QQ, [-2, 0, 0, 0, 0, 0, 0, 0, 0, 1], label="t9")  # degree 9
    q = standard_quaternion(t.gen(), t.rational(3))
    with pytest.raises(DegreeTooLarge):
        split_over_2ext(q)


def test_mirror_records_collapse():
    # a dishonestly declared 2-part: sqrt(3) already lives in the compositum,
    # so mirroring sqrt(3) collapses and is recorded rather than stacked
    from isotower.splitting import _Pair
    from isotower.tower import TowerField

    t2 = tower_extend(QQ, [-2, 0, 1], label="s2")
    comp = tower_extend(t2, [t2.rational(-3), t2.rational(0), t2.rational(1)], label="s3")
    pair = _Pair(
        f_tower=TowerField(comp.levels[:1]),
        c_tower=comp,
        shared=1,
        comp_base=comp.height,
        images=(),
        guaranteed=False,
    )
    pair2, root = pair.adjoin_sqrt(pair.f_tower.rational(3))
    assert pair2.collapsed
    assert pair2.c_tower is comp or pair2.c_tower == comp  # no level stacked
    assert pair2.f_tower.absolute_degree() == 4  # F-side still counts it
    lifted = pair2.lift(root)
    assert lifted * lifted == 3


def test_split_quartic_alpha_branch():
    # degree 8 field Q[x]/(x^8 - 3) with alpha = -u = sqrt3 of degree 2 over Q:
    # the dependent branch adjoins the quartic minpoly of sqrt(-alpha)
    t = tower_extend(QQ, [-3] + [0] * 7 + [1], label="e8", kind=KIND_BASE)
    x4 = t.gen() ** 4  # a square root of 3
    q = standard_quaternion(-x4, t.rational(5))
    cert = split_over_2ext(q, two_part_levels=0)
    assert cert.degree_over_F <= 256
    assert norm_value(q, cert.witness, cert.tower).is_zero()
    assert verify_split_certificate(q, cert)


# -- rational oracle ------------------------------------------------------------------


def test_hilbert_examples():
    assert hilbert_symbol_Q(-1, -1) == "division"
    assert hilbert_symbol_Q(1, 7) == "split"
    assert hilbert_symbol_Q(1, -17) == "split"
    assert hilbert_symbol_Q(2, 7) == "split"
    assert hilbert_symbol_Q(Fraction(1, 7), 3) == "division"


def test_hilbert_rejects_zero():
    with pytest.raises(PreconditionError):
        hilbert_symbol_Q(0, 3)


def test_norm_zero_search():
    w = rational_norm_zero_search(2, 7)
    assert w is not None
    x, y, z, t = w
    assert x * x - 2 * y * y - 7 * z * z == 0 and t == 0
    assert rational_norm_zero_search(-1, -1) is None


def test_oracle_agreement_sample():
    rng = random.Random(31)
    for _ in range(40):
        u = Fraction(rng.randint(-20, 20) or 1, rng.randint(1, 9))
        v = Fraction(rng.randint(-20, 20) or 1, rng.randint(1, 9))
        verdict = hilbert_symbol_Q(u, v)
        cert = split_over_2ext(standard_quaternion(QQ.rational(u), QQ.rational(v)))
        if verdict == "division":
            assert cert.degree_over_F == 2
        else:
            assert cert.degree_over_F == 1 or rational_norm_zero_search(u, v) is not None


# -- documents -------------------------------------------------------------------------


def test_quaternion_doc_round_trip(cubic):
    q = standard_quaternion(cubic.gen(), cubic.rational(2))
    doc = quaternion_doc(q)
    assert quaternion_doc(quaternion_from_doc(doc)) == doc
    qb = bracket_quaternion(QQ.rational(1), QQ.rational(5))
    doc2 = quaternion_doc(qb)
    assert set(doc2) == {"presentation", "field", "a", "b"}
    assert quaternion_doc(quaternion_from_doc(doc2)) == doc2


def test_scaled_witness_still_verifies(cubic):
    from isotower.splitting import SplitCertificate

    q = standard_quaternion(cubic.gen(), cubic.rational(2))
    cert = split_over_2ext(q)
    top = cert.tower.height
    scale = cert.tower.gen(top) + 2 if top > cert.quaternion.field.height else cert.tower.rational(3)
    scaled = SplitCertificate(
        cert.quaternion,
        cert.tower,
        cert.two_tower,
        tuple(w.embed(top) * scale for w in cert.witness),
        cert.degree_over_F,
        cert.claimed_bound,
    )
    assert verify.verify_split(split_certificate_doc(scaled))[0]


def test_lowered_bound_fails(cubic):
    q = standard_quaternion(cubic.gen(), cubic.rational(2))
    cert = split_over_2ext(q)
    doc = split_certificate_doc(cert)
    doc["claimed_bound"] = cert.degree_over_F // 2
    ok, _ = verify.verify_split(doc)
    assert not ok
