from fractions import Fraction

import pytest

from isotower.errors import ReducibilityError, ZeroInverse
from isotower.tower import (
    QQ,
    Poly,
    absolute_degree,
    elem_arith,
    elem_inv,
    embed,
    project_element,
    refine_tower,
    tower_extend,
)


@pytest.fixture
def q_i():
    return tower_extend(QQ, [1, 0, 1], label="i")


@pytest.fixture
def q_sqrt2():
    return tower_extend(QQ, [-2, 0, 1], label="s2")


@pytest.fixture
def cubic():
    # x^3 + x^2 - 2x - 1: no rational root (p(1) = -1, p(-1) = 1), so irreducible
    return tower_extend(QQ, [-1, -2, 1, 1], label="a")


def cubic_discriminant():
    # 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2 for x^3 + x^2 - 2x - 1
    a, b, c, d = 1, 1, -2, -1
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2


def test_cubic_is_cyclic():
    assert cubic_discriminant() == 49  # square discriminant: Galois, cyclic


def test_extend_degrees(q_i, q_sqrt2):
    assert absolute_degree(q_i) == 2
    stacked = tower_extend(q_sqrt2, [q_sqrt2.rational(-3), q_sqrt2.rational(0), q_sqrt2.rational(1)])
    assert absolute_degree(stacked) == 4
    c = tower_extend(QQ, [-1, -2, 1, 1])
    assert absolute_degree(c) == 3


def test_extend_rejects_bad_minpolys():
    with pytest.raises(ValueError):
        tower_extend(QQ, [1, 1])  # degree 1
    with pytest.raises(ValueError):
        tower_extend(QQ, [1, 0, 2])  # not monic


def test_gaussian_arithmetic(q_i):
    i = q_i.gen()
    one = q_i.one()
    assert (one + i) * (one - i) == 2
    assert elem_arith(one + i, one - i, "mul") == 2
    assert (one + i).inverse() == (one - i) * Fraction(1, 2)
    assert elem_inv(one + i) * (one + i) == 1


def test_sqrt2_arithmetic(q_sqrt2):
    s = q_sqrt2.gen()
    assert (1 + s) ** 2 == 3 + 2 * s
    assert (3 + 2 * s).inverse() == 3 - 2 * s  # norm 1


def test_cubic_reduction(cubic):
    a = cubic.gen()
    assert a * (a * a) == -(a * a) + 2 * a + 1


def test_zero_inverse(q_i):
    with pytest.raises(ZeroInverse):
        q_i.zero().inverse()


def test_reducibility_witness():
    bad = tower_extend(QQ, [-4, 0, 1], label="t")  # X^2 - 4 = (X-2)(X+2)
    t = bad.gen()
    with pytest.raises(ReducibilityError) as err:
        (t - 2).inverse()
    witness = err.value.witness
    assert witness.level == 1
    assert 1 <= len(witness.factor) - 1 < 2
    # the factor divides the minimal polynomial exactly
    factor = Poly(QQ, 0, [Fraction(c) for c in witness.factor])
    minpoly = Poly(QQ, 0, [Fraction(-4), Fraction(0), Fraction(1)])
    _, rem = minpoly.divmod(factor)
    assert rem.is_zero()


def test_refine_tower_linear_factor():
    bad = tower_extend(QQ, [-4, 0, 1], label="t")
    t = bad.gen()
    with pytest.raises(ReducibilityError) as err:
        (t - 2).inverse()
    refined = refine_tower(bad, err.value.witness)
    assert refined.height == 0  # linear factor: the level evaporates
    projected = project_element(t + 1, err.value.witness, refined)
    # t was identified with the factor's root
    assert projected.level == 0


def test_refine_tower_quadratic_factor():
    bad = tower_extend(QQ, [4, 0, -2, 0, 1], label="t")  # (X^2-2)^2... actually X^4-2X^2+4? no:
    # use X^4 - 4 = (X^2-2)(X^2+2)
    bad = tower_extend(QQ, [-4, 0, 0, 0, 1], label="q")
    t = bad.gen()
    with pytest.raises(ReducibilityError) as err:
        (t * t - 2).inverse()
    witness = err.value.witness
    refined = refine_tower(bad, witness)
    assert refined.absolute_degree() == 2
    x = project_element(t * t, witness, refined)
    assert x.rational_value() in (Fraction(2), Fraction(-2))


def test_embed_preserves_value(q_sqrt2):
    stacked = tower_extend(q_sqrt2, [q_sqrt2.rational(-3), q_sqrt2.rational(0), q_sqrt2.rational(1)])
    x = QQ.rational(Fraction(3, 2))
    lifted = embed(x.in_tower(stacked), 2)
    assert lifted.rational_value() == Fraction(3, 2)
    s = q_sqrt2.gen().in_tower(stacked)
    assert embed(s, 2) * embed(s, 2) == 2


def test_auto_embedding_mixed_levels(q_sqrt2):
    s = q_sqrt2.gen()
    r = QQ.rational(5).in_tower(q_sqrt2)
    assert s + r == s + 5
    assert (r * s).level == 1


def test_element_equality_and_hash(q_i):
    i = q_i.gen()
    assert i + 1 == 1 + i
    assert hash(i + 1) == hash(1 + i)
    assert i != 1


def test_values_are_immutable_structures(q_i):
    # nested tuples of Fractions all the way down: safe to share across threads
    x = q_i.gen() + 1

    def walk(node, lv):
        if lv == 0:
            assert isinstance(node, Fraction)
            return
        assert isinstance(node, tuple)
        for c in node:
            walk(c, lv - 1)

    walk(x.data, x.level)
    assert isinstance(q_i.levels, tuple)


def test_poly_basics(cubic):
    p = Poly(QQ, 0, [2, 0, 1])
    q = Poly(QQ, 0, [1, 1])
    prod = p * q
    assert prod.degree == 3
    quo, rem = prod.divmod(q)
    assert quo == p and rem.is_zero()
    assert Poly(QQ, 0, [0, 0]).is_zero()
    assert p(QQ.rational(3)) == 11
    # evaluation at a tower element
    a = cubic.gen()
    m = Poly(QQ, 0, [-1, -2, 1, 1])
    assert m(a).is_zero()


def test_degree_multiplicativity_random():
    import random

    rng = random.Random(5)
    tower = QQ
    expected = 1
    for n in range(3):
        deg = rng.choice([2, 3])
        coeffs = [tower.rational(rng.randint(-5, 5)) for _ in range(deg)] + [tower.one()]
        tower = tower_extend(tower, coeffs)
        expected *= deg
        assert tower.absolute_degree() == expected
