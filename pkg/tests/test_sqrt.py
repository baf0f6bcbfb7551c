from fractions import Fraction

import pytest

from isotower.sqrt import adjoin_sqrt, rational_sqrt, sqrt_or_nonsquare, squarefree_reduce
from isotower.tower import KIND_BASE, KIND_SQRT, QQ, tower_extend


def test_rational_sqrt():
    assert rational_sqrt(Fraction(4)) == 2
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(-4)) is None
    assert rational_sqrt(Fraction(0)) == 0


def test_squarefree_reduce():
    assert squarefree_reduce(-4) == (-1, 2)
    assert squarefree_reduce(18) == (2, 3)
    assert squarefree_reduce(1) == (1, 1)
    assert squarefree_reduce(49) == (1, 7)
    d, m = squarefree_reduce(2 * 10007**2)
    assert d == 2 and m == 10007
    with pytest.raises(ValueError):
        squarefree_reduce(0)


def test_tier1_through_elements():
    assert sqrt_or_nonsquare(QQ.rational(4)) == 2
    assert sqrt_or_nonsquare(QQ.rational(2)) is None
    with pytest.raises(ValueError):
        sqrt_or_nonsquare(QQ.zero())


@pytest.fixture
def q_sqrt2():
    return tower_extend(QQ, [-2, 0, 1], label="s2")


def test_tier2_denesting(q_sqrt2):
    s = q_sqrt2.gen()
    root = sqrt_or_nonsquare(3 + 2 * s)
    assert root is not None and root * root == 3 + 2 * s
    assert root in (1 + s, -(1 + s))
    # a^2 - b^2 d = 1 - 2 = -1 is not a square in Q, so 1 + sqrt2 is not one here
    assert sqrt_or_nonsquare(1 + s) is None


def test_tier2_constant_cases(q_sqrt2):
    s = q_sqrt2.gen()
    assert sqrt_or_nonsquare(q_sqrt2.rational(4)) == 2
    root = sqrt_or_nonsquare(q_sqrt2.rational(2))
    assert root in (s, -s)  # 2 = (sqrt2)^2: the b = 0, a*d branch
    assert sqrt_or_nonsquare(q_sqrt2.rational(3)) is None


def test_tier2_nested_chain(q_sqrt2):
    stacked = tower_extend(
        q_sqrt2, [q_sqrt2.rational(-3), q_sqrt2.rational(0), q_sqrt2.rational(1)], label="s3"
    )
    s2 = q_sqrt2.gen().in_tower(stacked).embed(2)
    s3 = stacked.gen()
    c = (1 + s2 + s3) ** 2
    root = sqrt_or_nonsquare(c)
    assert root is not None and root * root == c
    assert sqrt_or_nonsquare(5 + s2 * s3) is None


@pytest.fixture
def cubic():
    return tower_extend(QQ, [-1, -2, 1, 1], label="a")


def test_tier3_recovers_roots(cubic):
    a = cubic.gen()
    for x in (1 + a + a * a, 2 - a, a * a * Fraction(3, 7)):
        c = x * x
        root = sqrt_or_nonsquare(c)
        assert root is not None and root * root == c


def test_tier3_certifies_nonsquares(cubic):
    a = cubic.gen()
    assert sqrt_or_nonsquare(1 + a) is None
    assert sqrt_or_nonsquare(cubic.rational(2)) is None
    assert sqrt_or_nonsquare(cubic.rational(-1)) is None


def test_tier3_on_even_degree_base_root_level():
    # 3 = (t^2)^2 in Q[t]/(t^4 - 3): the root lives above the rationals
    quartic = tower_extend(QQ, [-3, 0, 0, 0, 1], label="t", kind=KIND_BASE)
    root = sqrt_or_nonsquare(quartic.rational(3))
    assert root is not None and root * root == 3
    assert sqrt_or_nonsquare(quartic.rational(5)) is None


def test_tier3_above_sqrt_levels(q_sqrt2):
    # cubic on top of Q(sqrt2): recovery must walk the mixed chain
    mixed = tower_extend(
        q_sqrt2,
        [q_sqrt2.rational(-1), q_sqrt2.rational(-2), q_sqrt2.rational(1), q_sqrt2.rational(1)],
        label="c",
    )
    s2 = q_sqrt2.gen().in_tower(mixed).embed(2)
    a = mixed.gen()
    c = (s2 + a) ** 2
    root = sqrt_or_nonsquare(c)
    assert root is not None and root * root == c
    assert sqrt_or_nonsquare(s2 + a) is None


def test_sqrt_deterministic(cubic):
    a = cubic.gen()
    c = (1 + a) ** 2
    assert sqrt_or_nonsquare(c) == sqrt_or_nonsquare(c)


def test_adjoin_sqrt_rational_reduction():
    tower, root, added = adjoin_sqrt(QQ, QQ.rational(-4))
    assert added
    # the level adjoins X^2 + 1 and the root is 2i
    assert tower.levels[0].minpoly == (Fraction(1), Fraction(0), Fraction(1))
    assert tower.levels[0].kind == KIND_SQRT
    assert root * root == -4
    tower2, root2, added2 = adjoin_sqrt(QQ, QQ.rational(Fraction(9, 4)))
    assert not added2 and root2 == Fraction(3, 2)


def test_adjoin_sqrt_skips_squares(q_sqrt2):
    s = q_sqrt2.gen()
    tower, root, added = adjoin_sqrt(q_sqrt2, 3 + 2 * s)
    assert not added and root * root == 3 + 2 * s
    tower, root, added = adjoin_sqrt(q_sqrt2, 1 + s)
    assert added and tower.absolute_degree() == 4
    assert root * root == (1 + s).in_tower(tower).embed(2)


def test_adjoin_sqrt_rejects_zero():
    with pytest.raises(ValueError):
        adjoin_sqrt(QQ, QQ.zero())


def test_sqrt_soundness_random():
    import random

    rng = random.Random(11)
    q_s = tower_extend(QQ, [-2, 0, 1], label="s2")
    for _ in range(50):
        x = q_s.element(
            1, (Fraction(rng.randint(-9, 9)), Fraction(rng.randint(-9, 9)))
        )
        if x.is_zero():
            continue
        c = x * x
        root = sqrt_or_nonsquare(c)
        assert root is not None and root * root == c
        assert root in (x, -x)
