"""Property-based checks of the kernel laws and module invariants."""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from isotower.errors import ReducibilityError
from isotower.serialize import canonical_dumps, element_from_json, element_to_json
from isotower.sqrt import sqrt_or_nonsquare
from isotower.tower import QQ, tower_extend

TOWERS = {
    "gauss": tower_extend(QQ, [1, 0, 1], label="i"),
    "sqrt2": tower_extend(QQ, [-2, 0, 1], label="s2"),
    "cubic": tower_extend(QQ, [-1, -2, 1, 1], label="a"),
}
TOWERS["biquad"] = tower_extend(
    TOWERS["sqrt2"],
    [TOWERS["sqrt2"].rational(-3), TOWERS["sqrt2"].rational(0), TOWERS["sqrt2"].rational(1)],
    label="s3",
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)


def build_element(tower, lv, draw_leaf):
    if lv == 0:
        return draw_leaf()
    return tuple(build_element(tower, lv - 1, draw_leaf) for _ in range(tower.levels[lv - 1].degree))


@st.composite
def tower_elements(draw, keys=tuple(TOWERS)):
    tower = TOWERS[draw(st.sampled_from(list(keys)))]
    data = build_element(tower, tower.height, lambda: draw(rationals))
    return tower.element(tower.height, data)


@st.composite
def element_triples(draw):
    tower = TOWERS[draw(st.sampled_from(list(TOWERS)))]

    def mk():
        return tower.element(
            tower.height, build_element(tower, tower.height, lambda: draw(rationals))
        )

    return mk(), mk(), mk()


@given(element_triples())
@settings(max_examples=150, deadline=None)
def test_ring_laws(triple):
    x, y, z = triple
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(tower_elements())
@settings(max_examples=100, deadline=None)
def test_inverse_round_trip(x):
    if x.is_zero():
        return
    assert x.inverse() * x == 1
    assert x.inverse().inverse() == x


@given(tower_elements(keys=("gauss", "sqrt2", "biquad")))
@settings(max_examples=60, deadline=None)
def test_sqrt_soundness_on_squares(x):
    if x.is_zero():
        return
    c = x * x
    root = sqrt_or_nonsquare(c)
    assert root is not None
    assert root * root == c
    assert root in (x, -x)


@given(tower_elements())
@settings(max_examples=100, deadline=None)
def test_serialization_round_trip(x):
    node = element_to_json(x)
    text = canonical_dumps(node)
    back = element_from_json(x.tower, node)
    assert back == x
    assert canonical_dumps(element_to_json(back)) == text


def test_reducibility_factor_divides():
    # dynamic evaluation on deliberately collapsing levels X^2 - a^2
    for a in (2, 3, 5, 7):
        bad = tower_extend(QQ, [-a * a, 0, 1], label="t")
        t = bad.gen()
        try:
            (t - a).inverse()
            raise AssertionError("expected a reducibility witness")
        except ReducibilityError as err:
            factor = err.witness.factor
            assert len(factor) - 1 == 1
            root = -factor[0]
            assert root * root == a * a  # the factor's root solves the minpoly


@given(st.integers(min_value=-30, max_value=30), st.integers(min_value=-30, max_value=30))
@settings(max_examples=80, deadline=None)
def test_mix_forms_preserves_zero_sets(c1, c2):
    from isotower.generate import random_qfsystem
    from isotower.quadforms import mix_forms

    rng = random.Random(c1 * 31 + c2)
    system = random_qfsystem(rng, 2, dim=4, lo=-4, hi=4)
    v = tuple(QQ.rational(rng.randint(-3, 3)) for _ in range(4))
    vals = [f.evaluate(v) for f in system.forms]
    if not any(vals):
        return
    mixed = mix_forms(system, v)
    for _ in range(5):
        x = tuple(QQ.rational(rng.randint(-4, 4)) for _ in range(4))
        orig_zero = all(f.evaluate(x).is_zero() for f in system.forms)
        mixed_zero = all(f.evaluate(x).is_zero() for f in mixed.forms)
        assert orig_zero == mixed_zero
    # and the mixed system vanishes at v except in the last slot
    assert all(f.evaluate(v).is_zero() for f in mixed.forms[:-1])


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=60, deadline=None)
def test_transfer_matches_coordinates(seed):
    from isotower.quadforms import LinearFunctionalBasis, QuadraticForm, transfer_system

    rng = random.Random(seed)
    tower = TOWERS["cubic"]
    a = tower.gen()
    form = QuadraticForm.diagonal(tower, 1, [1 + a * rng.randint(-2, 2), a])
    basis = LinearFunctionalBasis.standard(tower, 0, 1)
    system = transfer_system(form, basis)
    x = [Fraction(rng.randint(-5, 5)) for _ in range(6)]
    v_k = (tower.element(1, tuple(x[:3])), tower.element(1, tuple(x[3:])))
    value = form.evaluate(v_k)
    got = [f.evaluate(tuple(QQ.rational(c) for c in x)) for f in system.forms]
    assert [g.rational_value() for g in got] == list(value.data)
