from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import helpers
from helpers import operators, small
from rieszlab import (
    ComponentMask,
    ExpectationOperator,
    HomogeneityViolation,
    PartitionAlgebra,
    RangeViolation,
    RieszElement,
)
from rieszlab.expectation import apply_t, t_norm2_squared
from rieszlab.riesz_frechet import (
    bijection_certificate,
    dyadic_represent,
    exact_represent,
    functional_charge,
    functional_norm_squared,
    level_sets,
    make_density_functional,
    positive_component,
    validate_matrix_functional,
)

R = RieszElement
F = Fraction
Y = R([1, -2, 3, 4])


def test_density_functional(two_blocks):
    T = two_blocks
    assert make_density_functional(T, R.unit(4))(R([1, 2, 3, 4])) == apply_t(T, R([1, 2, 3, 4]))
    assert make_density_functional(T, R.zero(4))(R([1, 2, 3, 4])).is_zero()
    assert make_density_functional(T, Y)(R.unit(4)) == R([F(-1, 2), F(-1, 2), F(7, 2), F(7, 2)])


def test_matrix_functional(two_blocks):
    T = two_blocks
    f = validate_matrix_functional(T.matrix(), T)
    density = make_density_functional(T, R.unit(4))
    for i in range(4):
        chi = R.indicator(4, i)
        assert f(chi) == density(chi)
    with pytest.raises(RangeViolation) as exc:
        validate_matrix_functional([[1, 0, 0, 0]] + [[0] * 4] * 3, T)
    assert exc.value.witness["coordinate"] == 0
    rows = make_density_functional(T, Y).matrix()
    g = validate_matrix_functional(rows, T)
    assert exact_represent(g) == Y


def test_homogeneity_violation():
    T = ExpectationOperator.uniform([[0], [1]], 2)
    with pytest.raises(HomogeneityViolation) as exc:
        validate_matrix_functional([[1, 1], [0, 1]], T)
    w = exc.value.witness
    assert w["lhs"] != w["rhs"]


def test_norm_squared(two_blocks):
    T = two_blocks
    assert functional_norm_squared(make_density_functional(T, R.unit(4))) == R.unit(4)
    assert functional_norm_squared(make_density_functional(T, Y)) == R([F(5, 2), F(5, 2), F(25, 2), F(25, 2)])
    assert functional_norm_squared(make_density_functional(T, R.zero(4))).is_zero()


def test_positive_component(two_blocks):
    T = two_blocks
    assert str(positive_component(make_density_functional(T, Y))) == "1011"
    assert str(positive_component(make_density_functional(T, R([1, 0, 2, 3])))) == "1111"
    assert str(positive_component(make_density_functional(T, R.zero(4)))) == "0000"
    reference = helpers.hahn_solutions(functional_charge(make_density_functional(T, Y)))
    assert reference == {"1011"}


def test_exact_represent(two_blocks):
    T = two_blocks
    assert exact_represent(make_density_functional(T, R.unit(4))) == R.unit(4)
    assert exact_represent(make_density_functional(T, Y)) == Y


def test_dyadic_examples(two_blocks):
    T = two_blocks
    zero = make_density_functional(T, R.zero(4))
    for n in (1, 3, 8):
        assert dyadic_represent(zero, n).is_zero()
    half = make_density_functional(T, R.unit(4) * F(1, 2))
    sets = level_sets(half, 1)
    assert list(sets.levels) == [1] and str(sets.levels[1]) == "1111"
    assert dyadic_represent(half, 1) == R.unit(4) * F(1, 2)
    approx = dyadic_represent(make_density_functional(T, Y), 10)
    assert (approx - Y).max_norm() <= F(2, 2**10)


def test_level_search_modes_agree():
    T = ExpectationOperator(PartitionAlgebra([[0, 1, 2], [3]], 4), [1, 3, 2, 5])
    f = make_density_functional(T, R([F(7, 3), F(-1, 5), 0, F(9, 4)]))
    for n in (1, 4, 7):
        a, b = level_sets(f, n, "bisect"), level_sets(f, n, "linear")
        assert a.levels == b.levels and a.positive == b.positive


def test_bijection_examples(two_blocks):
    for y in (R.unit(4), Y, R.zero(4)):
        assert all(c.passed for c in bijection_certificate(two_blocks, y))


@settings(max_examples=50, deadline=None)
@given(operators(), st.data())
def test_representation_properties(T, data):
    n = T.n
    y = R(data.draw(st.lists(small, min_size=n, max_size=n)))
    f = make_density_functional(T, y)
    assert exact_represent(f) == y
    assert exact_represent(validate_matrix_functional(f.matrix(), T)) == y
    norm = functional_norm_squared(f)
    assert norm == t_norm2_squared(T, y)
    g = R(data.draw(st.lists(small, min_size=n, max_size=n)))
    assert f(g) * f(g) <= norm * t_norm2_squared(T, g)
    C = T.ratio_constant()
    for depth in (1, 3, 6):
        approx = dyadic_represent(f, depth)
        assert (approx - y).max_norm() <= C * F(1, 2**depth)
        assert (approx - y).max_norm() < F(1, 2**depth)
        # same sign, smaller magnitude
        assert all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(approx, y))


@settings(max_examples=40, deadline=None)
@given(operators(max_n=5), st.data())
def test_positive_component_matches_reference(T, data):
    y = R(data.draw(st.lists(small, min_size=T.n, max_size=T.n)))
    f = make_density_functional(T, y)
    reference = helpers.hahn_solutions(functional_charge(f))
    assert str(positive_component(f)) in reference
    assert str(positive_component(f, nulls="positive")) in reference
    q = positive_component(f, nulls="positive")
    assert q == ComponentMask(sum(1 << i for i, c in enumerate(y) if c >= 0), T.n)
