import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from intehrhart.exactlin import DimensionMismatch
from intehrhart.steppoly import (QuasiPolynomial, bernoulli_numbers, bernoulli_poly, frac,
                                 from_json, parse_qp, qp_equivalent, qp_eval, qp_specialize,
                                 to_json, to_text)

Q = QuasiPolynomial
rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_frac():
    assert frac(Fraction(7, 3)) == Fraction(1, 3)
    assert frac(Fraction(-1, 3)) == Fraction(2, 3)
    assert frac(5) == 0


def test_reflection_identity_needs_the_integers():
    # 1 - {t} - {-t} vanishes off the integers but equals 1 on them
    p = parse_qp("1 - {t} - {-t}", ["t"])
    assert qp_eval(p, [Fraction(1, 3)]) == 0
    assert qp_eval(p, [2]) == 1
    assert not qp_equivalent(p, Q(1))


def test_nonstructural_identity():
    # {t}{-t} = {t} - {t}^2 holds everywhere, integers included
    lhs = parse_qp("{t}*{-t}", ["t"])
    rhs = parse_qp("{t} - {t}^2", ["t"])
    assert lhs != rhs
    assert qp_equivalent(lhs, rhs)


def test_step_identity_detected_by_sampling():
    a = Q.step([1, 0])
    b = parse_qp("{b1 + 2*b2 - 2*b2}", ["b1", "b2"])
    assert qp_equivalent(a, b)
    assert not qp_equivalent(Q.step([1]), Q.const(1, 1) - Q.step([-1]))


def test_degrees():
    p = parse_qp("b1*b2^2*{b1 + b3}", ["b1", "b2", "b3"])
    assert p.degrees() == (3, 1, 4)


def test_interval_formula_value():
    p = parse_qp("b1 + b2 - {b1} - {b2} + 1", ["b1", "b2"])
    assert qp_eval(p, [Fraction(1, 2), Fraction(7, 10)]) == 1
    assert qp_eval(p, [3, 0]) == 4


def test_json_round_trip_exact():
    p = parse_qp("1/3*{b1/2 - b2}^2*b1 - 7/5*b2^3 + {b2} + 2", ["b1", "b2"])
    assert from_json(to_json(p)) == p


@settings(max_examples=40, deadline=None)
@given(st.lists(rats, min_size=2, max_size=2), st.lists(rats, min_size=2, max_size=2))
def test_ring_operations_commute_with_evaluation(eta, b):
    p = Q.step(eta) * Q.var(2, 0) + Q.const(2, Fraction(1, 3))
    q = Q.step([1, -1], 2) - Q.var(2, 1)
    for op in (lambda x, y: x + y, lambda x, y: x * y, lambda x, y: x - y):
        assert qp_eval(op(p, q), b) == op(qp_eval(p, b), qp_eval(q, b))


def test_specialize_along_ray():
    p = parse_qp("{b1 + b2}*b1 + {b2/3}", ["b1", "b2"])
    T = [[2], [Fraction(1, 2)]]
    s = qp_specialize(p, T)
    for t in (Fraction(1, 7), Fraction(5, 3), 2):
        assert qp_eval(s, [t]) == qp_eval(p, [2 * t, Fraction(1, 2) * t])


def test_to_text_readable():
    p = parse_qp("1/2*{b1}^2 - b2", ["b1", "b2"])
    assert to_text(p) == "1/2*{b1}^2 - b2"


def test_bernoulli():
    assert bernoulli_numbers(4) == (1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30))
    assert bernoulli_poly(2) == (Fraction(1, 6), -1, 1)


def test_mismatch_errors():
    with pytest.raises(DimensionMismatch):
        Q.var(2, 0) + Q.var(3, 0)
    with pytest.raises(DimensionMismatch):
        qp_eval(Q.var(2, 0), [1])


def test_parse_rejects_offsets_and_bad_powers():
    with pytest.raises(ValueError):
        parse_qp("{t + 1/2}", ["t"])
    with pytest.raises(ValueError):
        parse_qp("t^(1/2)", ["t"])
    with pytest.raises(ValueError):
        parse_qp("t / t", ["t"])


def test_equivalence_random_polynomial_identity():
    rng = random.Random(3)
    x = Q.linear([rng.randint(-3, 3) for _ in range(3)], 1)
    y = Q.linear([rng.randint(-3, 3) for _ in range(3)], -2)
    assert qp_equivalent((x + y) ** 2, x * x + x * y.scale(2) + y * y)
