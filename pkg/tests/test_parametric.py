import random
from fractions import Fraction

import pytest

from instances import rand_point_in_chamber, random_parametric, random_subspace
from intehrhart.exactlin import Subspace
from intehrhart.oracle import VPolytope, brute_intermediate_sum, integrate_polytope
from intehrhart.parametric import (EmptyChamber, NormalsInsufficient, NotSimple, OnWall,
                                   OutsideClosure, ParametricPolytope, Unbounded, Weight,
                                   barvinok_patched_qp, chamber_near, chamber_of,
                                   cone_by_cone_qp, dilation_qp, enumerate_bases,
                                   intermediate_ehrhart_qp, linear_system_qp,
                                   minkowski_support, partition_to_parametric,
                                   simplex_system, vertex_map)
from intehrhart.steppoly import parse_qp, qp_equivalent, qp_eval, qp_specialize

F = Fraction
QUAD_MU = [[-1, 0], [0, -1], [1, 1], [-1, 1]]
QB = ["b1", "b2", "b3", "b4"]
VERTICAL = Subspace.span([[0, 1]])
TRI = [(1, 1), (1, 2), (2, 2)]


def oracle(pp, b, L, h):
    return brute_intermediate_sum(VPolytope.from_h(pp.mu, b), L, list(h))


def test_vertex_maps():
    pp = ParametricPolytope(QUAD_MU)
    b = [F(3), F(5), F(7), F(11)]
    assert [sum(r[k] * b[k] for k in range(4)) for r in vertex_map(pp, (0, 1))] == [-3, -5]
    # s_[3,4] = ((b3 - b4)/2, (b3 + b4)/2)
    assert [sum(r[k] * b[k] for k in range(4)) for r in vertex_map(pp, (2, 3))] == [-2, 9]
    assert len(enumerate_bases(pp)) == 6


def test_proportional_rows_are_not_bases():
    pp = ParametricPolytope([[1, 0], [2, 0], [-1, 0], [0, 1], [0, -1]])
    assert (0, 1) not in [B.indices for B in enumerate_bases(pp)]


def test_unbounded_rejected():
    with pytest.raises(Unbounded):
        ParametricPolytope([[1, 0], [0, 1]])
    with pytest.raises(Unbounded):
        ParametricPolytope([[1, 0], [-1, 0]])


def test_chambers_of_the_quadrilateral():
    pp = ParametricPolytope(QUAD_MU)
    assert chamber_of(pp, (0, 0, 5, 3)).index_sets == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert chamber_of(pp, (2, 0, 0, 6)).index_sets == [(0, 1), (0, 2), (1, 2)]
    assert chamber_of(pp, (10, 0, 1, 1)).index_sets == [(1, 2), (1, 3), (2, 3)]
    with pytest.raises(EmptyChamber):
        chamber_of(pp, (-10, 1, 2, 3))
    with pytest.raises(OnWall):
        chamber_of(pp, (0, 0, 0, 0))


def test_interval():
    pp = ParametricPolytope([[1], [-1]])
    ch = chamber_of(pp, (F(1, 2), F(1, 3)))
    q = intermediate_ehrhart_qp(pp, ch, Subspace.zero(1), Weight.one(1))
    assert qp_equivalent(q, parse_qp("b1 + b2 - {b1} - {b2} + 1", ["b1", "b2"]))


def test_quadrilateral_chamber_formulas():
    pp = ParametricPolytope(QUAD_MU)
    ch = chamber_of(pp, (0, 0, 5, 3))
    top = "-b1^2/2 + b2^2/2 + b3^2/4 - b4^2/4 + b1*b2 + b1*b4 + b2*b3 + b3*b4/2"
    lin = ("(1/2+{b1}-{b2}-{b4})*b1 + (3/2-{b1}-{b2}-{b3})*b2"
           " + (1-{b2}-1/2*{b3}-1/2*{b4})*b3 + (1/2-{b1}-{b3}/2+{b4}/2)*b4")
    const = ("1 - 1/2*{b1} - 3/2*{b2} - {b3} - 1/2*{b4} - 1/2*{b1}^2 + 1/2*{b2}^2 - 1/2*{b4}^2"
             " - {(b4+b3)/2}^2 + {b1}*{b2} + {b1}*{b4} + {b2}*{b3} + {b3}*{(b4+b3)/2} + {b4}*{(b4+b3)/2}")
    q = intermediate_ehrhart_qp(pp, ch, Subspace.zero(2), Weight.one(2))
    assert qp_equivalent(q, parse_qp(top + " + " + lin + " + " + const, QB))
    assert qp_eval(q, [0, 0, 5, 3]) == 19
    vlin = "-1/2*b1 + 1/2*b2 + 1/2*b4 + {b1}*b1 - {b1}*b2 - {b1}*b4"
    vconst = "1/2*{b1} + 1/2*{b2+b3} - {(b3-b4)/2} - 1/2*{b1}^2 - 1/2*{b2+b3}^2 + {(b3-b4)/2}^2"
    qv = intermediate_ehrhart_qp(pp, ch, VERTICAL, Weight.one(2))
    assert qp_equivalent(qv, parse_qp(top + " + " + vlin + " + " + vconst, QB))
    assert qp_eval(qv, [0, 0, 5, 3]) == 13
    full = intermediate_ehrhart_qp(pp, ch, Subspace.full(2), Weight.one(2))
    assert qp_eval(full, [0, 0, 5, 3]) == F(23, 2)


def test_quadrilateral_dilation():
    pp = ParametricPolytope(QUAD_MU)
    ch = chamber_of(pp, (0, 0, 5, 3))
    d = dilation_qp(pp, ch, (0, 0, 5, 3), "exact", Weight.one(2))
    ref = ("23/2*t^2 + (13/2-{3*t}-4*{5*t})*t - 1/2*{3*t}^2 - {4*t}^2 + {4*t}*{3*t}"
           " + {5*t}*{4*t} - {5*t} - 1/2*{3*t} + 1")
    assert qp_equivalent(d, parse_qp(ref, ["t"]))
    dv = dilation_qp(pp, ch, (0, 0, 5, 3), "exact", Weight.one(2), L=VERTICAL)
    for t in (F(1, 2), F(1, 3), F(7, 5), 1, 2):
        assert qp_eval(dv, [t]) == oracle(pp, [0, 0, 5 * t, 3 * t], VERTICAL, Weight.one(2))


def test_dilation_agrees_with_specialization():
    rng = random.Random(21)
    pp = ParametricPolytope(QUAD_MU)
    b0 = (0, 0, 5, 3)
    ch = chamber_of(pp, b0)
    for L in (Subspace.zero(2), VERTICAL):
        direct = dilation_qp(pp, ch, b0, "exact", Weight.one(2), L=L)
        via = qp_specialize(intermediate_ehrhart_qp(pp, ch, L, Weight.one(2)), [[x] for x in b0])
        for _ in range(50):
            t = F(rng.randint(0, 300), rng.randint(1, 30))
            assert qp_eval(direct, [t]) == qp_eval(via, [t])


def test_triangle_variants():
    pp, b0 = simplex_system(TRI)
    ch = chamber_near(pp, b0)
    T = ["t"]
    ex = dilation_qp(pp, ch, b0, "exact", Weight.one(2))
    assert [qp_eval(ex, [F(x)]) for x in ("1/2", "1", "99/100", "101/100")] == [1, 3, 1, 1]
    cb = dilation_qp(pp, ch, b0, "conebycone", Weight.one(2), k=1)
    assert qp_equivalent(cb, parse_qp("t^2/2 + (3/2-{-t}-{2*t})*t + 1/4 - {-t}/2 - {2*t}/2"
                                      " + {-t}^2/2 + {2*t}^2/2", T))
    bv = dilation_qp(pp, ch, b0, "barvinok", Weight.one(2), k=1)
    assert qp_equivalent(bv, parse_qp("t^2/2 + (3/2-{-t}-{2*t})*t - {t}^2/2 + {t}/2", T))
    for v in ("conebycone", "barvinok"):
        assert qp_equivalent(dilation_qp(pp, ch, b0, v, Weight.one(2), k=0), parse_qp("t^2/2", T))
        assert qp_equivalent(dilation_qp(pp, ch, b0, v, Weight.one(2), k=2), ex)


def test_hexagon_minkowski_sum():
    pp = ParametricPolytope([[1, 0], [1, 1], [-1, 1], [-1, 0], [-1, -1], [1, -1]])
    bs = minkowski_support([[(0, 0), (F(-1, 2), F(1, 2)), (F(-1, 2), F(-1, 2))],
                            [(0, 0), (1, 1), (1, -1)]], pp)
    assert bs == [(0, 0, 1, F(1, 2), 1, 0), (1, 2, 0, 0, 0, 2)]
    ch = chamber_near(pp, [x + y for x, y in zip(*bs)])
    T = ["t1", "t2"]
    top = "1/4*t1^2 + 2*t1*t2 + t2^2"
    lin = "(1-{t1/2}-{2*t2})*t1 + (2-2*{t1}-2*{t2})*t2"
    const = ("1 - {t2}^2 - {2*t2}^2 + 2*{t1}*{t1/2} + 2*{t1/2+t2}*{t1} - {t1/2}^2 - 2*{t1/2+t2}^2"
             " - {t1} - {2*t2} - {t1}^2 + 2*{2*t2}*{t1/2+t2} + 2*{t2}*{2*t2}")
    q = linear_system_qp(pp, ch, bs, "exact", Weight.one(2))
    assert qp_equivalent(q, parse_qp(top + " + " + lin + " + " + const, T))
    assert qp_eval(linear_system_qp(pp, ch, bs, "exact", Weight.one(2), L=Subspace.full(2)), [1, 1]) == F(13, 4)


def test_minkowski_needs_enough_normals():
    pp = ParametricPolytope([[1, 0], [0, 1], [-1, -1]])
    with pytest.raises(NormalsInsufficient):
        minkowski_support([[(0, 0), (1, 0), (1, 1), (0, 1)]], pp)


def test_outside_closure():
    pp = ParametricPolytope(QUAD_MU)
    ch = chamber_of(pp, (0, 0, 5, 3))
    with pytest.raises(OutsideClosure):
        dilation_qp(pp, ch, (10, 0, 1, 1), "exact", Weight.one(2))


def test_cone_by_cone_needs_simple():
    # square pyramid: the apex lies on four facets
    mu = [[-1, 0, 0], [1, 0, 1], [0, -1, 0], [0, 1, 1], [0, 0, -1]]
    pp = ParametricPolytope(mu)
    b0 = (0, 2, 0, 2, 0)
    ch = chamber_near(pp, b0)
    cone_by_cone_qp(pp, ch, 1, Weight.one(3))
    with pytest.raises(NotSimple):
        dilation_qp(pp, ch, b0, "conebycone", Weight.one(3), k=1)
    dilation_qp(pp, ch, b0, "barvinok", Weight.one(3), k=1)


def test_partition_function():
    for lam, count in ((3, 4), (0, 1), (5, 6)):
        pp, b, K = partition_to_parametric([[1, 1]], [lam])
        ch = chamber_near(pp, b)
        q = intermediate_ehrhart_qp(pp, ch, Subspace.zero(pp.d), Weight.one(pp.d))
        assert qp_eval(q, b) == count


def test_weighted_sum_on_the_interval():
    pp = ParametricPolytope([[1], [-1]])
    ch = chamber_of(pp, (F(1, 2), F(1, 3)))
    q = intermediate_ehrhart_qp(pp, ch, Subspace.zero(1), Weight.power([1], 2))
    # sum of x^2/2 over the integers of [-b2, b1]
    for b in ((F(5, 2), F(7, 3)), (3, 1), (F(1, 5), 4)):
        expect = sum(F(x * x, 2) for x in range(-int(b[1]), int(b[0]) + 1))
        assert qp_eval(q, b) == expect


def test_random_instances_against_the_oracle():
    rng = random.Random(42)
    for _ in range(12):
        pp, ch, b = random_parametric(rng, 2)
        L = random_subspace(rng, 2, rng.randint(0, 2))
        h = Weight.power([rng.randint(-2, 2), rng.randint(-2, 2)], rng.randint(0, 1))
        q = intermediate_ehrhart_qp(pp, ch, L, h)
        for _ in range(3):
            b2 = rand_point_in_chamber(rng, pp, ch)
            assert qp_eval(q, b2) == oracle(pp, b2, L, h)


def test_k_extremes():
    rng = random.Random(8)
    for _ in range(3):
        pp, ch, b = random_parametric(rng, 2, extra=0)
        h = Weight.one(2)
        ex = intermediate_ehrhart_qp(pp, ch, Subspace.zero(2), h)
        full = intermediate_ehrhart_qp(pp, ch, Subspace.full(2), h)
        for qp in (barvinok_patched_qp, cone_by_cone_qp):
            assert qp_equivalent(qp(pp, ch, 2, h), ex)
            assert qp_equivalent(qp(pp, ch, 0, h), full)
        assert qp_eval(full, b) == integrate_polytope(VPolytope.from_h(pp.mu, b), [0, 0], 0)
