import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from intehrhart.conegen import (ZERO, AdaptedCell, DependentGenerators, HalfOpenSimplicialCone,
                                LexPoint, NonUniformCosetCondition, adapt_to_subspace,
                                collect_psi, cone_intermediate_series, decompose,
                                integral_of_cone, reduce_lower_dim, unimodularize)
from intehrhart.exactlin import Subspace, det, identity, lattice_det, projected_lattice, rank
from intehrhart.oracle import indicator_check
from intehrhart.steppoly import parse_qp, qp_equivalent

from instances import probe_points


def cone_strategy(dmax=3):
    def build(d):
        vec = st.lists(st.integers(-3, 3), min_size=d, max_size=d)
        return st.lists(vec, min_size=d, max_size=d).filter(lambda G: det(G) != 0)
    return st.integers(1, dmax).flatmap(build)


def test_half_open_membership():
    c = HalfOpenSimplicialCone(((1, 0), (0, 1)), (True, False))
    assert c.contains([1, 0])
    assert not c.contains([0, 1])
    assert not c.contains([-1, 2])
    assert HalfOpenSimplicialCone.closed([[2, 0], [0, 3]]).generators == ((1, 0), (0, 1))


def test_index():
    assert HalfOpenSimplicialCone.closed([[1, 0], [1, 2]]).index() == 2
    assert HalfOpenSimplicialCone.closed([[1, 0], [0, 1]]).index() == 1


def test_unimodularize_small_cone():
    c = HalfOpenSimplicialCone.closed([[1, 0], [1, 2]])
    cells = unimodularize(c)
    assert len(cells) == 2
    assert all(abs(det([list(g) for g in x.generators])) == 1 for x in cells)
    pts = [[Fraction(i, 2), Fraction(j, 2)] for i in range(-10, 11) for j in range(-10, 11)]
    assert indicator_check(cells, c, pts)


def test_indicator_negative_control():
    c = HalfOpenSimplicialCone.closed([[1, 0], [1, 2]])
    cells = unimodularize(c)
    flipped = [HalfOpenSimplicialCone(x.generators, x.open_flags, -x.sign) for x in cells]
    pts = [[i, j] for i in range(-5, 6) for j in range(-5, 6)]
    assert not indicator_check(flipped, c, pts)


def test_quadrant_adapted_to_diagonal():
    q = HalfOpenSimplicialCone.closed(identity(2))
    L = Subspace.span([[1, 1]])
    cells, lower = adapt_to_subspace(q, L)
    assert lower == []
    assert len(cells) == 2
    pts = [[i, j] for i in range(-5, 6) for j in range(-5, 6)]
    assert indicator_check([x.cone for x in cells], q, pts)
    for cell in cells:
        assert Subspace.span([list(g) for g in cell.lpart], 2) == L


def test_identity_decomposition():
    q = HalfOpenSimplicialCone.closed(identity(3))
    cells = decompose(q, Subspace.zero(3))
    assert len(cells) == 1 and cells[0].cone.sign == 1


@settings(max_examples=40, deadline=None)
@given(cone_strategy(), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_decomposition_is_exact_pointwise(G, k, seed):
    rng = random.Random(seed)
    d = len(G)
    k = min(k, d)
    rows = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(k)]
    L = Subspace.span(rows, d) if k else Subspace.zero(d)
    c = HalfOpenSimplicialCone.closed(G)
    cells = decompose(c, L)
    assert indicator_check([x.cone for x in cells], c, probe_points(c.generators, rng, 300))
    pl = projected_lattice(L)
    for cell in cells:
        # the L-part spans L and the transverse lifts are unimodular in the projected lattice
        assert cell.n_l == L.dim
        if cell.n_l:
            assert Subspace.span([list(g) for g in cell.lpart], d) == L
            assert cell.vol == lattice_det([list(g) for g in cell.lpart], L)
        if cell.lifts:
            images = [pl.project(list(v)) for v in cell.lifts]
            assert abs(det(images)) == 1


def test_d1_series_coefficients():
    # sum_{n >= s} e^{tn} e^{-ts} = e^{t{-s}} / (1 - e^t)
    c = HalfOpenSimplicialCone.closed([[1]])
    ser = cone_intermediate_series(c, [[1]], Subspace.zero(1), [1], [0], 1)
    names = ["b"]
    assert qp_equivalent(ser.coeff(-1), parse_qp("-1", names))
    assert qp_equivalent(ser.coeff(0), parse_qp("1/2 - {-b}", names))
    assert qp_equivalent(ser.coeff(1), parse_qp("-1/12 + 1/2*{-b} - 1/2*{-b}^2", names))


def test_integral_of_cone():
    c = HalfOpenSimplicialCone.closed(identity(2))
    assert integral_of_cone(c, [-1, -2]) == Fraction(1, 2)


def test_collect_psi_lives_in_l_perp():
    c = HalfOpenSimplicialCone.closed([[1, 0, 0], [1, 2, 0], [0, 1, 3]])
    L = Subspace.span([[0, 0, 1]])
    forms = collect_psi(c, L)
    assert forms
    for f in forms:
        assert sum(x * y for x, y in zip(f.vector(), [0, 0, 1])) == 0


def test_reduce_lower_dim():
    c = HalfOpenSimplicialCone(((1, 0),), (False,))
    inside = [[1, 0], [0, 0]]
    red = reduce_lower_dim(c, inside, Subspace.zero(2))
    assert red != ZERO and red.W == Subspace.span([[1, 0]])
    assert red.cone == ((1,),)
    assert reduce_lower_dim(c, inside, Subspace.span([[0, 1]])) == ZERO
    with pytest.raises(NonUniformCosetCondition):
        reduce_lower_dim(c, [[1, 0], [0, 1]], Subspace.zero(2))


def test_dependent_generators_rejected():
    with pytest.raises(DependentGenerators):
        unimodularize(HalfOpenSimplicialCone.closed([[1, 0], [2, 0]]))


def test_lexpoint_generic_side():
    y = LexPoint.inside(identity(2))
    assert y.sign([1, 0]) == 1 and y.sign([-1, 1]) != 0
