import dataclasses

import numpy as np
import pytest

import ok_groupoid
from conftest import cyclic_spec


#
# Constructors
#


def test_pair_groupoid_layout(pair2):
    assert pair2.size == 4
    assert pair2.units == (0, 3)
    assert pair2.names == ("0<-0", "0<-1", "1<-0", "1<-1")
    assert pair2.arrow(1) == ok_groupoid.Arrow(id=1, source=3, range=0)
    assert pair2.inverse(1) == 2
    assert pair2.compose(1, 2) == 0  # (0<-1)(1<-0) = 0<-0
    assert pair2.compose(2, 1) == 3


def test_group_layout(z6):
    assert z6.size == 6
    assert z6.units == (0,)
    assert z6.names[:2] == ("g0", "g1")
    assert z6.compose(4, 5) == 3
    assert z6.inverse(2) == 4
    assert ok_groupoid.isotropy_order(z6, 0) == 6


def test_action_layout(z2_swap):
    assert z2_swap.units == (0, 1)
    assert z2_swap.names == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")
    assert (z2_swap.source(2), z2_swap.range(2)) == (0, 1)
    assert (z2_swap.source(3), z2_swap.range(3)) == (1, 0)
    assert z2_swap.inverse(2) == 3
    assert z2_swap.orbits().classes == ((0, 1),)


def test_action_closes_over_generators():
    spec = ok_groupoid.ActionSpec(cyclic_spec(4), 4, ((1, (1, 2, 3, 0)),))
    groupoid = ok_groupoid.build_groupoid(spec)
    assert groupoid.size == 16
    # element 2 acts by the square of the generator
    assert groupoid.range(2 * 4 + 0) == 2
    assert groupoid.range(3 * 4 + 1) == 0


def test_action_rejects_inconsistent_permutations():
    spec = ok_groupoid.ActionSpec(
        cyclic_spec(2), 3, ((1, (1, 2, 0)),)  # order 3 for an order-2 elem
    )
    with pytest.raises(ok_groupoid.AxiomViolation):
        ok_groupoid.build_groupoid(spec)


def test_action_rejects_unreached_elements():
    table = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))
    spec = ok_groupoid.ActionSpec(
        ok_groupoid.GroupSpec(table), 2, ((1, (1, 0)),)
    )
    with pytest.raises(ok_groupoid.MalformedSpec, match=r"\[2, 3\]"):
        ok_groupoid.build_groupoid(spec)


def test_union_offsets_and_names(pair3_plus_z4):
    assert pair3_plus_z4.size == 13
    assert pair3_plus_z4.units == (0, 4, 8, 9)
    assert pair3_plus_z4.names[1] == "0:0<-1"
    assert pair3_plus_z4.names[10] == "1:g1"
    assert pair3_plus_z4.compose(10, 12) == 9
    orbits = pair3_plus_z4.orbits()
    assert orbits.classes == ((0, 4, 8), (9,))
    assert orbits.representatives == (0, 9)
    assert orbits.representative_of(8) == 0


def test_explicit_spec_implies_unit_products():
    # Z/2 by hand: only the non-unit product and inverse are given
    spec = ok_groupoid.ExplicitSpec(
        units=(0,), arrows=((1, 0, 0),), products=((1, 1, 0),)
    )
    with pytest.raises(ok_groupoid.MalformedSpec, match="No inverse"):
        ok_groupoid.build_groupoid(spec)

    spec = dataclasses.replace(spec, inverses=((1, 1),))
    groupoid = ok_groupoid.build_groupoid(spec)
    assert groupoid.table.tolist() == [[0, 1], [1, 0]]


def test_explicit_spec_rejects_gaps():
    spec = ok_groupoid.ExplicitSpec(units=(0, 2))
    with pytest.raises(ok_groupoid.MalformedSpec, match="missing"):
        ok_groupoid.build_groupoid(spec)


def test_cayley_table_needs_identity():
    spec = ok_groupoid.GroupSpec(((1, 0), (1, 0)))
    with pytest.raises(ok_groupoid.AxiomViolation, match="identity"):
        ok_groupoid.build_groupoid(spec)


#
# Fibers and orbits
#


def test_fibers(pair2, z3_rotate_plus_point):
    fib = pair2.fibers(0)
    assert fib.source_fiber == (0, 2)
    assert fib.range_fiber == (0, 1)
    assert fib.isotropy == (0,)

    # the added point is unit 9, fixed by nothing but itself
    assert z3_rotate_plus_point.units == (0, 1, 2, 9)
    assert z3_rotate_plus_point.fibers(9).source_fiber == (9,)
    assert z3_rotate_plus_point.orbits().classes == ((0, 1, 2), (9,))


def test_fibers_need_unit(pair2):
    with pytest.raises(ok_groupoid.NotAUnit):
        pair2.fibers(1)
    with pytest.raises(ok_groupoid.UnknownArrow):
        pair2.fibers(7)


def test_undefined_composition(pair2):
    with pytest.raises(ok_groupoid.UndefinedComposition) as info:
        pair2.compose(1, 1)
    assert info.value.where == "arrows 1,1"


#
# Validation
#


def test_every_fixture_validates(any_groupoid):
    left, right, prods = any_groupoid.composable
    assert len(left) == len(right) == len(prods) > 0
    assert ok_groupoid.FiniteGroupoid(
        sources=any_groupoid.sources,
        ranges=any_groupoid.ranges,
        units=any_groupoid.units,
        table=any_groupoid.table,
        inverses=any_groupoid.inverses,
    ).same_as(any_groupoid)


def test_corrupted_product_is_rejected(z6):
    table = np.array(z6.table)
    table[2, 3] = 4
    with pytest.raises(ok_groupoid.AxiomViolation, match="associativity"):
        dataclasses.replace(z6, table=table)


def test_corrupted_definedness_is_rejected(pair2):
    table = np.array(pair2.table)
    table[1, 1] = 0
    with pytest.raises(ok_groupoid.AxiomViolation, match="definedness"):
        dataclasses.replace(pair2, table=table)


def test_corrupted_inverse_is_rejected(pair2):
    with pytest.raises(ok_groupoid.AxiomViolation, match="inverse"):
        dataclasses.replace(pair2, inverses=(0, 1, 2, 3))


def test_non_unit_endpoint_is_rejected(pair2):
    with pytest.raises(ok_groupoid.AxiomViolation, match="not both units"):
        dataclasses.replace(pair2, sources=(0, 1, 0, 3))


def test_table_is_read_only(pair2):
    with pytest.raises(ValueError):
        pair2.table[0, 0] = 1
