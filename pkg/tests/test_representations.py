import hypothesis
import hypothesis.strategies as st
import numpy as np
import pytest

import ok_groupoid
from conftest import cyclic_spec
from ok_groupoid._sampling import random_element

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_matrix_unit_in_pair_groupoid(pair2):
    # G_0 = {0<-0, 1<-0}; δ at 0<-1 maps e at 1<-0 to e at 0<-0
    lam = ok_groupoid.regular_representation(
        pair2, 0, ok_groupoid.delta(pair2, 1)
    )
    assert lam.basis == (0, 2)
    assert lam.matrix.tolist() == [[0, 1], [0, 0]]
    assert lam.norm() == pytest.approx(1.0)
    assert ok_groupoid.min_singular_value(lam.matrix) == 0.0


def test_group_regular_representation_is_left_regular(z6):
    lam = ok_groupoid.regular_representation(
        z6, 0, ok_groupoid.delta(z6, 1)
    )
    # e_g ↦ e_{1+g}, so column g has its 1 in row g+1
    for g in range(6):
        assert lam.matrix[(g + 1) % 6, g] == 1.0
    assert np.count_nonzero(lam.matrix) == 6


def test_full_regular_is_block_diagonal(pair3_plus_z4):
    f = ok_groupoid.unit(pair3_plus_z4)
    full = ok_groupoid.full_regular(pair3_plus_z4, f)
    assert full.dim == 3 * 3 + 4
    assert full.basis[:3] == ((0, 0), (0, 3), (0, 6))
    assert full.basis[-1] == (9, 12)
    np.testing.assert_array_equal(full.matrix, np.eye(13))

    only = ok_groupoid.full_regular(pair3_plus_z4, f, units=[9])
    assert only.basis == ((9, 9), (9, 10), (9, 11), (9, 12))


@hypothesis.given(seed=seeds)
def test_entry_formula_matches_defining_sum(any_groupoid, seed):
    f = random_element(any_groupoid, np.random.default_rng(seed))
    for x in any_groupoid.units:
        by_table = ok_groupoid.regular_representation(any_groupoid, x, f)
        by_sum = ok_groupoid.regular_representation_by_action(
            any_groupoid, x, f
        )
        assert by_table.basis == by_sum.basis
        np.testing.assert_allclose(by_table.matrix, by_sum.matrix, atol=1e-15)


@hypothesis.given(seed=seeds)
def test_regular_representation_is_a_star_homomorphism(any_groupoid, seed):
    rng = np.random.default_rng(seed)
    f, h = random_element(any_groupoid, rng), random_element(any_groupoid, rng)
    for x in any_groupoid.units:

        def lam(a):
            return ok_groupoid.regular_representation(any_groupoid, x, a)

        np.testing.assert_allclose(
            lam(f @ h).matrix, lam(f).matrix @ lam(h).matrix, atol=1e-11
        )
        np.testing.assert_allclose(
            lam(ok_groupoid.adjoint(f)).matrix, lam(f).dagger().matrix
        )


@hypothesis.given(seed=seeds)
def test_orbit_intertwiner(z3_rotate_plus_point, seed):
    groupoid = z3_rotate_plus_point
    f = random_element(groupoid, np.random.default_rng(seed))
    for g0 in range(9):  # the rotation part
        v = ok_groupoid.orbit_intertwiner(groupoid, g0)
        x, y = groupoid.source(g0), groupoid.range(g0)
        lx = ok_groupoid.regular_representation(groupoid, x, f).matrix
        ly = ok_groupoid.regular_representation(groupoid, y, f).matrix
        np.testing.assert_allclose(
            v.matrix @ lx @ v.dagger().matrix, ly, atol=1e-12
        )
        assert v.rows == groupoid.fibers(y).source_fiber


def test_isotropy_left_regular(z6, pair3_plus_z4):
    lam = ok_groupoid.isotropy_left_regular(z6, 0, ok_groupoid.delta(z6, 2))
    assert lam.basis == tuple(range(6))
    assert lam.matrix[2, 0] == 1.0 and lam.matrix[0, 4] == 1.0

    with pytest.raises(ok_groupoid.SupportOutsideIsotropy):
        ok_groupoid.isotropy_left_regular(
            pair3_plus_z4, 0, ok_groupoid.delta(pair3_plus_z4, 1)
        )


def test_translation_unitary(pair3_plus_z4):
    groupoid = pair3_plus_z4
    r1 = ok_groupoid.translation_unitary(groupoid, 9, 10)
    r3 = ok_groupoid.translation_unitary(groupoid, 9, 12)
    np.testing.assert_array_equal(r1.matrix @ r3.matrix, np.eye(4))
    # (R_ζ ξ)(γ) = ξ(γζ): row γ has its 1 in column γζ
    assert r1.matrix[0, 1] == 1.0

    with pytest.raises(ok_groupoid.NotInIsotropy):
        ok_groupoid.translation_unitary(groupoid, 0, 1)


def test_translation_by_z3_generator():
    z3 = ok_groupoid.build_groupoid(cyclic_spec(3))
    r = ok_groupoid.translation_unitary(z3, 0, 1).matrix
    # γ ↦ γ·1 cycles 0 -> 1 -> 2 -> 0
    assert r.tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert not np.array_equal(r @ r, np.eye(3))
    np.testing.assert_array_equal(r @ r @ r, np.eye(3))


def test_element_over_other_groupoid(pair2, z2_swap):
    with pytest.raises(ok_groupoid.GroupoidMismatch):
        ok_groupoid.regular_representation(pair2, 0, ok_groupoid.unit(z2_swap))
