import math

import numpy as np
import pytest

import ok_groupoid
from ok_groupoid import _analysis

SQRT5 = math.sqrt(5)


@pytest.fixture
def one_plus_flip(pair3_plus_z4):
    """1 + δ at the element of order 2 in Z/4: singular only at unit 9"""
    groupoid = pair3_plus_z4
    return ok_groupoid.unit(groupoid) + ok_groupoid.delta(groupoid, 11)


#
# Norms
#


def test_norm_profile(pair3_plus_z4):
    groupoid = pair3_plus_z4
    a = ok_groupoid.unit(groupoid) + ok_groupoid.delta(groupoid, 10)
    profile = ok_groupoid.norm(a)
    assert list(profile.per_unit) == [0, 4, 8, 9]
    assert profile.per_unit[0] == pytest.approx(1.0)
    assert profile.per_unit[9] == pytest.approx(2.0)
    assert profile.max_unit == 9
    assert profile.value == pytest.approx(2.0)
    assert ok_groupoid.oracle_norm(a) == pytest.approx(profile.value)


def test_norm_orbit_reps_evaluates_representatives(mocker, pair3_plus_z4):
    groupoid = pair3_plus_z4
    a = ok_groupoid.unit(groupoid) + 0.5 * ok_groupoid.delta(groupoid, 1)
    spy = mocker.spy(_analysis, "regular_representation")

    full = ok_groupoid.norm(a)
    assert spy.call_count == 4

    spy.reset_mock()
    reduced = ok_groupoid.norm(a, orbit_reps=True)
    assert [c.args[1] for c in spy.call_args_list] == [0, 9]
    assert reduced.per_unit.keys() == full.per_unit.keys()
    for x in groupoid.units:
        assert reduced.per_unit[x] == pytest.approx(full.per_unit[x])
    assert reduced.per_unit[4] == reduced.per_unit[0]


def test_hermitian_norm_and_spectrum(pair2):
    a = ok_groupoid.element(pair2, {0: 1.0, 1: 1j, 2: -1j, 3: 2.0})
    assert ok_groupoid.norm(a).value == pytest.approx((3 + SQRT5) / 2)
    np.testing.assert_allclose(
        ok_groupoid.spectrum(a),
        [(3 - SQRT5) / 2] * 2 + [(3 + SQRT5) / 2] * 2,
        atol=1e-12,
    )


def test_spectrum_needs_self_adjoint(z6):
    with pytest.raises(ok_groupoid.NotSelfAdjoint):
        ok_groupoid.spectrum(ok_groupoid.delta(z6, 1))
    with pytest.raises(ok_groupoid.NotSelfAdjoint):
        ok_groupoid.norm_shift(ok_groupoid.delta(z6, 1))


#
# Invertibility
#


def test_invertible_unit(pair2):
    report = ok_groupoid.invertible_family(ok_groupoid.unit(pair2))
    assert report.invertible
    assert report.verdict == "invertible"
    assert report.per_unit[report.witness] == pytest.approx(1.0)
    assert ok_groupoid.roch_witness(ok_groupoid.unit(pair2)) is None


def test_matrix_unit_is_singular(pair2):
    a = ok_groupoid.delta(pair2, 1)
    report = ok_groupoid.invertible_family(a)
    assert report.verdict == "singular"
    assert report.per_unit == {0: 0.0, 3: 0.0}
    assert report.witness == 0
    assert not ok_groupoid.invertible_oracle(a)
    assert ok_groupoid.roch_witness(a) == 0


def test_singular_on_one_orbit(one_plus_flip):
    report = ok_groupoid.invertible_family(one_plus_flip)
    assert not report.invertible
    assert report.witness == 9
    assert report.per_unit[0] == pytest.approx(1.0)
    assert ok_groupoid.roch_witness(one_plus_flip) == 9

    reduced = ok_groupoid.invertible_family(one_plus_flip, orbit_reps=True)
    assert reduced.witness == 9
    assert reduced.per_unit.keys() == report.per_unit.keys()


def test_tolerance_decides(pair2):
    a = ok_groupoid.unit(pair2) * 1e-6
    assert ok_groupoid.invertible_family(a).invertible
    opts = ok_groupoid.AnalysisOptions(tol=1e-5)
    assert not ok_groupoid.invertible_family(a, opts).invertible
    assert not ok_groupoid.invertible_oracle(a, tol=1e-5)


def test_tol_must_be_positive(pair2):
    with pytest.raises(ValueError, match="tol > 0"):
        ok_groupoid.AnalysisOptions(tol=0.0)
    a = ok_groupoid.unit(pair2)
    with pytest.raises(ValueError, match="tol > 0"):
        ok_groupoid.invertible_family(a, tol=-1e-8)
    with pytest.raises(ValueError, match="tol > 0"):
        ok_groupoid.roch_witness(a, 0.0)


def test_unit_plus_isotropy_delta_is_invertible(pair3_plus_z4, z6):
    # 2·1 + δ_γ for a loop γ: every block has σ_min >= 1
    for groupoid, loop in [(pair3_plus_z4, 10), (pair3_plus_z4, 11), (z6, 1)]:
        a = 2 * ok_groupoid.unit(groupoid) + ok_groupoid.delta(groupoid, loop)
        report = ok_groupoid.invertible_family(a)
        assert report.invertible
        assert min(report.per_unit.values()) >= 1 - 1e-12
        assert ok_groupoid.invertible_oracle(a)
        assert ok_groupoid.roch_witness(a) is None

    groupoid = pair3_plus_z4
    a = 2 * ok_groupoid.unit(groupoid) + ok_groupoid.delta(groupoid, 11)
    report = ok_groupoid.invertible_family(a)
    assert report.witness == 9
    assert report.per_unit[9] == pytest.approx(1.0)
    assert report.per_unit[0] == pytest.approx(2.0)


def test_zero_witness_is_least_unit(pair3_plus_z4, z3_rotate_plus_point):
    for groupoid in (pair3_plus_z4, z3_rotate_plus_point):
        zero = ok_groupoid.zero(groupoid)
        assert ok_groupoid.roch_witness(zero) == groupoid.units[0] == 0
        assert ok_groupoid.invertible_family(zero).witness == 0


#
# Families and the norm shift
#


def test_induced_family_norms_like_regular(pair3_plus_z4, one_plus_flip):
    groupoid = pair3_plus_z4
    reps = [ok_groupoid.left_regular_rep(groupoid, x) for x in groupoid.units]
    family = ok_groupoid.induced_family(groupoid, reps)
    assert list(family) == [(0, 0), (4, 1), (8, 2), (9, 3)]

    profile = ok_groupoid.family_profile(family, one_plus_flip)
    assert profile.value == pytest.approx(2.0)
    assert profile.max_unit == (9, 3)

    report = ok_groupoid.family_invertibility(family, one_plus_flip)
    assert report.witness == (9, 3)
    assert not report.invertible


def test_regular_family_subset(pair3_plus_z4):
    family = ok_groupoid.regular_family(pair3_plus_z4, [4, 9])
    assert list(family) == [4, 9]
    matrix = family[9](ok_groupoid.unit(pair3_plus_z4))
    np.testing.assert_array_equal(matrix, np.eye(4))


def test_norm_shift(one_plus_flip):
    a = ok_groupoid.adjoint(one_plus_flip) @ one_plus_flip
    shift = ok_groupoid.norm_shift(a)
    assert shift.norm == pytest.approx(4.0)
    assert shift.singular_units == (9,)
    assert shift.attaining_units == (9,)
    np.testing.assert_allclose(shift.spectra[0], [-3.0] * 3, atol=1e-12)
    np.testing.assert_allclose(
        shift.spectra[9], [-4.0, -4.0, 0.0, 0.0], atol=1e-12
    )
