import pytest

import ok_groupoid

INDUCTION_PROPERTIES = [
    "basis-inner-product",
    "module-norm-bound",
    "main-identity",
    "induced-gram",
    "induced-equivalence",
    "comparison",
    "induced-homomorphism",
]


def test_suite_passes(any_groupoid):
    report = ok_groupoid.verify_suite(any_groupoid, trials=5, seed=1)
    assert report.passed, report.format()
    assert [r.name for r in report.results][:2] == [
        "axioms",
        "corruption-detected",
    ]
    assert all(r.checked > 0 for r in report.results)


def test_suite_is_deterministic(z3_rotate_plus_point):
    opts = ok_groupoid.SuiteOptions(trials=8, seed=42)
    first = ok_groupoid.verify_suite(z3_rotate_plus_point, opts)
    second = ok_groupoid.verify_suite(z3_rotate_plus_point, opts)
    assert first.format() == second.format()
    assert first.results == second.results


def test_induction_subset_matches_suite(pair3_plus_z4):
    opts = ok_groupoid.SuiteOptions(trials=4, seed=7)
    subset = ok_groupoid.verify_induction(pair3_plus_z4, opts)
    assert [r.name for r in subset.results] == INDUCTION_PROPERTIES

    full = ok_groupoid.verify_suite(pair3_plus_z4, opts)
    by_name = {r.name: r for r in full.results}
    for r in subset.results:
        assert by_name[r.name] == r


def test_trials_must_be_positive(z2):
    with pytest.raises(ValueError, match="trials"):
        ok_groupoid.verify_suite(z2, trials=0)
    with pytest.raises(ValueError, match="module_vectors >= 1"):
        ok_groupoid.SuiteOptions(module_vectors=0)
    with pytest.raises(ValueError, match="tol > 0"):
        ok_groupoid.SuiteOptions(tol=0.0)


def test_sample_counts(z2):
    opts = ok_groupoid.SuiteOptions(
        trials=2,
        module_vectors=7,
        identity_draws=3,
        induced_samples=4,
        family_samples=5,
        structured_samples=9,
    )
    assert opts.samples("module_vectors") == 7
    assert opts.samples("vanishing_samples") == 2

    report = ok_groupoid.verify_suite(z2, opts)
    checked = {r.name: r.checked for r in report.results}
    assert checked["module-norm-bound"] == 7
    assert checked["main-identity"] == 3 * 2  # every ζ in Z/2
    assert checked["induced-equivalence"] == 4
    assert checked["comparison"] == 2  # one orbit: only 0 and 1
    assert checked["strict-norming"] == 5 + 9
    assert checked["corruption-detected"] == 2
    assert checked["spectral-norm-laws"] == 2


def test_report_format_and_json(z2):
    report = ok_groupoid.verify_induction(z2, trials=3, seed=5)
    text = report.format()
    header = "2 arrows, 1 units, 1 orbit, trials=3 seed=5 tol=1e-08"
    assert text.splitlines()[0] == header
    assert text.endswith("7/7 properties pass")

    doc = report.to_json()
    assert doc.keys() == {"groupoid", "options", "passed", "properties"}
    assert doc["options"] == {
        "trials": 3,
        "seed": 5,
        "tol": 1e-8,
        "module_vectors": None,
        "identity_draws": None,
        "induced_samples": None,
        "vanishing_samples": None,
        "family_samples": None,
        "structured_samples": None,
    }
    assert doc["properties"][0].keys() == {
        "name",
        "checked",
        "worst",
        "limit",
        "counterexample",
        "passed",
    }

    custom = ok_groupoid.verify_induction(z2, trials=3, identity_draws=9)
    assert custom.format().splitlines()[0] == (
        "2 arrows, 1 units, 1 orbit, trials=3 identity_draws=9 "
        "seed=0 tol=1e-08"
    )


def test_failure_is_reported():
    result = ok_groupoid.PropertyResult("axioms", 1, 1.0, 0.0, "bad\ntable")
    report = ok_groupoid.SuiteReport(
        "1 arrows", ok_groupoid.SuiteOptions(), (result,)
    )
    assert not report.passed
    assert "FAIL axioms: 1 checks, worst 1 (limit 0)\n  bad\n  table" in (
        report.format()
    )
    assert report.format().endswith("0/1 properties pass")


#
# Full-size acceptance runs
#

ACCEPTANCE = ok_groupoid.SuiteOptions(
    trials=50,
    module_vectors=1000,
    identity_draws=200,
    induced_samples=20,
    vanishing_samples=50,
    family_samples=500,
    structured_samples=50,
)


@pytest.mark.slow
def test_acceptance_counts(any_groupoid):
    report = ok_groupoid.verify_suite(any_groupoid, ACCEPTANCE)
    assert report.passed, report.format()

    units = len(any_groupoid.units)
    checked = {r.name: r.checked for r in report.results}
    assert checked["module-norm-bound"] == 1000 * units
    assert checked["main-identity"] >= 200 * units
    assert checked["induced-equivalence"] == 20 * units
    assert checked["strict-norming"] == 500 + 50
    assert checked["entry-formula"] == 50 * units
