import hypothesis
import ok_logging_setup
import pathlib
import pytest

import ok_groupoid

_log_setup = {"LEVEL": "ok_groupoid=DEBUG,WARNING", "OUTPUT": "stdout"}
ok_logging_setup.install({f"OK_LOGGING_{k}": v for k, v in _log_setup.items()})

hypothesis.settings.register_profile("ok_groupoid", deadline=None)
hypothesis.settings.load_profile("ok_groupoid")

DATA_DIR = pathlib.Path(__file__).parent / "data"


def cyclic_spec(n: int) -> ok_groupoid.GroupSpec:
    rows = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return ok_groupoid.GroupSpec(rows)


# Session scope so hypothesis tests can use them (groupoids are immutable)


@pytest.fixture(scope="session")
def pair2():
    return ok_groupoid.build_groupoid(ok_groupoid.PairSpec(2))


@pytest.fixture(scope="session")
def pair5():
    return ok_groupoid.build_groupoid(ok_groupoid.PairSpec(5))


@pytest.fixture(scope="session")
def z2():
    return ok_groupoid.build_groupoid(cyclic_spec(2))


@pytest.fixture(scope="session")
def z6():
    return ok_groupoid.build_groupoid(cyclic_spec(6))


@pytest.fixture(scope="session")
def z2_swap():
    spec = ok_groupoid.ActionSpec(cyclic_spec(2), 2, ((1, (1, 0)),))
    return ok_groupoid.build_groupoid(spec)


@pytest.fixture(scope="session")
def z3_rotate_plus_point():
    rotate = ok_groupoid.ActionSpec(cyclic_spec(3), 3, ((1, (1, 2, 0)),))
    point = ok_groupoid.PairSpec(1)
    spec = ok_groupoid.UnionSpec((rotate, point))
    return ok_groupoid.build_groupoid(spec)


@pytest.fixture(scope="session")
def pair3_plus_z4():
    spec = ok_groupoid.UnionSpec((ok_groupoid.PairSpec(3), cyclic_spec(4)))
    return ok_groupoid.build_groupoid(spec)


@pytest.fixture(
    scope="session",
    params=[
        "pair2",
        "pair5",
        "z2",
        "z6",
        "z2_swap",
        "z3_rotate_plus_point",
        "pair3_plus_z4",
    ],
)
def any_groupoid(request):
    return request.getfixturevalue(request.param)


@pytest.fixture
def data_dir():
    return DATA_DIR
