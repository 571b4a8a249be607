import pytest

from cantorifs.construct import (
    AppendixParams,
    appendix_pair,
    build_class_c_example,
)
from cantorifs.axioms import boundary_sets, ruination_regions
from cantorifs.ifs import orbit, validate_class_a
from cantorifs.maps import affine_spec


@pytest.fixture(scope="session")
def built():
    """The full construction pipeline output: (pair, report, builder)."""
    return build_class_c_example()


@pytest.fixture(scope="session")
def built_pair(built):
    return built[0]


@pytest.fixture(scope="session")
def built_report(built):
    return built[1]


@pytest.fixture(scope="session")
def builder(built):
    return built[2]


@pytest.fixture(scope="session")
def built_ctx(built):
    """Hole, ruination, boundary sets and mu for the constructed pair."""
    pair, report, _ = built
    hole = report.hole
    ruin = ruination_regions(pair, hole)
    bsets = boundary_sets(pair, hole, ruin)
    return {"pair": pair, "hole": hole, "ruin": ruin, "bsets": bsets,
            "mu": report.axioms.ee.mu}


@pytest.fixture(scope="session")
def cloud18(built_pair):
    return orbit(built_pair, 0.0, 18)


@pytest.fixture(scope="session")
def appendix():
    params = AppendixParams()
    return appendix_pair(params), params


@pytest.fixture(scope="session")
def valid_affine():
    """A simple valid pair: f = 0.55x, g = 0.55x + 0.45."""
    f = affine_spec(0.55, 0.0, "f_affine")
    g = affine_spec(0.55, 0.45, "g_affine")
    return validate_class_a(f, g).as_pair()
