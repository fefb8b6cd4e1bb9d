import pytest

from cmdrr import catalog
from cmdrr.constructors import (
    cmdrr3n_from_hsolssom3,
    fill_hsols,
    resolvable_from_hsolssom2,
    samdrr_from_sols,
    unit_cmdrr,
)
from cmdrr.latin import cyclic_sols


@pytest.fixture(scope="session")
def c31():
    return catalog.load("C31").payload


@pytest.fixture(scope="session")
def c20():
    return catalog.load("C20").payload


@pytest.fixture(scope="session")
def samdrr5():
    return samdrr_from_sols(cyclic_sols(5))


@pytest.fixture(scope="session")
def samdrr7():
    return samdrr_from_sols(cyclic_sols(7))


@pytest.fixture(scope="session")
def c117(c31, c20):
    """CMDRR(11,7) built by filling the order-11 holey square."""
    h = catalog.load("HSOLS-1-6-3-1-2-1").payload
    return fill_hsols(h, [unit_cmdrr()] * 6 + [c31, c20])


@pytest.fixture(scope="session")
def c166(c31):
    """CMDRR(16,6) built by filling the order-16 holey square."""
    h = catalog.load("HSOLS-3-5-1-1").payload
    return fill_hsols(h, [c31] * 5 + [unit_cmdrr()])


@pytest.fixture(scope="session")
def mmdrr12():
    """Strict MMDRR(12) with its resolution, from the type-2^6 square."""
    return resolvable_from_hsolssom2(catalog.load("HSOLSSOM-2-6").payload)


@pytest.fixture(scope="session")
def cmdrr15():
    """CMDRR(15,5) with its resolution, from the type-3^5 square."""
    return cmdrr3n_from_hsolssom3(catalog.load("HSOLSSOM-3-5").payload)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "stretch: long conjecture-evidence runs, excluded by default"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("-m"):
        return
    skip = pytest.mark.skip(reason="stretch runs only with -m stretch")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)
