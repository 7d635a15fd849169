import pytest

import chordlab.extremal


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run full-scale invariant sweeps",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True, scope="session")
def _validate_witnesses():
    # witness validity is checked on every extremal call in test builds
    chordlab.extremal.VALIDATE_WITNESSES = True
    yield
    chordlab.extremal.VALIDATE_WITNESSES = False
