import pytest

from appgate.markets.fixtures import start_market_fixture


@pytest.fixture(scope="session")
def market_fixture(tmp_path_factory):
    fixture = start_market_fixture(tmp_path_factory.mktemp("markets"))
    yield fixture
    fixture.stop()
