import pytest

from rlab.psets import classify
from rlab.sieve import sieve_primes

def pytest_addoption(parser):
	parser.addoption("--runslow", action="store_true", default=False, help="run the full-size acceptance runs")

def pytest_collection_modifyitems(config, items):
	if config.getoption("--runslow"):
		return
	skip_slow = pytest.mark.skip(reason="needs --runslow")
	for item in items:
		if "slow" in item.keywords:
			item.add_marker(skip_slow)

@pytest.fixture(scope="session")
def primes_small():
	return sieve_primes(10 ** 5)

@pytest.fixture(scope="session")
def primes_million():
	return sieve_primes(10 ** 6)

@pytest.fixture(scope="session")
def classified_small():
	return classify(10 ** 4)

@pytest.fixture(scope="session")
def classified():
	return classify(10 ** 6)
