from importlib import resources

import pytest

from distdeg.cli.instance import parse

FIXTURES = resources.files("distdeg") / "fixtures"


def fixture_path(name):
    return str(FIXTURES / name)


def load(name):
    return parse(fixture_path(name))


@pytest.fixture(scope="session")
def presentations():
    return {n: load(f"{n}.dd").presentation for n in ("e1", "e1a", "e2", "e3", "e4", "e5", "trivial")}
