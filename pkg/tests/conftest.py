import pytest

from fdc.corpus import corpus_text, prelude_env
from fdc.elaborate import elaborate_program
from fdc.surface import parse_surface
from fdc.typecheck import check_program


@pytest.fixture(scope="session")
def prelude():
    return prelude_env()


def _elaborated(name):
    decls, diags = elaborate_program(parse_surface(corpus_text(name)))
    assert not diags, diags
    return decls


@pytest.fixture(scope="session")
def superclasses_core():
    return _elaborated("superclasses.hsk")


@pytest.fixture(scope="session")
def fundeps_core():
    return _elaborated("fundeps.hsk")


@pytest.fixture(scope="session")
def superclasses_env(prelude, superclasses_core):
    env, diags = check_program(prelude, superclasses_core)
    assert not diags
    return env


@pytest.fixture(scope="session")
def fundeps_env(prelude, fundeps_core):
    env, diags = check_program(prelude, fundeps_core)
    assert not diags
    return env
