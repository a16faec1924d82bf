"""Registros compartilhados pelos testes"""

import pytest

from conceptions.packs import load_builtin
from conceptions.registry import merge_registries


@pytest.fixture(scope="session")
def addition():
    return load_builtin("addition")


@pytest.fixture(scope="session")
def fractions_pack():
    return load_builtin("fractions")


@pytest.fixture(scope="session")
def triangle():
    return load_builtin("triangle")


@pytest.fixture(scope="session")
def addition_triangle(addition, triangle):
    return merge_registries([addition, triangle])


@pytest.fixture(scope="session")
def all_packs(addition, fractions_pack, triangle):
    return merge_registries([addition, fractions_pack, triangle])
