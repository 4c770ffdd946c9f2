"""
Shared fixtures: seeded randomness, small modules and cached towers
"""

import json
import random

import pytest

from fundclass import ExtensionSpec, fundamental_tuple, tame_tuple
from groups import AbelianPresentation
from zmod_cohomology import FiniteGModule


@pytest.fixture
def rng():
    return random.Random(20240521)


@pytest.fixture
def c4():
    return AbelianPresentation((4,))


@pytest.fixture
def klein():
    return AbelianPresentation((2, 2))


@pytest.fixture
def trivial_z(c4):
    return FiniteGModule.trivial(c4, [0])


@pytest.fixture(scope="session")
def tame_541():
    """Q_5(Y), Y^4 = 5, through the closed form"""
    return tame_tuple(ExtensionSpec(5, "tame", e=4, f=1, precision=16))


@pytest.fixture(scope="session")
def tame_542():
    return tame_tuple(ExtensionSpec(5, "tame", e=4, f=2, precision=32))


@pytest.fixture(scope="session")
def general_542():
    return fundamental_tuple(ExtensionSpec(5, "tame", e=4, f=2, precision=32))


@pytest.fixture(scope="session")
def tame_761():
    return tame_tuple(ExtensionSpec(7, "tame", e=6, f=1, precision=24))


@pytest.fixture
def module_file(tmp_path):
    """Writes a module description {factors, actions} and returns its path"""

    def write(name, factors, actions=None):
        data = {"factors": [str(d) for d in factors]}
        if actions is not None:
            data["actions"] = [[[str(v) for v in row] for row in M] for M in actions]
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write
