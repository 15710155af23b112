import json

import pytest
from click.testing import CliRunner

from lie import load_lie_algebra
from vacuum import AffineCarrier, VirasoroCarrier, build_carrier


@pytest.fixture
def sl2_carrier():
    return build_carrier("affine:sl2", 5, level=1, max_degree=4)


@pytest.fixture
def heisenberg_carrier():
    return AffineCarrier(load_lie_algebra("abelian1", 5), level=1, max_degree=4)


@pytest.fixture
def vir_carrier():
    return VirasoroCarrier(7, c=3, max_degree=4)


@pytest.fixture
def runner():
    return CliRunner()


def stdout_json(text: str):
    """The JSON document printed by a command, skipping any log lines before it."""
    lines = text.splitlines()
    start = next(i for i, line in enumerate(lines) if line in ("{", "[", "{}", "[]"))
    return json.loads("\n".join(lines[start:]))
