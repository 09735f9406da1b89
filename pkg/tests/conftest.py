from __future__ import annotations

import functools
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twisted_pairing import simplicial as S  # noqa: E402
from twisted_pairing.field import Field  # noqa: E402


@functools.lru_cache(maxsize=None)
def surface(name):
    if name == "torus":
        return S.torus()
    if name == "genus2":
        return S.genus_surface(2)
    if name == "sphere":
        return S.sphere()
    raise KeyError(name)


@functools.lru_cache(maxsize=None)
def simplicial_model(name, p, windings):
    from twisted_pairing.conealg.model import from_simplicial

    K = surface(name)
    F = Field(p)
    gens = len(S.tree_cotree(K)[1])
    beta = S.cocycle_from_windings(K, F, list(windings) + [0] * (gens - len(windings)))
    return from_simplicial(K, beta)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=[0, 2, 3, 5], ids=["Q", "GF2", "GF3", "GF5"])
def field(request):
    return Field(request.param)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
