import random

import pytest

from char2forms.fields import GF2, GF2k, RationalFunctionField


@pytest.fixture
def gf2():
    return GF2()


@pytest.fixture
def gf4():
    return GF2k(2, 0b111)


@pytest.fixture
def f2t(gf2):
    return RationalFunctionField(gf2, "t")


@pytest.fixture
def f2tu(f2t):
    return RationalFunctionField(f2t, "u")


@pytest.fixture
def rng():
    return random.Random(0xC2F0)
