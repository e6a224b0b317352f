import random

import pytest

from finsemi import graphs as gr
from finsemi import semigroup as sg
from finsemi import sk


@pytest.fixture(scope="session")
def T1():
    return gr.transition_monoid(gr.gamma(1))[0]


@pytest.fixture(scope="session")
def tower2():
    return gr.build_Mn(2)


@pytest.fixture(scope="session")
def S2():
    return sk.build(2, sk.SK)


@pytest.fixture
def rng():
    return random.Random(20240601)
