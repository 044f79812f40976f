import os

import pytest

from qha.cartan import preset
from qha.rewrite import default_q_table

os.environ.setdefault("QHA_HT_MAX", "7")


@pytest.fixture(scope="session")
def qtables():
    return {name: default_q_table(preset(name)) for name in ("A1", "A2", "A3", "A1^(1)", "A2^(1)")}


@pytest.fixture(scope="session")
def qA2(qtables):
    return qtables["A2"]


@pytest.fixture(scope="session")
def qA1aff(qtables):
    return qtables["A1^(1)"]
