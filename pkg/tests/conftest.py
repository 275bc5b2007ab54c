import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from biosketch.gf import Field
from biosketch.rs import RsCode


@pytest.fixture(scope="session")
def gf8():
    return Field(3)


@pytest.fixture(scope="session")
def rs_7_3(gf8):
    return RsCode(gf8, 3)


@pytest.fixture(scope="session")
def rs_7_5(gf8):
    return RsCode(gf8, 5)
