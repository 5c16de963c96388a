import pathlib

import pytest

EXAMPLES = pathlib.Path(__file__).resolve().parent.parent / "examples"

VEC_PATH = EXAMPLES / "vec.tvec"
QUODLIBET_PATH = EXAMPLES / "quodlibet.tvec"


@pytest.fixture(scope="session")
def vec_source() -> str:
    return VEC_PATH.read_text()


@pytest.fixture(scope="session")
def quodlibet_source() -> str:
    return QUODLIBET_PATH.read_text()
