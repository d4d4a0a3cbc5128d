from importlib.resources import files

import pytest


@pytest.fixture(scope="session")
def corpus_path() -> str:
    return str(files("calcforge").joinpath("data/sample.corpus"))
