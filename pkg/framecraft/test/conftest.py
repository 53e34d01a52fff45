import os
from pathlib import Path

import hypothesis
import numpy as np
import pytest

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=5)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"
GOLDENS = Path(__file__).parent / "goldens"


def pytest_addoption(parser):
    parser.addoption(
        "--regenerate-goldens",
        action="store_true",
        default=False,
        help="Overwrite golden report files with the current output",
    )


@pytest.fixture
def regenerate_goldens(request):
    return request.config.getoption("--regenerate-goldens")


@pytest.fixture
def data_path():
    return lambda name: str(DATA / name)


@pytest.fixture
def golden(regenerate_goldens):
    """Compares text against a golden file, or rewrites it with --regenerate-goldens."""

    def _compare(name, text):
        path = GOLDENS / name
        if regenerate_goldens:
            path.write_text(text)
        assert text == path.read_text()

    return _compare
