import pytest

import helpers


@pytest.fixture
def fixtures_dir():
    return helpers.FIXTURES


@pytest.fixture
def golden_two_events_path():
    return helpers.GOLDEN_TWO_EVENTS


@pytest.fixture
def golden_paths():
    return list(helpers.GOLDEN_FILES)
