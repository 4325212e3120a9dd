import os
import random

import pytest


def seed_value() -> int:
    return int(os.environ.get("QE2_SEED", "0"))


@pytest.fixture
def rng():
    return random.Random(seed_value())
