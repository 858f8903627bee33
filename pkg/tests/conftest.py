import pytest

from canimm import mathias
from canimm.numberings import default_pool


@pytest.fixture(scope="session")
def pool():
    return default_pool()


@pytest.fixture(scope="session")
def generic_run(pool):
    """One default-schedule generic chain, shared by the mathias and schnorr
    acceptance criteria (extends horizon 1000)."""
    schedule = mathias.default_schedule(list(pool), thin_count=16, avoid_count=8, stem_target=8)
    return mathias.build_generic(mathias.Condition.empty(), schedule, horizon=1000)
