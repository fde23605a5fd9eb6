"""Session fixtures shared across test modules."""

from __future__ import annotations

import pytest

from sagin_sfc.env import SaginEnv
from sagin_sfc.scenario import (
    SHOWCASE_DEFERRAL,
    SHOWCASE_PLANS,
    contention_instance,
    run_itinerary,
)


@pytest.fixture(scope="session")
def showcase_instance():
    return contention_instance()


@pytest.fixture(scope="session")
def showcase_deferral_log(showcase_instance):
    env = SaginEnv(showcase_instance, record_log=True)
    assert run_itinerary(env, SHOWCASE_PLANS, defer=SHOWCASE_DEFERRAL) == 3
    return env.log


@pytest.fixture(scope="session")
def showcase_naive_log(showcase_instance):
    env = SaginEnv(showcase_instance, record_log=True)
    objective = run_itinerary(env, SHOWCASE_PLANS)
    assert objective == 2
    return env.log
