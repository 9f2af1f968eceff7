import random

import pytest
from hypothesis import HealthCheck, settings

from ecgw.cgw import ExtensiveCGW
from ecgw.chain import CHAIN
from ecgw.extcat import FinSetInstance, Monoid, MSetInstance

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FINSET = ExtensiveCGW(FinSetInstance())
MSET = ExtensiveCGW(MSetInstance(Monoid.idempotent2()))


@pytest.fixture(params=["finset", "mset", "chain"])
def cat(request):
    return {"finset": FINSET, "mset": MSET, "chain": CHAIN}[request.param]


def rng_for(seed):
    return random.Random(seed)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
