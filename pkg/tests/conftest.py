import pytest

from dunkl.lizorkin import make_witness, witness_plan
from dunkl.transform import build_plan


@pytest.fixture(scope="session")
def plan_factory():
    cache = {}

    def get(alpha, **kw):
        key = (round(float(alpha), 12), tuple(sorted(kw.items())))
        if key not in cache:
            cache[key] = build_plan(alpha, **kw)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def witness_plan_factory():
    cache = {}

    def get(alpha):
        key = round(float(alpha), 12)
        if key not in cache:
            cache[key] = witness_plan(alpha)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def witness_factory(witness_plan_factory):
    cache = {}

    def get(alpha, m=0):
        key = (round(float(alpha), 12), m)
        if key not in cache:
            cache[key] = make_witness(alpha, witness_plan_factory(alpha), m=m)
        return cache[key]

    return get
