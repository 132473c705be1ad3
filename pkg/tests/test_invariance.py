import pytest

from properties import CHECKS, run_check


@pytest.mark.parametrize("name", list(CHECKS))
def test_exact_property_over_random_instances(name):
    assert run_check(CHECKS[name], 1000, seed=sum(map(ord, name))) == 0
