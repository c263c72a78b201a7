import pytest

from netdes.fixtures import (build_attack_problem, guideway_system,
                             reduced_system)
from netdes.synthesis import SynthesisMode, synthesize_supremal_attack


@pytest.fixture(scope="session")
def guideway():
    return guideway_system()


@pytest.fixture(scope="session")
def reduced():
    return reduced_system()


@pytest.fixture(scope="session")
def guideway_problem(guideway):
    return build_attack_problem(guideway)


@pytest.fixture(scope="session")
def reduced_problem(reduced):
    return build_attack_problem(reduced)


@pytest.fixture(scope="session")
def guideway_attacks(guideway_problem):
    nb = synthesize_supremal_attack(guideway_problem, SynthesisMode.DAMAGE_NONBLOCKING)
    r = synthesize_supremal_attack(guideway_problem, SynthesisMode.DAMAGE_REACHABLE)
    return nb, r


@pytest.fixture(scope="session")
def reduced_attacks(reduced_problem):
    nb = synthesize_supremal_attack(reduced_problem, SynthesisMode.DAMAGE_NONBLOCKING)
    r = synthesize_supremal_attack(reduced_problem, SynthesisMode.DAMAGE_REACHABLE)
    return nb, r
