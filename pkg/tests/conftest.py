import pytest
from hypothesis import HealthCheck, settings

from sfqtm import libraries
from sfqtm.netlist_io import parse_blif

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F_BLIF = """\
.model f
.inputs a b c d
.outputs F
.names a b c d F
1101 1
.end
"""


@pytest.fixture(scope="session")
def libs():
    return {name: libraries.load(name) for name in libraries.NAMES}


@pytest.fixture
def f_raw():
    return parse_blif(F_BLIF)


def fanout_blif(n_sinks):
    """``g = a & b`` driving ``n_sinks`` two-input ANDs, one output each."""
    lines = [".model fo", ".inputs a b " + " ".join(f"x{i}" for i in range(n_sinks)),
             ".outputs " + " ".join(f"y{i}" for i in range(n_sinks)), ".names a b g", "11 1"]
    for i in range(n_sinks):
        lines += [f".names g x{i} y{i}", "11 1"]
    return "\n".join(lines + [".end"]) + "\n"
