import numpy as np
import pytest

from somrel.bootstrap import BootstrapPlan, run_replicates
from somrel.datasets import gauss3_spec, gen_gauss
from somrel.som import MapTopology, TrainingSchedule


@pytest.fixture(scope="session")
def clusters():
    """Three well separated clusters, 40 points each."""
    return gen_gauss(gauss3_spec(40), seed=0)


@pytest.fixture(scope="session")
def string3():
    return MapTopology.string(3)


@pytest.fixture(scope="session")
def cluster_rset(clusters, string3):
    sched = TrainingSchedule.default_for(string3, clusters.n)
    return run_replicates(clusters, string3, sched, BootstrapPlan(B=40, master_seed=5))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ------------------------------------------------------------ acceptance log

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one criterion outcome for the end-of-run summary."""

    def record(label: str, ok: bool, detail: str):
        request.config.stash[_ACCEPTANCE].append((label, ok, detail))
        print(f"criterion {label}: {'PASS' if ok else 'FAIL'} | {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    rows = config.stash.get(_ACCEPTANCE, [])
    if not rows:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, ok, detail in rows:
        terminalreporter.write_line(f"criterion {label}: {'PASS' if ok else 'FAIL'} | {detail}")
