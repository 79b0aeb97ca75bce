import os
from pathlib import Path

import pytest

from rankdpa.kernels import CompiledKernel, PurePythonKernel

DATA = Path(__file__).parent / "data"

KERNELS = [pytest.param(PurePythonKernel, id="pure")]
if CompiledKernel is not None:
    KERNELS.append(pytest.param(CompiledKernel, id="compiled"))


def load_corpus():
    lines = (DATA / "ltl_corpus.txt").read_text().splitlines()
    return [s.strip() for s in lines if s.strip() and not s.startswith("#")]


@pytest.fixture(params=KERNELS)
def kernel_cls(request):
    return request.param


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def pytest_report_header(config):
    built = "built" if CompiledKernel is not None else "not built"
    forced = " (pure forced)" if os.environ.get("RANKDPA_PURE_PYTHON") else ""
    return f"rankdpa compiled kernel: {built}{forced}"


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
