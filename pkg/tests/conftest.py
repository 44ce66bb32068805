import pytest

from psdnv import _kernels


@pytest.fixture(params=_kernels.available_backends())
def backend(request):
    """Run the test once per available propagation kernel."""
    previous = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(previous)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for index in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[index])
