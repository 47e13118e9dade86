import contextlib
import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def acceptance(request):
    """Record one pass/fail/skip line for an acceptance criterion.

    Usage: ``with acceptance(3, "description") as note: ...``; ``note(text)``
    appends detail to the line.
    """

    @contextlib.contextmanager
    def record(number, title):
        details = []
        try:
            yield details.append
        except pytest.skip.Exception as exc:
            _ACCEPTANCE[number] = ("SKIP", f"{title}: {exc.msg}")
            raise
        except BaseException:
            _ACCEPTANCE[number] = ("FAIL", title + "".join(f"; {d}" for d in details))
            raise
        _ACCEPTANCE[number] = ("PASS", title + "".join(f"; {d}" for d in details))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, text = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {text}")
