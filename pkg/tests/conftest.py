import pytest

from imsim import EngineConfig, GeneratorSpec, generate
from imsim.cli import spec_for


def make(kind, n, seed=101, kernel=None, **kw):
    """A generated instance with the defaults the CLI would use for ``kernel``."""
    spec = spec_for(kernel, kind, n, seed, **kw)
    return generate(spec)


def chain(n, **kw):
    return generate(GeneratorSpec("tree-chain", n, **kw))


@pytest.fixture
def fa():
    return EngineConfig("FA")


@pytest.fixture
def fac():
    return EngineConfig("FAC")


# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {text}")
