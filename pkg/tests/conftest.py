import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rieszlab import ComponentCharge, ExpectationOperator, PartitionAlgebra  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def two_blocks():
    return ExpectationOperator.uniform([[0, 1], [2, 3]], 4)


@pytest.fixture
def two_block_charge():
    """Four singleton atoms in two G-blocks with atom values 3, -1, 2, -2."""
    return ComponentCharge(
        PartitionAlgebra.singletons(4), PartitionAlgebra([[0, 1], [2, 3]], 4), [3, -1, 2, -2]
    )


@pytest.fixture
def instances_dir():
    return ROOT / "instances"


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
