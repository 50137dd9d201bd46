import pytest

import acceptance_log
from figures import EXAMPLE_TEXT, EXAMPLE_CHUNK2, REPAIRED_CHUNK1, labelled_cluster
from safedissoc import Dataset, PartitionConfig, disassociate
from safedissoc.disassociation import DisassociatedDataset


@pytest.fixture
def example():
    return Dataset.from_transactions(line.split() for line in EXAMPLE_TEXT.splitlines())


@pytest.fixture
def example_dd(example):
    return disassociate(example, PartitionConfig(k=2, m=2, delta=6))


@pytest.fixture
def repaired_dd(example):
    """The example after partial suppression; delta=8 leaves room for the ghosts."""
    dic = example.dictionary
    cluster = labelled_cluster(dic, [REPAIRED_CHUNK1, EXAMPLE_CHUNK2], 6)
    return DisassociatedDataset((cluster,), PartitionConfig(2, 2, 8), dic)


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_log.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
