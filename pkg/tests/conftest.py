import pytest

from smartfan.datafiles import load_reference_matrix, load_table1, load_table2


@pytest.fixture(scope="session")
def table1():
    return load_table1()


@pytest.fixture(scope="session")
def table2():
    return load_table2()


@pytest.fixture(scope="session")
def reference_matrix():
    return load_reference_matrix()
