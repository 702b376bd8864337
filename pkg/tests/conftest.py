import pytest

from ncfinfer.datasets import load_yeast
from ncfinfer.infer import infer_all

# Table-2 row order; used across the inference and acceptance tests.
YEAST_NODES = [
    "Cln3", "MBF", "SBF", "Cln1,2", "Cdh1", "Swi5",
    "Cdc20&Cdc14", "Clb5,6", "Sic1", "Clb1,2", "Mcm1/SFF",
]


@pytest.fixture(scope="session")
def yeast():
    return load_yeast()


@pytest.fixture(scope="session")
def yeast_result(yeast):
    wiring, course = yeast
    return infer_all(wiring, course)
