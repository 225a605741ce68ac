"""Shared session fixtures: the big ball tables are built once and reused
across test modules (they dominate the suite's runtime)."""

import pytest

from cayleyspheres.groups import make_group
from cayleyspheres.metric import enumerate_ball


@pytest.fixture(scope="session")
def line():
    return make_group("line-lamplighter m=2")


@pytest.fixture(scope="session")
def line_table(line):
    # N=16 covers thickness at n<=7, certification at n<=8, widths at n<=7
    return enumerate_ball(line, 16)


@pytest.fixture(scope="session")
def tree():
    return make_group("tree-lamplighter d=3 m=2")


@pytest.fixture(scope="session")
def tree_table(tree):
    return enumerate_ball(tree, 8)


@pytest.fixture(scope="session")
def free_tree():
    return make_group("free-tree d=3")


@pytest.fixture(scope="session")
def free_tree_table(free_tree):
    return enumerate_ball(free_tree, 11)


@pytest.fixture(scope="session")
def zz():
    return make_group("zz-walk-or-switch")


@pytest.fixture(scope="session")
def zz_table(zz):
    return enumerate_ball(zz, 12)


@pytest.fixture(scope="session")
def ladder_sws():
    return make_group("ladder-lamplighter m=2 set=sws")


@pytest.fixture(scope="session")
def ladder_sws_table(ladder_sws):
    return enumerate_ball(ladder_sws, 12)


@pytest.fixture(scope="session")
def ladder_s1():
    return make_group("ladder-lamplighter m=2 set=s1")


@pytest.fixture(scope="session")
def ladder_s1_table6(ladder_s1):
    return enumerate_ball(ladder_s1, 6)


@pytest.fixture(scope="session")
def prod_summed():
    return make_group(
        "product(line-lamplighter m=2|line-lamplighter m=2) set=summed")


@pytest.fixture(scope="session")
def prod_summed_table(prod_summed):
    return enumerate_ball(prod_summed, 8)


@pytest.fixture(scope="session")
def prod_king():
    return make_group(
        "product(line-lamplighter m=2|line-lamplighter m=2) set=product")
