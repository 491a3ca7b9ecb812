"""Shared fixtures: the groupoid battery and twist constructors."""

import pytest

from groupoidalg.groupoid import (
    action_groupoid,
    cyclic_group_table,
    disjoint_union,
    group_bundle,
    group_groupoid,
    klein_four_table,
    pair_groupoid,
)
from groupoidalg.linalg import QQ
from groupoidalg.twist import Cocycle, quaternion_sign_cocycle

Z2_TABLE = cyclic_group_table(2)
TRIVIAL_GROUP = [[0]]


def make_pair2():
    return pair_groupoid(2)


def make_pair3():
    return pair_groupoid(3)


def make_z2():
    return group_groupoid(Z2_TABLE)


def make_v4():
    return group_groupoid(klein_four_table())


def make_gb():
    """Group bundle over three units with a Z2 fiber at unit 0."""
    return group_bundle([Z2_TABLE, TRIVIAL_GROUP, TRIVIAL_GROUP])


def make_swap_action():
    """Z2 swapping two points; isomorphic to the pair groupoid on 2 points."""
    return action_groupoid(Z2_TABLE, [[0, 1], [1, 0]])


def make_swap3_action():
    """Z2 swapping two of three points: a free orbit next to a fixed point
    with isotropy Z2, the smallest fixture mixing both phenomena."""
    return action_groupoid(Z2_TABLE, [[0, 1, 2], [1, 0, 2]])


def make_du():
    return disjoint_union(pair_groupoid(2), make_gb())


GROUPOID_MAKERS = {
    "pair1": lambda: pair_groupoid(1),
    "pair2": make_pair2,
    "pair3": make_pair3,
    "z2": make_z2,
    "v4": make_v4,
    "gb": make_gb,
    "swap": make_swap_action,
    "swap3": make_swap3_action,
    "du": make_du,
}


def battery(field, names=None):
    """(name, groupoid, validated trivial cocycle) triples over the field."""
    names = names or list(GROUPOID_MAKERS)
    out = []
    for name in names:
        g = GROUPOID_MAKERS[name]()
        assert g.validate() is None
        out.append((name, g, Cocycle.trivial(g, field)))
    return out


def quaternion_fixture(field):
    g = make_v4()
    c = quaternion_sign_cocycle(g, field)
    assert c.validated
    return g, c


@pytest.fixture
def pair2():
    return make_pair2()


@pytest.fixture
def pair3():
    return make_pair3()


@pytest.fixture
def z2():
    return make_z2()


@pytest.fixture
def gb():
    return make_gb()


@pytest.fixture
def v4_quaternion_Q():
    return quaternion_fixture(QQ)
