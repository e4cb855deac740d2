from fractions import Fraction

import pytest

from endatlas.rootsys import build_root_system
from endatlas.galois import build_galois_model
from endatlas.torus import TorusElement
from endatlas.weyl import omega_group


@pytest.fixture(scope="session")
def a1():
    return build_root_system("A1")


@pytest.fixture(scope="session")
def a2():
    return build_root_system("A2")


@pytest.fixture(scope="session")
def c2():
    return build_root_system("C2")


@pytest.fixture(scope="session")
def d4():
    return build_root_system("D4")


def omega_sending_zero_to(rs, node):
    """The Omega element with node 0 going to the given mark-1 node."""
    return next(om for om in omega_group(rs) if om.aut(0) == node)


def a1_swap_datum(rs_a1):
    """The elliptic torus datum of A1 over Z/2: s = -1, swap cocycle."""
    from endatlas.endodata import make_datum

    galois = build_galois_model("c2:inner", rs_a1)
    swap = omega_sending_zero_to(rs_a1, 1)
    s = TorusElement([Fraction(1, 2)])
    return make_datum(rs_a1, galois, s, {"g": swap.aut}), galois


def a2_rotation_data(rs_a2):
    """The two inequivalent A2/Z3 torus data from the nontrivial cocycles."""
    from endatlas.endodata import make_datum

    galois = build_galois_model("c3:inner", rs_a2)
    r1 = omega_sending_zero_to(rs_a2, 1)
    r2 = omega_sending_zero_to(rs_a2, 2)
    s = TorusElement([Fraction(1, 3), Fraction(1, 3)])
    d1 = make_datum(rs_a2, galois, s, {"g1": r1.aut, "g2": r2.aut})
    d2 = make_datum(rs_a2, galois, s, {"g1": r2.aut, "g2": r1.aut})
    return d1, d2, galois
