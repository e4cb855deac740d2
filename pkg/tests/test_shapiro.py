"""Restriction of scalars: induction and descent of data between a subgroup
model on a base system and the ambient model on the induced product."""

from fractions import Fraction

import pytest

from endatlas.errors import InvalidInput
from endatlas.galois import _S3_NAMES, _s3_table, build_galois_model
from endatlas.rootsys import build_root_system
from endatlas.torus import TorusElement
from endatlas.endodata import equivalent, make_datum, principal_datum
from endatlas.reduction import (
    equivalence_transfers_under_shapiro,
    make_induced_model,
    shapiro_descend,
    shapiro_induce,
)
from endatlas.suites import shapiro_configurations, _base_data_for

from conftest import omega_sending_zero_to

F = Fraction


def _z2_model(a1):
    base = build_galois_model("trivial", a1)
    return make_induced_model(base, ["e", "g"], [[0, 1], [1, 0]], [0])


def test_induced_model_shape(a1):
    model = _z2_model(a1)
    assert model.rs.rank == 2 and not model.rs.is_simple
    assert model.reps == (0, 1)
    # the ambient generator swaps the two copies
    assert model.galois.action[1].perm == (0, 2, 1)


def test_induce_diagonal_torus(a1):
    model = _z2_model(a1)
    x = make_datum(a1, model.base_galois, TorusElement([F(1, 2)]), {})
    y = shapiro_induce(x, model)
    assert y.s.torsion == (F(1, 2), F(1, 2))
    assert y.rs is model.rs


def test_descend_projects_at_identity_coset(a1):
    model = _z2_model(a1)
    x = make_datum(a1, model.base_galois, TorusElement([F(1, 2)]), {})
    y = shapiro_induce(x, model)
    assert shapiro_descend(y, model) == x


def test_trivial_induction_is_identity(a1):
    base = build_galois_model("c2:inner", a1)
    model = make_induced_model(base, base.names, base.table, [0, 1])
    assert model.degree == 1
    sw = omega_sending_zero_to(a1, 1)
    x = make_datum(a1, base, TorusElement([F(1, 2)]), {"g": sw.aut})
    y = shapiro_induce(x, model)
    assert shapiro_descend(y, model) == x
    assert y.s.torsion == x.s.torsion


def test_embedding_validation(a1):
    base = build_galois_model("c2:inner", a1)
    with pytest.raises(InvalidInput):
        make_induced_model(base, ["e", "g"], [[0, 1], [1, 0]], [0, 0])
    z4 = [[(i + j) % 4 for j in range(4)] for i in range(4)]
    with pytest.raises(InvalidInput, match="homomorphism"):
        make_induced_model(base, ["e", "a", "b", "c"], z4, [0, 1])


@pytest.mark.parametrize("base_type", ["A1", "A2"])
def test_descend_induce_identity_battery(base_type):
    """descend . induce is the identity on the bounded inventory of each config."""
    for t, spec, names, table, emb in shapiro_configurations((base_type,)):
        rs = build_root_system(t)
        base = build_galois_model(spec, rs)
        model = make_induced_model(base, names, table, emb)
        for x in _base_data_for(rs, base):
            assert shapiro_descend(shapiro_induce(x, model), model) == x


def test_induce_descend_up_to_equivalence(a1):
    model = _z2_model(a1)
    x = make_datum(a1, model.base_galois, TorusElement([F(1, 2)]), {})
    y = shapiro_induce(x, model)
    again = shapiro_induce(shapiro_descend(y, model), model)
    assert equivalent(again, y) is not None


def test_equivalence_transfers_both_ways(a2):
    """S3 with its index-2 cyclic subgroup over A2: inequivalent pairs stay so."""
    base = build_galois_model("c3:inner", a2)
    model = make_induced_model(base, list(_S3_NAMES), _s3_table(), [0, 1, 2])
    r1 = omega_sending_zero_to(a2, 1)
    r2 = omega_sending_zero_to(a2, 2)
    s = TorusElement([F(1, 3), F(1, 3)])
    x1 = make_datum(a2, base, s, {"g1": r1.aut, "g2": r2.aut})
    x2 = make_datum(a2, base, s, {"g1": r2.aut, "g2": r1.aut})
    assert equivalent(x1, x2) is None
    assert equivalence_transfers_under_shapiro(x1, x2, model)
    assert equivalence_transfers_under_shapiro(x1, x1, model)
    x3 = principal_datum(a2, base)
    assert equivalence_transfers_under_shapiro(x1, x3, model)


def test_datum_must_match_model(a1, a2):
    model = _z2_model(a1)
    stranger = principal_datum(a2, build_galois_model("trivial", a2))
    with pytest.raises(InvalidInput):
        shapiro_induce(stranger, model)


def test_weyl_twisted_pair_transfers(a2):
    """Equivalent base data differing by a Weyl twist stay equivalent upstairs."""
    from endatlas.endodata import transport_datum
    from endatlas.weyl import WeylElement

    base = build_galois_model("trivial", a2)
    model = make_induced_model(base, ["e", "g"], [[0, 1], [1, 0]], [0])
    x = make_datum(a2, base, TorusElement([F(1, 2), F(0)]), {})
    s1 = WeylElement(tuple(a2.reflect_simple(0, a2.simple_roots[i]) for i in range(2)))
    twisted = transport_datum(x, s1)
    assert equivalent(x, twisted) is not None
    assert equivalence_transfers_under_shapiro(x, twisted, model)
    y1 = shapiro_induce(x, model)
    y2 = shapiro_induce(twisted, model)
    assert equivalent(y1, y2) is not None
