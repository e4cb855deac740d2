"""Layer normalization, equivalence with its brute-force oracle, Out, and
ellipticity of endoscopic data."""

from fractions import Fraction

import pytest

from endatlas.errors import InvalidInput
from endatlas.galois import build_galois_model, places
from endatlas.rootsys import build_root_system
from endatlas.torus import TorusElement
from endatlas.weyl import WeylElement
from endatlas.endodata import (
    equivalent,
    equivalent_bruteforce,
    is_elliptic,
    kernel_tower_ok,
    langlands_normalize,
    localize,
    make_datum,
    out_group,
    principal_datum,
    raw_form,
    transport_datum,
    witness_transports,
)

from conftest import a1_swap_datum, a2_rotation_data, omega_sending_zero_to

F = Fraction


def test_principal_datum_normalizes_to_delta(a1):
    g = build_galois_model("trivial", a1)
    p = principal_datum(a1, g)
    nd, ld = langlands_normalize(p)
    assert ld.shape == "Delta" and ld.d == 1
    assert ld.layers == (frozenset({(1,)}),)


def test_a1_swap_datum_layers(a1):
    d, _ = a1_swap_datum(a1)
    nd, ld = langlands_normalize(d)
    assert ld.shape == "DeltaA" and ld.d == 2
    assert ld.layers[0] == frozenset()
    assert ld.layers[1] == {(1,), (-1,)}
    assert ld.u.is_identity()


def test_c2_half_zero_layers(c2):
    g = build_galois_model("trivial", c2)
    d = make_datum(c2, g, TorusElement([F(1, 2), F(0)]), {})
    nd, ld = langlands_normalize(d)
    assert ld.shape == "DeltaA"
    assert {c2.node_of_root(r) for r in ld.layers[0]} == {0, 2}
    assert {c2.node_of_root(r) for r in ld.layers[1]} == {1}


def test_normalize_rejects_infinite_order(a1):
    g = build_galois_model("trivial", a1)
    d = make_datum(a1, g, TorusElement([F(0)], [(F(1),)]), {})
    with pytest.raises(InvalidInput, match="reduction"):
        langlands_normalize(d)


def test_normalization_idempotent(a1):
    d, _ = a1_swap_datum(a1)
    nd, _ = langlands_normalize(d)
    nd2, ld2 = langlands_normalize(nd)
    assert nd2 is nd
    assert ld2.u.is_identity()


def test_shape_delta_forces_trivial_cocycle(a2):
    """Any datum normalizing to shape Delta stores the plain diagram action."""
    g = build_galois_model("c2:outer", a2)
    rot = omega_sending_zero_to(a2, 1)
    # cocycle g -> rotation: sigma'(g) fixes node 2, a weight-one singleton
    d = make_datum(a2, g, TorusElement([F(0), F(0)]), {"g": rot.aut})
    nd, ld = langlands_normalize(d)
    assert ld.shape == "Delta"
    for a in range(2):
        assert nd.w_value(a).is_identity()


def test_equivalent_reflexive_with_identity_witness(a2):
    d1, _, _ = a2_rotation_data(a2)
    w = equivalent(d1, d1)
    assert w is not None and witness_transports(d1, d1, w)


def test_a1_mark_one_pairs_equivalent(a1):
    """Data built from the two singleton orbits coincide after normalization."""
    g = build_galois_model("c2:inner", a1)
    p = principal_datum(a1, g)
    w = equivalent(p, p)
    assert w is not None


def test_a2_rotation_data_inequivalent(a2):
    d1, d2, _ = a2_rotation_data(a2)
    assert equivalent(d1, d2) is None
    assert equivalent_bruteforce(d1, d2) is None


def test_witness_soundness_on_transported_datum(c2):
    g = build_galois_model("trivial", c2)
    d = make_datum(c2, g, TorusElement([F(1, 2), F(0)]), {})
    w0 = WeylElement(tuple(c2.reflect_simple(0, c2.simple_roots[i]) for i in range(2)))
    moved = transport_datum(d, w0)
    w = equivalent(moved, d)
    assert w is not None
    assert witness_transports(moved, d, w)


@pytest.mark.parametrize(
    "type_name,galois_spec,bound",
    [("A1", "trivial", 4), ("A1", "c2:inner", 4), ("A2", "c3:inner", 3), ("B2", "c2:inner", 3)],
)
def test_equivalent_agrees_with_brute_force(type_name, galois_spec, bound):
    """Layer criterion vs exhaustive Weyl search on every bounded pair."""
    rs = build_root_system(type_name)
    g = build_galois_model(galois_spec, rs)
    from endatlas.elliptic import _canonical_s_reps
    from endatlas.suites import _families_fixing
    from endatlas.weyl import enumerate_weyl

    data = []
    for s in _canonical_s_reps(rs, bound):
        for fam in _families_fixing(rs, g, s, enumerate_weyl(rs)):
            from endatlas.endodata import EndoscopicDatum, standard_bprime_base

            data.append(
                EndoscopicDatum(rs, g, s, fam, standard_bprime_base(rs, s), _validate=False)
            )
    assert data
    for i in range(len(data)):
        for j in range(i, len(data)):
            fast = equivalent(data[i], data[j])
            slow = equivalent_bruteforce(data[i], data[j])
            assert (fast is None) == (slow is None), (i, j)
            if fast is not None:
                assert witness_transports(data[i], data[j], fast)


def test_out_group_sizes(a1, a2):
    d, _ = a1_swap_datum(a1)
    assert len(out_group(d)) == 2
    d1, _, _ = a2_rotation_data(a2)
    assert len(out_group(d1)) == 3


def test_out_group_rejects_principal_shape(a1):
    g = build_galois_model("trivial", a1)
    with pytest.raises(InvalidInput):
        out_group(principal_datum(a1, g))


def test_is_elliptic_cases(a1):
    g2 = build_galois_model("c2:inner", a1)
    gt = build_galois_model("trivial", a1)
    assert is_elliptic(principal_datum(a1, gt)) is True
    d_noell = make_datum(a1, gt, TorusElement([F(1, 2)]), {})
    assert is_elliptic(d_noell) is False
    d_swap, _ = a1_swap_datum(a1)
    assert is_elliptic(d_swap) is True


def test_localize_cases(a1, a2):
    d_swap, g2 = a1_swap_datum(a1)
    ps = places(g2)
    at_trivial = localize(d_swap, ps[0])
    assert len(at_trivial.galois) == 1
    assert is_elliptic(at_trivial) is False  # split torus locally
    at_full = localize(d_swap, ps[1])
    assert len(at_full.galois) == 2
    assert is_elliptic(at_full) is True
    d1, _, g3 = a2_rotation_data(a2)
    full = next(p for p in places(g3) if len(p.subgroup) == 3)
    again = localize(d1, full)
    assert len(again.galois) == 3
    assert equivalent_bruteforce(again, again) is not None


def test_kernel_tower(a2):
    d1, _, _ = a2_rotation_data(a2)
    assert kernel_tower_ok(d1)
    g = build_galois_model("c2:outer", a2)
    assert kernel_tower_ok(principal_datum(a2, g))


def test_make_datum_rejects_value_not_fixing_s(a1):
    g = build_galois_model("c2:inner", a1)
    s = TorusElement([F(1, 4)])
    with pytest.raises(InvalidInput, match="fix"):
        make_datum(a1, g, s, {"g": WeylElement([(-1,)])})


def test_make_datum_rejects_broken_cocycle_identity(a1):
    """Non-homomorphic values over Z/4 with s = -1, where nothing can absorb them."""
    g = build_galois_model("c4:inner", a1)
    swap = WeylElement([(-1,)])
    with pytest.raises(InvalidInput, match="homomorphism"):
        # g1^2 = g2, so the value at g2 must be swap^2 = 1, not swap
        make_datum(a1, g, TorusElement([F(1, 2)]), {"g1": swap, "g2": swap})


def test_make_datum_absorbs_ambiguity_at_s_one(a1):
    """With s = 1 the whole Weyl group is the ambiguity: any raw values present
    the principal datum."""
    g = build_galois_model("c4:inner", a1)
    swap = WeylElement([(-1,)])
    d = make_datum(a1, g, TorusElement([F(0)]), {"g1": swap, "g2": swap})
    assert all(f.is_identity() for f in d.family)


def test_make_datum_rejects_unknown_element(a1):
    g = build_galois_model("c2:inner", a1)
    with pytest.raises(InvalidInput, match="unknown element"):
        make_datum(a1, g, TorusElement([F(0)]), {"h": WeylElement([(-1,)])})


def test_raw_form_preserves_identity(c2):
    g = build_galois_model("trivial", c2)
    d = make_datum(c2, g, TorusElement([F(1, 2), F(0)]), {})
    nd, _ = langlands_normalize(d)
    back = raw_form(nd)
    assert back.s == nd.s
    assert equivalent(back, d) is not None
