"""Pair enumeration, the pair -> datum construction, classification, and the
brute-force inventory that certifies it."""

from fractions import Fraction

import pytest

from endatlas.errors import CapExceeded
from endatlas.galois import build_galois_model
from endatlas.rootsys import build_root_system
from endatlas.torus import TorusElement
from endatlas.endodata import equivalent, is_elliptic, langlands_normalize
from endatlas.elliptic import (
    brute_force_inventory,
    classify_elliptic,
    enumerate_pairs,
    match_classification,
    pair_equivalent,
    pair_to_datum,
    verify_sigma_structure,
)

F = Fraction


def test_pair_counts_a1(a1):
    gt = build_galois_model("trivial", a1)
    assert [sorted(p.orbit) for p in enumerate_pairs(a1, gt)] == [[0], [1]]
    g2 = build_galois_model("c2:inner", a1)
    pairs = enumerate_pairs(a1, g2)
    assert len(pairs) == 3
    assert sorted(tuple(sorted(p.orbit)) for p in pairs) == [(0,), (0, 1), (1,)]


def test_pair_counts_a2_z3(a2):
    g = build_galois_model("c3:inner", a2)
    pairs = enumerate_pairs(a2, g)
    assert len(pairs) == 5
    full = [p for p in pairs if p.orbit == frozenset({0, 1, 2})]
    assert len(full) == 2  # one per nontrivial cocycle


def test_pair_to_datum_principal(a1):
    gt = build_galois_model("trivial", a1)
    pair = next(p for p in enumerate_pairs(a1, gt) if p.orbit == frozenset({0}))
    d = pair_to_datum(a1, gt, pair)
    assert d.s.is_identity()
    assert d.langlands.shape == "Delta"


def test_pair_to_datum_a1_torus(a1):
    g = build_galois_model("c2:inner", a1)
    pair = next(p for p in enumerate_pairs(a1, g) if len(p.orbit) == 2)
    d = pair_to_datum(a1, g, pair)
    assert d.s.torsion == (F(1, 2),)
    assert d.langlands.d == 2
    assert is_elliptic(d)


def test_pair_to_datum_c2_orbit_a1(c2):
    g = build_galois_model("trivial", c2)
    pair = next(p for p in enumerate_pairs(c2, g) if p.orbit == frozenset({1}))
    d = pair_to_datum(c2, g, pair)
    assert d.s.torsion == (F(1, 2), F(0))
    assert d.langlands.d == 2
    report = classify_elliptic(c2, g)
    entry = next(e for e in report.classes if e.pair.orbit == frozenset({1}))
    assert [str(ct) for ct, _ in entry.dual_components] == ["A1", "A1"]
    assert [list(nodes) for _, nodes in entry.dual_components] == [[0], [2]]


def test_pair_equivalence_examples(a1, a2):
    gt2 = build_galois_model("c2:inner", a1)
    pairs = enumerate_pairs(a1, gt2)
    p0 = next(p for p in pairs if p.orbit == frozenset({0}))
    p1 = next(p for p in pairs if p.orbit == frozenset({1}))
    assert pair_equivalent(a1, gt2, p0, p0) is not None
    om = pair_equivalent(a1, gt2, p0, p1)
    assert om is not None and om.aut(0) == 1
    g3 = build_galois_model("c3:inner", a2)
    full = [p for p in enumerate_pairs(a2, g3) if len(p.orbit) == 3]
    assert pair_equivalent(a2, g3, full[0], full[1]) is None


KNOWN_CLASS_COUNTS = [
    ("A1", "trivial", 1),
    ("A1", "c2:inner", 2),
    ("A2", "c3:inner", 3),
    ("A2", "trivial", 1),
    ("C2", "trivial", 2),
    ("G2", "trivial", 3),
]


@pytest.mark.parametrize("type_name,galois_spec,count", KNOWN_CLASS_COUNTS)
def test_known_classification_counts(type_name, galois_spec, count):
    rs = build_root_system(type_name)
    g = build_galois_model(galois_spec, rs)
    assert classify_elliptic(rs, g).class_count == count


@pytest.mark.parametrize(
    "type_name,galois_spec,bound,count",
    [("A1", "trivial", 4, 1), ("A1", "c2:inner", 4, 2), ("A2", "c3:inner", 6, 3)],
)
def test_inventory_counts_are_independent_oracle(type_name, galois_spec, bound, count):
    rs = build_root_system(type_name)
    g = build_galois_model(galois_spec, rs)
    inv = brute_force_inventory(rs, g, bound)
    assert len(inv) == count
    for d in inv:
        assert is_elliptic(d)


@pytest.mark.parametrize(
    "type_name,galois_spec,bound",
    [("A1", "c2:inner", 4), ("A2", "c3:inner", 6), ("C2", "c2:inner", 4)],
)
def test_classification_matches_inventory(type_name, galois_spec, bound):
    rs = build_root_system(type_name)
    g = build_galois_model(galois_spec, rs)
    assert match_classification(classify_elliptic(rs, g), brute_force_inventory(rs, g, bound))


def test_inventory_cap_policy():
    rs = build_root_system("E8")
    g = build_galois_model("trivial", rs)
    with pytest.raises(CapExceeded):
        brute_force_inventory(rs, g, 2)


def test_sigma_structure_all_small_pairs(a1, a2, c2):
    configs = [
        (a1, "trivial"),
        (a1, "c2:inner"),
        (a2, "c3:inner"),
        (a2, "c2:outer"),
        (c2, "trivial"),
        (c2, "c2:inner"),
    ]
    for rs, spec in configs:
        g = build_galois_model(spec, rs)
        for pair in enumerate_pairs(rs, g):
            rep = verify_sigma_structure(rs, g, pair)
            assert rep.ok, (str(rs.type), spec, sorted(pair.orbit), rep.violations)


def test_constructed_data_round_trip_layers(c2):
    """The raw normalization of a constructed datum recovers the orbit at k=1."""
    g = build_galois_model("c2:inner", c2)
    from endatlas.endodata import make_datum

    for pair in enumerate_pairs(c2, g):
        d = sum(c2.marks[i] for i in pair.orbit)
        if d == 1:
            continue
        torsion = [F(1, d) if (i + 1) in pair.orbit else F(0) for i in range(c2.rank)]
        raw = make_datum(c2, g, TorusElement(torsion), pair.cocycle)
        nd, ld = langlands_normalize(raw)
        assert ld.shape == "DeltaA" and ld.d == d
        assert frozenset(ld.layers[1]) == frozenset(c2.node_root(i) for i in pair.orbit)


def test_equivalence_relation_on_inventory(a2, c2):
    """Reflexive, symmetric, transitive on full inventories with witnesses."""
    for rs, spec, bound in [(a2, "c3:inner", 6), (c2, "c2:inner", 4)]:
        g = build_galois_model(spec, rs)
        inv = brute_force_inventory(rs, g, bound)
        for i, x in enumerate(inv):
            assert equivalent(x, x) is not None
            for y in inv[i + 1:]:
                wxy = equivalent(x, y)
                wyx = equivalent(y, x)
                assert (wxy is None) == (wyx is None)
    g = build_galois_model("c3:inner", a2)
    # transitivity across three pairwise-inequivalent entries is vacuous;
    # exercise it on the pair classes instead
    pairs = enumerate_pairs(a2, g)
    for p in pairs:
        for q in pairs:
            for r in pairs:
                pq = pair_equivalent(a2, g, p, q)
                qr = pair_equivalent(a2, g, q, r)
                pr = pair_equivalent(a2, g, p, r)
                if pq is not None and qr is not None:
                    assert pr is not None


def test_marks_constant_under_pair_action(d4):
    g = build_galois_model("s3", d4)
    for pair in enumerate_pairs(d4, g):
        for a in range(len(g)):
            sp = pair.cocycle.sigma_prime(g, a)
            for node in d4.affine_nodes:
                assert d4.marks[sp(node)] == d4.marks[node]


def test_every_constructed_datum_is_elliptic(d4):
    g = build_galois_model("s3", d4)
    for pair in enumerate_pairs(d4, g):
        assert is_elliptic(pair_to_datum(d4, g, pair))


SPLIT_CLASS_COUNTS = [
    # with a trivial Galois model the classes are the Omega-orbits of affine
    # nodes: leg rotation for E6, the chain flip for E7, nothing for E8/F4
    ("E6", 3),
    ("E7", 5),
    ("E8", 9),
    ("F4", 5),
]


@pytest.mark.parametrize("type_name,count", SPLIT_CLASS_COUNTS)
def test_split_exceptional_class_counts(type_name, count):
    rs = build_root_system(type_name)
    g = build_galois_model("trivial", rs)
    assert classify_elliptic(rs, g).class_count == count


@pytest.mark.parametrize(
    "type_name,galois_spec",
    [("A3", "c2:outer"), ("A3", "c4:inner"), ("B3", "c2:inner")],
)
def test_bijection_on_extra_configurations(type_name, galois_spec):
    from endatlas.suites import bijection_suite

    result = bijection_suite(type_name, galois_spec)
    assert result.ok, result.failures


@pytest.mark.parametrize("type_name,galois_spec", [("A1", "c2:inner"), ("A2", "c3:inner"), ("C2", "c2:inner")])
def test_injectivity_inequivalent_pairs_give_inequivalent_data(type_name, galois_spec):
    rs = build_root_system(type_name)
    g = build_galois_model(galois_spec, rs)
    pairs = enumerate_pairs(rs, g)
    data = [pair_to_datum(rs, g, p) for p in pairs]
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            pv = pair_equivalent(rs, g, pairs[i], pairs[j]) is not None
            dv = equivalent(data[i], data[j]) is not None
            assert pv == dv, (sorted(pairs[i].orbit), sorted(pairs[j].orbit))
