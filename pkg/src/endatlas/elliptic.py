"""Enumeration and classification of elliptic data, with brute-force oracles.

Elliptic data are generated from pairs (Omega-valued cocycle, single orbit on
the completed diagram); the classification groups pairs under simultaneous
Omega-conjugation.  The independent inventory enumerates every finite-order
torus element within a bound together with every compatible Weyl cocycle and
keeps the elliptic ones up to equivalence; the two routes must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from ._linalg import solve_in_basis, zspan_basis, zspan_contains
from .errors import CapExceeded, InternalConsistencyError, InvalidInput
from .galois import Cocycle, GaloisModel, enumerate_cocycles
from .rootsys import RootSystem, subdiagram_components, weyl_order
from .torus import TorusElement
from .weyl import WeylElement, enumerate_weyl, omega_group, torus_action
from .endodata import (
    EndoscopicDatum,
    LanglandsData,
    centralizer_roots,
    equivalent,
    is_elliptic,
    langlands_normalize,
    make_datum,
    standard_bprime_base,
)

DEFAULT_WORK_CAP = 10**6


@dataclass(frozen=True)
class EllipticPair:
    """An Omega-valued cocycle together with a single orbit on the affine nodes."""

    cocycle: Cocycle
    orbit: frozenset

    def sort_key(self):
        return (self.cocycle.key(), tuple(sorted(self.orbit)))


def _validate_pair(rs: RootSystem, galois: GaloisModel, pair: EllipticPair):
    n = len(galois)
    sp = [pair.cocycle.sigma_prime(galois, a) for a in range(n)]
    for a in range(n):
        for b in range(n):
            if sp[galois.table[a][b]].perm != sp[a].compose(sp[b]).perm:
                raise InvalidInput("pair cocycle is not a cocycle")
    orbit = set(pair.orbit)
    if not orbit:
        raise InvalidInput("orbit must be nonempty")
    seed = min(orbit)
    reach = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for x in frontier:
            for a in range(n):
                y = sp[a](x)
                if y not in reach:
                    reach.add(y)
                    nxt.append(y)
        frontier = nxt
    if reach != orbit:
        raise InvalidInput("orbit is not a single orbit of the composite action")


def enumerate_pairs(rs: RootSystem, galois: GaloisModel):
    """All (cocycle, orbit) pairs: every cocycle, every single orbit it induces."""
    pairs = []
    for c in enumerate_cocycles(galois, omega_group(rs)):
        sp = [c.sigma_prime(galois, a) for a in range(len(galois))]
        seen = set()
        for node in rs.affine_nodes:
            if node in seen:
                continue
            orbit = {node}
            frontier = [node]
            while frontier:
                nxt = []
                for x in frontier:
                    for p in sp:
                        y = p(x)
                        if y not in orbit:
                            orbit.add(y)
                            nxt.append(y)
                frontier = nxt
            seen |= orbit
            pairs.append(EllipticPair(cocycle=c, orbit=frozenset(orbit)))
    return sorted(pairs, key=EllipticPair.sort_key)


def pair_to_datum(rs: RootSystem, galois: GaloisModel, pair: EllipticPair) -> EndoscopicDatum:
    """The elliptic datum of a pair: s has value zeta_d on the orbit, 1 off it."""
    _validate_pair(rs, galois, pair)
    d = sum(rs.marks[node] for node in pair.orbit)
    torsion = [
        Fraction(1, d) if (i + 1) in pair.orbit else Fraction(0) for i in range(rs.rank)
    ]
    s = TorusElement(torsion)
    if d == 1:
        # s = 1: the principal datum in disguise; the raw route norms it out
        raw = make_datum(rs, galois, s, pair.cocycle)
        return langlands_normalize(raw)[0]
    if s.order() != d:
        raise InternalConsistencyError("constructed s has the wrong order")
    n = len(galois)
    family = [pair.cocycle.sigma_prime(galois, a).lattice(rs) for a in range(n)]
    base = tuple(sorted(rs.node_root(i) for i in rs.affine_nodes if i not in pair.orbit))
    zero = (Fraction(0), ())
    for node in rs.affine_nodes:
        t, _ = s.value_at(rs.node_root(node))
        want = Fraction(1, d) if node in pair.orbit else Fraction(0)
        if t != want:
            raise InternalConsistencyError("s does not extend correctly to the diagram")
    layers = [frozenset(base)] + [frozenset()] * (d - 1)
    layers[1] = frozenset(rs.node_root(i) for i in pair.orbit)
    level_sets = [set() for _ in range(d)]
    for r in rs.all_roots:
        t, _ = s.value_at(r)
        level_sets[int(t * d) % d].add(r)
    ld = LanglandsData(
        d=d,
        layers=tuple(layers),
        level_sets=tuple(frozenset(y) for y in level_sets),
        shape="DeltaA",
        u=WeylElement.identity(rs.rank),
    )
    return EndoscopicDatum(
        rs, galois, s, family, base, normalized=True, langlands=ld
    )


def pair_equivalent(rs: RootSystem, galois: GaloisModel, p1: EllipticPair, p2: EllipticPair):
    """The Omega element carrying one pair to the other, or None."""
    n = len(galois)
    sp1 = [p1.cocycle.sigma_prime(galois, a) for a in range(n)]
    sp2 = [p2.cocycle.sigma_prime(galois, a) for a in range(n)]
    for om in omega_group(rs):
        if frozenset(om.aut(i) for i in p1.orbit) != p2.orbit:
            continue
        inv = om.aut.inverse()
        if all(
            om.aut.compose(sp1[a]).compose(inv).perm == sp2[a].perm for a in range(n)
        ):
            return om
    return None


@dataclass(frozen=True)
class ClassEntry:
    pair: EllipticPair
    datum: EndoscopicDatum
    d: int
    dual_components: tuple  # ((CartanType, node tuple), ...)
    dual_action: tuple  # per element, tuple of (node, image) pairs on the dual nodes
    out_size: int | None
    shape: str


@dataclass(frozen=True)
class ClassificationReport:
    rs: RootSystem
    galois: GaloisModel
    classes: tuple

    @property
    def class_count(self) -> int:
        return len(self.classes)


def classify_elliptic(rs: RootSystem, galois: GaloisModel) -> ClassificationReport:
    """Group the pairs by equivalence and attach the constructed data."""
    from .endodata import out_group

    pairs = enumerate_pairs(rs, galois)
    classes: list[list[EllipticPair]] = []
    for p in pairs:
        for cl in classes:
            if pair_equivalent(rs, galois, cl[0], p) is not None:
                cl.append(p)
                break
        else:
            classes.append([p])
    entries = []
    for cl in classes:
        rep = min(cl, key=EllipticPair.sort_key)
        datum = pair_to_datum(rs, galois, rep)
        d = sum(rs.marks[node] for node in rep.orbit)
        dual_nodes = sorted(set(rs.affine_nodes) - set(rep.orbit))
        comps = tuple(
            (ct, tuple(nodes)) for ct, nodes in subdiagram_components(rs, dual_nodes)
        ) if dual_nodes else ()
        sp = [rep.cocycle.sigma_prime(galois, a) for a in range(len(galois))]
        action = tuple(
            tuple((i, sp[a](i)) for i in dual_nodes) for a in range(len(galois))
        )
        shape = datum.langlands.shape
        osize = len(out_group(datum)) if shape == "DeltaA" else None
        entries.append(
            ClassEntry(
                pair=rep,
                datum=datum,
                d=d,
                dual_components=comps,
                dual_action=action,
                out_size=osize,
                shape=shape,
            )
        )
    entries.sort(key=lambda e: e.pair.sort_key())
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if pair_equivalent(rs, galois, entries[i].pair, entries[j].pair) is not None:
                raise InternalConsistencyError("class representatives are equivalent")
    return ClassificationReport(rs=rs, galois=galois, classes=tuple(entries))


# -- structural verification -----------------------------------------------------


@dataclass
class SigmaStructureReport:
    ok: bool
    violations: list = field(default_factory=list)


def verify_sigma_structure(rs: RootSystem, galois: GaloisModel, pair: EllipticPair) -> SigmaStructureReport:
    """Check the root-set identities and the layer round trip for one pair."""
    rep = SigmaStructureReport(ok=True)

    def fail(msg):
        rep.ok = False
        rep.violations.append(msg)

    _validate_pair(rs, galois, pair)
    d = sum(rs.marks[node] for node in pair.orbit)
    torsion = [
        Fraction(1, d) if (i + 1) in pair.orbit else Fraction(0) for i in range(rs.rank)
    ]
    s = TorusElement(torsion)
    dual_vecs = [rs.node_root(i) for i in rs.affine_nodes if i not in pair.orbit]

    # the centralizer root set is exactly the integer span of the dual nodes
    sigma_gp = centralizer_roots(rs, s)
    basis = zspan_basis(dual_vecs)
    sigma0 = frozenset(
        r for r in rs.all_roots if basis and zspan_contains(basis, r)
    ) if dual_vecs else frozenset()
    if sigma_gp != sigma0:
        fail("centralizer roots differ from the dual-node span")
    plus, minus = set(), set()
    for r in sigma0:
        c = solve_in_basis(dual_vecs, r)
        if c is None:
            fail("a centralizer root left the dual-node span")
            continue
        if all(x >= 0 for x in c):
            plus.add(r)
        elif all(x <= 0 for x in c):
            minus.add(r)
        else:
            fail("a centralizer root has mixed signs over the dual nodes")
    if plus | minus != sigma0 or (plus & minus):
        fail("the centralizer roots do not split into opposite halves")

    if d == 1:
        raw = make_datum(rs, galois, s, pair.cocycle)
        nd, ld = langlands_normalize(raw)
        if ld.shape != "Delta" or ld.d != 1:
            fail("a weight-one orbit did not normalize to the principal shape")
        return rep

    # minimality: the orbit is exactly the minimal part of {alpha(s) = zeta_d}
    frak_s = [
        r
        for r in rs.all_roots
        if s.value_at(r) == (Fraction(1, d), ())
    ]

    def leq(a, b):
        diff = tuple(x - y for x, y in zip(b, a))
        if not any(diff):
            return True
        c = solve_in_basis(dual_vecs, diff) if dual_vecs else None
        return c is not None and all(x >= 0 and x.denominator == 1 for x in c)

    minimal = {
        r for r in frak_s if not any(q != r and leq(q, r) for q in frak_s)
    }
    orbit_vecs = {rs.node_root(i) for i in pair.orbit}
    if minimal != orbit_vecs:
        fail("the orbit is not the minimal slice of the zeta_d level set")

    # round trip through the raw normalization
    raw = make_datum(rs, galois, s, pair.cocycle)
    nd, ld = langlands_normalize(raw)
    if ld.shape != "DeltaA":
        fail("constructed datum did not normalize to the completed diagram")
    if ld.d != d:
        fail(f"recovered order {ld.d} differs from the pair order {d}")
    nonempty = [k for k in range(1, ld.d) if ld.layers[k]]
    if nonempty != [1]:
        fail(f"nonempty layers at k = {nonempty}, expected exactly k = 1")
    elif frozenset(ld.layers[1]) != orbit_vecs:
        fail("the k = 1 layer does not recover the orbit")
    return rep


# -- brute-force inventory ---------------------------------------------------------


def _work_estimate(rs: RootSystem, galois: GaloisModel, order_bound: int) -> int:
    w = 1
    for ct, _ in rs.components:
        w *= weyl_order(ct)
    return max(w * len(galois), order_bound**rs.rank)


def _canonical_s_reps(rs: RootSystem, order_bound: int):
    """Lex-minimal representatives of the W-orbits on the bounded torsion grid."""
    gens = list(range(rs.rank))
    seen = set()
    reps = []
    for coords in product(range(order_bound), repeat=rs.rank):
        s = TorusElement([Fraction(c, order_bound) for c in coords])
        k = s.key()
        if k in seen:
            continue
        reps.append(s)
        frontier = [s]
        seen.add(k)
        while frontier:
            nxt = []
            for cur in frontier:
                for j in gens:
                    w = WeylElement(
                        tuple(
                            rs.reflect_simple(j, rs.simple_roots[i])
                            for i in range(rs.rank)
                        )
                    )
                    img = torus_action(w, cur)
                    if img.key() not in seen:
                        seen.add(img.key())
                        nxt.append(img)
            frontier = nxt
    return reps


def brute_force_inventory(
    rs: RootSystem,
    galois: GaloisModel,
    order_bound: int,
    cap: int = DEFAULT_WORK_CAP,
):
    """All elliptic data with bounded finite order, up to equivalence.

    Ground truth for the classification: enumerates every torsion element on
    the grid, every compatible Borel-normalized Weyl cocycle over the diagram
    action, keeps the elliptic data, and deduplicates with ``equivalent``.
    """
    cost = _work_estimate(rs, galois, order_bound)
    if cost > cap:
        raise CapExceeded(
            f"inventory cost estimate {cost} exceeds the cap {cap}; "
            f"raise the cap to force the attempt"
        )
    W = enumerate_weyl(rs, cap=cap)
    n = len(galois)
    phis = [galois.phi_lattice(a) for a in range(n)]
    gens = galois.generating_set()
    words = galois.words()
    found: list[EndoscopicDatum] = []
    for s in _canonical_s_reps(rs, order_bound):
        base = standard_bprime_base(rs, s)
        sub = centralizer_roots(rs, s)
        cands = []
        feasible = True
        for a in range(n):
            ca = {}
            for w in W:
                comp = w * phis[a]
                if torus_action(comp, s) != s:
                    continue
                if base:
                    from .endodata import _transport_in_subsystem

                    image = [comp(b) for b in base]
                    v = _transport_in_subsystem(rs, sub, image, base)
                    comp = v * comp
                ca[comp.images] = comp
            if not ca:
                feasible = False
                break
            cands.append(sorted(ca.values(), key=lambda m: m.images))
        if not feasible:
            continue
        families = set()
        data_here = []
        for choice in product(*(cands[g] for g in gens)) if gens else [()]:
            gen_val = dict(zip(gens, choice))
            family = []
            for e in range(n):
                cur = WeylElement.identity(rs.rank)
                for g in words[e]:
                    cur = cur * gen_val[g]
                family.append(cur)
            ok = all(
                family[galois.table[a][b]] == family[a] * family[b]
                for a in range(n)
                for b in range(n)
            )
            if not ok:
                continue
            allowed = [
                {m.images for m in cands[a]} for a in range(n)
            ]
            if not all(family[a].images in allowed[a] for a in range(n)):
                continue
            key = tuple(f.images for f in family)
            if key in families:
                continue
            families.add(key)
            datum = EndoscopicDatum(
                rs, galois, s, family, base, normalized=False, _validate=False
            )
            if is_elliptic(datum):
                data_here.append(datum)
        for datum in data_here:
            if not any(
                other.s == datum.s and equivalent(other, datum) is not None
                for other in found
            ):
                found.append(datum)
    # distinct canonical s cannot collide, but certify anyway at desk scale
    for i in range(len(found)):
        for j in range(i + 1, len(found)):
            if found[i].s != found[j].s and equivalent(found[i], found[j]) is not None:
                raise InternalConsistencyError(
                    "two inventory entries with distinct canonical s are equivalent"
                )
    return sorted(found, key=lambda d: d.key())


def match_classification(report: ClassificationReport, inventory) -> bool:
    """Bijective matching between class representatives and inventory entries."""
    if len(report.classes) != len(inventory):
        return False
    unmatched = list(inventory)
    for entry in report.classes:
        hit = next(
            (x for x in unmatched if equivalent(entry.datum, x) is not None), None
        )
        if hit is None:
            return False
        unmatched.remove(hit)
    return not unmatched
