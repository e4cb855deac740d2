"""Endoscopic data as (torus element, Weyl-valued cocycle) pairs.

A datum stores the composite Galois actions sigma -> sigma' = w(sigma).sigma_G
as lattice maps, canonicalized so that every value preserves a fixed Borel of
the centralizer subsystem: before normalization that Borel is the one cut out
by the standard positive roots, afterwards it is the one whose simple set sits
inside the normalized layer decomposition.  Lifts to the dual group are never
materialized; every criterion lives at the level of W and the torus.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from ._linalg import solve_in_basis, vec_neg, zspan_basis, zspan_contains
from ._linalg import fixed_space_dimension
from .errors import CapExceeded, InternalConsistencyError, InvalidInput
from .galois import Cocycle, GaloisModel, Place, restrict_model
from .rootsys import RootSystem
from .torus import TorusElement
from .weyl import (
    DiagramAut,
    WeylElement,
    enumerate_weyl,
    omega_group,
    torus_action,
    weyl_part_if_member,
)

DEFAULT_ORBIT_CAP = 10**6


# -- subsystem helpers ---------------------------------------------------------


def centralizer_roots(rs: RootSystem, s: TorusElement):
    """Roots alpha with alpha(s) = 1, the root set of the dual centralizer."""
    zero = (Fraction(0), (Fraction(0),) * s.n_generators)
    return frozenset(r for r in rs.all_roots if s.value_at(r) == zero)


def standard_bprime_base(rs: RootSystem, s: TorusElement):
    """Simple system of the positive part of the centralizer subsystem."""
    sub_pos = sorted(centralizer_roots(rs, s) & rs.positives)
    pos_set = set(sub_pos)
    base = []
    for r in sub_pos:
        decomposable = any(
            tuple(a - b for a, b in zip(r, q)) in pos_set for q in sub_pos if q != r
        )
        if not decomposable:
            base.append(r)
    return tuple(sorted(base))


def _sub_positive_system(rs: RootSystem, sub_roots, base):
    pos = set()
    for r in sub_roots:
        c = solve_in_basis(list(base), r)
        if c is None:
            raise InternalConsistencyError("subsystem root outside the base span")
        if all(x >= 0 for x in c):
            pos.add(r)
        elif not all(x <= 0 for x in c):
            raise InternalConsistencyError("subsystem base is not a base")
    return frozenset(pos)


def _transport_in_subsystem(rs: RootSystem, sub_roots, start_base, target_base):
    """The element of the subsystem Weyl group sending one base to the other."""
    if not start_base and not target_base:
        return WeylElement.identity(rs.rank)
    pos = set(_sub_positive_system(rs, sub_roots, start_base))
    target_pos = _sub_positive_system(rs, sub_roots, target_base)
    v = WeylElement.identity(rs.rank)
    steps, limit = 0, len(sub_roots) + 1
    while frozenset(pos) != target_pos:
        t = next(
            (t for t in sorted(target_base) if vec_neg(t) in pos),
            None,
        )
        if t is None:
            raise InternalConsistencyError("subsystem descent stalled")
        pos = {rs.reflect(t, r) for r in pos}
        s_t = WeylElement(
            tuple(rs.reflect(t, rs.simple_roots[i]) for i in range(rs.rank))
        )
        v = s_t * v
        steps += 1
        if steps > limit:
            raise InternalConsistencyError("subsystem descent failed to terminate")
    return v


def canonicalize_action(rs: RootSystem, s: TorusElement, a: WeylElement, base=None):
    """The unique subsystem-Weyl translate of ``a`` preserving the standard Borel."""
    if base is None:
        base = standard_bprime_base(rs, s)
    if not base:
        return a
    sub = centralizer_roots(rs, s)
    image = [a(b) for b in base]
    v = _transport_in_subsystem(rs, sub, image, base)
    return v * a


# -- the datum -----------------------------------------------------------------


@dataclass(frozen=True)
class LanglandsData:
    """Layered root data of the normalization: d, the level sets Y_k, the
    filtered minimal sets X_k, the reached shape, and the transport u."""

    d: int
    layers: tuple  # X_k as frozensets of roots, k = 0..d-1
    level_sets: tuple  # Y_k as frozensets of roots, k = 0..d-1
    shape: str  # "Delta" or "DeltaA"
    u: WeylElement

    @property
    def x_set(self):
        out = set()
        for layer in self.layers:
            out |= layer
        return frozenset(out)


class EndoscopicDatum:
    """Immutable (s, cocycle) pair with its Borel convention made explicit."""

    __slots__ = ("rs", "galois", "s", "family", "bprime_base", "normalized", "langlands")

    def __init__(self, rs, galois, s, family, bprime_base, normalized=False,
                 langlands=None, _validate=True):
        self.rs = rs
        self.galois = galois
        self.s = s
        self.family = tuple(family)
        self.bprime_base = tuple(sorted(tuple(v) for v in bprime_base))
        self.normalized = normalized
        self.langlands = langlands
        if _validate:
            self._validate()

    def _validate(self):
        n = len(self.galois)
        if len(self.family) != n:
            raise InvalidInput("cocycle must assign a value to every group element")
        if not self.family[0].is_identity():
            raise InvalidInput("the identity must act as the identity")
        for a in range(n):
            for b in range(n):
                if self.family[self.galois.table[a][b]] != self.family[a] * self.family[b]:
                    raise InvalidInput(
                        "cocycle identity fails: the composite actions are not a homomorphism"
                    )
        for a in range(n):
            if torus_action(self.family[a], self.s) != self.s:
                raise InvalidInput("the composite action does not fix s")
            w_part = self.family[a] * self.galois.phi_lattice(a).inverse()
            if weyl_part_if_member(self.rs, w_part) is None:
                raise InvalidInput("cocycle value is not in the Weyl group")
            for b in self.bprime_base:
                img = self.family[a](b)
                if img not in set(self.bprime_base):
                    raise InvalidInput("the composite action does not preserve the Borel")

    def w_value(self, a: int) -> WeylElement:
        """The Weyl part of the stored composite action at element a."""
        return self.family[a] * self.galois.phi_lattice(a).inverse()

    def key(self):
        return (
            self.s.key(),
            self.bprime_base,
            tuple(f.images for f in self.family),
        )

    def __eq__(self, other):
        return (
            isinstance(other, EndoscopicDatum)
            and self.rs is other.rs
            and self.galois.same_model(other.galois)
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def node_action(self, a: int) -> DiagramAut:
        """The composite action as a permutation of affine nodes (normalized data)."""
        if not self.normalized:
            raise InvalidInput("node actions exist only after normalization")
        perm = []
        for node in self.rs.affine_nodes:
            img = self.family[a](self.rs.node_root(node))
            target = self.rs.node_of_root(img)
            if target is None:
                raise InternalConsistencyError("normalized action does not permute nodes")
            perm.append(target)
        return DiagramAut(tuple(perm))

    def __repr__(self):
        tag = "normalized" if self.normalized else "raw"
        return f"EndoscopicDatum({self.rs!r}, s={self.s!r}, {tag})"


def make_datum(rs: RootSystem, galois: GaloisModel, s: TorusElement, cocycle) -> EndoscopicDatum:
    """Build a datum from raw cocycle values, canonicalizing the Borel choice.

    ``cocycle`` maps element names (or indices) to Weyl lattice maps, images
    lists, affine node permutations, or is a Cocycle with Omega values.
    """
    if s.rank != rs.rank:
        raise InvalidInput("torus element rank does not match the root system")
    values = _cocycle_values(rs, galois, cocycle)
    base = standard_bprime_base(rs, s)
    sub = centralizer_roots(rs, s)
    family = []
    for a in range(len(galois)):
        composite = values[a] * galois.phi_lattice(a)
        if torus_action(composite, s) != s:
            raise InvalidInput("cocycle value does not fix s")
        if base:
            image = [composite(b) for b in base]
            v = _transport_in_subsystem(rs, sub, image, base)
            composite = v * composite
        family.append(composite)
    return EndoscopicDatum(rs, galois, s, family, base, normalized=False)


def make_datum_from_family(rs, galois, s, family, validate=False) -> EndoscopicDatum:
    """Rebuild a raw-convention datum from composite actions (assumed valid)."""
    base = standard_bprime_base(rs, s)
    sub = centralizer_roots(rs, s)
    out = []
    for a_map in family:
        if base:
            image = [a_map(b) for b in base]
            v = _transport_in_subsystem(rs, sub, image, base)
            a_map = v * a_map
        out.append(a_map)
    return EndoscopicDatum(rs, galois, s, out, base, normalized=False, _validate=validate)


def principal_datum(rs: RootSystem, galois: GaloisModel) -> EndoscopicDatum:
    """The datum of the group itself: s = 1, trivial cocycle."""
    s = TorusElement.identity(rs.rank)
    return make_datum(rs, galois, s, {name: WeylElement.identity(rs.rank) for name in galois.names})


def _cocycle_values(rs, galois, cocycle):
    if isinstance(cocycle, Cocycle):
        return [cocycle.value(a).lattice(rs) for a in range(len(galois))]
    values = [None] * len(galois)
    if isinstance(cocycle, dict):
        items = {}
        for k, v in cocycle.items():
            if isinstance(k, str):
                if k not in galois.names:
                    raise InvalidInput(f"cocycle names an unknown element {k!r}")
                idx = galois.names.index(k)
            else:
                idx = int(k)
            items[idx] = v
    else:
        items = dict(enumerate(cocycle))
    for a in range(len(galois)):
        v = items.get(a)
        if v is None:
            values[a] = WeylElement.identity(rs.rank)
        elif isinstance(v, WeylElement):
            values[a] = v
        elif isinstance(v, DiagramAut):
            values[a] = v.lattice(rs)
        elif isinstance(v, (list, tuple)) and v and isinstance(v[0], int):
            values[a] = DiagramAut(tuple(v)).lattice(rs)
        elif isinstance(v, (list, tuple)):
            values[a] = WeylElement(tuple(tuple(x) for x in v))
        else:
            raise InvalidInput(f"cannot interpret cocycle value {v!r}")
    return values


def raw_form(datum: EndoscopicDatum) -> EndoscopicDatum:
    """The same datum re-expressed in the raw (standard-Borel) convention."""
    if not datum.normalized:
        return datum
    return make_datum_from_family(datum.rs, datum.galois, datum.s, datum.family)


def transport_datum(datum: EndoscopicDatum, w: WeylElement) -> EndoscopicDatum:
    """Conjugate the whole datum by w, in the raw convention."""
    s2 = torus_action(w, datum.s)
    winv = w.inverse()
    fam = [w * a * winv for a in datum.family]
    return make_datum_from_family(datum.rs, datum.galois, s2, fam)


# -- Langlands layers and normalization ------------------------------------------


def _layers(rs: RootSystem, s: TorusElement, base):
    """The sets Y_k and X_k from the layered construction, for finite-order s."""
    d = s.order()
    m = s.n_generators
    zero_free = (Fraction(0),) * m
    ys = [set() for _ in range(d)]
    for r in rs.all_roots:
        t, f = s.value_at(r)
        if f != zero_free:
            continue
        if (t * d).denominator != 1:
            raise InternalConsistencyError("root value of order not dividing ord(s)")
        ys[int(t * d) % d].add(r)

    def leq(a, b):
        diff = tuple(x - y for x, y in zip(b, a))
        if not any(diff):
            return True
        if not base:
            return False
        c = solve_in_basis(list(base), diff)
        return c is not None and all(x >= 0 and x.denominator == 1 for x in c)

    layers = [frozenset(base)]
    span_so_far = list(ys[0])
    for k in range(1, d):
        basis = zspan_basis(span_so_far)
        zk = [r for r in ys[k] if not (basis and zspan_contains(basis, r))]
        minimal = [r for r in zk if not any(q != r and leq(q, r) for q in zk)]
        layers.append(frozenset(minimal))
        span_so_far.extend(ys[k])
    return d, tuple(layers), tuple(frozenset(y) for y in ys)


def langlands_normalize(datum: EndoscopicDatum):
    """Conjugate the datum so the layered root set equals Delta or Delta_a.

    Returns (normalized datum, LanglandsData).  The transporting element u is
    a deterministic function of s alone, so two data with the same s receive
    the same u and keep their layer sets in common.
    """
    if not datum.s.is_finite_order():
        raise InvalidInput(
            "s has infinite order; apply the finite-order reduction first"
        )
    if datum.normalized:
        return datum, replace(datum.langlands, u=WeylElement.identity(datum.rs.rank))
    rs = datum.rs
    d, layers, level_sets = _layers(rs, datum.s, datum.bprime_base)
    x_set = set()
    for layer in layers:
        x_set |= layer
    x_sorted = sorted(x_set)
    u = None
    shape = None
    if len(x_set) == rs.rank:
        from .weyl import find_base_transport

        u = find_base_transport(rs, x_sorted, rs.simple_roots)
        shape = "Delta"
    elif len(x_set) == rs.rank + 1:
        from .weyl import find_base_transport, is_base

        # candidates in canonical root order; an s-fixing transport is
        # preferred because it reproduces the layers on the nose
        valid = []
        for beta in x_sorted:
            rest = [r for r in x_sorted if r != beta]
            if not is_base(rs, rest):
                continue
            w = find_base_transport(rs, rest, rs.simple_roots)
            if w is not None and w(beta) == rs.lowest_root:
                valid.append(w)
        fixing = [w for w in valid if torus_action(w, datum.s) == datum.s]
        if fixing:
            u = fixing[0]
        elif valid:
            u = valid[0]
        if u is not None:
            shape = "DeltaA"
    if u is None or shape is None:
        raise InternalConsistencyError(
            "no Weyl transport takes the layered set to Delta or Delta_a"
        )
    uinv = u.inverse()
    s2 = torus_action(u, datum.s)
    fam2 = [u * a * uinv for a in datum.family]
    new_layers = tuple(frozenset(u(r) for r in layer) for layer in layers)
    new_levels = tuple(frozenset(u(r) for r in ys) for ys in level_sets)
    base2 = tuple(sorted(u(b) for b in datum.bprime_base))
    ld = LanglandsData(d=d, layers=new_layers, level_sets=new_levels, shape=shape, u=u)
    out = EndoscopicDatum(
        rs, datum.galois, s2, fam2, base2, normalized=True, langlands=ld
    )
    if shape == "Delta":
        for a in range(len(datum.galois)):
            if out.w_value(a) != WeylElement.identity(rs.rank):
                raise InternalConsistencyError(
                    "shape Delta forces a trivial cocycle, got a nontrivial value"
                )
    else:
        omega_perms = {om.aut.perm for om in omega_group(rs)}
        for a in range(len(datum.galois)):
            if out.node_action(a).compose(datum.galois.phi(a).inverse()).perm not in omega_perms:
                raise InternalConsistencyError(
                    "normalized cocycle value landed outside Omega"
                )
    return out, ld


def normalized_form(datum: EndoscopicDatum) -> EndoscopicDatum:
    return datum if datum.normalized else langlands_normalize(datum)[0]


# -- equivalence ------------------------------------------------------------------


def _orbit_search(rs: RootSystem, s1: TorusElement, s2: TorusElement, cap: int):
    """Breadth-first search for w with w(s1) = s2 over simple reflections."""
    if s1 == s2:
        return WeylElement.identity(rs.rank)
    gens = [
        WeylElement(tuple(rs.reflect_simple(j, rs.simple_roots[i]) for i in range(rs.rank)))
        for j in range(rs.rank)
    ]
    start = s1
    parent = {start.key(): None}
    frontier = [start]
    while frontier:
        nxt = []
        for cur in frontier:
            for j, g in enumerate(gens):
                img = torus_action(g, cur)
                k = img.key()
                if k in parent:
                    continue
                parent[k] = (cur, j)
                if len(parent) > cap:
                    raise CapExceeded(
                        f"torus orbit exploration exceeded the cap of {cap} states"
                    )
                if img == s2:
                    w = WeylElement.identity(rs.rank)
                    node = k
                    while parent[node] is not None:
                        prev, jj = parent[node]
                        w = w * gens[jj]
                        node = prev.key()
                    return w
                nxt.append(img)
        frontier = nxt
    return None


def witness_transports(d1: EndoscopicDatum, d2: EndoscopicDatum, w: WeylElement) -> bool:
    """Soundness of a witness: transporting d1 by w reproduces d2 exactly."""
    r1, r2 = raw_form(d1), raw_form(d2)
    return transport_datum(r1, w) == r2


def equivalent(d1: EndoscopicDatum, d2: EndoscopicDatum, cap: int = DEFAULT_ORBIT_CAP):
    """Equivalence test; returns a witness Weyl element or None.

    Finite-order data go through the layer normalization and the Omega
    criterion; data with free parts are reduced to finite order first, and the
    reduced witness is certified directly against the originals.
    """
    if d1.rs is not d2.rs:
        raise InvalidInput("data live on different root systems")
    if not d1.galois.same_model(d2.galois):
        raise InvalidInput("data live over different Galois models")
    if not (d1.s.is_finite_order() and d2.s.is_finite_order()):
        return _equivalent_infinite(d1, d2, cap)
    if not d1.rs.is_simple:
        return equivalent_bruteforce(d1, d2)
    r1, r2 = raw_form(d1), raw_form(d2)
    w0 = _orbit_search(d1.rs, r1.s, r2.s, cap)
    if w0 is None:
        return None
    r1 = transport_datum(r1, w0)
    n1, ld1 = langlands_normalize(r1)
    n2, ld2 = langlands_normalize(r2)
    if ld1.shape != ld2.shape or ld1.layers != ld2.layers:
        raise InternalConsistencyError(
            "data with a common s produced different layer structures"
        )
    if ld1.shape == "Delta":
        witness = ld2.u.inverse() * ld1.u * w0
        if not witness_transports(d1, d2, witness):
            raise InternalConsistencyError("Delta-shape witness failed certification")
        return witness
    rs = d1.rs
    node_layers = [
        frozenset(rs.node_of_root(r) for r in layer) for layer in ld1.layers
    ]
    acts1 = [n1.node_action(a) for a in range(len(d1.galois))]
    acts2 = [n2.node_action(a) for a in range(len(d2.galois))]
    for om in omega_group(rs):
        if any(
            frozenset(om.aut(i) for i in layer) != layer for layer in node_layers[1:]
        ):
            continue
        inv = om.aut.inverse()
        if all(
            om.aut.compose(acts1[a]).compose(inv).perm == acts2[a].perm
            for a in range(len(d1.galois))
        ):
            witness = ld2.u.inverse() * om.weyl * ld1.u * w0
            if not witness_transports(d1, d2, witness):
                raise InternalConsistencyError(
                    "Omega witness failed certification against the raw data"
                )
            return witness
    return None


def _equivalent_infinite(d1, d2, cap):
    from .reduction import finite_order_reduction

    r1, r2 = raw_form(d1), raw_form(d2)
    if r1.s != r2.s:
        w0 = _orbit_search(d1.rs, r1.s, r2.s, cap)
        if w0 is None:
            return None
        r1 = transport_datum(r1, w0)
    else:
        w0 = WeylElement.identity(d1.rs.rank)
    red1, red2, _plan = finite_order_reduction(r1, r2)
    w = equivalent(red1, red2, cap)
    if w is None:
        return None
    witness = w * w0
    if not witness_transports(d1, d2, witness):
        raise InternalConsistencyError(
            "reduced-data witness failed to transport the original data"
        )
    return witness


def equivalent_bruteforce(d1: EndoscopicDatum, d2: EndoscopicDatum, weyl_cap: int = 50000):
    """Independent oracle: search all of W for a transporting element."""
    if d1.rs is not d2.rs:
        raise InvalidInput("data live on different root systems")
    if not d1.galois.same_model(d2.galois):
        raise InvalidInput("data live over different Galois models")
    r1, r2 = raw_form(d1), raw_form(d2)
    for w in enumerate_weyl(d1.rs, cap=weyl_cap):
        if torus_action(w, r1.s) != r2.s:
            continue
        if transport_datum(r1, w) == r2:
            return w
    return None


# -- Out, ellipticity, localization ------------------------------------------------


def out_group(datum: EndoscopicDatum):
    """Out of the datum: the Omega elements stabilizing the layers and the action."""
    nd = normalized_form(datum)
    if nd.langlands.shape != "DeltaA":
        raise InvalidInput(
            "Out is defined by the layer criterion only when the layered set is "
            "the completed diagram"
        )
    rs = nd.rs
    node_layers = [
        frozenset(rs.node_of_root(r) for r in layer) for layer in nd.langlands.layers
    ]
    acts = [nd.node_action(a) for a in range(len(nd.galois))]
    out = []
    for om in omega_group(rs):
        if any(
            frozenset(om.aut(i) for i in layer) != layer for layer in node_layers[1:]
        ):
            continue
        inv = om.aut.inverse()
        if all(
            om.aut.compose(acts[a]).compose(inv).perm == acts[a].perm
            for a in range(len(nd.galois))
        ):
            out.append(om)
    return out


def _orbit_count(perms, items):
    items = list(items)
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for x in items:
            a, b = find(x), find(p[x] if isinstance(p, dict) else p(x))
            if a != b:
                parent[a] = b
    return len({find(x) for x in items})


def is_elliptic(datum: EndoscopicDatum) -> bool:
    """Ellipticity: the fixed space of the action is no larger than forced.

    Via the projection from the span of the completed diagram, this is the
    equality dim Q[Delta_a]^Gamma = 1 + dim Q[X_0]^Gamma for shape Delta_a,
    and dim X*(T)^Gamma = dim Q[X_0]^Gamma for shape Delta.
    """
    nd = normalized_form(datum)
    rs = nd.rs
    n = len(nd.galois)
    x0 = sorted(nd.langlands.layers[0])
    if nd.langlands.shape == "DeltaA":
        acts = [nd.node_action(a) for a in range(n)]
        all_orbits = _orbit_count(acts, rs.affine_nodes)
        x0_nodes = [rs.node_of_root(r) for r in x0]
        return all_orbits == 1 + _orbit_count(acts, x0_nodes)
    dim_fixed = fixed_space_dimension([a.images for a in nd.family], rs.rank)
    x0_set = set(x0)
    perms = []
    for a in range(n):
        mapping = {r: nd.family[a](r) for r in x0}
        if set(mapping.values()) != x0_set:
            raise InternalConsistencyError("the action does not permute the base layer")
        perms.append(mapping)
    return dim_fixed == _orbit_count(perms, x0)


def localize(datum: EndoscopicDatum, place: Place) -> EndoscopicDatum:
    """Restriction to the decomposition subgroup of a place; s is unchanged."""
    if place.model_key != datum.galois.key():
        raise InvalidInput("place belongs to a different Galois model")
    sub_model, elems = restrict_model(datum.galois, place.subgroup)
    fam = [datum.family[e] for e in elems]
    return EndoscopicDatum(
        datum.rs,
        sub_model,
        datum.s,
        fam,
        datum.bprime_base,
        normalized=datum.normalized,
        langlands=datum.langlands,
    )


def kernel_tower_ok(datum: EndoscopicDatum) -> bool:
    """The kernel of the composite action acts trivially on the diagram, and on
    the diagram kernel the cocycle alone determines the action (the semidirect
    splitting of the completed diagram automorphisms)."""
    n = len(datum.galois)
    for a in range(n):
        if datum.family[a].is_identity():
            if not datum.galois.phi(a).is_identity():
                return False
            if not datum.w_value(a).is_identity():
                return False
    return True
