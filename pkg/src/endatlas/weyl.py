"""Weyl group elements as lattice maps, base transport, and the group Omega.

A lattice map is stored by the images of the simple roots: a tuple of root
vectors, row i being the image of alpha_{i+1}.  Equality of maps is equality
of these tuples, which gives a canonical, hashable normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._linalg import solve_in_basis, vec_neg
from .errors import CapExceeded, InternalConsistencyError, InvalidInput
from .rootsys import RootSystem
from .torus import TorusElement


class WeylElement:
    """A lattice automorphism given by the images of the simple roots."""

    __slots__ = ("images", "_inv")

    def __init__(self, images):
        self.images = tuple(tuple(v) for v in images)
        self._inv = None

    @classmethod
    def identity(cls, rank: int) -> "WeylElement":
        return cls(tuple(tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)))

    def __call__(self, vec):
        out = [0] * len(self.images[0])
        for c, row in zip(vec, self.images):
            if c:
                for i, x in enumerate(row):
                    out[i] += c * x
        return tuple(out)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self * other)(v) = self(other(v))
        return WeylElement(tuple(self(row) for row in other.images))

    def inverse(self) -> "WeylElement":
        if self._inv is None:
            n = len(self.images)
            rows = [[Fraction(self.images[i][j]) for j in range(n)] for i in range(n)]
            aug = [row + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(rows)]
            for c in range(n):
                pr = next(i for i in range(c, n) if aug[i][c] != 0)
                aug[c], aug[pr] = aug[pr], aug[c]
                pv = aug[c][c]
                aug[c] = [x / pv for x in aug[c]]
                for i in range(n):
                    if i != c and aug[i][c] != 0:
                        f = aug[i][c]
                        aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
            inv = []
            for i in range(n):
                row = aug[i][n:]
                if any(x.denominator != 1 for x in row):
                    raise InvalidInput("lattice map is not unimodular")
                inv.append(tuple(int(x) for x in row))
            self._inv = WeylElement(tuple(inv))
            self._inv._inv = self
        return self._inv

    def is_identity(self) -> bool:
        n = len(self.images)
        return all(self.images[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"WeylElement({self.images})"


@dataclass(frozen=True)
class DiagramAut:
    """Automorphism of the completed diagram as a permutation of affine nodes."""

    perm: tuple  # perm[i] = image of node i, nodes 0..rank

    def __call__(self, node: int) -> int:
        return self.perm[node]

    def compose(self, other: "DiagramAut") -> "DiagramAut":
        return DiagramAut(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def inverse(self) -> "DiagramAut":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return DiagramAut(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def fixes_node_zero(self) -> bool:
        return self.perm[0] == 0

    def lattice(self, rs: RootSystem) -> WeylElement:
        """The induced lattice map (consistent on node 0 via the marks relation)."""
        if not rs.is_simple:
            # product systems have no affine node; the perm fixes slot 0
            images = tuple(rs.simple_roots[self.perm[i + 1] - 1] for i in range(rs.rank))
            return WeylElement(images)
        images = tuple(rs.node_root(self.perm[i + 1]) for i in range(rs.rank))
        out = WeylElement(images)
        if out(rs.lowest_root) != rs.node_root(self.perm[0]):
            raise InternalConsistencyError("node permutation breaks the marks relation")
        return out


@dataclass(frozen=True)
class OmegaElement:
    """A rotation of the completed diagram realized inside the Weyl group."""

    aut: DiagramAut
    weyl: WeylElement

    def __call__(self, node: int) -> int:
        return self.aut(node)


def _diagram_aut_of_delta_perm(rs: RootSystem, delta_images) -> DiagramAut:
    """Extend a permutation of simple nodes (1..n images) to the affine diagram."""
    return DiagramAut((0,) + tuple(delta_images))


# -- bases and chamber descent ------------------------------------------------


def is_base(rs: RootSystem, vectors) -> bool:
    """Whether the vectors form a base: independent, with every root an
    all-nonnegative or all-nonpositive rational combination."""
    vectors = list(vectors)
    if len(vectors) != rs.rank:
        return False
    try:
        coords = [solve_in_basis(vectors, r) for r in rs.all_roots]
    except ValueError:
        return False
    for c in coords:
        if c is None:
            return False
        if not (all(x >= 0 for x in c) or all(x <= 0 for x in c)):
            return False
    return True


def _positive_system(rs: RootSystem, base) -> frozenset:
    """Sigma^+(base): the roots that are nonnegative combinations of the base."""
    pos = set()
    for r in rs.all_roots:
        c = solve_in_basis(list(base), r)
        if c is None:
            raise InvalidInput("input is not a base of the root system")
        if all(x >= 0 for x in c):
            pos.add(r)
        elif not all(x <= 0 for x in c):
            raise InvalidInput("input is not a base of the root system")
    return frozenset(pos)


def _descend_to_delta(rs: RootSystem, base) -> WeylElement:
    """The unique w with w(base) = Delta, found by chamber descent.

    At each step the lexicographically first simple root that is negative for
    the transported base is reflected away; terminates within |Sigma^+| steps.
    """
    pos = set(_positive_system(rs, base))
    w = WeylElement.identity(rs.rank)
    target = rs.positives
    steps = 0
    limit = len(target) + 1
    while frozenset(pos) != target:
        j = next(
            (j for j in range(rs.rank) if vec_neg(rs.simple_roots[j]) in pos),
            None,
        )
        if j is None:
            raise InternalConsistencyError("descent stalled on a non-positive system")
        pos = {rs.reflect_simple(j, r) for r in pos}
        s_j = WeylElement(
            tuple(rs.reflect_simple(j, rs.simple_roots[i]) for i in range(rs.rank))
        )
        w = s_j * w
        steps += 1
        if steps > limit:
            raise InternalConsistencyError("descent failed to terminate")
    return w


def find_base_transport(rs: RootSystem, source_base, target_base):
    """The unique w in W with w(source_base) = target_base as sets, else None."""
    source = [tuple(v) for v in source_base]
    target = [tuple(v) for v in target_base]
    w1 = _descend_to_delta(rs, source)
    w2 = _descend_to_delta(rs, target)
    w = w2.inverse() * w1
    if {w(v) for v in source} != set(target):
        return None
    return w


def weyl_membership(rs: RootSystem, lattice_map: WeylElement):
    """Unique factorization lattice_map = weyl_part * diagram_part.

    The diagram part preserves Delta; it is the identity exactly when the map
    lies in W.  Raises when the map does not permute the root set.
    """
    images = [lattice_map(r) for r in rs.all_roots]
    if set(images) != set(rs.all_roots):
        raise InvalidInput("lattice map does not permute the root set")
    image_base = [lattice_map(s) for s in rs.simple_roots]
    w = _descend_to_delta(rs, image_base)
    residual = w * lattice_map  # preserves Delta setwise
    simple_index = {s: i + 1 for i, s in enumerate(rs.simple_roots)}
    delta_images = []
    for i in range(rs.rank):
        img = residual(rs.simple_roots[i])
        node = simple_index.get(img)
        if node is None:
            raise InternalConsistencyError("residual map does not preserve Delta")
        delta_images.append(node)
    return w.inverse(), _diagram_aut_of_delta_perm(rs, delta_images)


def weyl_part_if_member(rs: RootSystem, lattice_map: WeylElement):
    """The map itself when it lies in W, else None (works for product systems)."""
    if {lattice_map(r) for r in rs.all_roots} != set(rs.all_roots):
        return None
    image_base = [lattice_map(s) for s in rs.simple_roots]
    w = _descend_to_delta(rs, image_base)
    return lattice_map if (w * lattice_map).is_identity() else None


# -- diagram automorphisms and Omega ------------------------------------------


def enumerate_affine_automorphisms(rs: RootSystem):
    """All permutations of the affine nodes preserving the pairing matrix."""
    rs._require_simple()
    cached = getattr(rs, "_affine_auts", None)
    if cached is not None:
        return cached
    pair = rs.affine_pairing
    n = len(pair)
    results = []

    def extend(assigned):
        pos = len(assigned)
        if pos == n:
            results.append(DiagramAut(tuple(assigned)))
            return
        for cand in range(n):
            if cand in assigned:
                continue
            ok = all(
                pair[a][cand] == pair[i][pos] and pair[cand][a] == pair[pos][i]
                for i, a in enumerate(assigned)
            )
            if ok:
                assigned.append(cand)
                extend(assigned)
                assigned.pop()

    extend([])
    for aut in results:
        for i in rs.affine_nodes:
            if rs.marks[aut(i)] != rs.marks[i]:
                raise InternalConsistencyError("diagram automorphism broke the marks")
    results = sorted(results, key=lambda a: a.perm)
    rs._affine_auts = results
    return results


def enumerate_delta_automorphisms(rs: RootSystem):
    """Automorphisms of the finite diagram, as affine perms fixing node 0."""
    return [a for a in enumerate_affine_automorphisms(rs) if a.fixes_node_zero()]


def omega_group(rs: RootSystem):
    """The subgroup of W preserving the affine node set, via the mark-1 bijection.

    Each candidate diagram automorphism is certified to lie in W by the base
    transport factorization; brute force over W is never used.
    """
    rs._require_simple()
    cached = getattr(rs, "_omega_cache", None)
    if cached is not None:
        return cached
    out = []
    for aut in enumerate_affine_automorphisms(rs):
        lat = aut.lattice(rs)
        _, residual = weyl_membership(rs, lat)
        if residual.is_identity():
            out.append(OmegaElement(aut=aut, weyl=lat))
    mark_one = [i for i in rs.affine_nodes if rs.marks[i] == 1]
    images = sorted(om.aut(0) for om in out)
    if images != sorted(mark_one):
        raise InternalConsistencyError(
            "Omega is not in bijection with the mark-1 nodes"
        )
    # abelian, and stable under conjugation inside Aut(completed diagram)
    auts = enumerate_affine_automorphisms(rs)
    perms = {om.aut.perm for om in out}
    for a in out:
        for b in out:
            if a.aut.compose(b.aut).perm != b.aut.compose(a.aut).perm:
                raise InternalConsistencyError("Omega is not abelian")
    for t in auts:
        tinv = t.inverse()
        for om in out:
            if t.compose(om.aut).compose(tinv).perm not in perms:
                raise InternalConsistencyError("Omega is not normal in Aut")
    out = sorted(out, key=lambda om: om.aut.perm)
    rs._omega_cache = out
    return out


def omega_by_node(rs: RootSystem):
    """Map mark-1 node -> the OmegaElement sending node 0 there."""
    return {om.aut(0): om for om in omega_group(rs)}


def enumerate_weyl(rs: RootSystem, cap: int = 2_000_000):
    """Every element of W as a lattice map, by closure over simple reflections."""
    cached = getattr(rs, "_weyl_cache", None)
    if cached is not None and len(cached) <= cap:
        return cached
    gens = [
        WeylElement(tuple(rs.reflect_simple(j, rs.simple_roots[i]) for i in range(rs.rank)))
        for j in range(rs.rank)
    ]
    seen = {WeylElement.identity(rs.rank)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                h = g * w
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise CapExceeded(f"Weyl group larger than cap {cap}")
        frontier = nxt
    out = sorted(seen, key=lambda w: w.images)
    rs._weyl_cache = out
    return out


# -- torus action --------------------------------------------------------------


def torus_action(w, s: TorusElement, rs: RootSystem | None = None) -> TorusElement:
    """(w . s)(alpha) = s(w^{-1} alpha), computed exactly in the Delta-basis.

    ``w`` may be a WeylElement or a DiagramAut (the latter needs ``rs``).
    """
    if isinstance(w, DiagramAut):
        if rs is None:
            raise InvalidInput("torus action by a diagram automorphism needs the root system")
        w = w.lattice(rs)
    winv = w.inverse()
    n = len(winv.images)
    torsion = []
    free = []
    for i in range(n):
        t, f = s.value_at(winv.images[i])
        torsion.append(t)
        free.append(f)
    return TorusElement(tuple(torsion), tuple(free))
