"""Finite Galois models: a finite group with a diagram action, places as
conjugacy classes of cyclic subgroups, and cocycle enumeration.

Every construction in the theory factors through a finite quotient of the
absolute Galois group, so the model is always the finite image; "almost all
places" at this scale means all places, each place standing for the Frobenius
class of a decomposition subgroup.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .errors import InternalConsistencyError, InvalidInput
from .rootsys import RootSystem
from .weyl import DiagramAut, enumerate_delta_automorphisms


class GaloisModel:
    """Finite group with identity first, a Cayley table, and a diagram action."""

    def __init__(self, names, table, action, rs: RootSystem):
        self.names = tuple(str(x) for x in names)
        self.table = tuple(tuple(row) for row in table)
        self.rs = rs
        # action: per element, a DiagramAut fixing node 0 (the action on the
        # finite diagram, extended to the completed one).
        self.action = tuple(action)
        self._validate()

    def _validate(self):
        n = len(self.names)
        if len(set(self.names)) != n or n == 0:
            raise InvalidInput("element names must be nonempty and distinct")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise InvalidInput("multiplication table has wrong shape")
        if any(x < 0 or x >= n for row in self.table for x in row):
            raise InvalidInput("multiplication table entries out of range")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(n)):
            raise InvalidInput("element 0 must be the identity")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise InvalidInput("multiplication table is not associative")
        for a in range(n):
            if not any(self.table[a][b] == 0 for b in range(n)):
                raise InvalidInput("an element has no inverse")
        if len(self.action) != n:
            raise InvalidInput("action must assign a diagram automorphism per element")
        if self.rs.is_simple:
            valid = {aut.perm for aut in enumerate_delta_automorphisms(self.rs)}
            for aut in self.action:
                if not aut.fixes_node_zero() or aut.perm not in valid:
                    raise InvalidInput("action values must be automorphisms of the diagram")
        else:
            simples = self.rs.simple_roots
            for aut in self.action:
                if not aut.fixes_node_zero():
                    raise InvalidInput("action values must fix the padding slot")
                for i in range(self.rs.rank):
                    for j in range(self.rs.rank):
                        if self.rs.pairing(
                            simples[aut.perm[i + 1] - 1], simples[aut.perm[j + 1] - 1]
                        ) != self.rs.pairing(simples[i], simples[j]):
                            raise InvalidInput("action does not preserve the diagram")
        if not self.action[0].is_identity():
            raise InvalidInput("identity must act trivially")
        for a in range(n):
            for b in range(n):
                if self.action[self.table[a][b]].perm != self.action[a].compose(self.action[b]).perm:
                    raise InvalidInput("diagram action is not a homomorphism")

    def __len__(self):
        return len(self.names)

    def mult(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return next(b for b in range(len(self)) if self.table[a][b] == 0)

    def order_of(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def phi(self, a: int) -> DiagramAut:
        return self.action[a]

    def phi_lattice(self, a: int):
        return self.action[a].lattice(self.rs)

    def kernel(self):
        """Indices acting trivially on the diagram (the model's Gamma_E)."""
        return [a for a in range(len(self)) if self.action[a].is_identity()]

    def generating_set(self):
        gens: list[int] = []
        closure = {0}
        for a in range(len(self)):
            if a in closure:
                continue
            gens.append(a)
            frontier = [a]
            while frontier:
                nxt = []
                for x in closure | set(frontier):
                    for g in gens:
                        for y in (self.table[x][g], self.table[g][x]):
                            if y not in closure and y not in frontier and y not in nxt:
                                nxt.append(y)
                closure |= set(frontier)
                frontier = nxt
            if len(closure) == len(self):
                break
        return gens

    def words(self):
        """One generator word per element, identity = empty word."""
        gens = self.generating_set()
        word = {0: ()}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in word:
                        word[y] = word[x] + (g,)
                        nxt.append(y)
            frontier = nxt
        if len(word) != len(self):
            raise InternalConsistencyError("generating set does not generate")
        return word

    def subgroup_elements(self, gen: int):
        out = [0]
        x = gen
        while x != 0:
            out.append(x)
            x = self.table[x][gen]
        return sorted(out)

    def conjugate(self, x: int, by: int) -> int:
        return self.table[self.table[by][x]][self.inv(by)]

    def key(self):
        return (self.names, self.table, tuple(a.perm for a in self.action))

    def same_model(self, other: "GaloisModel") -> bool:
        return self.rs is other.rs and self.key() == other.key()

    def __repr__(self):
        return f"GaloisModel({'/'.join(self.names)} on {self.rs!r})"


def _cyclic(n: int):
    names = ["e"] + [f"g{k}" if n > 2 else "g" for k in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return names, table


_S3_NAMES = ("e", "r", "rr", "s", "rs", "rrs")


def _s3_table():
    # r^3 = s^2 = e, s r s = r^-1; element = r^a s^b encoded (a, b)
    enc = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
    idx = {v: i for i, v in enumerate(enc)}

    def mul(x, y):
        a, b = x
        c, d = y
        # (r^a s^b)(r^c s^d) = r^(a + c*(-1)^b) s^(b+d)
        return ((a + (c if b == 0 else -c)) % 3, (b + d) % 2)

    return [[idx[mul(x, y)] for y in enc] for x in enc]


def build_galois_model(spec, rs: RootSystem) -> GaloisModel:
    """Build a model from a preset name or an explicit table + action dict.

    Presets: "trivial", "cN:inner" (cyclic, trivial action), "c2:outer"
    (cyclic of order 2 through the diagram flip, where one exists),
    "c3:outer" (Z/3 into triality, D4 only), "s3" (S3 onto Aut(D4)).
    """
    if isinstance(spec, str):
        return _preset_model(spec, rs)
    if isinstance(spec, dict):
        return model_from_dict(spec, rs)
    raise InvalidInput("galois spec must be a preset name or a model dict")


def _identity_auts(rs, n):
    ident = DiagramAut(tuple(range(rs.rank + 1)))
    return [ident] * n


def _preset_model(name: str, rs: RootSystem) -> GaloisModel:
    name = name.strip()
    if name == "trivial":
        return GaloisModel(["e"], [[0]], _identity_auts(rs, 1), rs)
    if name == "s3":
        if not (rs.is_simple and str(rs.type) == "D4"):
            raise InvalidInput("preset 's3' needs type D4 (Aut of the diagram is S3 only there)")
        rot = DiagramAut((0, 3, 2, 4, 1))   # fixes a2 and a0, cycles a1, a3, a4
        flip = DiagramAut((0, 1, 2, 4, 3))  # swaps a3, a4
        table = _s3_table()
        by_word = {0: DiagramAut(tuple(range(5)))}
        action = []
        enc = [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
        for a, b in enc:
            aut = DiagramAut(tuple(range(5)))
            for _ in range(a):
                aut = aut.compose(rot)
            if b:
                aut = aut.compose(flip)
            action.append(aut)
        return GaloisModel(_S3_NAMES, table, action, rs)
    if ":" in name:
        base, variant = name.split(":", 1)
        if base.startswith("c") and base[1:].isdigit():
            n = int(base[1:])
            if n < 1:
                raise InvalidInput("cyclic preset needs order >= 1")
            names, table = _cyclic(n)
            if variant == "inner":
                return GaloisModel(names, table, _identity_auts(rs, n), rs)
            if variant == "outer":
                gen_aut = _outer_generator(rs, n)
                action = []
                cur = DiagramAut(tuple(range(rs.rank + 1)))
                for _ in range(n):
                    action.append(cur)
                    cur = cur.compose(gen_aut)
                return GaloisModel(names, table, action, rs)
    raise InvalidInput(f"unknown galois preset {name!r}")


def _outer_generator(rs: RootSystem, n: int) -> DiagramAut:
    auts = enumerate_delta_automorphisms(rs)
    candidates = [a for a in auts if not a.is_identity()]
    of_order = []
    for a in candidates:
        k, cur = 1, a
        while not cur.is_identity():
            cur = cur.compose(a)
            k += 1
        if k == n:
            of_order.append(a)
    if not of_order:
        raise InvalidInput(
            f"type {rs.type} admits no diagram automorphism of order {n}; "
            f"the outer preset is incompatible with it"
        )
    if n == 3:
        # triality: pick the rotation cycling a1 -> a3 -> a4 (D4 only)
        pick = [a for a in of_order if a.perm == (0, 3, 2, 4, 1)]
        return pick[0] if pick else sorted(of_order, key=lambda a: a.perm)[0]
    return sorted(of_order, key=lambda a: a.perm)[0]


def model_from_dict(data: dict, rs: RootSystem) -> GaloisModel:
    try:
        names = list(data["elements"])
        table = [list(r) for r in data["table"]]
        action_spec = dict(data.get("action", {}))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed galois model: {exc}") from exc
    action = []
    for nm in names:
        perm = action_spec.get(str(nm))
        if perm is None:
            action.append(DiagramAut(tuple(range(rs.rank + 1))))
        else:
            if sorted(perm) != list(range(1, rs.rank + 1)):
                raise InvalidInput(
                    f"action for {nm!r} must permute the simple nodes 1..{rs.rank}"
                )
            action.append(DiagramAut((0,) + tuple(perm)))
    return GaloisModel(names, table, action, rs)


def model_to_dict(model: GaloisModel) -> dict:
    action = {}
    for nm, aut in zip(model.names, model.action):
        if not aut.is_identity():
            action[nm] = list(aut.perm[1:])
    return {
        "elements": list(model.names),
        "table": [list(r) for r in model.table],
        "action": action,
    }


def load_galois_model(path: str, rs: RootSystem) -> GaloisModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh), rs)


# -- places --------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A Frobenius class: a cyclic decomposition subgroup up to conjugacy."""

    model_key: tuple
    generator: int
    subgroup: tuple

    def name(self, model: GaloisModel) -> str:
        return f"<{model.names[self.generator]}>"


def places(model: GaloisModel):
    """One place per conjugacy class of cyclic subgroups, every element covered."""
    n = len(model)
    subs = {}
    for g in range(n):
        h = tuple(model.subgroup_elements(g))
        subs.setdefault(h, []).append(g)
    classes = []
    seen = set()
    for h in sorted(subs, key=lambda h: (len(h), h)):
        if h in seen:
            continue
        orbit = set()
        for x in range(n):
            conj = tuple(sorted(model.conjugate(e, x) for e in h))
            orbit.add(conj)
        seen |= orbit
        gen = min(g for hh in orbit if hh in subs for g in subs[hh])
        canonical = tuple(model.subgroup_elements(gen))
        classes.append(Place(model.key(), gen, canonical))
    for g in range(n):
        if not any(
            tuple(sorted(model.conjugate(e, x) for e in model.subgroup_elements(g)))
            == p.subgroup
            for p in classes
            for x in range(n)
        ):
            raise InternalConsistencyError("an element generates no listed place")
    return classes


def restrict_model(model: GaloisModel, elements) -> tuple[GaloisModel, list[int]]:
    """Submodel on the given closed element set; returns (model, index map)."""
    elems = sorted(set(elements))
    if 0 not in elems:
        raise InvalidInput("a subgroup must contain the identity")
    pos = {e: i for i, e in enumerate(elems)}
    for a in elems:
        for b in elems:
            if model.table[a][b] not in pos:
                raise InvalidInput("element set is not closed under multiplication")
    names = [model.names[e] for e in elems]
    table = [[pos[model.table[a][b]] for b in elems] for a in elems]
    action = [model.action[e] for e in elems]
    return GaloisModel(names, table, action, model.rs), elems


# -- cocycles ------------------------------------------------------------------


@dataclass(frozen=True)
class Cocycle:
    """A 1-cocycle on the model with values in Omega (as diagram automorphisms)."""

    values: tuple  # DiagramAut per element index

    def value(self, a: int) -> DiagramAut:
        return self.values[a]

    def sigma_prime(self, model: GaloisModel, a: int) -> DiagramAut:
        """The composite automorphism value(a) . phi(a) of the completed diagram."""
        return self.values[a].compose(model.phi(a))

    def is_trivial(self) -> bool:
        return all(v.is_identity() for v in self.values)

    def key(self):
        return tuple(v.perm for v in self.values)


def enumerate_cocycles(model: GaloisModel, omega_elements) -> list[Cocycle]:
    """All maps c with c(st) = c(s) . phi(s) c(t) phi(s)^{-1}, i.e. exactly those
    for which sigma -> c(sigma) phi(sigma) is a homomorphism into Aut(D_a).

    Values are assigned on a generating set and propagated through the table.
    """
    omega_auts = [om.aut for om in omega_elements]
    omega_perms = {a.perm for a in omega_auts}
    n = len(model)
    gens = model.generating_set()
    words = model.words()
    ident = DiagramAut(tuple(range(model.rs.rank + 1)))
    results = []
    for choice in product(omega_auts, repeat=len(gens)):
        gen_val = dict(zip(gens, choice))
        # sigma' = c(sigma) phi(sigma); build along words, then check globally
        sp = {0: model.phi(0)}
        ok = True
        for e in range(n):
            cur = ident
            for g in words[e]:
                cur = cur.compose(gen_val[g].compose(model.phi(g)))
            sp[e] = cur
        for a in range(n):
            for b in range(n):
                if sp[model.table[a][b]].perm != sp[a].compose(sp[b]).perm:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        vals = []
        for e in range(n):
            v = sp[e].compose(model.phi(e).inverse())
            if v.perm not in omega_perms:
                ok = False
                break
            vals.append(v)
        if ok:
            results.append(Cocycle(tuple(vals)))
    uniq = {c.key(): c for c in results}
    return [uniq[k] for k in sorted(uniq)]
