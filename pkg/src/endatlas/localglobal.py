"""Desk-scale local-global verification and counterexample search.

Every element of the finite model is a Frobenius for some place, so "almost
all places" is modeled by quantifying over all of them; the consistency flag
asserts that local equivalence everywhere forces global equivalence.  The
weaker hypotheses of the remark (restricted place families, elliptic places
only) are exercised by an explicit search that returns evidence or nothing.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ._config import thread_degree
from .errors import InvalidInput
from .galois import GaloisModel, places
from .rootsys import RootSystem
from .endodata import EndoscopicDatum, equivalent, is_elliptic, localize
from .elliptic import brute_force_inventory


@dataclass
class LocalGlobalVerdict:
    datum1: EndoscopicDatum
    datum2: EndoscopicDatum
    local: list  # (Place, witness or None)
    global_witness: object
    consistent: bool

    @property
    def locally_equivalent_everywhere(self) -> bool:
        return all(w is not None for _, w in self.local)

    @property
    def globally_equivalent(self) -> bool:
        return self.global_witness is not None


def check_local_global(d1: EndoscopicDatum, d2: EndoscopicDatum) -> LocalGlobalVerdict:
    """Localize at every place, compare, and check the local-global direction."""
    if not d1.galois.same_model(d2.galois):
        raise InvalidInput("data live over different Galois models")
    local = []
    for v in places(d1.galois):
        w = equivalent(localize(d1, v), localize(d2, v))
        local.append((v, w))
    g = equivalent(d1, d2)
    everywhere = all(w is not None for _, w in local)
    consistent = (not everywhere) or (g is not None)
    return LocalGlobalVerdict(
        datum1=d1, datum2=d2, local=local, global_witness=g, consistent=consistent
    )


@dataclass
class LocalGlobalReport:
    n_data: int
    n_pairs: int
    n_consistent: int
    falsifiers: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.falsifiers


def exhaustive_local_global(
    rs: RootSystem, galois: GaloisModel, order_bound: int, cap: int = 10**6
) -> LocalGlobalReport:
    """Consistency of every pair from the bounded inventory.

    Pairwise checks are independent and run across ENDATLAS_THREADS workers;
    the aggregation order is fixed, so the report is deterministic.
    """
    inventory = brute_force_inventory(rs, galois, order_bound, cap=cap)
    pairs = [
        (inventory[i], inventory[j])
        for i in range(len(inventory))
        for j in range(i, len(inventory))
    ]
    degree = thread_degree()
    if degree > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=degree) as pool:
            verdicts = list(pool.map(lambda p: check_local_global(*p), pairs))
    else:
        verdicts = [check_local_global(a, b) for a, b in pairs]
    fals = [
        (a, b, v) for (a, b), v in zip(pairs, verdicts) if not v.consistent
    ]
    return LocalGlobalReport(
        n_data=len(inventory),
        n_pairs=len(pairs),
        n_consistent=sum(1 for v in verdicts if v.consistent),
        falsifiers=fals,
    )


@dataclass
class Certificate:
    datum1: EndoscopicDatum
    datum2: EndoscopicDatum
    place_family: list
    local_witnesses: list  # aligned with place_family


def counterexample_search(
    rs: RootSystem,
    galois: GaloisModel,
    place_subset,
    order_bound: int,
    remark_mode: bool = False,
    cap: int = 10**6,
):
    """Search the inventory for pairs locally equivalent on the given places
    but globally inequivalent; returns a Certificate or None.

    With ``remark_mode`` the candidate pairs must additionally be simultaneously
    elliptic or non-elliptic at every place, and equivalent wherever elliptic.
    """
    all_places = places(galois)
    subset = list(place_subset)
    for v in subset:
        if v not in all_places:
            raise InvalidInput("place subset contains a place of another model")
    inventory = brute_force_inventory(rs, galois, order_bound, cap=cap)
    for i in range(len(inventory)):
        for j in range(i + 1, len(inventory)):
            d1, d2 = inventory[i], inventory[j]
            if equivalent(d1, d2) is not None:
                continue
            if remark_mode:
                ok = True
                witnesses = []
                for v in all_places:
                    l1, l2 = localize(d1, v), localize(d2, v)
                    e1, e2 = is_elliptic(l1), is_elliptic(l2)
                    if e1 != e2:
                        ok = False
                        break
                    if e1:
                        w = equivalent(l1, l2)
                        if w is None:
                            ok = False
                            break
                        witnesses.append((v, w))
                if ok:
                    return Certificate(
                        datum1=d1,
                        datum2=d2,
                        place_family=[v for v, _ in witnesses],
                        local_witnesses=[w for _, w in witnesses],
                    )
                continue
            witnesses = []
            ok = True
            for v in subset:
                w = equivalent(localize(d1, v), localize(d2, v))
                if w is None:
                    ok = False
                    break
                witnesses.append(w)
            if ok:
                return Certificate(
                    datum1=d1, datum2=d2, place_family=subset, local_witnesses=witnesses
                )
    return None
