"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a result object whose ``ok`` is True exactly when zero
falsifiers were found within the configured caps.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from ._config import thread_degree
from .errors import CapExceeded
from .galois import GaloisModel, build_galois_model, places
from .rootsys import RootSystem, build_root_system
from .torus import TorusElement
from .weyl import WeylElement, enumerate_delta_automorphisms, enumerate_weyl
from .weyl import torus_action, weyl_membership
from .endodata import EndoscopicDatum, equivalent, standard_bprime_base
from .endodata import centralizer_roots, _transport_in_subsystem
from .elliptic import (
    brute_force_inventory,
    classify_elliptic,
    enumerate_pairs,
    match_classification,
    verify_sigma_structure,
)
from .localglobal import counterexample_search, exhaustive_local_global
from .reduction import (
    finite_order_reduction,
    fixers_agree,
    make_induced_model,
    reduction_preserves_equivalence,
    shapiro_descend,
    shapiro_induce,
    equivalence_transfers_under_shapiro,
)


def run_checks(checks):
    """Run independent zero-argument checks across ENDATLAS_THREADS workers."""
    degree = thread_degree()
    if degree <= 1 or len(checks) <= 1:
        return [c() for c in checks]
    with ThreadPoolExecutor(max_workers=degree) as pool:
        return list(pool.map(lambda c: c(), checks))


@dataclass
class SuiteResult:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)


def default_order_bound(rs: RootSystem, galois: GaloisModel) -> int:
    """Twice the largest constructed order over the enumerated pairs."""
    best = 1
    for pair in enumerate_pairs(rs, galois):
        best = max(best, sum(rs.marks[i] for i in pair.orbit))
    return 2 * best


def bijection_suite(type_str: str, galois_spec, max_order=None, cap: int = 10**6) -> SuiteResult:
    """classify_elliptic against the brute-force inventory, plus the round trip."""
    rs = build_root_system(type_str)
    galois = build_galois_model(galois_spec, rs)
    bound = max_order or default_order_bound(rs, galois)
    report = classify_elliptic(rs, galois)
    inventory = brute_force_inventory(rs, galois, bound, cap=cap)
    failures = []
    if not match_classification(report, inventory):
        failures.append(
            f"classification ({report.class_count} classes) does not match the "
            f"inventory ({len(inventory)} data)"
        )
    structure = [
        (pair, verify_sigma_structure(rs, galois, pair))
        for pair in enumerate_pairs(rs, galois)
    ]
    for pair, rep in structure:
        if not rep.ok:
            failures.append(f"pair {sorted(pair.orbit)}: {'; '.join(rep.violations)}")
    return SuiteResult(
        name="bijection",
        ok=not failures,
        details={
            "classes": report.class_count,
            "inventory": len(inventory),
            "order_bound": bound,
            "pairs_checked": len(structure),
        },
        failures=failures,
    )


def local_global_suite(type_str: str, galois_spec, max_order=None, cap: int = 10**6) -> SuiteResult:
    rs = build_root_system(type_str)
    galois = build_galois_model(galois_spec, rs)
    bound = max_order or default_order_bound(rs, galois)
    report = exhaustive_local_global(rs, galois, bound, cap=cap)
    failures = [
        f"inconsistent pair: {v}" for *_pair, v in report.falsifiers
    ]
    cert = counterexample_search(rs, galois, places(galois), bound, cap=cap)
    if cert is not None:
        failures.append("counterexample with the full place family (impossible)")
    return SuiteResult(
        name="local-global",
        ok=not failures,
        details={
            "data": report.n_data,
            "pairs": report.n_pairs,
            "consistent": report.n_consistent,
            "order_bound": bound,
        },
        failures=failures,
    )


# -- randomized reduction suite ----------------------------------------------------


_REDUCTION_TYPES = ("A1", "A2", "B2", "C2", "A3", "C3", "B3")


def _random_torus(rng: random.Random, rank: int, n_gens: int, force_free: bool) -> TorusElement:
    torsion = [Fraction(rng.randrange(0, 6), rng.choice((1, 2, 3, 4, 6))) for _ in range(rank)]
    free = [
        tuple(Fraction(rng.randrange(-2, 3)) for _ in range(n_gens)) for _ in range(rank)
    ]
    if force_free and not any(any(f) for f in free):
        i = rng.randrange(rank)
        free[i] = tuple(
            Fraction(1) if k == 0 else Fraction(0) for k in range(n_gens)
        )
    return TorusElement(torsion, free)


def _families_fixing(rs, galois, s, weyl_list):
    """All Borel-normalized cocycle families fixing s (as in the inventory)."""
    base = standard_bprime_base(rs, s)
    sub = centralizer_roots(rs, s)
    n = len(galois)
    cands = []
    for a in range(n):
        ca = {}
        for w in weyl_list:
            comp = w * galois.phi_lattice(a)
            if torus_action(comp, s) != s:
                continue
            if base:
                image = [comp(b) for b in base]
                v = _transport_in_subsystem(rs, sub, image, base)
                comp = v * comp
            ca[comp.images] = comp
        if not ca:
            return []
        cands.append(sorted(ca.values(), key=lambda m: m.images))
    gens = galois.generating_set()
    words = galois.words()
    out = []
    seen = set()
    for choice in product(*(cands[g] for g in gens)) if gens else [()]:
        gen_val = dict(zip(gens, choice))
        family = []
        for e in range(n):
            cur = WeylElement.identity(rs.rank)
            for g in words[e]:
                cur = cur * gen_val[g]
            family.append(cur)
        if not all(
            family[galois.table[a][b]] == family[a] * family[b]
            for a in range(n)
            for b in range(n)
        ):
            continue
        allowed = [{m.images for m in cands[a]} for a in range(n)]
        if not all(family[a].images in allowed[a] for a in range(n)):
            continue
        key = tuple(f.images for f in family)
        if key not in seen:
            seen.add(key)
            out.append(family)
    return out


def reduction_suite(n_trials: int = 200, seed: int = 20240 , types=_REDUCTION_TYPES) -> SuiteResult:
    """Randomized data with free coordinates: finiteness of t, fixer equality,

    class stability of the diagram parts, and agreement of equivalence verdicts
    before and after the reduction."""
    rng = random.Random(seed)
    failures = []
    trials = 0
    while trials < n_trials:
        type_str = rng.choice(types)
        rs = build_root_system(type_str)
        galois_names = ["trivial", "c2:inner", "c3:inner"]
        if type_str in ("A2", "A3"):
            galois_names.append("c2:outer")
        galois = build_galois_model(rng.choice(galois_names), rs)
        n_gens = rng.choice((1, 2))
        force_free = rng.random() < 0.85
        s = _random_torus(rng, rs.rank, n_gens, force_free)
        weyl_list = enumerate_weyl(rs)
        fams = _families_fixing(rs, galois, s, weyl_list)
        if not fams:
            continue
        f1 = rng.choice(fams)
        f2 = rng.choice(fams)
        d1 = EndoscopicDatum(
            rs, galois, s, f1, standard_bprime_base(rs, s), _validate=False
        )
        d2 = EndoscopicDatum(
            rs, galois, s, f2, standard_bprime_base(rs, s), _validate=False
        )
        trials += 1
        tag = f"trial {trials} ({type_str}, |Gamma|={len(galois)})"
        try:
            r1, r2, plan = finite_order_reduction(d1, d2)
        except CapExceeded:
            continue
        if not plan.t.is_finite_order():
            failures.append(f"{tag}: t has infinite order")
            continue
        if not plan.bypass:
            s_std = torus_action(plan.standardizer, s)
            all_maps = [
                w * aut.lattice(rs)
                for w in weyl_list
                for aut in enumerate_delta_automorphisms(rs)
            ]
            if not fixers_agree(rs, s_std, plan.t, all_maps):
                failures.append(f"{tag}: fixer sets of s and t differ")
            classes = [frozenset(plan.classes[k]) for k in range(len(plan.classes))]
            for u in all_maps:
                if torus_action(u, s_std) == s_std or torus_action(u, plan.t) == plan.t:
                    _, dpart = weyl_membership(rs, u)
                    for cl in classes:
                        if frozenset(dpart(i) for i in cl) != cl:
                            failures.append(
                                f"{tag}: a diagram part moved a free-part class"
                            )
                            break
        if not reduction_preserves_equivalence(d1, d2):
            failures.append(f"{tag}: equivalence verdicts changed under reduction")
    return SuiteResult(
        name="reduction",
        ok=not failures,
        details={"trials": trials},
        failures=failures,
    )


# -- shapiro suite -------------------------------------------------------------------


def _z_table(n):
    return [f"z{k}" if k else "e" for k in range(n)], [
        [(i + j) % n for j in range(n)] for i in range(n)
    ]


def shapiro_configurations(base_types=("A1", "A2")):
    """The (ambient, subgroup, base action) battery for the transfer checks."""
    from .galois import _S3_NAMES, _s3_table

    configs = []
    for t in base_types:
        rs = build_root_system(t)
        flips = [a for a in enumerate_delta_automorphisms(rs) if not a.is_identity()]
        z2n, z2t = _z_table(2)
        z4n, z4t = _z_table(4)
        s3t = _s3_table()
        # Z/2 with the trivial subgroup
        configs.append((t, "trivial", z2n, z2t, [0]))
        # Z/4 with its index-2 subgroup
        configs.append((t, "c2:inner", z4n, z4t, [0, 2]))
        # S3 with the index-2 (cyclic of order 3) subgroup
        configs.append((t, "c3:inner", list(_S3_NAMES), s3t, [0, 1, 2]))
        # S3 with an index-3 (order 2) subgroup
        configs.append((t, "c2:inner", list(_S3_NAMES), s3t, [0, 3]))
        if flips:
            configs.append((t, "c2:outer", list(_S3_NAMES), s3t, [0, 3]))
    return configs


def _base_data_for(rs, galois, bound=4):
    """A small pool of base data: the bounded inventory plus the principal datum."""
    try:
        return brute_force_inventory(rs, galois, bound)
    except CapExceeded:
        from .endodata import principal_datum

        return [principal_datum(rs, galois)]


def shapiro_suite(base_types=("A1", "A2")) -> SuiteResult:
    failures = []
    n_configs = 0
    n_pairs = 0
    for t, base_spec, names, table, emb in shapiro_configurations(base_types):
        rs = build_root_system(t)
        base_galois = build_galois_model(base_spec, rs)
        model = make_induced_model(base_galois, names, table, emb)
        n_configs += 1
        pool = _base_data_for(rs, base_galois)
        tag = f"{t}/{base_spec} in {'|'.join(names)}"
        for x in pool:
            y = shapiro_induce(x, model)
            back = shapiro_descend(y, model)
            if back != x:
                failures.append(f"{tag}: descend(induce(x)) differs from x")
            again = shapiro_induce(back, model)
            if equivalent(again, y) is None:
                failures.append(f"{tag}: induce(descend(y)) inequivalent to y")
        pair_index = [
            (i, j) for i in range(len(pool)) for j in range(i, len(pool))
        ]
        n_pairs += len(pair_index)
        verdicts = run_checks([
            (lambda i=i, j=j: equivalence_transfers_under_shapiro(pool[i], pool[j], model))
            for i, j in pair_index
        ])
        for (i, j), ok in zip(pair_index, verdicts):
            if not ok:
                failures.append(f"{tag}: equivalence did not transfer (pair {i},{j})")
    return SuiteResult(
        name="shapiro",
        ok=not failures,
        details={"configurations": n_configs, "pairs": n_pairs},
        failures=failures,
    )
