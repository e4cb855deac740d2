#!/usr/bin/env python3
"""The local-global principle at desk scale: equivalence at every place forces
global equivalence, and dropping places genuinely loses information."""

from endatlas import (
    build_galois_model,
    build_root_system,
    check_local_global,
    counterexample_search,
    exhaustive_local_global,
    places,
)
from endatlas.elliptic import brute_force_inventory

rs = build_root_system("A2")
galois = build_galois_model("c3:inner", rs)
inventory = brute_force_inventory(rs, galois, 6)
print(f"A2 over Z/3: {len(inventory)} elliptic data up to equivalence")

d1, d2 = inventory[1], inventory[2]
verdict = check_local_global(d1, d2)
print("comparing the two order-3 torus data:")
for place, witness in verdict.local:
    print(f"   at place {place.name(galois)}: {'equivalent' if witness else 'inequivalent'}")
print(f"   globally: {'equivalent' if verdict.globally_equivalent else 'inequivalent'}")
print(f"   local-global consistent: {verdict.consistent}")

report = exhaustive_local_global(rs, galois, 6)
print(f"\nexhaustive check: {report.n_pairs} pairs, {report.n_consistent} consistent")

trivial_place = places(galois)[0]
cert = counterexample_search(rs, galois, [trivial_place], 6)
print(
    "\nrestricting to the trivial place alone admits a counterexample:",
    cert is not None,
)
cert_full = counterexample_search(rs, galois, places(galois), 6)
print("with every place in play the search returns:", cert_full)
