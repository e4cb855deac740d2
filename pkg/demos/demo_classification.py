#!/usr/bin/env python3
"""Classify elliptic endoscopic data for a few (type, Galois model) pairs and
certify each table against the independent brute-force inventory."""

from endatlas import (
    brute_force_inventory,
    build_galois_model,
    build_root_system,
    classify_elliptic,
)
from endatlas.elliptic import match_classification
from endatlas.serialize import report_to_markdown
from endatlas.suites import default_order_bound

for type_name, galois_spec in [
    ("A1", "c2:inner"),
    ("A2", "c3:inner"),
    ("C3", "c2:inner"),
    ("D4", "s3"),
]:
    rs = build_root_system(type_name)
    galois = build_galois_model(galois_spec, rs)
    report = classify_elliptic(rs, galois)
    print(report_to_markdown(report))
    bound = default_order_bound(rs, galois)
    inventory = brute_force_inventory(rs, galois, bound)
    ok = match_classification(report, inventory)
    print(
        f"inventory with order bound {bound}: {len(inventory)} data; "
        f"bijective match: {ok}"
    )
    print()
