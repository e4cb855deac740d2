#!/usr/bin/env python3
"""Walk through the combinatorial substrate: roots, marks, and the completed
diagram, all in exact integer arithmetic in the simple-root basis."""

from endatlas import affine_diagram, build_root_system, subdiagram_components

for name in ["A2", "C3", "G2", "E8"]:
    rs = build_root_system(name)
    print(f"== {name}: {len(rs.all_roots)} roots, rank {rs.rank}")
    print("   highest root:", rs.highest_root)
    print("   marks on the completed diagram:", dict(rs.marks))
    total = [0] * rs.rank
    for node in rs.affine_nodes:
        for i, x in enumerate(rs.node_root(node)):
            total[i] += rs.marks[node] * x
    print("   sum of mark * root over all affine nodes:", tuple(total), "(always zero)")

print()
print("Completed C2 diagram:")
diag = affine_diagram(build_root_system("C2"))
for (i, j), mult, arrow in diag.bonds:
    tip = f", arrow at a{arrow}" if arrow is not None else ""
    print(f"   a{i} -- a{j}: multiplicity {mult}{tip}")

print()
print("Removing a node from the completed diagram leaves finite subsystems:")
c3 = build_root_system("C3")
for removed in c3.affine_nodes:
    rest = [n for n in c3.affine_nodes if n != removed]
    comps = subdiagram_components(c3, rest)
    desc = " + ".join(f"{ct}({' '.join('a%d' % n for n in nodes)})" for ct, nodes in comps)
    print(f"   affine C3 minus a{removed}: {desc}")
