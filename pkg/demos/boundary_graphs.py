"""Walk through the boundary-graph catalogue: topology, symmetry and sector exponents."""
from tensor_sde import colored_graph as cg
from tensor_sde.scaling import solve

assignment = solve(beta=0)

print("%-10s %3s %3s %5s %5s %7s" % ("class", "k", "B", "genus", "|Aut|", "alpha"))
for name in cg.CLASS_NAMES:
    g = cg.catalog_graph(name)
    bc = cg.boundary_class(name)
    print("%-10s %3d %3d %5d %5d %7s" % (name, bc.k, bc.component_count, bc.genus,
                                        cg.count_automorphisms(g), assignment.alpha_of(name)))

# exchanging the colour-c edges of the two white vertices of a pillow
v1 = cg.catalog_graph("V_1")
for color in (1, 2, 3):
    print("swap colour %d of V_1 ->" % color, cg.classify(cg.swap(v1, color, (0, 1))).name)
