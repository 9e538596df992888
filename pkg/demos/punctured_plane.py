"""
The punctured plane, end to end
===============================

K has two isolated vertices, so Y_K is C^2 minus the origin.  We build both
models, compare their Ext tables and read off the quiver with relations.
"""

from skeleta.cli import quiver_presentation, render_quiver
from skeleta.kmonomial import KMonomialCandidate, run_all
from skeleta.koszul import KoszulSpec, acyclicity_test
from skeleta.posetalg import ext_table_A
from skeleta.simplicial import Face, SimplicialComplex, components
from skeleta.toric import ToricCover, build_B_category, cohomology_weight, ext_table_B

K = SimplicialComplex.from_facets(2, [[1], [2]])

# Six smooth components: four quadrants of the zero section, two half-fibres.
for c in components(K):
    print(c, c.sample_point(2, epsilon=0.5))

# Weight pieces of H(Y_K, O).  Only the negative quadrant carries H^1.
cover = ToricCover(K)
for m in [(0, 0), (2, 1), (-1, 3), (-1, -1), (-3, -2)]:
    print(m, cohomology_weight(cover, m))

# The B-side category and its axiom report.
D, F = build_B_category(K)
for rep in run_all(KMonomialCandidate(K, D, F, translation="labels")):
    print(rep.summary())

# {1,2} is the only nonface, so its Koszul complex is the only acyclic one.
for I in [Face(), Face.of(1), Face.of(2), Face.of(1, 2)]:
    print(I, acyclicity_test(KoszulSpec(I), F))

# A-side and B-side Ext tables agree entry by entry.
tA, tB = ext_table_A(K), ext_table_B(K, D)
print("tables agree:", tA == tB)
print(tB.to_tsv())

# Four arrows e_1, e_2, one commuting square, one class in degree 1.
print(render_quiver(quiver_presentation(K)))
