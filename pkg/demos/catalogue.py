"""
Mirror comparison over every small complex
==========================================

Walk through all vertex-complete complexes on at most three vertices and
compare the two Ext tables.  Then look at one complex in detail: the hollow
triangle, whose nonface {1,2,3} yields a degree-2 class.
"""

import time

from skeleta.posetalg import ext_table_A, represent_subset
from skeleta.simplicial import Face, boundary_of_simplex, enumerate_complexes
from skeleta.toric import cohomology_closed_form, ext_table_B

t0 = time.perf_counter()
for n in range(4):
    for K in enumerate_complexes(n):
        diff = ext_table_A(K).diff(ext_table_B(K))
        print(K.to_json(), "agree" if not diff else diff)
print(f"{time.perf_counter() - t0:.2f}s")

K = boundary_of_simplex(3)
X = represent_subset(K, Face.full(3))
print("resolution of D_123:", X)

t = ext_table_B(K)
print("Ext(D_123, D_0) =", t[(Face.full(3), Face())])

# closed form: H^p at weight m is reduced cohomology of K on the negative coordinates
print(cohomology_closed_form(K, (-1, -1, -1)))
