"""
Reid's resolution of the orbit space
====================================

n+1 affine charts glued by (xi, eta) -> (1/eta, xi eta^b).
"""

import numpy as np

from s1resolve.resolve4d import boundary_model, build_atlas4, general_embedding, two_chart_reduction
from s1resolve.chartcore import scaled_error

atlas = build_atlas4((7, 3))
print([c.id for c in atlas.charts])
print([m.p["b"] for m in atlas.transitions], atlas.self_intersections)

# each chart embeds the smooth locus by a monomial map
V = np.array([[1.0, 5.0], [2j, 0.5 - 1j]])
for j in range(len(atlas.charts)):
    print(j, general_embedding(j, (7, 3)).apply(V)[0])

# gluings are compatible with the embeddings
for i, f in enumerate(atlas.transitions):
    err = scaled_error(f.apply(atlas.embeddings[i].apply(V)), atlas.embeddings[i + 1].apply(V))
    print(f"f_{i} o embed_{i} vs embed_{i + 1}:", err.max())

# one reduction step, 1/r(1,a) -> 1/a(1,a1), with its Z_a-invariant gluing
red = two_chart_reduction((7, 3))
print("next type 1/%d(1,%d)" % (red.a, red.a1))

# boundary pieces of the topological model
bm = boundary_model((7, 3))
print(bm.h1.tag, bm.h2.tag, bm.f3.tag)
