"""
The circle-equivariant atlas of a resolved fiber
================================================

Charts X_i carry weights (a_{i-1}, -1, -a_i); neighbours are glued by ChainG.
"""

import numpy as np

from s1resolve.chartcore import ChartPoint, act_array, scaled_error
from s1resolve.resolve5d import build_atlas5, exceptional_chain
from s1resolve.transitions import eval_transition

atlas = build_atlas5((7, 3))
for c in atlas.charts:
    print(c.id, [k.value for k in c.slots], c.weights)
for m in atlas.transitions:
    print(m.tag, m.p, m.src.id, "->", m.dst.id)

# evaluate the first gluing on a single point
g1 = atlas.transitions[0]
print(eval_transition(g1, ChartPoint("X0", (1, 1, 2))))

# equivariance: g(t.x) == t.g(x) with the declared weights on each side
rng = np.random.default_rng(0)
X = np.stack([rng.normal(size=5) + 1j * rng.normal(size=5),
              np.exp(2j * np.pi * rng.random(5)),
              rng.normal(size=5) + 1j * rng.normal(size=5)], -1)
t = np.exp(2j * np.pi * rng.random(5))
lhs = g1.apply(act_array(g1.src.weights, t, X))
rhs = act_array(g1.dst.weights, t, g1.apply(X))
print("equivariance error:", scaled_error(lhs, rhs).max())

# the exceptional set: S2xS1 pieces capped by an S3
chain = exceptional_chain(atlas)
print(chain.types)
print([(i, j) for i, j, _ in chain.adjacency])
