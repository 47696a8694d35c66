"""
Dividing by the circle and checking everything
==============================================

The 5-d atlas descends to Reid's atlas; run_suite samples every identity.
"""

import numpy as np

from s1resolve.chartcore import quotient_array, scaled_error
from s1resolve.resolve4d import build_atlas4
from s1resolve.resolve5d import build_atlas5
from s1resolve.verifykit import CheckConfig, Mutation, run_mutated, run_suite

a5, a4 = build_atlas5((7, 3)), build_atlas4((7, 3))

# on |q2| = 1 the quotient of g_1 is Reid's f_0
g, f = a5.transitions[0], a4.transitions[0]
rng = np.random.default_rng(1)
X = np.stack([rng.normal(size=4) + 1j, np.exp(2j * np.pi * rng.random(4)),
              np.exp(2j * np.pi * rng.random(4))], -1)
lhs = quotient_array(g.dst, g.apply(X))
rhs = f.apply(quotient_array(g.src, X))
print("quotient o g_1 vs f_0 o quotient:", scaled_error(lhs, rhs).max())

# the whole suite, small sample counts
report = run_suite((7, 3), CheckConfig(seed=42, samples_per_check=200, group_samples=20))
print(report.to_markdown()[:600])

# a wrong b in the chain is caught
bad = run_mutated((7, 3), Mutation("chain_b", "g_1", 0, 1), CheckConfig(samples_per_check=200, group_samples=20))
print("mutated verdict:", "pass" if bad.passed else "fail", [r.name for r in bad.failures()][:3])
