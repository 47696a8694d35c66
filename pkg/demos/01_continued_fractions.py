"""
Continued fractions of cyclic quotient types
============================================

The minus continued fraction r/a = b1 - 1/(b2 - 1/...) drives everything else.
"""

from s1resolve.hjarith import FiberType, canonicalize, dual_numerators, hj_evaluate, hj_expand

t = FiberType(7, 3)
e = hj_expand(t)
print(t, "->", e)                 # [3,2,2] remainders 7,3,2,1,0
print("value back:", hj_evaluate(e.b))

# the remainders a_{-1}=r, a_0=a, ... satisfy a_{i-2} = a_{i-1} b_i - a_i
for i in range(1, e.n + 1):
    print(f"  {e.remainder(i - 2)} = {e.remainder(i - 1)}*{e.b[i - 1]} - {e.remainder(i)}")

# dual numerators run from 1 up to r
print("dual numerators:", dual_numerators(e))

# a is only defined mod r, so inputs are canonicalized
print(canonicalize(7, 10), canonicalize(7, -4))

# the length of 1/r(1,1) is always one
for r in (2, 3, 9):
    print(FiberType(r, 1), hj_expand((r, 1)))
