"""Free-space multipole machinery: ME, LE, M2M, L2L, M2L.

Random charge cloud in the unit ball; every operator is compared against
the brute-force potential sum and against the exponential error bounds
(a_s/r)^{p+1}-style.  M2M and truncated L2L are exact and checked as
such.
"""

import math

import numpy as np

from layerfmm import (
    ChargeSystem,
    direct_potential,
    eval_expansion,
    l2l,
    le_from_charges,
    m2l_free,
    m2m,
    me_from_charges,
)
from layerfmm.expansions import truncated

rng = np.random.default_rng(7)
n = 20
d = rng.normal(size=(n, 3))
d /= np.linalg.norm(d, axis=1, keepdims=True)
pos = d * rng.uniform(0, 1, (n, 1)) ** (1 / 3)
system = ChargeSystem.free_space(rng.uniform(-1, 1, n), pos)
q_total = system.total_abs_charge

# multipole expansion, evaluated at r = 4 a_s
target = np.array([2.3, 2.1, 2.2])
r_s = np.linalg.norm(target)
oracle = direct_potential(system, target)
exp = me_from_charges(system, np.zeros(3), 16, radius=1.0)
print("p    ME error      theorem bound")
for p in range(2, 17, 2):
    err = abs(eval_expansion(truncated(exp, p), target) - oracle)
    bound = q_total / (4 * math.pi * (r_s - 1)) * (1 / r_s) ** (p + 1)
    print(f"{p:2d}   {err:.3e}    {bound:.3e}")

# M2M is exact: shifting equals recomputation
shifted = m2m(exp, np.array([0.4, -0.2, 0.1]))
recomputed = me_from_charges(system, np.array([0.4, -0.2, 0.1]), 16, radius=1.6)
agree = np.abs(shifted.coeff - recomputed.coeff).max()
print("\nM2M shift vs recomputation:", agree / np.abs(recomputed.coeff).max())

# a local expansion of distant sources, shifted exactly by L2L
far = ChargeSystem.free_space(system.q, d * rng.uniform(3.0, 5.0, (n, 1)))
loc = le_from_charges(far, np.zeros(3), 12, radius=2.0)
moved = l2l(loc, np.array([0.3, 0.1, -0.2]))
x = np.array([0.5, -0.3, 0.2])
print("L2L pointwise agreement:",
      abs(eval_expansion(loc, x) - eval_expansion(moved, x)))

# M2L between well-separated boxes (c = 3)
tc = 4.0 * np.array([0.6, 0.64, 0.48])
print("\np    M2L error     theorem bound   (c = 3)")
for p in (4, 8, 12, 16):
    loc2 = m2l_free(truncated(exp, p), tc, p)
    x = tc + np.array([0.3, -0.2, 0.1])
    err = abs(eval_expansion(loc2, x) - direct_potential(system, x))
    bound = q_total / (4 * math.pi * 2.0) * (2.0 / 4.0) ** (p + 1)
    print(f"{p:2d}   {err:.3e}    {bound:.3e}")
