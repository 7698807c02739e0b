"""Reaction-field expansions with equivalent polarization sources.

Charges in the middle layer of a three-layer slab; the reaction component
(1,1) is expanded about the polarization image of the source box center.
The multipole expansion, the local expansion and the M2L translation all
converge geometrically against the brute-force Sommerfeld oracle, at the
rate set by the Euclidean distance to the polarization sources.
"""

import math

import numpy as np

from layerfmm import (
    Box,
    LayeredMedium,
    density_bound,
    eval_expansion,
    eval_reaction_green,
    eval_reaction_me,
    generate_charges,
    m2l_reaction,
    polarization_source,
    reaction_me_from_charges,
)
from layerfmm.expansions import reaction_le_from_charges, truncated

slab = LayeredMedium([0.0, -1.0], [1, 1, 1], [1.0, 3.0, 8.0])
a, b, ell, ellp = 1, 1, 1, 1

src_center = np.array([0.0, 0.0, -0.5])
system = generate_charges(3, 8, Box(src_center, 0.3), slab, ellp)
pol_center = polarization_source(slab, a, b, ell, ellp, src_center)
print("source box center ", src_center, " -> polarization center", pol_center)

target = np.array([0.1, 0.05, -0.25])
oracle = sum(
    qj * eval_reaction_green(slab, a, b, ell, ellp, target, pj, 1e-12)
    for qj, pj in zip(system.q, system.positions)
)
msig = density_bound(slab, ell, ellp, a, b)
r_s = np.linalg.norm(target - pol_center)
q_total = system.total_abs_charge
print(f"oracle potential = {oracle:+.12e},  M_sigma = {msig:.4f}")

print("\np    reaction-ME error   theorem bound")
exp = reaction_me_from_charges(system, slab, a, b, ell, ellp, pol_center, 14,
                               radius=0.3)
for p in range(2, 15, 2):
    val = eval_reaction_me(truncated(exp, p), slab, target, 1e-12)
    bound = (q_total * msig / (4 * math.pi * (r_s - 0.3))
             * (0.3 / r_s) ** (p + 1))
    print(f"{p:2d}   {abs(val - oracle):.3e}          {bound:.3e}")

# local expansion about a target-side center
tc = np.array([0.0, 0.0, -0.3])
loc = reaction_le_from_charges(system, slab, a, b, ell, ellp, tc, 12,
                               rel_tol=1e-12)
x = tc + np.array([0.05, -0.02, 0.04])
ora_x = sum(
    qj * eval_reaction_green(slab, a, b, ell, ellp, x, pj, 1e-12)
    for qj, pj in zip(system.q, system.positions)
)
print("\nreaction LE (p = 12) error at a nearby point:",
      abs(eval_expansion(loc, x) - ora_x))

# M2L: translate the polarization-centered ME into a local expansion
tc2 = pol_center + 0.75 * np.array([0.45, 0.0, 0.893028])
loc2 = m2l_reaction(exp, slab, tc2, 14, 1e-12)
x2 = tc2 + np.array([0.03, 0.02, -0.02])
ora_x2 = sum(
    qj * eval_reaction_green(slab, a, b, ell, ellp, x2, pj, 1e-12)
    for qj, pj in zip(system.q, system.positions)
)
print("reaction M2L (p = 14) error at a box point:  ",
      abs(eval_expansion(loc2, x2) - ora_x2))
