"""Reaction densities of a layered medium.

Builds a two-layer (dielectric half-space) and a three-layer slab medium,
evaluates the four spectral densities sigma^{ab}(k) on a grid, and
estimates the uniform bounds M_sigma that enter every truncation-error
theorem.  For the half-space, sigma^{11}_{00} is constant in k and equals
the classical image-charge coefficient.
"""

import numpy as np

from layerfmm import LayeredMedium, density_bound, reaction_densities

# dielectric half-spaces, interface at z = 0, eps = (1, 4)
half_space = LayeredMedium(interfaces=[0.0], a=[1.0, 1.0], b=[1.0, 4.0])

k = np.linspace(0.0, 50.0, 9)
sig = reaction_densities(half_space, 0, 0, k).get(1, 1)
kappa = (1.0 - 4.0) / (1.0 + 4.0)
print("half-space sigma^11_00(k)   (expect constant", kappa, ")")
for ki, si in zip(k, sig):
    print(f"  k = {ki:5.1f}   sigma = {si.real:+.15f}")

print("\nbound M_sigma =", density_bound(half_space, 0, 0, 1, 1))

# three-layer slab: interfaces at 0 and -1, eps = (1, 3, 8)
slab = LayeredMedium(interfaces=[0.0, -1.0], a=[1, 1, 1], b=[1.0, 3.0, 8.0])
print("\nslab, middle-layer pair (l = l' = 1):")
dens = reaction_densities(slab, 1, 1, np.array([0.0, 1.0, 10.0, 100.0]))
for a, b in dens.components:
    vals = dens.get(a, b)
    bound = density_bound(slab, 1, 1, a, b)
    print(f"  sigma^{a}{b}: sigma(0) = {vals[0].real:+.6f}, "
          f"sigma(100) = {vals[-1].real:+.6f}, M_sigma = {bound:.6f}")

# densities are defined on the whole closed right half plane
kc = 3.0 + 20.0j
print("\nat complex k =", kc, ":")
for a, b in dens.components:
    v = reaction_densities(slab, 1, 1, kc).get(a, b)
    print(f"  sigma^{a}{b} = {v:+.6f}")
