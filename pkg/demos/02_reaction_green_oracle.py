"""The reaction Green's function evaluated by Sommerfeld quadrature.

For a dielectric half-space the reaction field has a closed form: the
image charge scaled by (eps0 - eps1)/(eps0 + eps1).  The quadrature
engine reproduces it to the requested tolerance; this value is the oracle
that every expansion in the package is certified against.
"""

import math

import numpy as np

from layerfmm import LayeredMedium, eval_reaction_green
from layerfmm.sommerfeld import eval_reaction_potential

eps0, eps1 = 1.0, 4.0
med = LayeredMedium([0.0], [1.0, 1.0], [eps0, eps1])
kappa = (eps0 - eps1) / (eps0 + eps1)

source = np.array([0.2, -0.1, 0.8])
image = source * np.array([1.0, 1.0, -1.0])

print("target                          quadrature        image formula     |diff|")
rng = np.random.default_rng(0)
for _ in range(6):
    target = np.array([*rng.uniform(-1, 1, 2), rng.uniform(0.2, 2.0)])
    got = eval_reaction_green(med, 1, 1, 0, 0, target, source, tol=1e-12)
    exact = kappa / (4 * math.pi * np.linalg.norm(target - image))
    print(f"{np.array2string(target, precision=3):28}  {got:+.12e}  "
          f"{exact:+.12e}  {abs(got - exact):.1e}")

# source below the interface seen from above: only the component (1, 2)
# is present and it carries the whole transmitted field (for distinct
# layers there is no separate free-space term in the decomposition)
target = np.array([0.3, 0.4, 0.9])
below = np.array([0.0, 0.0, -0.5])
total = eval_reaction_potential(med, 0, 1, target, below, tol=1e-12)
free = 1.0 / (4 * math.pi * np.linalg.norm(target - below))
print("\ncross-layer field / free kernel =", total / free)
print("classical transmission 2 eps1/(eps0+eps1) =", 2 * eps1 / (eps0 + eps1))
