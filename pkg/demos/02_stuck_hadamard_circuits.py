"""
A Hadamard stuck at the wrong angle
===================================

``Hs(theta)`` is the reflection ``[[cos, sin], [sin, -cos]]``; at 45 degrees it
is the ordinary Hadamard.  Where the stuck gate sits decides whether its
damage can be undone locally.
"""

import math

import numpy as np

from gatecomplexity import faultcircuits as fc
from gatecomplexity.infocomplexity import purity, von_neumann_entropy
from gatecomplexity.qcore import schmidt_rank

theta = math.radians(30)

# stuck gate before the control: the register stays a product state, so
# the damaged wire can be repaired on its own
r2 = fc.run_fig2(theta)
print("upper wire after the fault:", np.round(r2.upper_state.amplitudes.real, 5))
print("after repair:              ", np.round(r2.corrected_upper.amplitudes.real, 5))
print("Schmidt rank:", schmidt_rank(r2.joint_state, 1))

# stuck gate on the target: the fault entangles the wires, and the upper
# wire's reduced state is mixed, which no local unitary can fix
r3 = fc.run_fig3(theta)
print("\nreduced state of the upper wire:\n", np.round(r3.rho_a.entries.real, 5))
print("purity:", round(purity(r3.rho_a), 6), " locally correctable:", r3.locally_correctable)

# purity over a quarter turn; only 45 degrees is clean
print("\n deg   purity   entropy")
for deg in range(0, 91, 15):
    rho = fc.run_fig3(math.radians(deg)).rho_a
    print(f"{deg:4d}  {purity(rho):.5f}  {von_neumann_entropy(rho):.5f}")
