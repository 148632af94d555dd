"""
Teleporting through a stuck Hadamard, and trying again
======================================================

With a stuck gate, one teleportation leaves the receiver with a distorted
qubit.  Teleporting the distorted qubit again can undo the distortion: the
state is restored exactly when the two measurement outcomes have occurred
equally often, so recovery is the first return of a random walk.
"""

import math

from gatecomplexity import recovery as rc
from gatecomplexity.faultcircuits import teleport_once

alpha, beta = math.sqrt(0.3), math.sqrt(0.7)
theta = math.radians(30)

# one pass: two branches, neither equal to the input
r = teleport_once(alpha, beta, theta)
for b, out in zip(r.branches, r.outputs):
    print(f"outcome {b.outcome}: p = {b.probability:.3f}, receiver = {out.amplitudes.real.round(4)}")

# equiprobable outcomes: the exact series, confirmed by brute-force enumeration
series = rc.series_distribution(8)
oracle = rc.first_passage_oracle(16)
print("\npass  series     enumerated")
for n in range(1, 9):
    print(f"{n:4d}  {str(series.pass_probability(n)):9s}  {oracle.pass_probability(n)}")
print("recovered within 8 passes:", float(series.total))

# Born-rule weights: every balanced path of length 2n has weight (cos*sin)^(2n),
# so the total tends to 1 - |cos 2 theta| instead of 1
exact = rc.exact_recovery_distribution(alpha, beta, theta, 30)
print("\nBorn-rule pass 1, 2:", exact.per_pass[:2], " total:", round(exact.total, 6),
      " limit:", 1 - abs(math.cos(2 * theta)))

# sampling agrees with both models and does not depend on the worker count
mc = rc.monte_carlo_recovery(trials=500_000, seed=1, model="idealized", max_passes=4, workers=4)
print("\nMonte Carlo (equiprobable):", [round(p, 4) for p in mc.per_pass])
mc = rc.monte_carlo_recovery(alpha, beta, theta, 500_000, seed=1, model="exact_born", max_passes=4, workers=4)
print("Monte Carlo (Born rule):   ", [round(p, 4) for p in mc.per_pass])
