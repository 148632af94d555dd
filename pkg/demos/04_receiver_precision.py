"""
How precisely must the receiver know the gate?
==============================================

The receiver decides when to stop by tracking outcome counts against its own
estimate of the stuck angle.  An estimate on a grid of step ``delta`` is fine
when the grid resolves the true angle, and useless when it rounds the angle
to zero.
"""

import math

from gatecomplexity.recovery import quantize_angle, quantized_recovery

alpha, beta = math.sqrt(0.3), math.sqrt(0.7)
theta_true = 0.01

for delta in (0.001, 0.1):
    r = quantized_recovery(alpha, beta, theta_true, delta, trials=200_000, seed=0, workers=4)
    print(f"delta = {delta}: estimate {quantize_angle(theta_true, delta):.4f}, "
          f"declared {r.recovered} times, mean fidelity {r.mean:.4f}, success {r.succeeded()}")

# the coarse receiver treats the gate as collapsed; its output is |0> or |1>,
# whose fidelity with the input is |alpha|^2 or |beta|^2
print("fidelity of a collapsed guess: 0.3 or 0.7")
