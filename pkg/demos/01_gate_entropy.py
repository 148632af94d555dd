"""
Control entropy of simple classical gates
=========================================

A gate that maps an input distribution to an output distribution has to
supply (or may discard) the difference in entropy.  Multiplying by ``k``
stretches a uniform input by ``k``, so it costs ``log2(k)`` bits.
"""

import numpy as np

from gatecomplexity import infocomplexity as ic

# multipliers: stretching costs bits, shrinking releases them
for k in (8, 2, 1, 0.5, 0.125):
    r = ic.multiplier_gate_complexity(k)
    print(f"k = {k:<6} control entropy = {r.control_entropy:+.3f} bits")

# a fixed rotation only relabels its input, so it is free
print("rotation:", ic.rotation_gate_complexity().control_entropy, "bits")

# a uniform source on [0, 1) read on a grid of 2**-10 carries 10 bits
src = ic.Distribution.uniform(0, 1)
print("precision entropy:", ic.precision_entropy(src, 2**-10), "bits")

# the histogram estimator recovers the same answer from samples
samples = np.random.default_rng(0).uniform(0, 1, 200_000)
h = ic.differential_entropy(ic.Distribution.empirical(samples))
print(f"estimated differential entropy of the samples: {h:+.4f} bits (exact 0)")

# a mismatch between input and output precision is charged too
prec = ic.PrecisionModel(delta_in=2**-4, delta_out=2**-8)
print("k = 1 with a finer output grid:", ic.multiplier_gate_complexity(1, prec=prec).control_entropy, "bits")
