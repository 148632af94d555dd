"""Entropy bookkeeping for classically controlled gates.

A gate that maps input ``X`` to output ``Y`` under classical control ``C``
must supply ``H(C) = H(Y) - H(X)`` bits.  For continuous variables the
absolute entropy is the differential entropy minus ``log2`` of the
resolution, so with resolutions ``d_in`` and ``d_out``::

    H(C) = h(Y) - h(X) + log2(d_in / d_out)

which is the plain difference of differential entropies when the two
resolutions agree.  All entropies are in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .qcore import DensityMatrix

DEFAULT_BUDGET_BITS = 64.0


@dataclass(frozen=True, eq=False)
class Distribution:
    """A continuous signal distribution: uniform on an interval or a sample."""

    kind: str
    lo: float = 0.0
    hi: float = 1.0
    samples: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == "uniform":
            if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.hi <= self.lo:
                raise ValueError(f"uniform needs finite lo < hi, got ({self.lo}, {self.hi})")
        elif self.kind == "empirical":
            x = np.asarray(self.samples, dtype=float).reshape(-1)
            if x.size < 2 or not np.all(np.isfinite(x)):
                raise ValueError("empirical distribution needs at least 2 finite samples")
            x.setflags(write=False)
            object.__setattr__(self, "samples", x)
        else:
            raise ValueError(f"unknown distribution kind {self.kind!r}")

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "Distribution":
        return cls("uniform", float(lo), float(hi))

    @classmethod
    def empirical(cls, samples) -> "Distribution":
        return cls("empirical", samples=samples)


@dataclass(frozen=True)
class PrecisionModel:
    delta_in: float = 1.0
    delta_out: float = 1.0

    def __post_init__(self):
        for name in ("delta_in", "delta_out"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @property
    def log_ratio(self) -> float:
        """``log2(delta_in / delta_out)``, the resolution-mismatch term."""
        return math.log2(self.delta_in) - math.log2(self.delta_out)


@dataclass(frozen=True)
class EntropyReport:
    h_in: float
    h_out: float
    control_entropy: float
    precision_term: float
    feasible: bool


def differential_entropy(d: Distribution) -> float:
    """Differential entropy in bits; may be negative.

    Uniform distributions use the closed form ``log2(hi - lo)``.  Samples use a
    Freedman-Diaconis histogram and the plug-in sum ``sum p_i log2(w / p_i)``.
    """
    if d.kind == "uniform":
        return math.log2(d.hi - d.lo)

    x = d.samples
    if np.ptp(x) == 0:
        raise ValueError("entropy of a degenerate sample is undefined")
    edges = np.histogram_bin_edges(x, bins="fd")
    if edges.size < 2:
        edges = np.histogram_bin_edges(x, bins="sqrt")
    counts, edges = np.histogram(x, bins=edges)
    width = edges[1] - edges[0]
    p = counts[counts > 0] / x.size
    return float(np.sum(p * np.log2(width / p)))


def precision_entropy(d: Distribution, delta: float) -> float:
    """Absolute entropy at finite resolution ``delta``: ``h - log2(delta)``."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return differential_entropy(d) - math.log2(delta)


def control_entropy(h_in: float, h_out: float, prec: Optional[PrecisionModel] = None) -> float:
    """Signed bits the controller must supply; negative means information lost."""
    prec = prec or PrecisionModel()
    if not (math.isfinite(h_in) and math.isfinite(h_out)):
        raise ValueError("entropies must be finite")
    return h_out - h_in + prec.log_ratio


def multiplier_gate_complexity(
    k: float,
    a: float = 1.0,
    prec: Optional[PrecisionModel] = None,
    budget_bits: float = DEFAULT_BUDGET_BITS,
) -> EntropyReport:
    """Entropy report for ``y = k * x`` with ``x`` uniform on ``(0, a)``.

    At equal resolution the gate needs ``log2 k`` bits.  ``feasible`` is False
    once the magnitude exceeds ``budget_bits``.
    """
    if not (k > 0 and a > 0):
        raise ValueError(f"k and a must be positive, got k={k}, a={a}")
    prec = prec or PrecisionModel()
    h_in = differential_entropy(Distribution.uniform(0, a))
    # log2(k) + log2(a) rather than log2(k*a) keeps k = 2**m exact for any a
    h_out = math.log2(k) + h_in
    hc = control_entropy(h_in, h_out, prec)
    return EntropyReport(h_in, h_out, hc, prec.log_ratio, abs(hc) <= budget_bits)


def rotation_gate_complexity(
    a: float = 1.0,
    prec: Optional[PrecisionModel] = None,
    budget_bits: float = DEFAULT_BUDGET_BITS,
) -> EntropyReport:
    """A fixed rotation maps the uniform range ``(0, a)`` onto itself."""
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    prec = prec or PrecisionModel()
    h = differential_entropy(Distribution.uniform(0, a))
    hc = control_entropy(h, h, prec)
    return EntropyReport(h, h, hc, prec.log_ratio, abs(hc) <= budget_bits)


def _eigenvalues(rho: DensityMatrix) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(rho.entries), 0.0, 1.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    lam = _eigenvalues(rho)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def purity(rho: DensityMatrix) -> float:
    m = rho.entries
    # tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))
