"""Iterative probabilistic recovery of a teleported qubit through a stuck gate.

With ``Hs(theta)`` in the teleportation circuit, outcome 0 multiplies the
receiver's amplitudes by ``(cos t, sin t)`` and outcome 1 by
``(sin t, -cos t)``.  Feeding the output back through the same circuit again
and again, after ``a`` zeros ("+") and ``b`` ones ("-") the receiver holds::

    alpha cos^a sin^b |0> + (-1)^b beta sin^a cos^b |1>

which equals the original qubit (up to a ``Z``) exactly when ``a == b``.
Recovery is therefore the first return of a ``+-1`` walk to the origin.

Measurements are counted as *steps*; the sender's measurement is step 1.
A *pass* groups two steps (pass ``n`` is steps ``2n - 1`` and ``2n``), so in
the generic case a pass is the earliest moment the walk can balance again.

Four models of the per-pass recovery probability are provided:

``series``
    the closed product series, exact rationals;
``oracle``
    brute-force enumeration of every equiprobable outcome sequence;
``exact_born``
    a probability tree using the true Born-rule branch weights;
``monte_carlo``
    seeded sampling of either the equiprobable or the Born-rule walk.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .qcore import StateVector

ORACLE_MAX_STEPS = 20
EXACT_MAX_PASSES = 30
DEFAULT_MC_PASSES = 50
DEFAULT_EXACT_PASSES = 20
# trials per RNG stream; fixed so results do not depend on the worker count
BLOCK_SIZE = 1 << 16
# |cos| and |sin| closer than this count as equal; below it as zero
ANGLE_TOL = 1e-12


class EnumerationLimitError(ValueError):
    """A request would exceed the enumeration or tree-size limit."""


@dataclass(frozen=True)
class RecoveryDistribution:
    """Probability of first recovery at each pass ``n = 1, 2, ...``.

    ``per_pass[i]`` and ``cumulative[i]`` refer to pass ``i + 1``.  Exact models
    hold :class:`fractions.Fraction` values; the others hold floats.
    """

    per_pass: tuple
    cumulative: tuple
    model: str
    trials: Optional[int] = None
    seed: Optional[int] = None
    stderr: Optional[tuple] = None
    sampling: Optional[str] = None

    def __post_init__(self):
        for p in self.per_pass:
            if not 0 <= p <= 1:
                raise ValueError(f"per-pass probability {p} outside [0, 1]")
        if any(b < a for a, b in zip(self.cumulative, self.cumulative[1:])):
            raise ValueError("cumulative probabilities must be nondecreasing")
        if self.cumulative and self.cumulative[-1] > 1 + 1e-12:
            raise ValueError("cumulative probability exceeds 1")

    @property
    def passes(self) -> int:
        return len(self.per_pass)

    @property
    def total(self):
        return self.cumulative[-1] if self.cumulative else 0

    @property
    def censored(self):
        """Probability mass not recovered within the simulated passes."""
        return 1 - self.total

    def pass_probability(self, n: int):
        """Probability of first recovery at pass ``n`` (1-based)."""
        if not 1 <= n <= self.passes:
            raise IndexError(f"pass {n} outside 1..{self.passes}")
        return self.per_pass[n - 1]


def _cumulate(values: Sequence) -> tuple:
    out, acc = [], 0
    for v in values:
        acc = acc + v
        out.append(acc)
    return tuple(out)


def _steps_to_passes(per_step: Sequence) -> list:
    """Fold per-step values into per-pass values (two steps per pass)."""
    if len(per_step) % 2:
        raise ValueError("per-step array must cover whole passes")
    return [per_step[2 * i] + per_step[2 * i + 1] for i in range(len(per_step) // 2)]


# -- closed series ---------------------------------------------------------


def eq9_term(n: int) -> Fraction:
    """``(1/2)(3/4)...((2n-3)/(2n-2)) * 1/(2n)``: recovery first at pass ``n``."""
    if n < 1:
        raise ValueError(f"pass index must be >= 1, got {n}")
    term = Fraction(1, 2 * n)
    for k in range(1, n):
        term *= Fraction(2 * k - 1, 2 * k)
    return term


def eq9_partial_sum(N: int) -> Fraction:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return sum((eq9_term(n) for n in range(1, N + 1)), Fraction(0))


def eq9_partial_sum_closed(N: int) -> Fraction:
    """``1 - C(2N, N) / 4**N``; equal to :func:`eq9_partial_sum`."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return 1 - Fraction(math.comb(2 * N, N), 4**N)


def series_distribution(passes: int) -> RecoveryDistribution:
    per_pass = tuple(eq9_term(n) for n in range(1, passes + 1))
    return RecoveryDistribution(per_pass, _cumulate(per_pass), "series")


# -- enumeration oracle ----------------------------------------------------


def first_passage_oracle(N: int) -> RecoveryDistribution:
    """Enumerate all ``2**N`` equiprobable outcome sequences of ``N`` steps.

    Each sequence is recovered at its first step where the ``+`` and ``-``
    counts agree; that step's pass gets ``1 / 2**N``.  Covers ``N // 2``
    passes.
    """
    if N < 2:
        raise ValueError(f"N must be >= 2 to cover one pass, got {N}")
    if N > ORACLE_MAX_STEPS:
        raise EnumerationLimitError(f"N = {N} exceeds the enumeration limit {ORACLE_MAX_STEPS}")

    codes = np.arange(2**N, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(N, dtype=np.int64)) & 1
    position = np.cumsum(2 * bits - 1, axis=1)
    balanced = position == 0
    hit = balanced.any(axis=1)
    first_step = np.argmax(balanced, axis=1)[hit] + 1
    counts = np.bincount(first_step, minlength=N + 1)[1:]

    passes = N // 2
    per_step = [int(c) for c in counts[: 2 * passes]]
    denom = 2**N
    per_pass = tuple(Fraction(c, denom) for c in _steps_to_passes(per_step))
    return RecoveryDistribution(per_pass, _cumulate(per_pass), "oracle")


# -- Born-rule walk --------------------------------------------------------


@dataclass(frozen=True)
class WalkState:
    """Outcome counts along one branch of the recovery tree.

    The receiver's unnormalized amplitudes are ``alpha * cos^a * sin^b`` and
    ``(-1)^b * beta * sin^a * cos^b`` with ``a = plus_count``,
    ``b = minus_count``.
    """

    plus_count: int = 0
    minus_count: int = 0

    @property
    def steps(self) -> int:
        return self.plus_count + self.minus_count

    @property
    def alpha_exponents(self) -> tuple[int, int]:
        """Powers of ``(cos, sin)`` multiplying ``alpha``."""
        return self.plus_count, self.minus_count

    @property
    def beta_exponents(self) -> tuple[int, int]:
        """Powers of ``(cos, sin)`` multiplying ``beta``."""
        return self.minus_count, self.plus_count

    @property
    def beta_sign(self) -> int:
        return -1 if self.minus_count % 2 else 1

    @property
    def balanced(self) -> bool:
        return self.plus_count == self.minus_count

    def advance(self, outcome: int) -> "WalkState":
        if outcome == 0:
            return WalkState(self.plus_count + 1, self.minus_count)
        if outcome == 1:
            return WalkState(self.plus_count, self.minus_count + 1)
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")

    def correction_parity(self, theta: float) -> int:
        """1 if the receiver must apply ``Z`` to line up the sign of ``beta``.

        The relative sign of ``beta`` is ``(-1)^b * sign(sin t / cos t)^(a+b)``.
        """
        flips = self.minus_count
        if math.cos(theta) * math.sin(theta) < 0:
            flips += self.steps
        return flips % 2

    def state(self, alpha: complex, beta: complex, theta: float) -> StateVector:
        """Receiver's normalized state at this node, before any correction."""
        c, s = math.cos(theta), math.sin(theta)
        log_c = math.log(abs(c)) if c else -math.inf
        log_s = math.log(abs(s)) if s else -math.inf
        a, b = self.plus_count, self.minus_count
        mags = np.array([_log_power(log_c, a) + _log_power(log_s, b),
                         _log_power(log_s, a) + _log_power(log_c, b)])
        mags = np.exp(mags - np.max(mags))
        signs = np.array([np.sign(c) ** a * np.sign(s) ** b,
                          self.beta_sign * np.sign(s) ** a * np.sign(c) ** b])
        return StateVector(np.array([alpha, beta]) * mags * signs)

    def corrected_state(self, alpha: complex, beta: complex, theta: float) -> StateVector:
        psi = self.state(alpha, beta, theta).amplitudes
        if self.correction_parity(theta):
            psi = psi * np.array([1, -1])
        return StateVector(psi)


def _log_power(log_x: float, k: int) -> float:
    # 0 * log(0) must be 0 here: x**0 == 1 even for x == 0
    return 0.0 if k == 0 else k * log_x


def classify_angle(theta: float) -> str:
    """``"balanced"`` (|cos| = |sin|), ``"collapsed"`` (cos or sin = 0) or ``"generic"``."""
    c, s = abs(math.cos(theta)), abs(math.sin(theta))
    if abs(c - s) < ANGLE_TOL:
        return "balanced"
    if c < ANGLE_TOL or s < ANGLE_TOL:
        return "collapsed"
    return "generic"


def _check_qubit(alpha: complex, beta: complex) -> None:
    total = abs(alpha) ** 2 + abs(beta) ** 2
    if not math.isfinite(total) or abs(total - 1) > 1e-10:
        raise ValueError(f"|alpha|^2 + |beta|^2 = {total}, expected 1")


def _target_is_basis(alpha: complex, beta: complex) -> bool:
    return abs(alpha) < ANGLE_TOL or abs(beta) < ANGLE_TOL


def is_recovered(node: WalkState, theta: float, alpha: complex, beta: complex) -> bool:
    """Recovery test in the exponent domain (no floating-point comparison).

    Equivalent to comparing the corrected state with ``alpha|0> + beta|1>``
    up to global phase.
    """
    if node.steps == 0:
        return False
    if _target_is_basis(alpha, beta):
        return True
    kind = classify_angle(theta)
    if kind == "balanced":
        return True
    if kind == "collapsed":
        return False
    return node.balanced


def _branch_probabilities(w0: float, w1: float, c2: float, s2: float) -> tuple[float, float]:
    # a branch blocked by a zero weight must be exactly 0, not 1 - (1 - eps);
    # otherwise use complements so the pair sums to exactly 1
    p0, p1 = w0 * c2 + w1 * s2, w0 * s2 + w1 * c2
    if p0 == 0 or p1 == 0:
        return float(p0 > 0), float(p1 > 0)
    p0 = p0 / (p0 + p1)
    return p0, 1 - p0


def exact_recovery_distribution(
    alpha: complex,
    beta: complex,
    theta: float,
    max_passes: int = DEFAULT_EXACT_PASSES,
) -> RecoveryDistribution:
    """Per-pass recovery probabilities under the Born rule.

    Breadth-first over :class:`WalkState` nodes; nodes with equal counts are
    merged since the state depends only on the counts.  Each branch weight is
    computed from the node's normalized state.
    """
    _check_qubit(alpha, beta)
    if max_passes < 1:
        raise ValueError(f"max_passes must be >= 1, got {max_passes}")
    if max_passes > EXACT_MAX_PASSES:
        raise EnumerationLimitError(f"max_passes = {max_passes} exceeds {EXACT_MAX_PASSES}")

    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    per_step = [0.0] * (2 * max_passes)
    frontier = {WalkState(): 1.0}
    for step in range(2 * max_passes):
        nxt: dict[WalkState, float] = {}
        for node, mass in frontier.items():
            w0, w1 = np.abs(node.state(alpha, beta, theta).amplitudes) ** 2
            for outcome, p in enumerate(_branch_probabilities(w0, w1, c2, s2)):
                if p <= 0:
                    continue
                child = node.advance(outcome)
                if is_recovered(child, theta, alpha, beta):
                    per_step[step] += mass * p
                else:
                    nxt[child] = nxt.get(child, 0.0) + mass * p
        frontier = nxt
        if not frontier:
            break
    per_pass = tuple(min(1.0, float(p)) for p in _steps_to_passes(per_step))
    return RecoveryDistribution(per_pass, _cumulate(per_pass), "exact_born")


# -- Monte Carlo -----------------------------------------------------------


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def _blocks(trials: int) -> list[tuple[int, int]]:
    return [(i, min(BLOCK_SIZE, trials - start))
            for i, start in enumerate(range(0, trials, BLOCK_SIZE))]


def _run_blocks(fn, trials: int, workers: int) -> list:
    blocks = _blocks(trials)
    if workers <= 1:
        return [fn(*b) for b in blocks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))


def _simulate_walk_block(rng, size, steps, theta, alpha, beta, sampling):
    """First-recovery step (1-based, 0 = censored) for each trial of a block."""
    first = np.zeros(size, dtype=np.int64)
    if sampling == "exact_born":
        if _target_is_basis(alpha, beta) or classify_angle(theta) == "balanced":
            first[:] = 1
            return first
        if classify_angle(theta) == "collapsed":
            return first
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2

    active = np.arange(size)
    diff = np.zeros(size, dtype=np.int64)
    w0 = np.full(size, abs(alpha) ** 2)
    for step in range(1, steps + 1):
        if active.size == 0:
            break
        u = rng.random(active.size)
        if sampling == "exact_born":
            wa = w0[active]
            p_plus = wa * c2 + (1 - wa) * s2
            plus = u < p_plus
            with np.errstate(divide="ignore", invalid="ignore"):
                w0[active] = np.where(plus, wa * c2 / p_plus, wa * s2 / (1 - p_plus))
        else:
            plus = u < 0.5
        diff[active] += np.where(plus, 1, -1)
        done = diff[active] == 0
        first[active[done]] = step
        active = active[~done]
    return first


def monte_carlo_recovery(
    alpha: complex = 1 / math.sqrt(2),
    beta: complex = 1 / math.sqrt(2),
    theta: float = math.pi / 6,
    trials: int = 100_000,
    seed: int = 0,
    model: str = "idealized",
    max_passes: int = DEFAULT_MC_PASSES,
    workers: int = 1,
) -> RecoveryDistribution:
    """Sampled per-pass recovery frequencies with binomial standard errors.

    ``model="idealized"`` takes every branch with probability 1/2 whatever
    ``theta``, ``alpha`` and ``beta`` are; ``model="exact_born"`` uses the
    Born-rule weights.  Trials are split into fixed blocks, each with its own
    stream derived from ``(seed, block)``, so the result is bit-identical for
    any ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max_passes < 1:
        raise ValueError("max_passes must be >= 1")
    if model not in ("idealized", "exact_born"):
        raise ValueError(f"unknown sampling model {model!r}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    _check_qubit(alpha, beta)
    steps = 2 * max_passes

    def block(index, size):
        first = _simulate_walk_block(_block_rng(seed, index), size, steps, theta, alpha, beta, model)
        return np.bincount(first, minlength=steps + 1)

    counts = np.sum(_run_blocks(block, trials, workers), axis=0)
    per_pass = np.array(_steps_to_passes(list(counts[1:])), dtype=float) / trials
    stderr = np.sqrt(per_pass * (1 - per_pass) / trials)
    return RecoveryDistribution(
        tuple(float(p) for p in per_pass),
        tuple(float(c) for c in np.cumsum(per_pass)),
        "monte_carlo",
        trials=trials,
        seed=seed,
        stderr=tuple(float(e) for e in stderr),
        sampling=model,
    )


# -- finite receiver precision ---------------------------------------------


@dataclass(frozen=True)
class FidelitySummary:
    """Fidelity of the receiver's output against the original qubit.

    ``mean`` and ``min`` cover the trials in which the receiver declared
    recovery (NaN if none did); ``censored_mean`` covers the rest, evaluated
    on the state held after the last pass.
    """

    theta_true: float
    theta_hat: float
    trials: int
    recovered: int
    mean: float
    min: float
    censored_mean: float

    @property
    def recovered_fraction(self) -> float:
        return self.recovered / self.trials

    def succeeded(self, threshold: float = 0.999) -> bool:
        return self.recovered > 0 and self.mean >= threshold


def quantize_angle(theta: float, delta: float) -> float:
    """Nearest multiple of ``delta`` (halves round away from zero)."""
    if not delta > 0:
        raise ValueError(f"receiver resolution must be positive, got {delta}")
    k = math.floor(abs(theta) / delta + 0.5)
    return math.copysign(k * delta, theta)


def quantized_recovery(
    alpha: complex,
    beta: complex,
    theta_true: float,
    receiver_delta: float,
    trials: int = 100_000,
    seed: int = 0,
    max_passes: int = DEFAULT_MC_PASSES,
    workers: int = 1,
) -> FidelitySummary:
    """Recovery by a receiver whose copy of the gate is set to the nearest
    multiple of ``receiver_delta``.

    The sender measures with the true angle; every later pass uses the
    receiver's quantized angle.  The receiver declares recovery when its
    outcome counts balance (immediately if its angle is balanced) and applies
    the ``Z`` correction its own bookkeeping calls for.
    """
    _check_qubit(alpha, beta)
    if trials < 1 or max_passes < 1:
        raise ValueError("trials and max_passes must be >= 1")
    theta_hat = quantize_angle(theta_true, receiver_delta)
    steps = 2 * max_passes
    flip_each_step = math.cos(theta_hat) * math.sin(theta_hat) < 0
    declare_at_once = classify_angle(theta_hat) == "balanced"
    target = np.array([alpha, beta], dtype=complex)

    def gate_factors(theta):
        c, s = math.cos(theta), math.sin(theta)
        return np.array([c, s]), np.array([s, -c])

    sender = gate_factors(theta_true)
    receiver = gate_factors(theta_hat)

    def block(index, size):
        rng = _block_rng(seed, index)
        psi = np.tile(target, (size, 1))
        plus_n = np.zeros(size, dtype=np.int64)
        minus_n = np.zeros(size, dtype=np.int64)
        fid = np.full(size, np.nan)
        active = np.arange(size)
        for step in range(1, steps + 1):
            if active.size == 0:
                break
            f_plus, f_minus = sender if step == 1 else receiver
            cur = psi[active]
            out_plus = cur * f_plus
            p_plus = np.sum(np.abs(out_plus) ** 2, axis=1)
            plus = rng.random(active.size) < p_plus
            new = np.where(plus[:, None], out_plus, cur * f_minus)
            psi[active] = new / np.linalg.norm(new, axis=1)[:, None]
            plus_n[active] += plus
            minus_n[active] += ~plus
            done = np.full(active.size, declare_at_once) | (plus_n[active] == minus_n[active])
            idx = active[done]
            fid[idx] = _corrected_fidelity(psi[idx], target, minus_n[idx], plus_n[idx], flip_each_step)
            active = active[~done]
        censored = _corrected_fidelity(psi[active], target, minus_n[active], plus_n[active], flip_each_step)
        return fid, active, censored

    fids, censored = [], []
    for fid, active, cens in _run_blocks(block, trials, workers):
        declared = np.ones(fid.size, dtype=bool)
        declared[active] = False
        fids.append(fid[declared])
        censored.append(cens)
    fids = np.concatenate(fids)
    censored = np.concatenate(censored)
    nan = float("nan")
    return FidelitySummary(
        theta_true=theta_true,
        theta_hat=theta_hat,
        trials=trials,
        recovered=int(fids.size),
        mean=float(np.mean(fids)) if fids.size else nan,
        min=float(np.min(fids)) if fids.size else nan,
        censored_mean=float(np.mean(censored)) if censored.size else nan,
    )


def _corrected_fidelity(psi, target, minus_n, plus_n, flip_each_step):
    flips = minus_n + (plus_n + minus_n if flip_each_step else 0)
    signs = np.where(flips % 2 == 1, -1.0, 1.0)
    corrected = psi.copy()
    corrected[:, 1] *= signs
    return np.abs(corrected @ target.conj()) ** 2
