"""The complexity functional: exact minimization of program length plus
redescription penalty over the enumeration, the sampled (measurement-driven)
approximation, the Chernoff-style trial planner, and the pigeonhole
upper-bound witness.

Both estimation modes are anytime procedures: the running minimum only ever
decreases as more programs are processed, so stopping early gives a sound
upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable, Iterable, Optional

from .executor import HALTED, run
from .proglang import DecodedProgram, Program, encode, enumerate_programs
from .statevec import StateVector, X, fidelity, penalty_bits

LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class EstimateRecord:
    """One candidate description of the target."""

    program: Program
    length: int
    fidelity: Fraction
    penalty: int
    total: int


@dataclass
class ExactEstimate:
    best: Optional[EstimateRecord]
    trace: list[tuple[int, int]]  # (enumeration index, running-min total)
    scanned: int
    n: int
    max_len: int

    @property
    def total(self) -> Optional[int]:
        return self.best.total if self.best else None


def _check_target(target: StateVector, n: int) -> None:
    if target.n_qubits != n:
        raise ValueError(f"target has {target.n_qubits} qubits, expected {n}")


def _check_conditional(conditional: Optional[DecodedProgram], n: int) -> None:
    if conditional is None:
        return
    if conditional.has_call:
        raise ValueError("a conditional program may not contain CALLC")
    if conditional.n != n:
        raise ValueError("conditional decoded for a different register width")


def _halted_outputs(n, max_len, conditional=None, outputs=None):
    """(index, program, output) for every halting candidate, in enumeration
    order.  `outputs` is an optional precomputed table; programs that use the
    conditional are never in it and are simulated fresh."""
    for idx, prog in enumerate(enumerate_programs(max_len, n)):
        if outputs is not None and prog in outputs:
            yield idx, prog, outputs[prog]
            continue
        result = run(prog, n, conditional)
        if result.status == HALTED:
            yield idx, prog, result.output


def exact_estimate(
    target: StateVector,
    n: int,
    max_len: int,
    conditional: Optional[DecodedProgram] = None,
    outputs: Optional[dict] = None,
) -> ExactEstimate:
    """Minimize length + penalty over all decodable programs up to max_len.

    Candidates with zero fidelity contribute nothing (their penalty is
    infinite).  Ties go to the shorter program, then to the numerically
    smaller one; since enumeration is ordered that way, the first program to
    reach the minimum is the winner.  If nothing has positive fidelity the
    result carries best=None: no finite estimate at this bound.
    """
    _check_target(target, n)
    _check_conditional(conditional, n)
    best = None
    best_key = None
    trace: list[tuple[int, int]] = []
    scanned = 0
    for idx, prog, out in _halted_outputs(n, max_len, conditional, outputs):
        scanned = idx + 1
        q = fidelity(target, out)
        if q == 0:
            continue
        pen = penalty_bits(q)
        total = prog.length + pen
        key = (total, prog.length, prog.value)
        if best_key is None or key < best_key:
            best_key = key
            best = EstimateRecord(prog, prog.length, q, pen, total)
            trace.append((idx, total))
    return ExactEstimate(best, trace, scanned, n, max_len)


def ideal_value(
    target: StateVector,
    n: int,
    max_len: int,
    outputs: Optional[dict] = None,
) -> Optional[float]:
    """min over halting programs of length - log2(true fidelity): the
    real-valued floor that the sampled mode approximates from above."""
    _check_target(target, n)
    best = None
    for _idx, prog, out in _halted_outputs(n, max_len, outputs=outputs):
        q = fidelity(target, out)
        if q == 0:
            continue
        value = prog.length - math.log2(q)
        if best is None or value < best:
            best = value
    return best


def directly_computable(
    target: StateVector,
    n: int,
    max_len: int,
    outputs: Optional[dict] = None,
) -> bool:
    """Whether some halting program up to max_len outputs the target with
    fidelity exactly 1.

    This is a separate question from what exact_estimate returns: a directly
    computable state can still be won by a shorter program plus penalty bits,
    so the minimizer's penalty being zero implies direct computability but
    not conversely.
    """
    _check_target(target, n)
    return any(
        fidelity(target, out) == 1
        for _idx, _prog, out in _halted_outputs(n, max_len, outputs=outputs)
    )


def shortest_exact_program(
    target: StateVector,
    n: int,
    max_len: int,
    outputs: Optional[dict] = None,
) -> Optional[Program]:
    """Shortest program whose output equals the target amplitude-for-amplitude
    (not merely up to phase); None if no such program exists within the bound."""
    _check_target(target, n)
    for _idx, prog, out in _halted_outputs(n, max_len, outputs=outputs):
        if out.amps == target.amps:
            return prog
    return None


def upper_bound_witness(target: StateVector, n: int) -> tuple[Program, EstimateRecord]:
    """Pigeonhole witness: the basis probabilities sum to 1 over 2^n vectors,
    so some computational-basis vector has fidelity >= 2^-n.  The X-gate
    program preparing it therefore costs at most its own length plus n penalty
    bits."""
    _check_target(target, n)
    probs = [a.abs2() for a in target.amps]
    i_best = 0
    for i in range(1, len(probs)):
        if probs[i] > probs[i_best]:  # ties keep the smallest index
            i_best = i
    gates = [X(j) for j in range(n) if (i_best >> (n - 1 - j)) & 1]
    prog = encode(gates, n)
    q = probs[i_best]
    pen = penalty_bits(q)
    record = EstimateRecord(prog, prog.length, q, pen, prog.length + pen)
    return prog, record


# ---------------------------------------------------------------------------
# Sampled mode
# ---------------------------------------------------------------------------

def k_from_bound(n: int, alpha: float, epsilon: float, slack: float = 0.0) -> int:
    """Trials per candidate so that, with probability at least 1 - alpha, no
    candidate's success frequency strays from its mean by a relative factor
    epsilon: ceil(6 * (2n - log2 alpha + slack) / (epsilon^2 * log2 e)).

    The union bound behind this counts at most 2^(2n) candidates.  The
    additive constant is taken as zero by default; pass `slack` to budget for
    one explicitly.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must be in (0, 1/2), got {epsilon}")
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    k = math.ceil(6.0 * (2 * n - math.log2(alpha) + slack) / (epsilon**2 * LOG2_E))
    return max(1, k)


@dataclass(frozen=True)
class SamplingPlan:
    """(alpha, epsilon, k) for the sampled estimator."""

    alpha: float
    epsilon: float
    k: int

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must be in (0, 1/2), got {self.epsilon}")
        if self.k < 1:
            raise ValueError("k must be a positive integer")

    def covers(self, n: int) -> bool:
        return self.k >= k_from_bound(n, self.alpha, self.epsilon)

    @classmethod
    def for_dimension(cls, n: int, alpha: float, epsilon: float) -> "SamplingPlan":
        return cls(alpha, epsilon, k_from_bound(n, alpha, epsilon))


@dataclass(frozen=True)
class TrialResult:
    program: Program
    m: int
    k: int
    epsilon: float
    estimate: float  # length - log2(m / ((1 + epsilon) k)); needs m > 0


def bernoulli(q: Fraction, rng: Random) -> bool:
    """Exact Bernoulli(q): no float round-off in the success probability."""
    return rng.randrange(q.denominator) < q.numerator


def projection_oracle(target: StateVector) -> Callable:
    """Simulated projection measurement onto the target: each trial succeeds
    with probability fidelity(target, output), exactly."""

    def measure(program: Program, output: StateVector, rng: Random) -> bool:
        return bernoulli(fidelity(target, output), rng)

    return measure


def trial_rng(seed: int, index: int) -> Random:
    # String seeds hash through sha512 in CPython, stable across platforms.
    return Random(f"{seed}:{index}")


def run_trials(
    candidates: Iterable[tuple[int, Program, StateVector]],
    measure: Callable,
    k: int,
    epsilon: float,
    seed: int,
) -> tuple[Optional[TrialResult], list[tuple[int, float]]]:
    """k Bernoulli trials per candidate; running minimum of
    length - log2(m / ((1+epsilon) k)).

    Each candidate's randomness is seeded from (seed, its enumeration index),
    so results do not depend on evaluation order.  Candidates with m == 0 are
    skipped: their fidelity may be zero and they can claim nothing.  Ties on
    the estimate go to the shorter program, then the smaller one.
    """
    best = None
    best_key = None
    trace: list[tuple[int, float]] = []
    for idx, prog, out in candidates:
        rng = trial_rng(seed, idx)
        m = sum(1 for _ in range(k) if measure(prog, out, rng))
        if m == 0:
            continue
        est = prog.length - math.log2(m / ((1.0 + epsilon) * k))
        key = (est, prog.length, prog.value)
        if best_key is None or key < best_key:
            best_key = key
            best = TrialResult(prog, m, k, epsilon, est)
            trace.append((idx, est))
    return best, trace


@dataclass
class SampledEstimate:
    best: Optional[TrialResult]
    trace: list[tuple[int, float]]
    plan: SamplingPlan
    seed: int
    n: int
    max_len: int

    @property
    def estimate(self) -> Optional[float]:
        return self.best.estimate if self.best else None


def sampled_estimate(
    measure: Callable,
    n: int,
    plan: SamplingPlan,
    max_len: int,
    seed: int,
    outputs: Optional[dict] = None,
) -> SampledEstimate:
    """Approximation from above driven only by a Bernoulli oracle per program.

    Enumerates the halting programs, runs plan.k measurement trials against
    each, and keeps the candidate with the smallest estimate (shorter program
    on ties).  The plan must supply at least as many trials as k_from_bound
    requires for this n.
    """
    if not plan.covers(n):
        raise ValueError(
            f"plan.k={plan.k} is below k_from_bound(n={n}, alpha={plan.alpha}, "
            f"epsilon={plan.epsilon})={k_from_bound(n, plan.alpha, plan.epsilon)}"
        )
    candidates = list(_halted_outputs(n, max_len, outputs=outputs))
    best, trace = run_trials(candidates, measure, plan.k, plan.epsilon, seed)
    return SampledEstimate(best, trace, plan, seed, n, max_len)
