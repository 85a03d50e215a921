"""Experiment suite over the estimator: incompressibility counting for whole
bases, consistency against exact classical program length, sub-additivity and
joint-state bounds for directly computable states, and the superposed-bit
worked example.

Reports are plain dataclasses with JSON/CSV projections; persistence and
manifests are the CLI's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Optional

from .estimator import (
    EstimateRecord,
    ExactEstimate,
    exact_estimate,
    shortest_exact_program,
)
from .executor import cached_outputs, run
from .proglang import (
    DecodedProgram,
    Program,
    decode,
    encode,
    program_to_json,
)
from .statevec import (
    CNOT,
    PHASE,
    ROT,
    Basis,
    Gate,
    X,
    apply_gate,
    classical_state,
    fidelity,
    random_state,
    shannon_fano_lengths,
    standard_basis,
    tensor,
    transformed_basis,
)


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def record_obj(record: Optional[EstimateRecord]) -> Optional[dict]:
    if record is None:
        return None
    return {
        "program": program_to_json(record.program),
        "length": record.length,
        "fidelity": frac_str(record.fidelity),
        "penalty": record.penalty,
        "total": record.total,
    }


def _outputs(n: int, max_len: int, cache_dir) -> Optional[dict]:
    if cache_dir is None:
        return None
    return cached_outputs(n, max_len, cache_dir)


# ---------------------------------------------------------------------------
# Incompressibility counting
# ---------------------------------------------------------------------------

@dataclass
class CensusReport:
    """Counting verdict for one basis: how many basis vectors have an estimate
    below n - c, against the bound 2^(n-c).

    The bound is provable for this machine: for any halting program, at most
    2^d basis vectors of an orthonormal basis can carry penalty <= d (their
    fidelities each reach 2^-d and sum to at most 1), and the program lengths
    obey the Kraft inequality, so the count is at most 2^(n-c-1).
    """

    n: int
    c: int
    max_len: int
    basis_label: str
    estimates: list[ExactEstimate]
    count_below: int
    bound: int
    verdict: bool

    def to_json_obj(self) -> dict:
        return {
            "kind": "census",
            "n": self.n,
            "c": self.c,
            "max_len": self.max_len,
            "basis": self.basis_label,
            "threshold": self.n - self.c,
            "count_below": self.count_below,
            "bound": self.bound,
            "verdict": self.verdict,
            "vectors": [
                {
                    "index": i,
                    "best": record_obj(est.best),
                    "trace": [[idx, total] for idx, total in est.trace],
                }
                for i, est in enumerate(self.estimates)
            ],
        }

    def csv_header(self) -> list[str]:
        return ["index", "total", "length", "penalty", "fidelity", "program_bits"]

    def csv_rows(self) -> list[list]:
        rows = []
        for i, est in enumerate(self.estimates):
            if est.best is None:
                rows.append([i, "", "", "", "", ""])
            else:
                b = est.best
                rows.append(
                    [i, b.total, b.length, b.penalty, frac_str(b.fidelity), b.program.bits]
                )
        return rows


def incompressibility_census(
    n: int,
    c: int,
    max_len: int,
    basis: Optional[Basis] = None,
    cache_dir=None,
    label: str = "standard",
) -> CensusReport:
    """Estimate every vector of a basis and count the ones below n - c."""
    if c < 0:
        raise ValueError("c must be nonnegative")
    if basis is None:
        basis = standard_basis(n)
    if basis.n_qubits != n:
        raise ValueError("basis dimension does not match n")
    outputs = _outputs(n, max_len, cache_dir)
    estimates = [exact_estimate(v, n, max_len, outputs=outputs) for v in basis.vectors]
    threshold = n - c
    count_below = sum(
        1 for est in estimates if est.best is not None and est.best.total < threshold
    )
    bound = 1 << (n - c) if n >= c else 1
    return CensusReport(n, c, max_len, label, estimates, count_below, bound, count_below < bound)


def rotation_circuit(n: int) -> list[Gate]:
    """Fixed entangling circuit used to produce a non-classical basis."""
    gates: list[Gate] = [ROT(0)]
    for i in range(n - 1):
        gates.append(CNOT(i, i + 1))
        gates.append(ROT(i + 1))
    return gates


def rotated_basis(n: int) -> Basis:
    return transformed_basis(n, rotation_circuit(n))


def uniform_sweep(
    n: int, c: int, max_len: int, samples: int, seed: int, cache_dir=None
) -> dict:
    """Monte Carlo stand-in for the continuum claim: the empirical fraction of
    pseudo-random rational unit vectors whose estimate is at least n - c."""
    rng = Random(f"sweep:{seed}")
    outputs = _outputs(n, max_len, cache_dir)
    threshold = n - c
    incompressible = 0
    no_estimate = 0
    for _ in range(samples):
        target = random_state(n, rng)
        est = exact_estimate(target, n, max_len, outputs=outputs)
        if est.best is None:
            no_estimate += 1  # counts as >= threshold: no short description exists
            incompressible += 1
        elif est.best.total >= threshold:
            incompressible += 1
    return {
        "kind": "uniform_sweep",
        "n": n,
        "c": c,
        "max_len": max_len,
        "samples": samples,
        "seed": seed,
        "threshold": threshold,
        "fraction_incompressible": incompressible / samples,
        "no_finite_estimate": no_estimate,
    }


# ---------------------------------------------------------------------------
# Consistency with exact program length on classical targets
# ---------------------------------------------------------------------------

@dataclass
class ConsistencyRecord:
    """A = estimate with penalties allowed; B = shortest program producing the
    basis state exactly.  A <= B always: the exact program is one of A's
    candidates with penalty zero."""

    bits: str
    estimate: ExactEstimate
    exact_program: Optional[Program]
    gap: Optional[int]

    def to_json_obj(self) -> dict:
        return {
            "bits": self.bits,
            "a": record_obj(self.estimate.best),
            "b_program": program_to_json(self.exact_program) if self.exact_program else None,
            "b_length": self.exact_program.length if self.exact_program else None,
            "gap": self.gap,
            "trace": [[idx, total] for idx, total in self.estimate.trace],
        }


def consistency_report(bits: str, max_len: int, cache_dir=None) -> ConsistencyRecord:
    n = len(bits)
    target = classical_state(bits)
    outputs = _outputs(n, max_len, cache_dir)
    est = exact_estimate(target, n, max_len, outputs=outputs)
    exact = shortest_exact_program(target, n, max_len, outputs=outputs)
    gap = None
    if exact is not None and est.best is not None:
        gap = exact.length - est.best.total
    return ConsistencyRecord(bits, est, exact, gap)


@dataclass
class ConsistencySweep:
    n: int
    max_len: int
    records: list[ConsistencyRecord]
    max_gap: Optional[int]

    def to_json_obj(self) -> dict:
        return {
            "kind": "consistency",
            "n": self.n,
            "max_len": self.max_len,
            "max_gap": self.max_gap,
            "records": [r.to_json_obj() for r in self.records],
        }

    def csv_header(self) -> list[str]:
        return ["bits", "a_total", "b_length", "gap"]

    def csv_rows(self) -> list[list]:
        rows = []
        for r in self.records:
            a = r.estimate.best.total if r.estimate.best else ""
            b = r.exact_program.length if r.exact_program else ""
            rows.append([r.bits, a, b, "" if r.gap is None else r.gap])
        return rows


def consistency_sweep(n: int, max_len: int, cache_dir=None) -> ConsistencySweep:
    """All 2^n classical strings; the largest gap is the measured analogue of
    the additive constant."""
    records = [
        consistency_report(format(i, f"0{n}b"), max_len, cache_dir=cache_dir)
        for i in range(1 << n)
    ]
    gaps = [r.gap for r in records if r.gap is not None]
    return ConsistencySweep(n, max_len, records, max(gaps) if gaps else None)


# ---------------------------------------------------------------------------
# Sub-additivity and the joint-state bound
# ---------------------------------------------------------------------------

def _decode_generator(p: Program, n: int, who: str) -> DecodedProgram:
    decoded = decode(p.bits, n, allow_callc=False)
    if decoded is None:
        raise ValueError(
            f"{who} must be a decodable CALLC-free program for n={n}: {p.bits!r}"
        )
    return decoded


def shift_gates(gates, offset: int):
    """Re-index a gate list onto a higher block of qubits."""
    out = []
    for g in gates:
        if isinstance(g, X):
            out.append(X(g.target + offset))
        elif isinstance(g, CNOT):
            out.append(CNOT(g.control + offset, g.target + offset))
        elif isinstance(g, ROT):
            out.append(ROT(g.target + offset))
        elif isinstance(g, PHASE):
            out.append(PHASE(g.target + offset))
        else:
            raise TypeError(f"cannot shift {g!r}")
    return out


def product_witness(px: DecodedProgram, py: DecodedProgram) -> Program:
    """A joint-register program preparing (output of px) tensor (output of py):
    py's gates on the low block, px's on the high block.  Its length is the
    yardstick for whether an enumeration bound can see the joint description.
    """
    n = px.n + py.n
    gates = shift_gates(py.gates, px.n) + list(px.gates)
    return encode(gates, n)


@dataclass
class SubadditivityReport:
    p_x: Program
    p_y: Program
    n_x: int
    n_y: int
    max_len: int
    joint: ExactEstimate
    conditional: ExactEstimate
    unconditional_y: ExactEstimate
    witness_length: int
    conclusive: bool
    reason: str
    slack: Optional[int]

    def to_json_obj(self) -> dict:
        return {
            "kind": "subadditivity",
            "p_x": program_to_json(self.p_x),
            "p_y": program_to_json(self.p_y),
            "n_x": self.n_x,
            "n_y": self.n_y,
            "max_len": self.max_len,
            "joint": record_obj(self.joint.best),
            "conditional_x_given_py": record_obj(self.conditional.best),
            "y": record_obj(self.unconditional_y.best),
            "witness_length": self.witness_length,
            "conclusive": self.conclusive,
            "reason": self.reason,
            "slack": self.slack,
        }


def subadditivity_report(
    p_x: Program,
    p_y: Program,
    max_len: int,
    n_x: int = 1,
    n_y: int = 1,
    cache_dir=None,
) -> SubadditivityReport:
    """slack = (estimate of x given p_y) + (estimate of y) - (joint estimate).

    The run is conclusive only when the product-style joint description fits
    inside max_len; a too-small bound is reported as inconclusive, never as a
    failed inequality.
    """
    dx = _decode_generator(p_x, n_x, "p_x")
    dy = _decode_generator(p_y, n_y, "p_y")
    x = run(p_x, n_x).output
    y = run(p_y, n_y).output
    n = n_x + n_y
    joint_target = tensor(x, y)
    joint = exact_estimate(joint_target, n, max_len, outputs=_outputs(n, max_len, cache_dir))
    cond = exact_estimate(
        x, n_x, max_len, conditional=dy, outputs=_outputs(n_x, max_len, cache_dir)
    )
    uncond_y = exact_estimate(y, n_y, max_len, outputs=_outputs(n_y, max_len, cache_dir))
    witness = product_witness(dx, dy)

    reason = "ok"
    conclusive = True
    if witness.length > max_len:
        conclusive = False
        reason = f"product witness needs {witness.length} bits > max_len"
    if joint.best is None or cond.best is None or uncond_y.best is None:
        conclusive = False
        reason = "no finite estimate for at least one term"
    slack = None
    if joint.best is not None and cond.best is not None and uncond_y.best is not None:
        slack = cond.best.total + uncond_y.best.total - joint.best.total
    return SubadditivityReport(
        p_x, p_y, n_x, n_y, max_len, joint, cond, uncond_y,
        witness.length, conclusive, reason, slack,
    )


@dataclass
class JointBoundReport:
    """Joint estimate against (estimate of y) - log2 fidelity(x, y)."""

    p_x: Program
    p_y: Program
    max_len: int
    fidelity_xy: Fraction
    applicable: bool
    lhs_total: Optional[int]
    y_total: Optional[int]
    rhs: Optional[float]
    slack: Optional[float]

    def to_json_obj(self) -> dict:
        return {
            "kind": "joint_bound",
            "p_x": program_to_json(self.p_x),
            "p_y": program_to_json(self.p_y),
            "max_len": self.max_len,
            "fidelity_xy": frac_str(self.fidelity_xy),
            "applicable": self.applicable,
            "lhs_total": self.lhs_total,
            "y_total": self.y_total,
            "rhs": self.rhs,
            "slack": self.slack,
        }


def joint_bound_report(
    p_x: Program,
    p_y: Program,
    max_len: int,
    n_x: int = 1,
    n_y: int = 1,
    cache_dir=None,
) -> JointBoundReport:
    _decode_generator(p_x, n_x, "p_x")
    _decode_generator(p_y, n_y, "p_y")
    x = run(p_x, n_x).output
    y = run(p_y, n_y).output
    if x.n_qubits != y.n_qubits:
        raise ValueError("joint bound needs outputs of equal dimension")
    q = fidelity(x, y)
    if q == 0:
        return JointBoundReport(
            p_x, p_y, max_len, q, False, None, None, None, None
        )
    n = x.n_qubits + y.n_qubits
    joint = exact_estimate(
        tensor(x, y), n, max_len, outputs=_outputs(n, max_len, cache_dir)
    )
    uncond_y = exact_estimate(
        y, y.n_qubits, max_len, outputs=_outputs(y.n_qubits, max_len, cache_dir)
    )
    lhs = joint.best.total if joint.best else None
    y_total = uncond_y.best.total if uncond_y.best else None
    rhs = None
    slack = None
    if y_total is not None:
        rhs = y_total - math.log2(q)
        if lhs is not None:
            slack = rhs - lhs
    return JointBoundReport(p_x, p_y, max_len, q, True, lhs, y_total, rhs, slack)


# ---------------------------------------------------------------------------
# Superposed-bit worked example
# ---------------------------------------------------------------------------

@dataclass
class SuperposedBitReport:
    n: int
    bits: str
    position: int
    rotated: ExactEstimate
    classical: ExactEstimate
    constructive: Program
    basis_code_lengths: list
    note: str

    def to_json_obj(self) -> dict:
        return {
            "kind": "superposed_bit",
            "n": self.n,
            "bits": self.bits,
            "position": self.position,
            "rotated": record_obj(self.rotated.best),
            "classical": record_obj(self.classical.best),
            "constructive_length": self.constructive.length,
            "constructive_program": program_to_json(self.constructive),
            "basis_code_lengths": [
                None if length == float("inf") else length
                for length in self.basis_code_lengths
            ],
            "note": self.note,
        }


def superposed_bit_example(
    n: int,
    max_len: int,
    bits: Optional[str] = None,
    position: int = 0,
    cache_dir=None,
) -> SuperposedBitReport:
    """Take a classical string and rotate one of its qubits into superposition,
    then report how the estimate decomposes into program bits and penalty bits.

    An exactly equal-weight split (amplitude 1/sqrt 2) is not Gaussian
    rational, so the machine's 3/5-4/5 rotation stands in for it.
    """
    if bits is None:
        bits = "0" * n
    if len(bits) != n:
        raise ValueError("bit string length must equal n")
    base = classical_state(bits)
    target = apply_gate(base, ROT(position))
    outputs = _outputs(n, max_len, cache_dir)
    rotated = exact_estimate(target, n, max_len, outputs=outputs)
    classical = exact_estimate(base, n, max_len, outputs=outputs)
    x_gates = [X(j) for j in range(n) if bits[j] == "1"]
    constructive = encode(x_gates + [ROT(position)], n)
    lengths = shannon_fano_lengths(standard_basis(n), target)
    note = (
        "amplitude 1/sqrt(2) is not Gaussian rational; the 3/5,4/5 rotation "
        "stands in for an equal-weight superposition"
    )
    return SuperposedBitReport(
        n, bits, position, rotated, classical, constructive, lengths, note
    )
