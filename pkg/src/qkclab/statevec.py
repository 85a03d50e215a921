"""Exact state-vector substrate: Gaussian-rational amplitudes, the fixed gate
set, fidelity, and Shannon-Fano code lengths.

Amplitudes live in Q(i) -- complex numbers whose real and imaginary parts are
arbitrary-precision rationals -- so unit norm, orthogonality and outcome
probabilities are decided exactly. No function in this module performs
floating-point arithmetic on amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Union

# Distinguished "infinite" code length for zero-probability outcomes.  It is an
# ordinary value (not an error) so that enumeration loops can carry it along.
INFINITE = math.inf


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not allowed in amplitude arithmetic")
    return Fraction(x)


@dataclass(frozen=True)
class GaussianRational:
    """A complex number re + im*i with rational parts.

    Fraction keeps itself in lowest terms, so every value has a unique
    representation and ==/hash are exact.
    """

    re: Fraction
    im: Fraction

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def scale(self, f: Fraction) -> "GaussianRational":
        return GaussianRational(self.re * f, self.im * f)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def times_i(self) -> "GaussianRational":
        return GaussianRational(-self.im, self.re)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __str__(self) -> str:
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"


def gr(re=0, im=0) -> GaussianRational:
    """Build a GaussianRational from ints, Fractions or rational strings."""
    return GaussianRational(_frac(re), _frac(im))


GR_ZERO = gr(0)
GR_ONE = gr(1)


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class X:
    target: int


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control and target must differ")


@dataclass(frozen=True)
class ROT:
    """The single primitive rotation: cosine 3/5, sine 4/5."""

    target: int


@dataclass(frozen=True)
class PHASE:
    """diag(1, i) on the target qubit."""

    target: int


Gate = Union[X, CNOT, ROT, PHASE]

ROT_COS = Fraction(3, 5)
ROT_SIN = Fraction(4, 5)


def gate_qubits(gate: Gate) -> tuple[int, ...]:
    if isinstance(gate, CNOT):
        return (gate.control, gate.target)
    return (gate.target,)


def gate_matrix(gate: Gate) -> tuple[tuple[GaussianRational, ...], ...]:
    """The gate's unitary as an exact matrix (2x2, or 4x4 for CNOT ordered
    control then target)."""
    z, o = GR_ZERO, GR_ONE
    if isinstance(gate, X):
        return ((z, o), (o, z))
    if isinstance(gate, ROT):
        c = gr(ROT_COS)
        s = gr(ROT_SIN)
        return ((c, -s), (s, c))
    if isinstance(gate, PHASE):
        return ((o, z), (z, gr(0, 1)))
    if isinstance(gate, CNOT):
        return (
            (o, z, z, z),
            (z, o, z, z),
            (z, z, z, o),
            (z, z, o, z),
        )
    raise TypeError(f"not a gate: {gate!r}")


def matrix_is_unitary(m) -> bool:
    """Exact check that the conjugate transpose inverts the matrix."""
    size = len(m)
    for i in range(size):
        for j in range(size):
            acc = GR_ZERO
            for k in range(size):
                acc = acc + m[k][i].conj() * m[k][j]
            if acc != (GR_ONE if i == j else GR_ZERO):
                return False
    return True


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateVector:
    """Unit vector of 2^n_qubits Gaussian-rational amplitudes.

    Qubit 0 is the most significant bit of the amplitude index, so the
    amplitude of |b_0 b_1 ... b_{n-1}> sits at index int(b_0 b_1 ... b_{n-1}, 2).
    """

    n_qubits: int
    amps: tuple[GaussianRational, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        if len(self.amps) != 1 << self.n_qubits:
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes, got {len(self.amps)}"
            )
        if self.norm_sq() != 1:
            raise ValueError("state is not exactly unit norm")

    def norm_sq(self) -> Fraction:
        return sum((a.abs2() for a in self.amps), Fraction(0))

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits


def zero_state(n: int) -> StateVector:
    return basis_state(n, 0)


def basis_state(n: int, index: int) -> StateVector:
    if not 0 <= index < (1 << n):
        raise ValueError(f"basis index {index} out of range for n={n}")
    amps = [GR_ZERO] * (1 << n)
    amps[index] = GR_ONE
    return StateVector(n, tuple(amps))


def classical_state(bits: str) -> StateVector:
    """The computational-basis state labelled by a classical bit string."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"not a bit string: {bits!r}")
    return basis_state(len(bits), int(bits, 2))


def _mask(n: int, qubit: int) -> int:
    # qubit 0 is the most significant index bit
    return 1 << (n - 1 - qubit)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Exact matrix action of one gate; the result is unit norm by unitarity."""
    n = state.n_qubits
    for q in gate_qubits(gate):
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for n={n}")
    amps = list(state.amps)
    if isinstance(gate, X):
        m = _mask(n, gate.target)
        for i in range(state.dim):
            if not i & m:
                amps[i], amps[i | m] = amps[i | m], amps[i]
    elif isinstance(gate, ROT):
        m = _mask(n, gate.target)
        for i in range(state.dim):
            if not i & m:
                lo, hi = amps[i], amps[i | m]
                amps[i] = lo.scale(ROT_COS) - hi.scale(ROT_SIN)
                amps[i | m] = lo.scale(ROT_SIN) + hi.scale(ROT_COS)
    elif isinstance(gate, PHASE):
        m = _mask(n, gate.target)
        for i in range(state.dim):
            if i & m:
                amps[i] = amps[i].times_i()
    elif isinstance(gate, CNOT):
        mc = _mask(n, gate.control)
        mt = _mask(n, gate.target)
        for i in range(state.dim):
            if i & mc and not i & mt:
                amps[i], amps[i | mt] = amps[i | mt], amps[i]
    else:
        raise TypeError(f"not a gate: {gate!r}")
    return StateVector(n, tuple(amps))


def apply_circuit(state: StateVector, gates) -> StateVector:
    for g in gates:
        state = apply_gate(state, g)
    return state


def inner_product(x: StateVector, z: StateVector) -> GaussianRational:
    """<x|z>, exactly."""
    if x.n_qubits != z.n_qubits:
        raise ValueError("dimension mismatch")
    acc = GR_ZERO
    for a, b in zip(x.amps, z.amps):
        acc = acc + a.conj() * b
    return acc


def fidelity(x: StateVector, z: StateVector) -> Fraction:
    """|<x|z>|^2: the probability that z passes a test for x."""
    return inner_product(x, z).abs2()


def tensor(x: StateVector, y: StateVector) -> StateVector:
    """Joint state; x supplies the high-order qubits."""
    amps = tuple(a * b for a in x.amps for b in y.amps)
    return StateVector(x.n_qubits + y.n_qubits, amps)


# ---------------------------------------------------------------------------
# Code lengths
# ---------------------------------------------------------------------------

def penalty_bits(q) -> int | float:
    """Least integer d >= 0 with q >= 2^-d, by exact integer comparison.

    This is ceil(-log2 q) for rational q in (0, 1]. q == 0 yields INFINITE:
    an orthogonal outcome can never be redescribed, so it contributes nothing
    to any minimum.
    """
    q = _frac(q)
    if q < 0 or q > 1:
        raise ValueError(f"probability out of range: {q}")
    if q == 0:
        return INFINITE
    num, den = q.numerator, q.denominator
    d = max(0, den.bit_length() - num.bit_length() - 1)
    while (num << d) < den:
        d += 1
    while d > 0 and (num << (d - 1)) >= den:
        d -= 1
    return d


@dataclass(frozen=True)
class Basis:
    """An exactly orthonormal basis of 2^n state vectors."""

    vectors: tuple[StateVector, ...]

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("empty basis")
        n = self.vectors[0].n_qubits
        if any(v.n_qubits != n for v in self.vectors):
            raise ValueError("basis vectors have mixed dimensions")
        if len(self.vectors) != 1 << n:
            raise ValueError("basis does not span the space")
        for i in range(len(self.vectors)):
            for j in range(i + 1, len(self.vectors)):
                if not inner_product(self.vectors[i], self.vectors[j]).is_zero():
                    raise ValueError(f"basis vectors {i} and {j} are not orthogonal")

    @property
    def n_qubits(self) -> int:
        return self.vectors[0].n_qubits


def standard_basis(n: int) -> Basis:
    return Basis(tuple(basis_state(n, i) for i in range(1 << n)))


def transformed_basis(n: int, gates) -> Basis:
    """Image of the standard basis under a circuit (exactly orthonormal since
    every gate is unitary)."""
    return Basis(tuple(apply_circuit(basis_state(n, i), gates) for i in range(1 << n)))


def shannon_fano_lengths(basis: Basis, z: StateVector) -> list[int | float]:
    """Per-basis-vector redescription code lengths ceil(-log2 |<e_i|z>|^2).

    Entries are INFINITE where the overlap is exactly zero.  The finite entries
    always satisfy sum(2^-length) <= 2 because each length overshoots the ideal
    -log2 q_i by less than one bit.
    """
    if basis.n_qubits != z.n_qubits:
        raise ValueError("dimension mismatch")
    return [penalty_bits(fidelity(e, z)) for e in basis.vectors]


def shannon_fano_code(basis: Basis, z: StateVector) -> dict[int, str]:
    """Actual codewords via the classical cumulative construction.

    Probabilities are sorted descending with ties broken by basis index; the
    codeword for a symbol is the first ceil(-log2 p) bits of the running
    cumulative probability.  Zero-probability symbols get no codeword.  The
    result is prefix-free.
    """
    probs = [fidelity(e, z) for e in basis.vectors]
    order = sorted(range(len(probs)), key=lambda i: (-probs[i], i))
    cum = Fraction(0)
    code: dict[int, str] = {}
    for i in order:
        p = probs[i]
        if p == 0:
            continue
        d = penalty_bits(p)
        scaled = (cum.numerator << d) // cum.denominator
        code[i] = format(scaled, f"0{d}b") if d else ""
        cum += p
    return code


# ---------------------------------------------------------------------------
# Random exact states
# ---------------------------------------------------------------------------

def _pythagorean_rotation(rng: Random) -> tuple[Fraction, Fraction]:
    # (a/c, b/c) with a^2 + b^2 = c^2, so the Givens rotation is exactly unitary
    while True:
        m = rng.randrange(2, 12)
        k = rng.randrange(1, m)
        if (m - k) % 2 == 1 and math.gcd(m, k) == 1:
            a, b, c = m * m - k * k, 2 * m * k, m * m + k * k
            return Fraction(a, c), Fraction(b, c)


def random_state(n: int, rng: Random) -> StateVector:
    """Pseudo-random exactly-unit-norm rational state.

    Starts from |0...0> and applies a chain of exact Givens rotations built
    from Pythagorean triples, plus occasional factors of i and -1, so the
    output does not have to be reachable by the machine's gate set.
    """
    dim = 1 << n
    amps = [GR_ZERO] * dim
    amps[0] = GR_ONE
    for _ in range(3 * dim):
        i, j = rng.sample(range(dim), 2)
        c, s = _pythagorean_rotation(rng)
        ai, aj = amps[i], amps[j]
        amps[i] = ai.scale(c) - aj.scale(s)
        amps[j] = ai.scale(s) + aj.scale(c)
        if rng.random() < 0.5:
            amps[i] = amps[i].times_i()
        if rng.random() < 0.25:
            amps[j] = -amps[j]
    return StateVector(n, tuple(amps))


# ---------------------------------------------------------------------------
# Serialization (the wire format for the CLI and the cache)
# ---------------------------------------------------------------------------

def state_to_json(state: StateVector) -> dict:
    """{"n": int, "amps": [[re_num, re_den, im_num, im_den], ...]} with the
    integers as decimal strings, so arbitrary precision survives JSON."""
    return {
        "n": state.n_qubits,
        "amps": [
            [
                str(a.re.numerator),
                str(a.re.denominator),
                str(a.im.numerator),
                str(a.im.denominator),
            ]
            for a in state.amps
        ],
    }


def state_from_json(obj) -> StateVector:
    try:
        n = int(obj["n"])
        amps = tuple(
            GaussianRational(
                Fraction(int(rn), int(rd)), Fraction(int(imn), int(imd))
            )
            for rn, rd, imn, imd in obj["amps"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state record: {exc}") from exc
    return StateVector(n, amps)
