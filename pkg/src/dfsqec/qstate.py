"""Dense operators and density matrices for few-qubit systems.

Conventions used everywhere in this package:

* qubits are numbered 1..n and the basis is big-endian, so qubit 1 is
  the most significant bit of a computational-basis index;
* ``sigma_z |0> = +|0>``;
* matrices are plain dense numpy arrays (nothing here is larger than
  16x16), copied on construction and marked read-only, so every value
  is immutable and safe to share between threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Operator",
    "DensityMatrix",
    "STATE",
    "DEVIATION",
    "SX",
    "SY",
    "SZ",
    "ID2",
    "identity",
    "pauli",
    "computational_state",
    "maximally_mixed",
    "pauli_deviation",
    "tensor",
    "tensor_dm",
    "embed",
    "apply_unitary",
    "partial_trace",
    "hs_overlap",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
STATE_MIN_EIG = -1e-10
UNITARY_TOL = 1e-10

STATE = "state"
DEVIATION = "deviation"


def _frozen_square(entries) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if n < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense operator on an n-qubit space, optionally flagged unitary."""

    entries: np.ndarray
    unitary: bool = False

    def __post_init__(self):
        m = _frozen_square(self.entries)
        if self.unitary:
            dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
            if dev > UNITARY_TOL:
                raise ValueError(f"operator flagged unitary violates U^dag U = I by {dev:.2e}")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian matrix describing a system state.

    ``kind="state"`` is a normalized density matrix (unit trace,
    positive semidefinite).  ``kind="deviation"`` is a traceless
    Hermitian deviation, the object actually observed in ensemble
    experiments where the identity background is invisible; no
    positivity is required for deviations.
    """

    entries: np.ndarray
    kind: str = STATE

    def __post_init__(self):
        if self.kind not in (STATE, DEVIATION):
            raise ValueError(f"unknown density-matrix kind {self.kind!r}")
        m = _frozen_square(self.entries)
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian, max deviation {herm:.2e}")
        tr = complex(np.trace(m)).real
        if self.kind == STATE:
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"state trace is {tr!r}, expected 1")
            lowest = float(np.linalg.eigvalsh(m)[0])
            if lowest < STATE_MIN_EIG:
                raise ValueError(f"state has negative eigenvalue {lowest:.2e}")
        else:
            if abs(tr) > TRACE_TOL:
                raise ValueError(f"deviation trace is {tr!r}, expected 0")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


ID2 = Operator(np.eye(2), unitary=True)
SX = Operator(np.array([[0.0, 1.0], [1.0, 0.0]]), unitary=True)
SY = Operator(np.array([[0.0, -1.0j], [1.0j, 0.0]]), unitary=True)
SZ = Operator(np.array([[1.0, 0.0], [0.0, -1.0]]), unitary=True)

_PAULIS = {"x": SX, "y": SY, "z": SZ}


def pauli(axis: str) -> Operator:
    """Return sigma_x, sigma_y or sigma_z."""
    try:
        return _PAULIS[axis]
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def identity(n_qubits: int) -> Operator:
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    return Operator(np.eye(2**n_qubits), unitary=True)


def computational_state(bits: str | Sequence[int]) -> DensityMatrix:
    """Projector onto a computational basis state, e.g. ``"010"``."""
    bitlist = [int(b) for b in bits]
    if not bitlist or any(b not in (0, 1) for b in bitlist):
        raise ValueError(f"bits must be a nonempty 0/1 sequence, got {bits!r}")
    index = 0
    for b in bitlist:
        index = (index << 1) | b
    dim = 2 ** len(bitlist)
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return DensityMatrix(m, STATE)


def maximally_mixed(n_qubits: int) -> DensityMatrix:
    dim = 2**n_qubits
    return DensityMatrix(np.eye(dim) / dim, STATE)


def pauli_deviation(axis: str) -> DensityMatrix:
    """One-qubit traceless deviation equal to a Pauli matrix."""
    return DensityMatrix(pauli(axis).entries, DEVIATION)


def tensor(a: Operator, b: Operator) -> Operator:
    """Kronecker product; the first factor holds the more significant qubits."""
    return Operator(np.kron(a.entries, b.entries), unitary=a.unitary and b.unitary)


def tensor_dm(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Product state of two density matrices; any deviation factor makes
    the result a deviation (the trace multiplies)."""
    kind = STATE if (a.kind == STATE and b.kind == STATE) else DEVIATION
    return DensityMatrix(np.kron(a.entries, b.entries), kind)


def embed(gate: Operator, targets: Sequence[int], n_qubits: int) -> Operator:
    """Extend ``gate`` to act on the listed qubits of an n-qubit system.

    ``targets`` maps the gate's own qubits, in order, onto system qubit
    labels; every other qubit is left alone.
    """
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubit in {targets}")
    if any(t < 1 or t > n_qubits for t in targets):
        raise ValueError(f"targets {targets} out of range 1..{n_qubits}")
    if gate.dim != 2 ** len(targets):
        raise ValueError(f"gate of dimension {gate.dim} does not fit {len(targets)} target(s)")
    rest = [q for q in range(1, n_qubits + 1) if q not in targets]
    order = targets + rest
    full = np.kron(gate.entries, np.eye(2 ** len(rest)))
    # full acts on qubits in `order`; permute tensor axes back to 1..n
    t = full.reshape((2,) * (2 * n_qubits))
    perm = [order.index(q) for q in range(1, n_qubits + 1)]
    t = t.transpose(perm + [p + n_qubits for p in perm])
    dim = 2**n_qubits
    return Operator(t.reshape(dim, dim), unitary=gate.unitary)


def apply_unitary(rho: DensityMatrix, u: Operator) -> DensityMatrix:
    """Conjugate a state by a unitary, ``U rho U^dag``."""
    if u.dim != rho.dim:
        raise ValueError(f"dimension mismatch: operator {u.dim} vs state {rho.dim}")
    if not u.unitary:
        raise ValueError("operator is not flagged unitary")
    return DensityMatrix(u.entries @ rho.entries @ u.entries.conj().T, rho.kind)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce to the listed qubits, preserving their relative order."""
    kept = sorted(set(keep))
    n = rho.n_qubits
    if not kept:
        raise ValueError("keep set must be nonempty")
    if any(q < 1 or q > n for q in kept):
        raise ValueError(f"keep set {kept} out of range 1..{n}")
    t = rho.entries.reshape((2,) * (2 * n))
    current = list(range(1, n + 1))
    for q in [q for q in current if q not in kept]:
        i = current.index(q)
        t = np.trace(t, axis1=i, axis2=i + len(current))
        current.pop(i)
    dim = 2 ** len(kept)
    return DensityMatrix(t.reshape(dim, dim), rho.kind)


def hs_overlap(a: DensityMatrix, b: DensityMatrix) -> float:
    """Hilbert-Schmidt overlap Re tr(a b) of two Hermitian matrices."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    val = complex(np.trace(a.entries @ b.entries))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"overlap has imaginary part {val.imag:.2e}; inputs must be Hermitian")
    return float(val.real)
