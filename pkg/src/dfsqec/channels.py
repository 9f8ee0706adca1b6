"""Engineered z-dephasing channels and the associated noise bookkeeping.

Every noise generator here is a weighted sum of sigma_z operators,
``W = sum_j w_j sigma_z^j``.  Because all such generators commute, both
channel families have exact closed-form actions on matrix elements.
Writing ``Delta`` for the difference of W eigenvalues between the ket
and bra basis states of an element:

* incoherent dephasing is the ensemble average of the unitary
  ``U(phi) = exp(-i phi W / 2)`` with phi uniform on
  ``[-kappa/2, kappa/2]``.  Each element is multiplied by
  ``sin(x)/x`` at ``x = kappa * Delta / 4``.  This is the attenuation
  produced by a field-gradient pulse integrated over a spatially
  uniform sample; it is unital and completely positive but not a
  semigroup, two averages do not compose into one.
* Markovian dephasing is the exact solution of the Lindblad equation
  with jump operators ``L_mu = sqrt(lambda_mu / 2) W_mu``; each element
  is multiplied by ``exp(-lambda_mu t Delta^2 / 4)``.

An element with ``Delta = 0`` is untouched at any strength.  For the
collective generator ``sigma_z^3 + sigma_z^4`` this is what makes
``span{|01>, |10>}`` of qubits 3 and 4 a decoherence-free subspace.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qstate import DensityMatrix

__all__ = [
    "DephasingGenerator",
    "NoiseSpec",
    "GradientSpec",
    "INCOHERENT_SINC",
    "MARKOVIAN_EXP",
    "COUPLING_CASES",
    "sinc",
    "incoherent_dephase",
    "apply_incoherent",
    "markov_dephase",
    "noise_strength",
    "partial_strengths",
    "restrict_to_qubit",
    "qubit3_strength_ratio",
    "build_error_model",
]

INCOHERENT_SINC = "incoherent_sinc"
MARKOVIAN_EXP = "markovian_exp"
NOISE_KINDS = (INCOHERENT_SINC, MARKOVIAN_EXP)
COUPLING_CASES = ("a", "b")


def sinc(x):
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


@dataclass(frozen=True, eq=False)
class DephasingGenerator:
    """One z-type noise axis: per-qubit weights plus a strength.

    ``strength`` is the phase spread kappa when the generator drives an
    incoherent average, or the rate lambda_mu when it drives Markovian
    dephasing.  The represented operator is ``W = sum_j w_j sigma_z^j``
    (jump operator ``sqrt(strength/2) W`` in the Markovian reading).
    """

    weights: np.ndarray
    strength: float
    label: str = ""

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a per-qubit vector")
        if not np.any(w != 0.0):
            raise ValueError("weights must not all be zero")
        if not (self.strength >= 0.0):
            raise ValueError(f"strength must be >= 0, got {self.strength}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n_qubits(self) -> int:
        return self.weights.size

    def z_values(self) -> np.ndarray:
        """Eigenvalue of W on each computational basis state."""
        return _z_values(self.weights)

    def lindblad_matrix(self) -> np.ndarray:
        """Dense jump operator sqrt(strength/2) W."""
        return np.diag(np.sqrt(self.strength / 2.0) * self.z_values()).astype(complex)


def _z_values(weights: np.ndarray) -> np.ndarray:
    n = weights.size
    idx = np.arange(2**n)
    bits = (idx[:, None] >> (n - 1 - np.arange(n))) & 1
    return (1.0 - 2.0 * bits) @ weights


def _delta(gen: DephasingGenerator, dim: int) -> np.ndarray:
    if 2**gen.n_qubits != dim:
        raise ValueError(f"generator on {gen.n_qubits} qubit(s) does not match dimension {dim}")
    z = gen.z_values()
    return z[:, None] - z[None, :]


def incoherent_dephase(rho: DensityMatrix, gen: DephasingGenerator) -> DensityMatrix:
    """Exact uniform-phase average of exp(-i phi W / 2) conjugation.

    Each matrix element is multiplied by sinc(kappa * Delta / 4), with
    kappa the generator strength.
    """
    factor = sinc(gen.strength * _delta(gen, rho.dim) / 4.0)
    return DensityMatrix(rho.entries * factor, rho.kind)


def apply_incoherent(rho: DensityMatrix, gens: Sequence[DephasingGenerator]) -> DensityMatrix:
    """Apply several independent incoherent axes; order is irrelevant
    because the generators commute."""
    for gen in gens:
        rho = incoherent_dephase(rho, gen)
    return rho


def markov_dephase(rho: DensityMatrix, gens: Sequence[DephasingGenerator], t: float) -> DensityMatrix:
    """Exact Lindblad evolution for commuting z-type jump operators.

    Each matrix element is multiplied by
    prod_mu exp(-lambda_mu t Delta_mu^2 / 4); for a single-qubit
    generator this is the familiar coherence decay exp(-lambda t).
    """
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    out = rho.entries
    for gen in gens:
        delta = _delta(gen, rho.dim)
        out = out * np.exp(-gen.strength * t * delta**2 / 4.0)
    return DensityMatrix(out, rho.kind)


def _operator_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x, 2))


def noise_strength(gens: Sequence[DephasingGenerator]) -> float:
    """Overall noise strength sum_mu |L_mu|^2 + |sum_mu L_mu^dag L_mu|,
    with |X| the largest singular value and L_mu = sqrt(strength/2) W_mu.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n_qubits
    if any(g.n_qubits != n for g in gens):
        raise ValueError("generators must share a common qubit count")
    mats = [g.lindblad_matrix() for g in gens]
    total = sum(_operator_norm(m) ** 2 for m in mats)
    accum = sum(m.conj().T @ m for m in mats)
    return float(total + _operator_norm(accum))


def partial_strengths(gens: Sequence[DephasingGenerator]) -> list[float]:
    """Per-generator partial strengths lambda_mu = 2 |L_mu|^2."""
    return [2.0 * _operator_norm(g.lindblad_matrix()) ** 2 for g in gens]


def restrict_to_qubit(gen: DephasingGenerator, qubit: int) -> DephasingGenerator | None:
    """Single-qubit component of a generator, or None if it does not
    touch the qubit.  The amplitude w_j sqrt(strength/2) is preserved."""
    if qubit < 1 or qubit > gen.n_qubits:
        raise ValueError(f"qubit {qubit} out of range 1..{gen.n_qubits}")
    w = float(gen.weights[qubit - 1])
    if w == 0.0:
        return None
    label = f"{gen.label}@q{qubit}" if gen.label else f"q{qubit}"
    return DephasingGenerator(np.array([w]), gen.strength, label)


def qubit3_strength_ratio(epsilon: float) -> float:
    """Qubit-3 noise-strength ratio between the single-environment
    coupling (collective and residual amplitudes added into one
    generator) and the two-environment coupling (kept separate).

    ``epsilon`` is the residual/collective amplitude ratio on qubit 3;
    the exact value of the ratio is (1 + eps)^2 / (1 + eps^2), but it is
    computed here from the operator-norm definition.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    combined = DephasingGenerator(np.array([0.0, 0.0, 1.0 + epsilon, 1.0]), 1.0, "combined")
    separate = [
        DephasingGenerator(np.array([0.0, 0.0, 1.0, 1.0]), 1.0, "collective"),
        DephasingGenerator(np.array([0.0, 0.0, 1.0, 0.0]), epsilon**2, "residual"),
    ]
    single = noise_strength([restrict_to_qubit(combined, 3)])
    pair = noise_strength([g for g in (restrict_to_qubit(g, 3) for g in separate) if g is not None])
    return single / pair


@dataclass(frozen=True)
class GradientSpec:
    """Physical gradient parameters; only the product enters the model."""

    gamma: float
    gradient: float
    duration: float
    length: float

    @property
    def kappa(self) -> float:
        return self.gamma * self.gradient * self.duration * self.length


@dataclass(frozen=True)
class NoiseSpec:
    """Declarative description of one engineered error model.

    ``kappa0`` is the independent per-qubit scale: the phase spread
    kappa_0 for the incoherent kind, or the dimensionless product
    lambda_0 * t for the Markovian kind.  When ``collective`` is set,
    qubits 3 and 4 additionally see a collective axis whose scale is
    ``kappa0 / ratio`` (incoherent) or ``kappa0 / ratio**2`` (Markovian,
    rates scale as amplitude squared), unless ``kappa_c`` overrides it.

    ``coupling_case`` selects how the collective and residual noise on
    qubit 3 combine: case "a" shares one environment, so the amplitudes
    add into a single generator and the qubit-3 totals are
    kappa_3 = kappa_c + kappa_0; case "b" keeps two separate
    environments.  ``epsilon`` is the residual/collective amplitude
    ratio used by strength analyses; it defaults to ``ratio``.
    """

    kappa0: float
    collective: bool = False
    ratio: float = 0.5
    coupling_case: str = "a"
    kind: str = INCOHERENT_SINC
    epsilon: float | None = None
    kappa_c: float | None = None

    def __post_init__(self):
        if not (self.kappa0 >= 0.0):
            raise ValueError(f"kappa0 must be >= 0, got {self.kappa0}")
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.coupling_case not in COUPLING_CASES:
            raise ValueError(f"coupling case must be one of {COUPLING_CASES}, got {self.coupling_case!r}")
        if self.collective and not (self.ratio > 0.0):
            raise ValueError(f"ratio must be > 0 with collective noise enabled, got {self.ratio}")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.kappa_c is not None and self.kappa_c < 0:
            raise ValueError(f"kappa_c must be >= 0, got {self.kappa_c}")

    @property
    def amplitude_ratio(self) -> float:
        return self.ratio if self.epsilon is None else self.epsilon

    def collective_scale(self) -> float | None:
        """Strength of the collective axis, None when disabled."""
        if not self.collective:
            return None
        if self.kappa_c is not None:
            return self.kappa_c
        if self.kind == INCOHERENT_SINC:
            return self.kappa0 / self.ratio
        return self.kappa0 / self.ratio**2


def build_error_model(spec: NoiseSpec, n_qubits: int) -> list[DephasingGenerator]:
    """Generators realizing a NoiseSpec on a 3- or 4-qubit register.

    Independent axes act on qubits 1, 2 and 3 with scale ``kappa0``.
    The collective axis (4-qubit layouts only) acts on qubits 3 and 4.
    In case "a" the independent qubit-3 axis and the collective axis
    are one and the same environment: they are emitted as a single
    generator with weights (1 + e, 1) on qubits (3, 4), where e is the
    residual/collective amplitude ratio, so the qubit-3 total spread is
    exactly kappa_c + kappa_0 while the decoherence-free pair sees only
    the residual kappa_0.  In case "b" the collective and residual
    generators stay separate.
    """
    if n_qubits not in (3, 4):
        raise ValueError(f"error model supports 3 or 4 qubits, got {n_qubits}")
    if spec.collective and n_qubits != 4:
        raise ValueError("collective dephasing requires the four-qubit layout")

    def axis(qubit: int, strength: float, label: str) -> DephasingGenerator:
        w = np.zeros(n_qubits)
        w[qubit - 1] = 1.0
        return DephasingGenerator(w, strength, label)

    x = spec.kappa0
    gens = [axis(1, x, "z1"), axis(2, x, "z2")]
    if not spec.collective:
        gens.append(axis(3, x, "z3"))
        return gens

    base_c = spec.collective_scale()
    if spec.coupling_case == "b":
        w = np.zeros(n_qubits)
        w[2] = w[3] = 1.0
        gens.append(DephasingGenerator(w, base_c, "z34-collective"))
        gens.append(axis(3, x, "z3-residual"))
        return gens

    # case "a": one environment; amplitudes on qubit 3 add coherently
    if base_c > 0.0:
        if spec.kind == INCOHERENT_SINC:
            e = x / base_c
        else:
            e = float(np.sqrt(x / base_c))
        w = np.zeros(n_qubits)
        w[2] = 1.0 + e
        w[3] = 1.0
        gens.append(DephasingGenerator(w, base_c, "z34-combined"))
    else:
        gens.append(axis(3, x, "z3-residual"))
    return gens
