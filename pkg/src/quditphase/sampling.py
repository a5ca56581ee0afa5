"""Monte-Carlo Born-probability estimation from quasiprobability frames.

The estimator decomposes the input state in an operator frame (the
Hermitian O basis, or the Heisenberg-Weyl basis for the characteristic
variant), samples phase-point trajectories through the circuit, and
averages signed weights:

    M_traj = x_Pi(lam_T) sign(x_rho(lam_0)) ||x_rho||_1 prod_t sign_t ||col_t||_1

The sample count follows the Hoeffding bound
K = ceil(2 M^2 ln(2/p_f) / eps^2) with M the aggregated l1 norm of the
circuit. Named generator gates never touch dense matrices: their frame
action is an exact coordinate permutation with a sign, and they consume
no randomness. Explicit gates sample lazily computed, memoized columns.

Determinism contract: one uniform block per stream per sampled step, in
trajectory order; per-stream compensated sums merged exactly. A report
is bit-for-bit reproducible for fixed (seed, streams).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .core import (
    DenseOperator,
    DensityState,
    GateKind,
    InvariantError,
    QuditSystem,
    ValidationError,
    embed_generator,
    t_state,
)
from .basis import (
    Domain,
    PhasePoint,
    clifford_coordinate_action,
    o_operator,
    o_stack,
    p_stack,
    restricted_point,
)
from .measures import (
    NORM_CUTOFF,
    QuasiDistribution,
    _contract_stack,
    characteristic_fn,
    lp_norm,
    x_distribution,
)
from .stabilizer import StabilizerGroup, stabilizer_state

__all__ = [
    "MeasurementKind",
    "MeasurementEffect",
    "NamedGate",
    "CircuitDescription",
    "EstimateReport",
    "frame_state_coeffs",
    "frame_unitary_coeffs",
    "frame_measurement_coeffs",
    "forward_norm",
    "sample_count",
    "estimate_born",
    "estimate_born_char",
]

_SWEEP_SEED = 0x5EED  # fixed entropy for the n>=2 forward-norm sweep
_SWEEP_POINTS = 256


class MeasurementKind(str, Enum):
    COMPUTATIONAL = "COMPUTATIONAL"
    EXPLICIT = "EXPLICIT"


@dataclass(frozen=True)
class MeasurementEffect:
    """Projective computational readout on a subset, or an explicit effect."""

    kind: MeasurementKind
    indices: tuple[int, ...] = ()
    outcomes: tuple[int, ...] = ()
    operator: DenseOperator | None = None

    def validate(self, system: QuditSystem) -> None:
        if self.kind == MeasurementKind.COMPUTATIONAL:
            if len(self.indices) != len(self.outcomes) or not self.indices:
                raise ValidationError("indices and outcomes must pair up")
            if len(set(self.indices)) != len(self.indices):
                raise ValidationError("measured indices must be distinct")
            if any(not 0 <= i < system.n for i in self.indices):
                raise ValidationError("measured index out of range")
            if any(not 0 <= o < system.d for o in self.outcomes):
                raise ValidationError("outcome out of range")
        else:
            if self.operator is None:
                raise ValidationError("EXPLICIT effect needs an operator")
            if self.operator.entries.shape != (system.dim, system.dim):
                raise ValidationError("effect shape mismatch")
            eig = np.linalg.eigvalsh(self.operator.entries)
            if eig.min() < -1e-9 or eig.max() > 1 + 1e-9:
                raise ValidationError("effect must satisfy 0 <= Pi <= 1")

    def dense(self, system: QuditSystem) -> np.ndarray:
        if self.kind == MeasurementKind.EXPLICIT:
            return self.operator.entries
        d = system.d
        factors = []
        for q in range(system.n):
            if q in self.indices:
                o = self.outcomes[self.indices.index(q)]
                m = np.zeros((d, d))
                m[o, o] = 1.0
                factors.append(m)
            else:
                factors.append(np.eye(d))
        out = factors[0]
        for f in factors[1:]:
            out = np.kron(out, f)
        return out


NamedGate = tuple[GateKind, tuple[int, ...]]
GateSpec = Union[NamedGate, DenseOperator]


@dataclass(frozen=True)
class CircuitDescription:
    """Input state, ordered gate list, and one measurement effect."""

    system: QuditSystem
    input_state: DensityState
    gates: tuple[GateSpec, ...]
    measurement: MeasurementEffect

    def __post_init__(self):
        if self.input_state.system != self.system:
            raise ValidationError("input state system mismatch")
        for g in self.gates:
            if isinstance(g, DenseOperator):
                if g.entries.shape != (self.system.dim, self.system.dim):
                    raise ValidationError("gate shape mismatch")
                u = g.entries
                if np.max(np.abs(u @ u.conj().T - np.eye(len(u)))) > 1e-9:
                    raise ValidationError("explicit gate is not unitary")
            else:
                kind, targets = g
                GateKind(kind)
                if any(not 0 <= t < self.system.n for t in targets):
                    raise ValidationError("gate target out of range")
        self.measurement.validate(self.system)


def resolve_input(system: QuditSystem, state) -> DensityState:
    """Accept a DensityState, a StabilizerGroup, or the magic label 'T'."""
    if isinstance(state, DensityState):
        return state
    if isinstance(state, StabilizerGroup):
        return stabilizer_state(state)
    if state == "T":
        if (system.d, system.n) != (2, 1):
            raise ValidationError("the T state is the single-qubit magic input")
        return t_state()
    raise ValidationError(f"unsupported circuit input: {state!r}")


@dataclass(frozen=True)
class EstimateReport:
    estimate: float
    epsilon: float
    failure_prob: float
    samples_used: int
    forward_norm: float
    seed: int
    streams: int


# ---------------------------------------------------------------- frames

def frame_state_coeffs(rho: DensityState) -> QuasiDistribution:
    """x_rho(lam) = Tr(rho O_lam / d^n) on the restricted domain."""
    return x_distribution(rho, Domain.RESTRICTED)


def frame_unitary_coeffs(system: QuditSystem, gate: GateSpec, lam: PhasePoint) -> QuasiDistribution:
    """One column x_U(. | lam); a single signed entry for named gates."""
    d, n = system.d, system.n
    if isinstance(gate, DenseOperator):
        col = _dense_column(system, gate.entries, lam)
        return QuasiDistribution(system, Domain.RESTRICTED, col.reshape((d,) * (2 * n)))
    kind, targets = gate
    vecs = lam.vector().reshape(-1, 1)
    new, sign = _apply_named(system, kind, tuple(targets), vecs)
    out = np.zeros((d,) * (2 * n))
    out[tuple(int(c) for c in new[:, 0])] = float(sign[0])
    return QuasiDistribution(system, Domain.RESTRICTED, out)


def frame_measurement_coeffs(system: QuditSystem, effect: MeasurementEffect, lam: PhasePoint) -> float:
    """x_Pi(lam) = Tr(Pi O_lam), closed form for computational effects."""
    arr = _measurement_array(system, effect)
    return float(arr[tuple(lam.vector())])


def _dense_column(system: QuditSystem, unitary: np.ndarray, lam: PhasePoint) -> np.ndarray:
    """x_U(lam' | lam) for every lam', via one dense conjugation."""
    d, n = system.d, system.n
    o = o_operator(system, lam).entries
    conj = unitary @ o @ unitary.conj().T
    col = _contract_stack(system, o_stack(d, d), conj) / d**n
    if np.max(np.abs(col.imag)) > 1e-10:
        raise InvariantError("frame column must be real")
    col = col.real.reshape(-1)
    col[np.abs(col) < NORM_CUTOFF] = 0.0
    if not np.any(col):
        raise InvariantError("frame column vanished; unitary inconsistent")
    return col


def _apply_named(
    system: QuditSystem, kind: GateKind, targets: tuple[int, ...], vecs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Exact frame action of a named gate on restricted label vectors.

    vecs has shape (2n, K) with entries in [0, d). Returns the mapped
    restricted vectors and the per-trajectory sign picked up when the
    doubled-domain image is folded back.
    """
    d, n = system.d, system.n
    amap = clifford_coordinate_action(system, kind, targets)
    full = (amap.matrix @ vecs + amap.shift.reshape(-1, 1)) % (2 * d)
    red = full % d
    eps = full // d
    el, em = eps[:n], eps[n:]
    rl, rm = red[:n], red[n:]
    expo = np.sum(rm * el + rl * em + d * el * em, axis=0)
    sign = np.where(expo % 2, -1.0, 1.0)
    return red, sign


# ------------------------------------------------------- measurement table

def _measurement_array(system: QuditSystem, effect: MeasurementEffect) -> np.ndarray:
    """x_Pi over the whole restricted domain, shape (d,)*2n."""
    d, n = system.d, system.n
    if effect.kind == MeasurementKind.EXPLICIT:
        arr = _contract_stack(system, o_stack(d, d), effect.operator.entries.astype(complex))
        if np.max(np.abs(arr.imag)) > 1e-10:
            raise InvariantError("x_Pi must be real")
        return arr.real
    grids = np.meshgrid(*([np.arange(d)] * (2 * n)), indexing="ij")
    out = np.ones((d,) * (2 * n))
    for q in range(n):
        l, m = grids[q], grids[n + q]
        if q in effect.indices:
            o = effect.outcomes[effect.indices.index(q)]
            num = 2 * o - l
            hit = num % d == 0
            k = np.where(hit, num // d, 0)
            fac = np.where(hit, np.where((m * k) % 2, -1.0, 1.0), 0.0)
        elif d % 2:
            fac = np.where((m * l) % 2, -1.0, 1.0)
        else:
            fac = np.where(l % 2 == 0, 1.0 + np.where(m % 2, -1.0, 1.0), 0.0)
        out = out * fac
    return out


def _char_measurement_array(system: QuditSystem, effect: MeasurementEffect) -> np.ndarray:
    """Tr(Pi P(u)) over the restricted domain (complex)."""
    d, n = system.d, system.n
    if effect.kind == MeasurementKind.EXPLICIT:
        return _contract_stack(system, p_stack(d, d), effect.operator.entries.astype(complex))
    grids = np.meshgrid(*([np.arange(d)] * (2 * n)), indexing="ij")
    out = np.ones((d,) * (2 * n), dtype=complex)
    for q in range(n):
        a, b = grids[q], grids[n + q]
        if q in effect.indices:
            o = effect.outcomes[effect.indices.index(q)]
            fac = np.where(a == 0, np.exp(2j * np.pi * b * o / d), 0.0)
        else:
            fac = np.where((a == 0) & (b == 0), float(d), 0.0)
        out = out * fac
    return out


# ---------------------------------------------------------------- norms

def _column_norm_max(system: QuditSystem, gate: GateSpec, gate_index: int) -> float:
    """max_lam ||x_U(. | lam)||_1; exhaustive at n=1, seeded sweep above."""
    if not isinstance(gate, DenseOperator):
        return 1.0
    d, n = system.d, system.n
    total = d ** (2 * n)
    if n == 1 or total <= _SWEEP_POINTS:
        flats = range(total)
    else:
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=_SWEEP_SEED, spawn_key=(gate_index,)))
        )
        flats = sorted(set(int(i) for i in rng.integers(0, total, size=_SWEEP_POINTS)))
    best = 0.0
    for f in flats:
        vec = np.unravel_index(f, (d,) * (2 * n))
        lam = restricted_point(system, vec[:n], vec[n:])
        col = _dense_column(system, gate.entries, lam)
        best = max(best, float(np.sum(np.abs(col))))
    return best


def forward_norm(circuit: CircuitDescription) -> float:
    """Aggregated l1 norm: input 1-norm x gate column maxima x effect max."""
    system = circuit.system
    d, n = system.d, system.n
    m = lp_norm(frame_state_coeffs(circuit.input_state), 1)
    for i, g in enumerate(circuit.gates):
        m *= _column_norm_max(system, g, i)
    eff = circuit.measurement
    if eff.kind == MeasurementKind.COMPUTATIONAL:
        k = len(eff.indices)
        m *= 1.0 if d % 2 else float(2 ** (n - k))
    else:
        m *= float(np.max(np.abs(_measurement_array(system, eff))))
    return m


def sample_count(m_forward: float, epsilon: float, p_fail: float) -> int:
    """Hoeffding bound ceil(2 M^2 ln(2/p_f) / eps^2)."""
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    if not 0 < p_fail < 1:
        raise ValidationError("failure probability must lie in (0, 1)")
    if m_forward <= 0:
        raise ValidationError("forward norm must be positive")
    return math.ceil(2.0 * m_forward**2 * math.log(2.0 / p_fail) / epsilon**2)


# ------------------------------------------------------------- estimator

def _flat_coeffs(values: np.ndarray) -> np.ndarray:
    flat = values.reshape(-1).copy()
    flat[np.abs(flat) < NORM_CUTOFF] = 0.0
    return flat


def _cdf_from_abs(weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    nz = np.nonzero(weights)[0]
    cdf = np.cumsum(weights[nz])
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    return nz, cdf


def _stream_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=(stream,)))
    )


def _split_sizes(total: int, streams: int) -> list[int]:
    base, rem = divmod(total, streams)
    return [base + (1 if s < rem else 0) for s in range(streams)]


class _ColumnCache:
    """Lazy per-gate memo of frame columns keyed by source flat index."""

    def __init__(self, system: QuditSystem, char_frame: bool):
        self.system = system
        self.char = char_frame
        self.cols: dict[tuple[int, int], tuple] = {}

    def get(self, gate_index: int, gate: DenseOperator, flat: int):
        key = (gate_index, flat)
        if key not in self.cols:
            d, n = self.system.d, self.system.n
            vec = np.unravel_index(flat, (d,) * (2 * n))
            lam = restricted_point(self.system, vec[:n], vec[n:])
            if self.char:
                op = None
                for q in range(n):
                    f = p_stack(d, d)[vec[q], vec[n + q]]
                    op = f if op is None else np.kron(op, f)
                conj = gate.entries @ op @ gate.entries.conj().T
                col = (
                    _contract_stack(self.system, np.conj(np.swapaxes(p_stack(d, d), 2, 3)), conj)
                    / d**n
                ).reshape(-1)
                col[np.abs(col) < NORM_CUTOFF] = 0.0
                if not np.any(col):
                    raise InvariantError("frame column vanished; unitary inconsistent")
            else:
                col = _dense_column(self.system, gate.entries, lam)
            nz, cdf = _cdf_from_abs(np.abs(col))
            norm = float(np.sum(np.abs(col)))
            self.cols[key] = (col, nz, cdf, norm)
        return self.cols[key]


def _aggregated_norm_char(circuit: CircuitDescription) -> float:
    """Forward norm in the Heisenberg-Weyl frame."""
    system = circuit.system
    d, n = system.d, system.n
    chi = characteristic_fn(circuit.input_state, Domain.RESTRICTED)
    m = lp_norm(chi, 1)
    cache = _ColumnCache(system, char_frame=True)
    for i, g in enumerate(circuit.gates):
        if not isinstance(g, DenseOperator):
            kind, targets = g
            g = embed_generator(system, kind, tuple(targets))
        total = d ** (2 * n)
        if n == 1 or total <= _SWEEP_POINTS:
            flats = range(total)
        else:
            rng = _stream_rng(_SWEEP_SEED, i)
            flats = sorted(set(int(x) for x in rng.integers(0, total, size=_SWEEP_POINTS)))
        m *= max(cache.get(i, g, f)[3] for f in flats)
    m *= float(np.max(np.abs(_char_measurement_array(system, circuit.measurement))))
    return m


def _run_estimator(circuit: CircuitDescription, epsilon, p_fail, seed, streams, char: bool):
    system = circuit.system
    d, n = system.d, system.n
    shape = (d,) * (2 * n)

    if char:
        coeffs = _flat_coeffs(characteristic_fn(circuit.input_state, Domain.RESTRICTED).values)
        meas = _char_measurement_array(system, circuit.measurement).reshape(-1)
        m_forward = _aggregated_norm_char(circuit)
    else:
        coeffs = _flat_coeffs(frame_state_coeffs(circuit.input_state).values)
        meas = _measurement_array(system, circuit.measurement).reshape(-1)
        m_forward = forward_norm(circuit)

    norm0 = float(np.sum(np.abs(coeffs)))
    if norm0 <= 0:
        raise ValidationError("input state has zero frame norm")
    k_total = sample_count(m_forward, epsilon, p_fail)

    # gates normalized: named stay tuples, explicit become DenseOperators
    gates: list = []
    for g in circuit.gates:
        if isinstance(g, DenseOperator):
            gates.append(g)
        else:
            gates.append((GateKind(g[0]), tuple(g[1])))

    cache = _ColumnCache(system, char_frame=char)

    if char:
        # conjugate-pair folding: sample the lexicographic representative
        idx_all = np.arange(d ** (2 * n))
        vecs = np.array(np.unravel_index(idx_all, shape))
        neg = (-vecs) % d
        partner = np.ravel_multi_index(tuple(neg), shape)
        rep_mask = idx_all <= partner
        selfpair = partner == idx_all
        fold_w = np.where(rep_mask, np.where(selfpair, 1.0, 2.0) * np.abs(coeffs), 0.0)
        nz0, cdf0 = _cdf_from_abs(fold_w)
        need_flip = bool(np.any(~selfpair[nz0]))
    else:
        nz0, cdf0 = _cdf_from_abs(np.abs(coeffs))
        partner = selfpair = None
        need_flip = False

    stream_sums = []
    for s, k_s in enumerate(_split_sizes(k_total, streams)):
        if k_s == 0:
            stream_sums.append(0.0)
            continue
        rng = _stream_rng(seed, s)
        if len(nz0) == 1:
            idx = np.full(k_s, nz0[0], dtype=np.int64)
        else:
            u = rng.random(k_s)
            idx = nz0[np.minimum(np.searchsorted(cdf0, u, side="right"), len(nz0) - 1)]
        if char:
            if need_flip:
                flips = rng.random(k_s) < 0.5
                idx = np.where(selfpair[idx], idx, np.where(flips, partner[idx], idx))
            vals = coeffs[idx]
            w = norm0 * vals / np.abs(vals)
        else:
            w = norm0 * np.sign(coeffs[idx])

        for gi, g in enumerate(gates):
            if isinstance(g, DenseOperator):
                u = rng.random(k_s)
                new_idx = np.empty_like(idx)
                for lam in np.unique(idx):
                    mask = idx == lam
                    col, nz, cdf, cnorm = cache.get(gi, g, int(lam))
                    pos = np.minimum(np.searchsorted(cdf, u[mask], side="right"), len(nz) - 1)
                    chosen = nz[pos]
                    new_idx[mask] = chosen
                    picked = col[chosen]
                    w[mask] = w[mask] * cnorm * picked / np.abs(picked)
                idx = new_idx
            else:
                kind, targets = g
                if char:
                    dense = embed_generator(system, kind, targets)
                    u = rng.random(k_s)
                    new_idx = np.empty_like(idx)
                    for lam in np.unique(idx):
                        mask = idx == lam
                        col, nz, cdf, cnorm = cache.get(gi, dense, int(lam))
                        pos = np.minimum(
                            np.searchsorted(cdf, u[mask], side="right"), len(nz) - 1
                        )
                        chosen = nz[pos]
                        new_idx[mask] = chosen
                        picked = col[chosen]
                        w[mask] = w[mask] * cnorm * picked / np.abs(picked)
                    idx = new_idx
                else:
                    vecs = np.array(np.unravel_index(idx, shape))
                    new, sign = _apply_named(system, kind, targets, vecs)
                    idx = np.ravel_multi_index(tuple(new), shape)
                    w = w * sign

        traj = w * meas[idx]
        stream_sums.append(math.fsum(np.real(traj)))

    estimate = math.fsum(stream_sums) / k_total
    return EstimateReport(
        estimate=float(estimate),
        epsilon=float(epsilon),
        failure_prob=float(p_fail),
        samples_used=k_total,
        forward_norm=float(m_forward),
        seed=int(seed),
        streams=int(streams),
    )


def estimate_born(circuit: CircuitDescription, epsilon: float, p_fail: float, seed: int, streams: int = 1) -> EstimateReport:
    """Unbiased Born-probability estimate in the Hermitian O frame."""
    return _run_estimator(circuit, epsilon, p_fail, seed, streams, char=False)


def estimate_born_char(circuit: CircuitDescription, epsilon: float, p_fail: float, seed: int, streams: int = 1) -> EstimateReport:
    """Same estimator in the Heisenberg-Weyl frame with pair folding."""
    return _run_estimator(circuit, epsilon, p_fail, seed, streams, char=True)
