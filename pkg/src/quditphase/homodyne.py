"""Weak simulation of homodyne readout on encoded qudit states.

A Gaussian circuit is a real symplectic matrix S plus an additive
displacement t in the ordering (q_1..q_n, p_1..p_n). An ideal codeword
is a comb of delta peaks indexed by doubled-domain labels u with signed
weights x_rho(u), each peak sitting at sqrt(pi/2d) u in phase space, so
a homodyne sample is produced exactly:

    draw u with probability |x_rho(u)| / ||x_rho||_1 (full domain),
    x = Tr_p[t + sqrt(pi/2d) S u],   branch fixed to zero,

where Tr_p keeps the position block (the first n components). For
logical Clifford circuits S and t come from the integer coordinate
action of the gate, the whole map is evaluated in integer arithmetic,
and every output lands exactly on the sqrt(pi/2d) lattice. Samples
carry sign(x_rho(u)) and the constant weight ||x_rho||_1 (d/8pi)^{n/2};
the signed weighted histogram reproduces the pseudo-probability P~,
which is not normalizable and is flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import DensityState, QuditSystem, ValidationError
from .basis import (
    Domain,
    PhasePoint,
    SymplecticAffineMap,
    clifford_coordinate_action,
    omega_block,
)
from .measures import NORM_CUTOFF, x_distribution

__all__ = [
    "GaussianCircuit",
    "HomodyneSample",
    "HistogramEntry",
    "PseudoProbabilityReport",
    "logical_clifford_symplectic",
    "simulate_homodyne",
    "simulate_homodyne_batch",
    "pseudo_probability_report",
]


@dataclass(frozen=True)
class GaussianCircuit:
    """Real symplectic action S with an additive displacement.

    When S and the displacement come from a logical gate, the exact
    integer matrix and shift (centered representatives) are kept so the
    sample map can run in integer arithmetic.
    """

    system: QuditSystem
    s_matrix: np.ndarray
    displacement: np.ndarray
    integer_s: np.ndarray | None = None
    integer_shift: np.ndarray | None = None

    def __post_init__(self):
        n = self.system.n
        s = np.asarray(self.s_matrix, dtype=float)
        t = np.asarray(self.displacement, dtype=float)
        if s.shape != (2 * n, 2 * n):
            raise ValidationError(f"S must be {2 * n}x{2 * n}")
        if t.shape != (2 * n,):
            raise ValidationError(f"displacement must have length {2 * n}")
        omega = omega_block(n).astype(float)
        dev = np.max(np.abs(s.T @ omega @ s - omega))
        if dev > 1e-9:
            raise ValidationError(f"S is not symplectic (dev {dev:.3e})")
        object.__setattr__(self, "s_matrix", s)
        object.__setattr__(self, "displacement", t)

    @property
    def measured_quadratures(self) -> tuple[int, ...]:
        """Position block: the first n components of the transformed frame."""
        return tuple(range(self.system.n))

    @property
    def integer_map(self) -> SymplecticAffineMap | None:
        """Mod-2d affine coordinate action, when the circuit is a logical gate."""
        if self.integer_s is None:
            return None
        return SymplecticAffineMap(
            self.integer_s % (2 * self.system.d),
            self.integer_shift % (2 * self.system.d),
            2 * self.system.d,
        )

    @classmethod
    def identity(cls, system: QuditSystem) -> "GaussianCircuit":
        n = system.n
        return cls(system, np.eye(2 * n), np.zeros(2 * n),
                   np.eye(2 * n, dtype=int), np.zeros(2 * n, dtype=int))


@dataclass(frozen=True)
class HomodyneSample:
    """One position-block readout with its lattice bookkeeping."""

    x: tuple[float, ...]
    branch: tuple[int, ...]
    sampled_point: PhasePoint
    sign: int
    weight: float
    lattice_index: tuple[int, ...] | None = None


def logical_clifford_symplectic(system: QuditSystem, kind, targets=None) -> GaussianCircuit:
    """Gaussian implementation of a logical generator on the code lattice.

    S is the integer coordinate action of the gate; the displacement is
    sqrt(pi/2d) times its affine shift, so e.g. the logical shift becomes
    a position displacement by sqrt(2 pi / d).
    """
    amap = clifford_coordinate_action(system, kind, targets)
    mod = 2 * system.d
    centered = lambda a: np.where(a % mod > system.d, a % mod - mod, a % mod)
    s_int = centered(amap.matrix)
    sh_int = centered(amap.shift)
    c = math.sqrt(math.pi / (2 * system.d))
    return GaussianCircuit(
        system,
        s_int.astype(float),
        c * sh_int.astype(float),
        integer_s=s_int,
        integer_shift=sh_int,
    )


def _full_sampler(rho: DensityState):
    dist = x_distribution(rho, Domain.FULL)
    flat = dist.values.reshape(-1).copy()
    flat[np.abs(flat) < NORM_CUTOFF] = 0.0
    norm = float(np.sum(np.abs(flat)))
    if norm <= 0:
        raise ValidationError("input state has zero coefficient norm")
    nz = np.nonzero(flat)[0]
    cdf = np.cumsum(np.abs(flat[nz])) / norm
    cdf[-1] = 1.0
    return dist, flat, norm, nz, cdf


def simulate_homodyne_batch(
    rho: DensityState, circuit: GaussianCircuit, num_samples: int, seed: int
) -> list[HomodyneSample]:
    """Draw ``num_samples`` homodyne samples with one seeded stream."""
    system = rho.system
    if circuit.system != system:
        raise ValidationError("circuit system mismatch")
    d, n = system.d, system.n
    mod = 2 * d
    shape = (mod,) * (2 * n)
    dist, flat, norm, nz, cdf = _full_sampler(rho)
    weight = norm * (d / (8 * math.pi)) ** (n / 2)
    c = math.sqrt(math.pi / (2 * d))

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed)))
    if num_samples == 0:
        return []
    if len(nz) == 1:
        picks = np.full(num_samples, nz[0], dtype=np.int64)
    else:
        u = rng.random(num_samples)
        picks = nz[np.minimum(np.searchsorted(cdf, u, side="right"), len(nz) - 1)]

    vecs = np.array(np.unravel_index(picks, shape))  # (2n, num_samples)
    out = []
    for j in range(num_samples):
        uvec = vecs[:, j]
        if circuit.integer_s is not None:
            k = circuit.integer_s @ uvec + circuit.integer_shift
            xfull = c * k.astype(float)
            lattice = tuple(int(v) for v in k[:n])
        else:
            xfull = circuit.s_matrix @ (c * uvec.astype(float)) + circuit.displacement
            lattice = None
        point = PhasePoint(tuple(uvec[:n]), tuple(uvec[n:]), mod)
        out.append(
            HomodyneSample(
                x=tuple(float(v) for v in xfull[:n]),
                branch=(0,) * (2 * n),
                sampled_point=point,
                sign=int(np.sign(flat[picks[j]])),
                weight=weight,
                lattice_index=lattice,
            )
        )
    return out


def simulate_homodyne(rho: DensityState, circuit: GaussianCircuit, seed: int) -> HomodyneSample:
    """One homodyne sample (the head of the seeded stream)."""
    return simulate_homodyne_batch(rho, circuit, 1, seed)[0]


@dataclass(frozen=True)
class HistogramEntry:
    position: tuple[float, ...]
    lattice_index: tuple[int, ...] | None
    signed_weight: float
    count: int


@dataclass(frozen=True)
class PseudoProbabilityReport:
    """Signed, weighted lattice histogram of homodyne outcomes.

    The aggregate is a pseudo-probability: signed weights need not sum
    to one and the underlying density is not normalizable, hence the
    permanent ``not_normalizable`` caveat.
    """

    entries: tuple[HistogramEntry, ...]
    num_samples: int
    not_normalizable: bool = True


def pseudo_probability_report(
    rho: DensityState, circuit: GaussianCircuit, num_samples: int, seed: int
) -> PseudoProbabilityReport:
    """Aggregate seeded homodyne samples into the signed histogram."""
    samples = simulate_homodyne_batch(rho, circuit, num_samples, seed)
    acc: dict[tuple, list] = {}
    for s in samples:
        key = s.lattice_index if s.lattice_index is not None else tuple(
            round(v, 12) for v in s.x
        )
        slot = acc.setdefault(key, [s.x, s.lattice_index, 0.0, 0])
        slot[2] += s.sign * s.weight / max(num_samples, 1)
        slot[3] += 1
    entries = tuple(
        HistogramEntry(position=v[0], lattice_index=v[1], signed_weight=v[2], count=v[3])
        for _, v in sorted(acc.items(), key=lambda kv: kv[0])
    )
    return PseudoProbabilityReport(entries=entries, num_samples=num_samples)
