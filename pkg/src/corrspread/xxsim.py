"""Exact XX-chain dynamics in the single-flip and Gaussian sectors.

The XX chain H = -J sum_m (sx_m sx_{m+1} + sy_m sy_{m+1}) conserves the
number of flipped spins. A state with one flip on the all-up background
evolves as a free particle hopping with amplitude -2J, so the full dynamics
reduces to the N x N matrix exp(-i h t) acting on the flip amplitudes.

Correlator formulas in the one-flip sector (both verified against the dense
brute-force oracle in `edoracle`):

    <sx_i sx_j>_c = 2 Re(conj(c_i) c_j)    (sx maps out of the sector, so
                                            <sx> = 0 and connected = full)
    <sz_i sz_j>_c = -4 |c_i|^2 |c_j|^2     (from <sz_m> = 1 - 2 |c_m|^2)

The half-filled free-fermion picture covers quench scenarios whose initial
state carries power-law correlations: a Gaussian state is summarized by its
two-point matrix C_mn = <f_m^dag f_n>, evolving as C(t) = U C U^dag with
U = exp(+i h t), and <sz_i sz_j>_c = -4 |C_ij|^2 by Wick's theorem (the
string factors cancel for this diagonal observable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

NORM_TOL = 1e-12
SPECTRUM_TOL = 1e-10


@dataclass(frozen=True)
class MagnonState:
    """Amplitudes c_m of the single flipped spin at site m; unit norm."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        if amp.ndim != 1 or len(amp) < 2:
            raise ValueError("amplitudes must be a vector of length >= 2")
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state norm^2 = {norm_sq} deviates from 1 beyond {NORM_TOL}")

    @property
    def num_sites(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True)
class HoppingMatrix:
    """Real symmetric tridiagonal single-particle matrix h."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        h = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", h)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("hopping matrix must be square")
        if not np.array_equal(h, h.T):
            raise ValueError("hopping matrix must be symmetric")
        off = np.triu(np.abs(h), k=2)
        if off.max(initial=0.0) != 0.0:
            raise ValueError("hopping matrix must be tridiagonal")

    @classmethod
    def uniform(cls, num_sites: int, J: float = 1.0) -> "HoppingMatrix":
        """Uniform chain: h_{m,m+1} = -2J."""
        h = np.zeros((num_sites, num_sites))
        for m in range(num_sites - 1):
            h[m, m + 1] = h[m + 1, m] = -2.0 * J
        return cls(matrix=h)

    @classmethod
    def dimerized(cls, num_sites: int, J: float = 1.0, eta: float = 0.5) -> "HoppingMatrix":
        """Bond-alternating chain: h_{m,m+1} = -2J (1 + eta (-1)^m)."""
        if not -1.0 < eta < 1.0:
            raise ValueError(f"eta must lie in (-1, 1), got {eta}")
        h = np.zeros((num_sites, num_sites))
        for m in range(num_sites - 1):
            h[m, m + 1] = h[m + 1, m] = -2.0 * J * (1.0 + eta * (-1) ** m)
        return cls(matrix=h)

    @property
    def num_sites(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense symmetric eigendecomposition (energies, orthonormal columns)."""
        return np.linalg.eigh(self.matrix)


def uniform_chain_modes(num_sites: int, J: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form sine eigenbasis of the uniform open chain.

    energies[q] = -4 J cos(pi (q+1) / (N+1)),
    modes[m, q] = sqrt(2/(N+1)) sin(pi (q+1) (m+1) / (N+1)).
    The dense eigensolver path must reproduce this to 1e-10.
    """
    n = num_sites
    q = np.arange(1, n + 1)
    m = np.arange(1, n + 1)
    energies = -4.0 * J * np.cos(np.pi * q / (n + 1))
    modes = np.sqrt(2.0 / (n + 1)) * np.sin(np.pi * np.outer(m, q) / (n + 1))
    return energies, modes


def make_initial(kind: str, num_sites: int, *, i0: int | None = None,
                 p: int | None = None, q: int | None = None) -> MagnonState:
    """Initial one-flip states: "prod_flip" puts the flip at i0; "bell"
    superposes flips at p and q with equal weight."""
    c = np.zeros(num_sites, dtype=complex)
    if kind == "prod_flip":
        if i0 is None or not 0 <= i0 < num_sites:
            raise ValueError(f"flip site {i0} outside chain of {num_sites} sites")
        c[i0] = 1.0
    elif kind == "bell":
        if p is None or q is None or p == q:
            raise ValueError(f"bell needs two distinct sites, got p={p}, q={q}")
        if not (0 <= p < num_sites and 0 <= q < num_sites):
            raise ValueError(f"bell sites ({p}, {q}) outside chain of {num_sites} sites")
        c[p] = c[q] = 1.0 / math.sqrt(2.0)
    else:
        raise ValueError(f"unknown initial kind {kind!r}")
    return MagnonState(amplitudes=c)


def propagate(state: MagnonState, h: HoppingMatrix, t: float) -> MagnonState:
    """c(t) = exp(-i h t) c(0) via the dense eigendecomposition of h."""
    if state.num_sites != h.num_sites:
        raise ValueError("state and hopping matrix sizes differ")
    if t == 0.0:
        return state
    energies, modes = h.eigensystem
    phases = np.exp(-1j * energies * t)
    ct = modes @ (phases * (modes.T @ state.amplitudes))
    return MagnonState(amplitudes=ct)


def corr_xx(state: MagnonState, i: int, j: int) -> float:
    """<sx_i sx_j>_c = 2 Re(conj(c_i) c_j) for i != j."""
    if i == j:
        raise ValueError("sites must differ; <(sx)^2> = 1 identically")
    c = state.amplitudes
    return float(2.0 * (np.conj(c[i]) * c[j]).real)


def corr_zz(state: MagnonState, i: int, j: int) -> float:
    """<sz_i sz_j>_c = -4 |c_i|^2 |c_j|^2 for i != j."""
    if i == j:
        raise ValueError("sites must differ")
    c = state.amplitudes
    return float(-4.0 * abs(c[i]) ** 2 * abs(c[j]) ** 2)


@dataclass(frozen=True)
class GaussianState:
    """Fermionic two-point matrix C_mn = <f_m^dag f_n>; Hermitian with
    spectrum in [0, 1]."""

    corr_matrix: np.ndarray

    def __post_init__(self) -> None:
        cm = np.asarray(self.corr_matrix, dtype=complex)
        object.__setattr__(self, "corr_matrix", cm)
        if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
            raise ValueError("correlation matrix must be square")
        if np.abs(cm - cm.conj().T).max() > SPECTRUM_TOL:
            raise ValueError("correlation matrix must be Hermitian")
        evals = np.linalg.eigvalsh(cm)
        if evals.min() < -SPECTRUM_TOL or evals.max() > 1.0 + SPECTRUM_TOL:
            raise ValueError(
                f"occupation spectrum [{evals.min()}, {evals.max()}] escapes [0, 1]"
            )

    @property
    def num_sites(self) -> int:
        return self.corr_matrix.shape[0]

    @property
    def particle_number(self) -> float:
        return float(np.trace(self.corr_matrix).real)


def ground_state_half_filled(num_sites: int, J: float = 1.0) -> GaussianState:
    """Half-filled ground state of the uniform chain: the projector onto the
    N/2 lowest modes of the uniform hopping matrix."""
    if num_sites % 2:
        raise ValueError(f"half filling needs an even chain, got {num_sites} sites")
    energies, modes = HoppingMatrix.uniform(num_sites, J=J).eigensystem
    occ = modes[:, : num_sites // 2]
    return GaussianState(corr_matrix=occ @ occ.T.conj())


def evolve_gaussian(state: GaussianState, h: HoppingMatrix, t: float) -> GaussianState:
    """C(t) = U C U^dag with U = exp(+i h t)."""
    if state.num_sites != h.num_sites:
        raise ValueError("state and hopping matrix sizes differ")
    if t == 0.0:
        return state
    energies, modes = h.eigensystem
    phases = np.exp(1j * energies * t)
    in_basis = modes.T @ state.corr_matrix @ modes
    rotated = (phases[:, None] * in_basis) * phases.conj()[None, :]
    return GaussianState(corr_matrix=modes @ rotated @ modes.T)


def corr_zz_gaussian(state: GaussianState, i: int, j: int) -> float:
    """<sz_i sz_j>_c = -4 |C_ij|^2 for i != j (Wick contraction)."""
    if i == j:
        raise ValueError("sites must differ")
    return float(-4.0 * abs(state.corr_matrix[i, j]) ** 2)


def amplitude_profile_csv(states: dict[float, MagnonState]) -> str:
    """Debug dump of flip-amplitude magnitudes, rows `site,t,abs_amplitude`."""
    lines = ["site,t,abs_amplitude"]
    for t in sorted(states):
        for m, amp in enumerate(states[t].amplitudes):
            lines.append(f"{m},{float(t)!r},{float(abs(amp))!r}")
    return "\n".join(lines) + "\n"
