"""Dense full-Hilbert-space brute-force verifier for small chains.

Builds the 2^N-dimensional XX Hamiltonian from explicit Pauli-matrix
tensor products, evolves states by dense eigendecomposition, and evaluates
connected correlators as direct expectation values. No symmetry sectors, no
fermionization — deliberately independent of the fast paths in `xxsim`,
which it exists to check. Practical up to N = 12 (dense 4096 x 4096).

Basis convention: configurations are tuples of 0/1 per site, 1 meaning a
flipped (down) spin on the all-up background; site m maps to bit 2^m of the
basis index.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

MAX_SITES = 12

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


def _kron_chain(num_sites: int, ops: Mapping[int, np.ndarray]) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for site in range(num_sites):
        out = np.kron(ops.get(site, np.eye(2, dtype=complex)), out)
    return out


def build_xx_dense(num_sites: int, couplings: Sequence[float] | None = None) -> np.ndarray:
    """Dense H = -sum_b J_b (sx_b sx_{b+1} + sy_b sy_{b+1}).

    `couplings` lists J_b per bond; defaults to the uniform chain with J = 1.
    """
    if num_sites > MAX_SITES:
        raise ValueError(f"dense oracle capped at {MAX_SITES} sites, got {num_sites}")
    if couplings is None:
        couplings = [1.0] * (num_sites - 1)
    if len(couplings) != num_sites - 1:
        raise ValueError(f"need {num_sites - 1} bond couplings, got {len(couplings)}")
    dim = 2**num_sites
    ham = np.zeros((dim, dim), dtype=complex)
    for b, J in enumerate(couplings):
        for pauli in (_SX, _SY):
            ham -= J * _kron_chain(num_sites, {b: pauli, b + 1: pauli})
    return ham


@lru_cache(maxsize=8)
def _eigensystem(num_sites: int, couplings: tuple[float, ...] | None):
    ham = build_xx_dense(num_sites, None if couplings is None else list(couplings))
    return np.linalg.eigh(ham)


def state_from_configs(num_sites: int, amplitudes: Mapping[tuple[int, ...], complex]) -> np.ndarray:
    """Full 2^N state vector from {configuration: amplitude}, normalized."""
    psi = np.zeros(2**num_sites, dtype=complex)
    for config, amp in amplitudes.items():
        if len(config) != num_sites or any(b not in (0, 1) for b in config):
            raise ValueError(f"bad spin configuration {config!r}")
        idx = sum(bit << m for m, bit in enumerate(config))
        psi[idx] += amp
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("zero state")
    return psi / nrm


def from_magnon_amplitudes(amplitudes: Sequence[complex]) -> dict[tuple[int, ...], complex]:
    """Configuration map of a one-flip state with the given flip amplitudes."""
    n = len(amplitudes)
    out: dict[tuple[int, ...], complex] = {}
    for m, amp in enumerate(amplitudes):
        if amp != 0:
            config = tuple(1 if s == m else 0 for s in range(n))
            out[config] = complex(amp)
    return out


def ed_ground_state(num_sites: int, couplings: Sequence[float] | None = None) -> np.ndarray:
    """Lowest eigenvector of the dense Hamiltonian."""
    evals, evecs = _eigensystem(num_sites, None if couplings is None else tuple(couplings))
    return evecs[:, 0]


def _apply_sx(psi: np.ndarray, site: int) -> np.ndarray:
    idx = np.arange(len(psi))
    return psi[idx ^ (1 << site)]


def _apply_sz(psi: np.ndarray, site: int) -> np.ndarray:
    idx = np.arange(len(psi))
    signs = 1.0 - 2.0 * ((idx >> site) & 1)
    return signs * psi


def ed_oracle(
    num_sites: int,
    initial: Mapping[tuple[int, ...], complex] | np.ndarray,
    t: float,
    obs: tuple[str, int, int],
    couplings: Sequence[float] | None = None,
) -> float:
    """Connected correlator <O_i O_j>_c at time t by dense evolution.

    `obs` is ("xx", i, j) or ("zz", i, j); `initial` is either a
    configuration->amplitude map or a full 2^N state vector.
    """
    kind, i, j = obs
    if i == j:
        raise ValueError("observable sites must differ")
    if isinstance(initial, np.ndarray):
        psi0 = np.asarray(initial, dtype=complex)
        if psi0.shape != (2**num_sites,):
            raise ValueError(f"state vector length {psi0.shape} != 2^{num_sites}")
        psi0 = psi0 / np.linalg.norm(psi0)
    else:
        psi0 = state_from_configs(num_sites, initial)
    evals, evecs = _eigensystem(num_sites, None if couplings is None else tuple(couplings))
    psi_t = evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ psi0))

    apply = _apply_sx if kind == "xx" else _apply_sz if kind == "zz" else None
    if apply is None:
        raise ValueError(f"unknown observable kind {kind!r}")
    oi = apply(psi_t, i)
    oj = apply(psi_t, j)
    both = apply(oj, i)
    exp_ij = np.vdot(psi_t, both).real
    exp_i = np.vdot(psi_t, oi).real
    exp_j = np.vdot(psi_t, oj).real
    return float(exp_ij - exp_i * exp_j)
