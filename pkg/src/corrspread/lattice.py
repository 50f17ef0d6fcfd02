"""Chain geometry, interaction decay profiles, and the three lattice constants.

Everything downstream (the bound engine, the scenario harness) is
parameterized by three numbers computed here from a decay profile F and a
finite open chain:

    uniform summability   norm_F  = max_i sum_j F(dist(i, j))
    reproducibility       const_C = max_{i,j} sum_k F(dist(i,k)) F(dist(k,j)) / F(dist(i,j))
    interaction strength  norm_phi = max_{d >= 1} coupling_norm(d) / F(d)

The maxima are taken over the finite chain by full scans (no closed-form
shortcuts), so the constants are exact for the lattice actually simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# Spatial dimension of the chain. The constants below are computed by
# generic scans over the distance matrix, so supporting another graph is a
# data change, but all validation assumes D = 1.
DIMENSION = 1


@dataclass(frozen=True)
class LatticeSpec:
    """A one-dimensional open chain of `num_sites` sites indexed 0..N-1."""

    num_sites: int

    def __post_init__(self) -> None:
        if not isinstance(self.num_sites, int) or self.num_sites < 2:
            raise ValueError(f"num_sites must be an integer >= 2, got {self.num_sites!r}")

    def dist(self, i: int, j: int) -> int:
        self.check_site(i)
        self.check_site(j)
        return abs(i - j)

    def check_site(self, i: int) -> None:
        if not 0 <= i < self.num_sites:
            raise ValueError(f"site {i} outside chain 0..{self.num_sites - 1}")

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.num_sites)


@dataclass(frozen=True)
class DecayFunction:
    """Spatial decay profile F(x) for the interaction bounds.

    Two families:
      kind="exp_poly":  F(x) = prefactor * exp(-a x) / (1 + x)^(D+1), a > 0
        (suited to finite-range couplings; the polynomial factor is required
        for the reproducibility constant to stay finite)
      kind="power_law": F(x) = prefactor * (1 + x)^(-alpha), alpha > D
    """

    kind: str
    a: float | None = None
    alpha: float | None = None
    prefactor: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.prefactor) and self.prefactor > 0):
            raise ValueError(f"prefactor must be positive and finite, got {self.prefactor}")
        if self.kind == "exp_poly":
            if self.a is None or not (math.isfinite(self.a) and self.a > 0):
                raise ValueError(f"exp_poly decay rate a must be positive, got {self.a}")
        elif self.kind == "power_law":
            if self.alpha is None or not (math.isfinite(self.alpha) and self.alpha > DIMENSION):
                raise ValueError(
                    f"power_law exponent alpha must exceed the dimension {DIMENSION}, got {self.alpha}"
                )
        else:
            raise ValueError(f"unknown decay kind {self.kind!r}")

    @classmethod
    def exp_poly(cls, a: float, prefactor: float = 1.0) -> "DecayFunction":
        return cls(kind="exp_poly", a=a, prefactor=prefactor)

    @classmethod
    def power_law(cls, alpha: float, prefactor: float = 1.0) -> "DecayFunction":
        return cls(kind="power_law", alpha=alpha, prefactor=prefactor)

    def to_config(self) -> dict:
        out: dict = {"kind": self.kind, "prefactor": self.prefactor}
        if self.kind == "exp_poly":
            out["a"] = self.a
        else:
            out["alpha"] = self.alpha
        return out


def f_eval(decay: DecayFunction, x: float) -> float:
    """Evaluate the decay profile at a nonnegative distance."""
    if x < 0:
        raise ValueError(f"distance must be nonnegative, got {x}")
    if decay.kind == "exp_poly":
        return decay.prefactor * math.exp(-decay.a * x) / (1.0 + x) ** (DIMENSION + 1)
    return decay.prefactor * (1.0 + x) ** (-decay.alpha)


def f_values(decay: DecayFunction, x: np.ndarray) -> np.ndarray:
    """Vectorized `f_eval` over an array of nonnegative distances."""
    x = np.asarray(x, dtype=float)
    if decay.kind == "exp_poly":
        return decay.prefactor * np.exp(-decay.a * x) / (1.0 + x) ** (DIMENSION + 1)
    return decay.prefactor * (1.0 + x) ** (-decay.alpha)


def distance_matrix(lattice: LatticeSpec) -> np.ndarray:
    s = lattice.sites
    return np.abs(np.subtract.outer(s, s))


def norm_F(decay: DecayFunction, lattice: LatticeSpec) -> float:
    """max over sites i of sum_j F(dist(i, j)), by full scan."""
    fm = f_values(decay, distance_matrix(lattice))
    return float(fm.sum(axis=1).max())


def constant_C(decay: DecayFunction, lattice: LatticeSpec) -> float:
    """max over pairs (i, j) of sum_k F(dist(i,k)) F(dist(k,j)) / F(dist(i,j)).

    Exhaustive scan over all N^2 pairs; the k-sum for every pair is the
    matrix square of the F-distance matrix.
    """
    fm = f_values(decay, distance_matrix(lattice))
    return float(((fm @ fm) / fm).max())


def tail_sum(decay: DecayFunction, lattice: LatticeSpec, i: int, r: int) -> float:
    """sum of F(dist(i, j)) over sites j with dist(i, j) > r (closed-ball complement)."""
    lattice.check_site(i)
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    d = np.abs(lattice.sites - i)
    sel = d > r
    if not sel.any():
        return 0.0
    return float(f_values(decay, d[sel]).sum())


def tail_table(decay: DecayFunction, lattice: LatticeSpec) -> np.ndarray:
    """All tail sums at once: table[i, r] = tail_sum(decay, lattice, i, r).

    Shape (N, N); column r = N-1 is identically zero (empty complement).
    Used by the bound engine to avoid re-summing tails per grid cell; must
    agree exactly with `tail_sum`.
    """
    n = lattice.num_sites
    fvals = f_values(decay, np.arange(n))
    table = np.zeros((n, n))
    for i in range(n):
        # count of sites at each distance d from i: 0, 1 or 2 on the open chain
        dmax_left, dmax_right = i, n - 1 - i
        counts = (np.arange(n) <= dmax_left).astype(float) + (np.arange(n) <= dmax_right)
        counts[0] = 1.0
        weighted = counts * fvals
        total = weighted.sum()
        table[i, :] = total - np.cumsum(weighted)
    return table


@dataclass(frozen=True)
class PairInteractionSpec:
    """Two-site interaction strengths by graph distance.

    `coupling_norm(d)` is the largest operator norm among the interactions
    acting on site pairs at distance d >= 1.
    """

    coupling_norm: Callable[[int], float] = field(repr=False)

    @classmethod
    def xx_chain(cls, J: float = 1.0, eta: float = 0.0) -> "PairInteractionSpec":
        """Nearest-neighbour XX couplings.

        The two-site term -J_b (sx sx + sy sy) has operator norm 2 J_b; with
        bond modulation J_b = J (1 + eta (-1)^b) the largest bond norm is
        2 J (1 + |eta|).
        """
        if J < 0:
            raise ValueError(f"J must be nonnegative, got {J}")
        if not -1.0 < eta < 1.0:
            raise ValueError(f"dimerization eta must lie in (-1, 1), got {eta}")
        strength = 2.0 * J * (1.0 + abs(eta))

        def norm(d: int) -> float:
            return strength if d == 1 else 0.0

        return cls(coupling_norm=norm)

    @classmethod
    def zero(cls) -> "PairInteractionSpec":
        return cls(coupling_norm=lambda d: 0.0)


def norm_phi(interaction: PairInteractionSpec, decay: DecayFunction, lattice: LatticeSpec) -> float:
    """max over d >= 1 of coupling_norm(d) / F(d).

    For pair interactions the only interaction set containing two distinct
    sites i, j is the pair {i, j} itself, so the scan over distances covers
    all site pairs. Returns 0 for the zero interaction.
    """
    best = 0.0
    for d in range(1, lattice.num_sites):
        c = interaction.coupling_norm(d)
        if c < 0 or not math.isfinite(c):
            raise ValueError(f"coupling_norm({d}) must be finite and nonnegative, got {c}")
        if c == 0.0:
            continue
        ratio = c / f_eval(decay, d)
        if not math.isfinite(ratio):
            raise ValueError(f"coupling_norm/F ratio unbounded at distance {d}")
        best = max(best, ratio)
    return best
