"""The bound engine.

Upper bounds on equal-time connected correlations |<A(t)B(t)>_c| for
normalized single-site observables, built from the lattice constants:

    g(t)  = exp(2 phi C |t|) - 1          (disjoint supports; no -1 otherwise)
    G(t)  = ((C + nF) / C) phi * integral_0^|t| g
    B_r(t) = Cor(S_i(r):S_j(r)) + 4 G(t) [tail_i(r) + tail_j(r)]
    B(t)  = min(1, min over admissible integer r of B_r(t))

with phi = norm_phi, C = const_C, nF = norm_F. The radius scan trades the
initial-correlation envelope (growing in r) against the dynamical leakage
through the ball boundary (shrinking in r). `bound_at_radius` uses exact
tail sums; the `closed_form_*` variants use the integral-approximation
shapes and are for qualitative comparison only — dominance certification
always goes through the exact path.

Exponential overflow deliberately saturates to +inf: an infinite bound is
trivially true and is removed by the min(1, ...) cap.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .initcorr import CorModel, cor_between_balls
from .lattice import (
    DecayFunction,
    LatticeSpec,
    PairInteractionSpec,
    constant_C,
    f_values,
    norm_F,
    norm_phi,
    tail_table,
)


@dataclass
class BoundConstants:
    """The triple (norm_phi, const_C, norm_F_val) plus the model it came from.

    Build through `from_model` in production so the scalars are exactly the
    lattice scans for (decay, lattice); the plain constructor exists for
    injecting values in tests.
    """

    norm_phi: float
    const_C: float
    norm_F_val: float
    decay: DecayFunction
    lattice: LatticeSpec

    def __post_init__(self) -> None:
        for name in ("norm_phi", "const_C", "norm_F_val"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @classmethod
    def from_model(
        cls,
        decay: DecayFunction,
        lattice: LatticeSpec,
        interaction: PairInteractionSpec,
    ) -> "BoundConstants":
        return cls(
            norm_phi=norm_phi(interaction, decay, lattice),
            const_C=constant_C(decay, lattice),
            norm_F_val=norm_F(decay, lattice),
            decay=decay,
            lattice=lattice,
        )

    @property
    def rate(self) -> float:
        """Exponential growth rate 2 phi C of g."""
        return 2.0 * self.norm_phi * self.const_C

    @cached_property
    def tails(self) -> np.ndarray:
        """Cached tail-sum table, tails[i, r] = tail_sum(decay, lattice, i, r)."""
        return tail_table(self.decay, self.lattice)

    def to_config(self) -> dict:
        return {
            "norm_phi": self.norm_phi,
            "const_C": self.const_C,
            "norm_F": self.norm_F_val,
            "decay": self.decay.to_config(),
            "num_sites": self.lattice.num_sites,
        }


@dataclass(frozen=True)
class ClosedFormParams:
    """Parameters of the closed-form bound shapes.

    a: exponential rate, v: velocity scale, c_tilde: Bell-scenario
    prefactor, c1/chi: initial-correlation amplitude and exponent,
    c2: dynamical prefactor.
    """

    a: float
    v: float
    c_tilde: float = 1.0
    c1: float = 0.0
    c2: float = 1.0
    chi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "v", "c_tilde", "c2"):
            x = getattr(self, name)
            if not (math.isfinite(x) and x > 0):
                raise ValueError(f"{name} must be positive and finite, got {x}")
        for name in ("c1", "chi"):
            x = getattr(self, name)
            if not (math.isfinite(x) and x >= 0):
                raise ValueError(f"{name} must be nonnegative and finite, got {x}")


def default_velocity(bc: BoundConstants, a: float) -> float:
    """Velocity scale 2 phi C / a that makes the closed-form exponent match
    the rigorous rate at radius growth a*r."""
    return bc.rate / a


@dataclass
class CorrelationGrid:
    """Real values on a (distance x time) grid, the common output format.

    values[d, k] corresponds to distances[d], times[k]. Bound grids carry
    the minimizing radius per cell in argmin_r.
    """

    times: np.ndarray
    distances: np.ndarray
    values: np.ndarray
    label: str
    argmin_r: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.distances = np.asarray(self.distances, dtype=int)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.distances), len(self.times)):
            raise ValueError(
                f"grid shape {self.values.shape} != ({len(self.distances)}, {len(self.times)})"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid contains non-finite values")
        if self.argmin_r is not None:
            self.argmin_r = np.asarray(self.argmin_r, dtype=int)
            if self.argmin_r.shape != self.values.shape:
                raise ValueError("argmin_r shape mismatch")

    def to_csv(self) -> str:
        """delta-major, t-minor rows with full round-trip precision."""
        buf = io.StringIO()
        buf.write("delta,t,value\n")
        for kd, d in enumerate(self.distances):
            for kt, t in enumerate(self.times):
                buf.write(f"{int(d)},{float(t)!r},{float(self.values[kd, kt])!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str) -> "CorrelationGrid":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if lines[0] != "delta,t,value":
            raise ValueError(f"bad CSV header {lines[0]!r}")
        triples = []
        for ln in lines[1:]:
            ds, ts, vs = ln.split(",")
            triples.append((int(ds), float(ts), float(vs)))
        deltas: list[int] = []
        for d, _, _ in triples:
            if not deltas or deltas[-1] != d:
                deltas.append(d)
        if len(triples) % len(deltas):
            raise ValueError("CSV is not a rectangular delta-major grid")
        n_t = len(triples) // len(deltas)
        times = np.array([t for _, t, _ in triples[:n_t]])
        values = np.array([v for _, _, v in triples]).reshape(len(deltas), n_t)
        return cls(times=times, distances=np.array(deltas), values=values, label=label)

    def summary(self) -> dict:
        out = {
            "label": self.label,
            "distances": [int(d) for d in self.distances],
            "times": [float(t) for t in self.times],
            "min": float(self.values.min()),
            "max": float(self.values.max()),
        }
        if self.argmin_r is not None:
            out["argmin_r_grid"] = [[int(r) for r in row] for row in self.argmin_r]
        return out


def g_func(t: float, bc: BoundConstants, supports_disjoint: bool) -> float:
    """exp(2 phi C |t|) - 1 for disjoint supports, exp(2 phi C |t|) otherwise."""
    with np.errstate(over="ignore"):
        if supports_disjoint:
            return float(np.expm1(bc.rate * abs(t)))
        return float(np.exp(bc.rate * abs(t)))


def big_G(t: float, bc: BoundConstants) -> float:
    """((C + nF)/C) phi * integral_0^|t| g(tau) dtau, in closed form."""
    pref = (bc.const_C + bc.norm_F_val) / bc.const_C * bc.norm_phi
    with np.errstate(over="ignore", invalid="ignore"):
        integral = np.expm1(bc.rate * abs(t)) / bc.rate - abs(t)
    if np.isnan(integral):  # inf - inf when t overflows; the bound is +inf
        return math.inf
    return float(pref * integral)


def big_G_simple(t: float, bc: BoundConstants) -> float:
    """Exponential over-estimate ((C + nF) / (2 C^2)) exp(2 phi C |t|) >= big_G(t)."""
    pref = (bc.const_C + bc.norm_F_val) / (2.0 * bc.const_C**2)
    with np.errstate(over="ignore"):
        return float(pref * np.exp(bc.rate * abs(t)))


def lr_commutator_bound(
    X: Iterable[int], Y: Iterable[int], t: float, bc: BoundConstants
) -> float:
    """Commutator-norm bound (2/C) g(t) sum_{i in X, j in Y} F(dist(i, j))
    for observables of unit norm supported on the site sets X and Y."""
    xs = sorted(set(X))
    ys = sorted(set(Y))
    if not xs or not ys:
        raise ValueError("observable supports must be nonempty")
    for s in xs + ys:
        bc.lattice.check_site(s)
    dmin = min(abs(i - j) for i in xs for j in ys)
    pair_sum = float(
        f_values(bc.decay, np.abs(np.subtract.outer(xs, ys)).ravel()).sum()
    )
    return (2.0 / bc.const_C) * g_func(t, bc, supports_disjoint=dmin > 0) * pair_sum


def bound_at_radius(
    i: int, j: int, r: int, t: float, bc: BoundConstants, cor: CorModel
) -> float:
    """Correlation bound at fixed ball radius r:
    Cor(S_i(r):S_j(r)) + 4 G(t) [tail_i(r) + tail_j(r)], exact tail sums."""
    bc.lattice.check_site(i)
    bc.lattice.check_site(j)
    if i == j:
        raise ValueError("sites must differ")
    if not 0 <= 2 * r < abs(i - j):
        raise ValueError(f"radius {r} violates ball disjointness for dist {abs(i - j)}")
    cor_term = cor_between_balls(cor, i, j, r)
    tails = bc.tails
    return cor_term + 4.0 * big_G(t, bc) * (tails[i, r] + tails[j, r])


def bound_optimized(
    i: int, j: int, t: float, bc: BoundConstants, cor: CorModel
) -> tuple[float, int]:
    """min over integer r in [0, (dist-1)//2] of min(1, bound_at_radius),
    by full scan. Returns (value, minimizing r); ties break to smaller r."""
    if i == j:
        raise ValueError("sites must differ")
    r_max = (abs(i - j) - 1) // 2
    best_val = math.inf
    best_r = 0
    for r in range(r_max + 1):
        val = min(1.0, bound_at_radius(i, j, r, t, bc, cor))
        if val < best_val:
            best_val = val
            best_r = r
    return best_val, best_r


def closed_form_exponential(
    r: float, t: float, dist_ij: float, bc: BoundConstants, c: float, cor_value: float
) -> float:
    """cor_value + 4 c (C + nF) exp(2 phi C |t| - a r) / (C^2 r^2); the
    integral-approximation shape for exp_poly decay (singular at r = 0)."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if dist_ij <= 0:
        raise ValueError(f"distance must be positive, got {dist_ij}")
    if bc.decay.kind != "exp_poly":
        raise ValueError("closed_form_exponential requires exp_poly decay")
    with np.errstate(over="ignore"):
        dyn = (
            4.0
            * c
            * (bc.const_C + bc.norm_F_val)
            * np.exp(bc.rate * abs(t) - bc.decay.a * r)
            / (bc.const_C**2 * r**2)
        )
    return float(cor_value + dyn)


def closed_form_powerlaw(
    r: float, t: float, bc: BoundConstants, c: float, alpha: float, cor_value: float
) -> float:
    """cor_value + 4 c (C + nF) exp(2 phi C |t|) / (C^2 r^(alpha - D)), D = 1."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if alpha <= 1:
        raise ValueError(f"alpha must exceed the dimension 1, got {alpha}")
    with np.errstate(over="ignore"):
        dyn = (
            4.0
            * c
            * (bc.const_C + bc.norm_F_val)
            * np.exp(bc.rate * abs(t))
            / (bc.const_C**2 * r ** (alpha - 1.0))
        )
    return float(cor_value + dyn)


def bound_block_closed(t: float, i: int, k: int, p: ClosedFormParams) -> float:
    """Closed-form bound for a Bell pair at +-k measured at +-i:
    min(1, c_tilde exp(a (v |t| - |i - k|))). k = 0 gives the
    uncorrelated two-ball form min(1, c_tilde exp(a (v |t| - i)))."""
    if i < 0 or k < 0:
        raise ValueError("site coordinate and pair half-separation must be nonnegative")
    with np.errstate(over="ignore"):
        return float(min(1.0, p.c_tilde * np.exp(p.a * (p.v * abs(t) - abs(i - k)))))


def bound_power_closed(t: float, dist_ij: int, p: ClosedFormParams) -> float:
    """Closed-form bound for power-law clustered initial correlations:
    min(1, min over integer r of c1/(dist - 2r)^chi + c2 exp(a (v |t| - r)))."""
    if dist_ij < 1:
        raise ValueError(f"distance must be >= 1, got {dist_ij}")
    best = math.inf
    with np.errstate(over="ignore"):
        for r in range((dist_ij - 1) // 2 + 1):
            cand = p.c1 / (dist_ij - 2 * r) ** p.chi + p.c2 * float(
                np.exp(p.a * (p.v * abs(t) - r))
            )
            best = min(best, cand)
    return min(1.0, best)


def bound_grid(
    pairs: Sequence[tuple[int, int]],
    times: Sequence[float],
    bc: BoundConstants,
    cor: CorModel,
    threads: int = 1,
) -> CorrelationGrid:
    """Optimized bound over a (distance x time) grid, one pair per row.

    Deterministic: cells are independent pure evaluations gathered into a
    preallocated array, so chunking over threads cannot change the result.
    """
    if not len(pairs) or not len(times):
        raise ValueError("pairs and times must be nonempty")
    times_arr = np.asarray(list(times), dtype=float)
    distances = np.array([abs(i - j) for i, j in pairs], dtype=int)
    values = np.zeros((len(pairs), len(times_arr)))
    argmin = np.zeros_like(values, dtype=int)

    bc.tails  # materialize the cache once before any worker touches it

    def fill_row(kd: int) -> None:
        i, j = pairs[kd]
        for kt, t in enumerate(times_arr):
            try:
                val, r = bound_optimized(i, j, float(t), bc, cor)
            except ValueError as exc:
                raise ValueError(f"grid cell (delta={abs(i-j)}, t={t}): {exc}") from exc
            values[kd, kt] = val
            argmin[kd, kt] = r

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill_row, range(len(pairs))))
    else:
        for kd in range(len(pairs)):
            fill_row(kd)
    return CorrelationGrid(
        times=times_arr, distances=distances, values=values, label="bound", argmin_r=argmin
    )
