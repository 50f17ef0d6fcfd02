"""Envelope models for initial correlations between two balls.

`cor_between_balls` upper-bounds the largest connected correlation between
any pair of norm-1 observables supported on the closed balls S_i(r), S_j(r)
in the chosen initial state:

    product        -> 0 (no correlations between disjoint regions)
    bell_pair      -> 1 exactly when the two pair members are split across
                      the two balls, else 0 (exact for a single Bell pair:
                      a member traced out, or both members in one ball,
                      leaves the regions uncorrelated)
    power_law      -> min(1, c1 / gap^chi)  with gap = dist(i,j) - 2r, the
                      closest distance between the balls (worst-pair form)
    exp_clustered  -> min(1, c0 * exp(-gap / xi))

Every value is capped at 1 (Cauchy-Schwarz for normalized observables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

VARIANTS = ("product", "bell_pair", "power_law", "exp_clustered")


@dataclass(frozen=True)
class CorModel:
    variant: str
    p: int | None = None
    q: int | None = None
    c1: float | None = None
    chi: float | None = None
    c0: float | None = None
    xi: float | None = None

    def __post_init__(self) -> None:
        if self.variant == "product":
            pass
        elif self.variant == "bell_pair":
            if self.p is None or self.q is None or self.p == self.q:
                raise ValueError(f"bell_pair needs two distinct sites, got p={self.p}, q={self.q}")
        elif self.variant == "power_law":
            if self.c1 is None or self.c1 < 0 or not math.isfinite(self.c1):
                raise ValueError(f"power_law amplitude c1 must be >= 0, got {self.c1}")
            if self.chi is None or self.chi < 0 or not math.isfinite(self.chi):
                raise ValueError(f"power_law exponent chi must be >= 0, got {self.chi}")
        elif self.variant == "exp_clustered":
            if self.c0 is None or self.c0 < 0 or not math.isfinite(self.c0):
                raise ValueError(f"exp_clustered amplitude c0 must be >= 0, got {self.c0}")
            if self.xi is None or self.xi <= 0 or not math.isfinite(self.xi):
                raise ValueError(f"exp_clustered length xi must be > 0, got {self.xi}")
        else:
            raise ValueError(f"unknown cor-model variant {self.variant!r}")

    @classmethod
    def product(cls) -> "CorModel":
        return cls(variant="product")

    @classmethod
    def bell_pair(cls, p: int, q: int) -> "CorModel":
        return cls(variant="bell_pair", p=p, q=q)

    @classmethod
    def power_law(cls, c1: float, chi: float) -> "CorModel":
        return cls(variant="power_law", c1=c1, chi=chi)

    @classmethod
    def exp_clustered(cls, c0: float, xi: float) -> "CorModel":
        return cls(variant="exp_clustered", c0=c0, xi=xi)

    def to_config(self) -> dict:
        out: dict = {"variant": self.variant}
        if self.variant == "bell_pair":
            out.update(p=self.p, q=self.q)
        elif self.variant == "power_law":
            out.update(c1=self.c1, chi=self.chi)
        elif self.variant == "exp_clustered":
            out.update(c0=self.c0, xi=self.xi)
        return out

    @classmethod
    def from_config(cls, cfg: dict) -> "CorModel":
        variant = cfg.get("variant")
        if variant == "product":
            return cls.product()
        if variant == "bell_pair":
            return cls.bell_pair(cfg["p"], cfg["q"])
        if variant == "power_law":
            return cls.power_law(cfg["c1"], cfg["chi"])
        if variant == "exp_clustered":
            return cls.exp_clustered(cfg["c0"], cfg["xi"])
        raise ValueError(f"unknown cor-model variant {variant!r}")


def cor_between_balls(model: CorModel, i: int, j: int, r: int) -> float:
    """Correlation envelope between the closed balls S_i(r) and S_j(r).

    Requires disjoint balls, 2r < dist(i, j). Balls are closed: a site at
    distance exactly r belongs to the ball, so a Bell pair sitting on both
    ball boundaries counts as split.
    """
    if i == j:
        raise ValueError("ball centres must differ")
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    dist = abs(i - j)
    if 2 * r >= dist:
        raise ValueError(f"balls of radius {r} around sites {dist} apart overlap")

    if model.variant == "product":
        return 0.0
    if model.variant == "bell_pair":
        in_i = lambda s: abs(s - i) <= r
        in_j = lambda s: abs(s - j) <= r
        split = (in_i(model.p) and in_j(model.q)) or (in_j(model.p) and in_i(model.q))
        return 1.0 if split else 0.0
    gap = dist - 2 * r
    if model.variant == "power_law":
        return min(1.0, model.c1 / gap**model.chi)
    return min(1.0, model.c0 * math.exp(-gap / model.xi))
