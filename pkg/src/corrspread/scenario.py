"""Scenario configuration, execution, dominance certification, and output.

A scenario file is a flat list of `dotted.key = value` lines describing the
lattice, decay profile, interaction, initial-correlation model, exact
simulation, and the (distance x time) grid. `run_scenario` computes the
requested grids (rigorous bound, exact dynamics, closed-form bound),
certifies cell-wise that the bound dominates |exact| when both are present,
and `emit_outputs` writes one CSV per grid plus report.json/summary.json,
byte-identical across re-runs of the same configuration.

Measurement geometry by simulation kind:
  magnon_prod     flip at i0, pairs (i0, i0 + delta)
  magnon_bell     pair at (p, q), pairs centered on the pair midpoint
  magnon_bell + adjacent: per-row pair (i+1, j-1) just inside the measured
                  sites, rows centered on the chain midpoint
  gaussian_quench half-filled uniform ground state quenched to a dimerized
                  chain, pairs centered on the chain midpoint

Closed-form grids live purely in the (delta, t) plane: magnon scenarios use
the Bell block form with i = delta/2 (k = 0 reproduces the uncorrelated
two-ball cone), the quench scenario uses the power-law form.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .bounds import (
    BoundConstants,
    ClosedFormParams,
    CorrelationGrid,
    bound_block_closed,
    bound_grid,
    bound_power_closed,
    default_velocity,
)
from .initcorr import CorModel
from .lattice import DecayFunction, LatticeSpec, PairInteractionSpec
from .xxsim import (
    HoppingMatrix,
    evolve_gaussian,
    corr_xx,
    corr_zz,
    corr_zz_gaussian,
    ground_state_half_filled,
    make_initial,
    propagate,
)

DOMINANCE_SLACK = 1e-9
DOMINANCE_SLACK_RATIONALE = (
    "absolute slack separating genuine inequality violations from "
    "floating-point rounding in bound and simulation pipelines"
)
BOUNDARY_MARGIN = 10  # sites the lightcone must keep clear of the chain ends

SIM_KINDS = ("magnon_prod", "magnon_bell", "gaussian_quench")
OBSERVABLES = ("xx", "zz")


class ConfigError(ValueError):
    """Configuration rejected before any compute; carries the field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ScenarioError(RuntimeError):
    """Runtime guard violation (e.g. lightcone reaching the chain ends)."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    t_min: float
    t_max: float
    t_steps: int
    delta_min: int
    delta_max: int
    delta_step: int

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    @property
    def deltas(self) -> list[int]:
        return list(range(self.delta_min, self.delta_max + 1, self.delta_step))


@dataclass(frozen=True)
class SimulationSpec:
    kind: str
    observable: str = "xx"
    i0: int | None = None
    p: int | None = None
    q: int | None = None
    adjacent: bool = False
    eta: float = 0.5


@dataclass(frozen=True)
class OutputSpec:
    directory: str
    emit_bound: bool = True
    emit_exact: bool = True
    emit_closed_form: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    lattice: LatticeSpec
    decay: DecayFunction
    J: float
    cor_model: dict
    simulation: SimulationSpec
    grid: GridSpec
    closed_form: dict | None
    outputs: OutputSpec


def parse_scalar(text: str) -> Any:
    s = text.strip()
    if s.lower() == "true":
        return True
    if s.lower() == "false":
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "'\"":
        return s[1:-1]
    return s


def parse_config_text(text: str) -> dict:
    """Flat `dotted.key = value` lines into a nested dict."""
    root: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        path = key.strip().split(".")
        if not all(path):
            raise ConfigError(f"line {lineno}", f"bad key {key.strip()!r}")
        node = root
        for part in path[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(".".join(path), "key collides with a scalar")
        if path[-1] in node:
            raise ConfigError(".".join(path), "duplicate key")
        node[path[-1]] = parse_scalar(value)
    return root


_MISSING = object()


def _need(section: dict, path: str, key: str, kinds: tuple[type, ...], default=_MISSING):
    if key not in section:
        if default is not _MISSING:
            return default
        raise ConfigError(f"{path}.{key}", "missing required key")
    val = section[key]
    if kinds == (float,) and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kinds) or isinstance(val, bool) and bool not in kinds:
        raise ConfigError(f"{path}.{key}", f"expected {kinds[0].__name__}, got {val!r}")
    return val


def build_scenario_config(data: dict) -> ScenarioConfig:
    """Validate a nested config dict into a ScenarioConfig."""
    known = {"name", "lattice", "decay", "interaction", "cor_model", "simulation",
             "grid", "closed_form", "outputs"}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown section")

    name = _need(data, "", "name", (str,))

    lat_sec = _need(data, "", "lattice", (dict,))
    n = _need(lat_sec, "lattice", "num_sites", (int,))
    try:
        lattice = LatticeSpec(num_sites=n)
    except ValueError as exc:
        raise ConfigError("lattice.num_sites", str(exc)) from exc

    dec = _need(data, "", "decay", (dict,))
    kind = _need(dec, "decay", "kind", (str,))
    prefactor = _need(dec, "decay", "prefactor", (float,), default=1.0)
    try:
        if kind == "exp_poly":
            decay = DecayFunction.exp_poly(_need(dec, "decay", "a", (float,)), prefactor)
        elif kind == "power_law":
            decay = DecayFunction.power_law(_need(dec, "decay", "alpha", (float,)), prefactor)
        else:
            raise ConfigError("decay.kind", f"unknown decay kind {kind!r}")
    except ValueError as exc:
        raise ConfigError("decay", str(exc)) from exc

    inter = data.get("interaction", {})
    J = _need(inter, "interaction", "J", (float,), default=1.0)
    if J <= 0 or not math.isfinite(J):
        raise ConfigError("interaction.J", f"must be positive and finite, got {J}")

    sim_sec = _need(data, "", "simulation", (dict,))
    sim_kind = _need(sim_sec, "simulation", "kind", (str,))
    if sim_kind not in SIM_KINDS:
        raise ConfigError("simulation.kind", f"must be one of {SIM_KINDS}, got {sim_kind!r}")
    observable = _need(sim_sec, "simulation", "observable", (str,),
                       default="zz" if sim_kind == "gaussian_quench" else "xx")
    if observable not in OBSERVABLES:
        raise ConfigError("simulation.observable", f"must be one of {OBSERVABLES}")
    simulation = SimulationSpec(
        kind=sim_kind,
        observable=observable,
        i0=_need(sim_sec, "simulation", "i0", (int,), default=None),
        p=_need(sim_sec, "simulation", "p", (int,), default=None),
        q=_need(sim_sec, "simulation", "q", (int,), default=None),
        adjacent=_need(sim_sec, "simulation", "adjacent", (bool,), default=False),
        eta=_need(sim_sec, "simulation", "eta", (float,), default=0.5),
    )

    grid_sec = _need(data, "", "grid", (dict,))
    grid = GridSpec(
        t_min=_need(grid_sec, "grid", "t_min", (float,)),
        t_max=_need(grid_sec, "grid", "t_max", (float,)),
        t_steps=_need(grid_sec, "grid", "t_steps", (int,)),
        delta_min=_need(grid_sec, "grid", "delta_min", (int,)),
        delta_max=_need(grid_sec, "grid", "delta_max", (int,)),
        delta_step=_need(grid_sec, "grid", "delta_step", (int,)),
    )
    if grid.t_steps < 1:
        raise ConfigError("grid.t_steps", "must be >= 1")
    if grid.t_min < 0 or grid.t_max < grid.t_min:
        raise ConfigError("grid.t_min", "need 0 <= t_min <= t_max")
    if grid.delta_min < 1 or grid.delta_step < 1 or grid.delta_max < grid.delta_min:
        raise ConfigError("grid.delta_min", "need 1 <= delta_min <= delta_max, delta_step >= 1")

    out_sec = _need(data, "", "outputs", (dict,))
    outputs = OutputSpec(
        directory=_need(out_sec, "outputs", "directory", (str,)),
        emit_bound=_need(out_sec, "outputs", "emit_bound", (bool,), default=True),
        emit_exact=_need(out_sec, "outputs", "emit_exact", (bool,), default=True),
        emit_closed_form=_need(out_sec, "outputs", "emit_closed_form", (bool,), default=False),
    )

    cor_sec = _need(data, "", "cor_model", (dict,))
    closed = data.get("closed_form")
    cfg = ScenarioConfig(
        name=name, lattice=lattice, decay=decay, J=J, cor_model=dict(cor_sec),
        simulation=simulation, grid=grid, closed_form=closed, outputs=outputs,
    )
    _validate_consistency(cfg)
    return cfg


def load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return build_scenario_config(parse_config_text(fh.read()))


def _validate_consistency(cfg: ScenarioConfig) -> None:
    sim = cfg.simulation
    cor_variant = cfg.cor_model.get("variant")
    n = cfg.lattice.num_sites

    if sim.kind == "magnon_prod":
        if cor_variant != "product":
            raise ConfigError("cor_model.variant",
                              f"magnon_prod needs the product model, got {cor_variant!r}")
        if sim.i0 is None or not 0 <= sim.i0 < n:
            raise ConfigError("simulation.i0", f"flip site {sim.i0} outside chain")
    elif sim.kind == "magnon_bell":
        if cor_variant != "bell_pair":
            raise ConfigError("cor_model.variant",
                              f"magnon_bell needs the bell_pair model, got {cor_variant!r}")
        if sim.adjacent:
            if sim.p is not None or sim.q is not None:
                raise ConfigError("simulation.p", "adjacent mode places the pair per row")
            if cfg.grid.delta_min < 4:
                raise ConfigError("grid.delta_min",
                                  "adjacent mode needs delta >= 4 to keep pair sites distinct")
        else:
            if sim.p is None or sim.q is None:
                raise ConfigError("simulation.p", "bell pair sites p, q required")
            if not (0 <= sim.p < n and 0 <= sim.q < n) or sim.p >= sim.q:
                raise ConfigError("simulation.p", f"need 0 <= p < q < {n}")
            if (sim.q - sim.p) % 2:
                raise ConfigError("simulation.p",
                                  "pair separation must be even for centered measurement rows")
            if (cfg.cor_model.get("p"), cfg.cor_model.get("q")) != (sim.p, sim.q):
                raise ConfigError("cor_model.p", "bell pair sites must match the simulation")
    else:  # gaussian_quench
        if cor_variant != "power_law":
            raise ConfigError("cor_model.variant",
                              f"gaussian_quench needs the power_law model, got {cor_variant!r}")
        if n % 2:
            raise ConfigError("lattice.num_sites", "gaussian_quench needs an even chain")
        if not -1.0 < sim.eta < 1.0:
            raise ConfigError("simulation.eta", f"must lie in (-1, 1), got {sim.eta}")
        if sim.observable != "zz":
            raise ConfigError("simulation.observable", "gaussian_quench exposes zz only")

    if cor_variant not in (None, "product", "bell_pair", "power_law", "exp_clustered"):
        raise ConfigError("cor_model.variant", f"unknown variant {cor_variant!r}")
    if not (sim.kind == "magnon_bell" and sim.adjacent):
        try:
            CorModel.from_config(cfg.cor_model)
        except (KeyError, ValueError) as exc:
            raise ConfigError("cor_model", f"invalid model fields: {exc}") from exc
    if cfg.closed_form is not None:
        allowed = {"a", "v", "c_tilde", "c1", "c2", "chi"}
        for key in cfg.closed_form:
            if key not in allowed:
                raise ConfigError(f"closed_form.{key}", "unknown key")

    centered = sim.kind != "magnon_prod"
    if centered and any(d % 2 for d in cfg.grid.deltas):
        raise ConfigError("grid.delta_min", "centered measurement rows need even distances")
    if cfg.outputs.emit_closed_form and any(d % 2 for d in cfg.grid.deltas) \
            and sim.kind != "gaussian_quench":
        raise ConfigError("grid.delta_min", "closed-form magnon grids need even distances")

    for i, j in scenario_pairs(cfg):
        if not (0 <= i < n and 0 <= j < n):
            raise ConfigError("grid.delta_max",
                              f"measurement pair ({i}, {j}) falls outside the chain")


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

def scenario_pairs(cfg: ScenarioConfig) -> list[tuple[int, int]]:
    """Measured site pair per grid row, in increasing distance order."""
    sim = cfg.simulation
    pairs = []
    for d in cfg.grid.deltas:
        if sim.kind == "magnon_prod":
            pairs.append((sim.i0, sim.i0 + d))
        elif sim.kind == "magnon_bell" and not sim.adjacent:
            c = (sim.p + sim.q) // 2
            pairs.append((c - d // 2, c + d // 2))
        else:
            c = (cfg.lattice.num_sites - 1) // 2 if sim.kind == "magnon_bell" \
                else cfg.lattice.num_sites // 2
            pairs.append((c - d // 2, c + d // 2))
    return pairs


def row_cor_models(cfg: ScenarioConfig) -> list[CorModel]:
    """Initial-correlation envelope per grid row (rows differ only in the
    adjacent-pair mode, where the Bell pair tracks the measured sites)."""
    sim = cfg.simulation
    if sim.kind == "magnon_bell" and sim.adjacent:
        return [CorModel.bell_pair(i + 1, j - 1) for i, j in scenario_pairs(cfg)]
    model = CorModel.from_config(cfg.cor_model)
    return [model for _ in cfg.grid.deltas]


def _closed_form_params(cfg: ScenarioConfig, bc: BoundConstants) -> ClosedFormParams:
    sec = dict(cfg.closed_form or {})
    a = sec.get("a", cfg.decay.a if cfg.decay.kind == "exp_poly" else 1.0)
    v = sec.get("v", default_velocity(bc, a))
    cor = cfg.cor_model
    return ClosedFormParams(
        a=float(a),
        v=float(v),
        c_tilde=float(sec.get("c_tilde", 1.0)),
        c1=float(sec.get("c1", cor.get("c1", 1.0))),
        c2=float(sec.get("c2", 1.0)),
        chi=float(sec.get("chi", cor.get("chi", 0.0))),
    )


def _guard_lightcone(cfg: ScenarioConfig) -> None:
    """Abort when the fastest signal could touch the chain ends within the
    time grid; boundary reflections would contaminate the measured region."""
    sim = cfg.simulation
    n = cfg.lattice.num_sites
    sites = {s for pair in scenario_pairs(cfg) for s in pair}
    if sim.kind == "magnon_prod":
        sites.add(sim.i0)
        v_guard = 4.0 * cfg.J
    elif sim.kind == "magnon_bell":
        if not sim.adjacent:
            sites.update((sim.p, sim.q))
        v_guard = 4.0 * cfg.J
    else:
        v_guard = 4.0 * cfg.J * (1.0 + abs(sim.eta))
    reach = v_guard * cfg.grid.t_max
    lo = min(sites) - reach
    hi = max(sites) + reach
    if lo < BOUNDARY_MARGIN or hi > n - 1 - BOUNDARY_MARGIN:
        raise ScenarioError(
            f"lightcone guard: sites {min(sites)}..{max(sites)} with speed {v_guard} "
            f"and t_max {cfg.grid.t_max} reach [{lo:.1f}, {hi:.1f}], closer than "
            f"{BOUNDARY_MARGIN} sites to the ends of the {n}-site chain; "
            f"enlarge the chain or shorten the time grid"
        )


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

@dataclass
class DominanceReport:
    scenario: str
    num_cells: int
    num_violations: int
    worst_margin: float
    violating_cells: list[tuple[int, float, float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "num_cells": self.num_cells,
            "num_violations": self.num_violations,
            "worst_margin": self.worst_margin,
            "violating_cells": [
                {"delta": d, "t": t, "bound": b, "exact": e}
                for d, t, b, e in self.violating_cells
            ],
            "slack": DOMINANCE_SLACK,
            "slack_rationale": DOMINANCE_SLACK_RATIONALE,
        }


@dataclass
class ScenarioResult:
    grids: list[CorrelationGrid]
    report: DominanceReport | None
    summary: dict


def verify_dominance(
    bound: CorrelationGrid, exact: CorrelationGrid, scenario: str = ""
) -> DominanceReport:
    """Cell-wise check bound >= |exact| - slack over identical grid axes."""
    if not np.array_equal(bound.times, exact.times) or not np.array_equal(
        bound.distances, exact.distances
    ):
        raise ValueError("bound and exact grids carry different axes")
    margins = bound.values - np.abs(exact.values)
    mask = margins < -DOMINANCE_SLACK
    cells = [
        (int(bound.distances[kd]), float(bound.times[kt]),
         float(bound.values[kd, kt]), float(exact.values[kd, kt]))
        for kd, kt in zip(*np.nonzero(mask))
    ]
    return DominanceReport(
        scenario=scenario,
        num_cells=int(margins.size),
        num_violations=len(cells),
        worst_margin=float(margins.min()),
        violating_cells=cells,
    )


def _exact_grid_magnon(cfg: ScenarioConfig) -> CorrelationGrid:
    sim = cfg.simulation
    n = cfg.lattice.num_sites
    pairs = scenario_pairs(cfg)
    times = cfg.grid.times
    h = HoppingMatrix.uniform(n, J=cfg.J)
    if sim.kind == "magnon_prod":
        initials = [make_initial("prod_flip", n, i0=sim.i0)] * len(pairs)
    elif not sim.adjacent:
        initials = [make_initial("bell", n, p=sim.p, q=sim.q)] * len(pairs)
    else:
        initials = [make_initial("bell", n, p=i + 1, q=j - 1) for i, j in pairs]
    measure = corr_xx if sim.observable == "xx" else corr_zz

    values = np.zeros((len(pairs), len(times)))
    # rows sharing an initial state share each propagated vector
    groups: dict[int, list[int]] = {}
    for kd, st in enumerate(initials):
        groups.setdefault(id(st), []).append(kd)
    for rows in groups.values():
        st0 = initials[rows[0]]
        for kt, t in enumerate(times):
            stt = propagate(st0, h, float(t))
            for kd in rows:
                i, j = pairs[kd]
                values[kd, kt] = measure(stt, i, j)
    return CorrelationGrid(
        times=times, distances=np.array([j - i for i, j in pairs]),
        values=values, label="exact",
    )


def _exact_grid_gaussian(cfg: ScenarioConfig) -> CorrelationGrid:
    n = cfg.lattice.num_sites
    pairs = scenario_pairs(cfg)
    times = cfg.grid.times
    state0 = ground_state_half_filled(n, J=cfg.J)
    h_quench = HoppingMatrix.dimerized(n, J=cfg.J, eta=cfg.simulation.eta)
    values = np.zeros((len(pairs), len(times)))
    for kt, t in enumerate(times):
        state_t = evolve_gaussian(state0, h_quench, float(t))
        for kd, (i, j) in enumerate(pairs):
            values[kd, kt] = corr_zz_gaussian(state_t, i, j)
    return CorrelationGrid(
        times=times, distances=np.array([j - i for i, j in pairs]),
        values=values, label="exact",
    )


def _closed_form_grid(cfg: ScenarioConfig, bc: BoundConstants) -> CorrelationGrid:
    params = _closed_form_params(cfg, bc)
    times = cfg.grid.times
    deltas = cfg.grid.deltas
    sim = cfg.simulation
    values = np.zeros((len(deltas), len(times)))
    for kd, d in enumerate(deltas):
        for kt, t in enumerate(times):
            if sim.kind == "gaussian_quench":
                values[kd, kt] = bound_power_closed(float(t), d, params)
            else:
                if sim.kind == "magnon_prod":
                    k = 0
                elif sim.adjacent:
                    k = (d - 2) // 2
                else:
                    k = (sim.q - sim.p) // 2
                values[kd, kt] = bound_block_closed(float(t), d // 2, k, params)
    return CorrelationGrid(
        times=times, distances=np.array(deltas), values=values, label="closed_form",
    )


def _bound_grid(cfg: ScenarioConfig, bc: BoundConstants, threads: int) -> CorrelationGrid:
    pairs = scenario_pairs(cfg)
    cors = row_cor_models(cfg)
    times = cfg.grid.times
    if all(c is cors[0] for c in cors):
        return bound_grid(pairs, times, bc, cors[0], threads=threads)
    rows = [bound_grid([pairs[kd]], times, bc, cors[kd], threads=1) for kd in range(len(pairs))]
    return CorrelationGrid(
        times=times,
        distances=np.array([abs(j - i) for i, j in pairs]),
        values=np.vstack([r.values for r in rows]),
        label="bound",
        argmin_r=np.vstack([r.argmin_r for r in rows]),
    )


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> ScenarioResult:
    """Compute the configured grids, certify dominance when both the bound
    and the exact grid are present, and assemble the run summary."""
    _guard_lightcone(cfg)
    interaction = PairInteractionSpec.xx_chain(
        J=cfg.J, eta=cfg.simulation.eta if cfg.simulation.kind == "gaussian_quench" else 0.0
    )
    bc = BoundConstants.from_model(cfg.decay, cfg.lattice, interaction)

    grids: list[CorrelationGrid] = []
    bound = exact = None
    if cfg.outputs.emit_bound:
        bound = _bound_grid(cfg, bc, threads)
        grids.append(bound)
    if cfg.outputs.emit_exact:
        exact = (
            _exact_grid_gaussian(cfg)
            if cfg.simulation.kind == "gaussian_quench"
            else _exact_grid_magnon(cfg)
        )
        grids.append(exact)
    if cfg.outputs.emit_closed_form:
        grids.append(_closed_form_grid(cfg, bc))

    report = None
    if bound is not None and exact is not None:
        report = verify_dominance(bound, exact, scenario=cfg.name)

    summary = {
        "name": cfg.name,
        "constants": bc.to_config(),
        "cor_model": dict(cfg.cor_model),
        "simulation": {
            "kind": cfg.simulation.kind,
            "observable": cfg.simulation.observable,
        },
        "grids": [g.summary() for g in grids],
        "report": report.to_dict() if report is not None else None,
    }
    return ScenarioResult(grids=grids, report=report, summary=summary)


# ---------------------------------------------------------------------------
# arrivals and emission
# ---------------------------------------------------------------------------

def arrival_times(grid: CorrelationGrid, threshold: float) -> dict[int, float | None]:
    """First time |value| reaches the threshold per distance, linearly
    interpolated between the bracketing grid times; None when never reached."""
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    out: dict[int, float | None] = {}
    for kd, d in enumerate(grid.distances):
        mags = np.abs(grid.values[kd])
        hit = np.nonzero(mags >= threshold)[0]
        if len(hit) == 0:
            out[int(d)] = None
            continue
        k = int(hit[0])
        if k == 0:
            out[int(d)] = float(grid.times[0])
            continue
        t0, t1 = grid.times[k - 1], grid.times[k]
        v0, v1 = mags[k - 1], mags[k]
        out[int(d)] = float(t0 + (threshold - v0) * (t1 - t0) / (v1 - v0))
    return out


def emit_outputs(
    grids: Sequence[CorrelationGrid],
    report: DominanceReport | None,
    summary: dict,
    directory: str,
) -> list[str]:
    """Write one CSV per grid plus report.json and summary.json; the same
    inputs always produce byte-identical files."""
    name = summary.get("name", "scenario")
    try:
        os.makedirs(directory, exist_ok=True)
        paths = []
        for grid in grids:
            path = os.path.join(directory, f"{name}__{grid.label}.csv")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(grid.to_csv())
            paths.append(path)
        if report is not None:
            path = os.path.join(directory, "report.json")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
                fh.write("\n")
            paths.append(path)
        path = os.path.join(directory, "summary.json")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        paths.append(path)
        return paths
    except OSError as exc:
        raise OSError(f"writing outputs under {directory!r}: {exc}") from exc
