"""Metropolis/annealing driver around the sweep kernels.

Replica seeds derive from the master seed through the documented
splitmix64 stream, so a run is fully determined by (graph, couplings,
schedule, seed) regardless of which kernel backend is active.  Within a
replica, sweeps are sequential by contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import NotBipartiteError
from ..lattice import LatticeGraph
from ..model import Couplings
from . import kernels

DEFAULT_CONE_HALF_ANGLE = 0.5  # radians


def adjacency_csr(g: LatticeGraph) -> tuple[np.ndarray, np.ndarray]:
    """Flattened neighbor lists (neighbors, offsets) for the kernels."""
    lists = [[] for _ in range(g.n_sites)]
    for i, j in g.bonds:
        lists[i].append(j)
        lists[j].append(i)
    offsets = np.zeros(g.n_sites + 1, dtype=np.int32)
    flat = []
    for site, nbrs in enumerate(lists):
        nbrs.sort()
        flat.extend(nbrs)
        offsets[site + 1] = len(flat)
    return np.array(flat, dtype=np.int32), offsets


@dataclass
class SpinConfig:
    """Classical spin configuration on a lattice graph."""

    model: str                 # "ising" or "vector3"
    values: np.ndarray         # (n,) int8 or (n, 3) float64, unit norm
    graph: LatticeGraph

    def __post_init__(self):
        if self.model not in ("ising", "vector3"):
            raise ValueError(f"unknown spin model: {self.model}")
        n = self.graph.n_sites
        if self.model == "ising":
            if self.values.shape != (n,):
                raise ValueError("ising config must have shape (n_sites,)")
        else:
            if self.values.shape != (n, 3):
                raise ValueError("vector3 config must have shape (n_sites, 3)")
            norms = np.linalg.norm(self.values, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-12):
                raise ValueError("vector3 spins must be unit norm")

    def bond_dots(self) -> np.ndarray:
        i = np.fromiter((b[0] for b in self.graph.bonds), dtype=np.int64)
        j = np.fromiter((b[1] for b in self.graph.bonds), dtype=np.int64)
        if self.model == "ising":
            return self.values[i].astype(np.float64) * self.values[j]
        return np.einsum("bk,bk->b", self.values[i], self.values[j])


@dataclass(frozen=True)
class Schedule:
    t_start: float
    t_end: float
    n_steps: int
    decay: str = "geometric"
    sweeps_per_step: int = 10

    def __post_init__(self):
        if not (self.t_start >= self.t_end > 0.0):
            raise ValueError("need t_start >= t_end > 0")
        if self.n_steps < 1 or self.sweeps_per_step < 1:
            raise ValueError("counts must be >= 1")
        if self.decay not in ("geometric", "linear"):
            raise ValueError(f"unknown decay: {self.decay}")

    def temperatures(self) -> np.ndarray:
        if self.n_steps == 1:
            return np.array([self.t_end])
        frac = np.arange(self.n_steps) / (self.n_steps - 1)
        if self.decay == "geometric":
            return self.t_start * (self.t_end / self.t_start) ** frac
        return self.t_start + (self.t_end - self.t_start) * frac

    def to_json_dict(self) -> dict:
        return {
            "t_start": self.t_start,
            "t_end": self.t_end,
            "n_steps": self.n_steps,
            "decay": self.decay,
            "sweeps_per_step": self.sweeps_per_step,
        }


@dataclass(frozen=True)
class RunResult:
    energy_per_site: float
    magnetization: float
    staggered_magnetization: float | None
    parallel_bond_fraction: float
    acceptance_rate: float
    seed: int
    schedule: Schedule

    def to_json_dict(self) -> dict:
        return {
            "energy_per_site": self.energy_per_site,
            "magnetization": self.magnetization,
            "staggered_magnetization": self.staggered_magnetization,
            "parallel_bond_fraction": self.parallel_bond_fraction,
            "acceptance_rate": self.acceptance_rate,
            "seed": self.seed,
            "schedule": self.schedule.to_json_dict(),
        }


def energy(config: SpinConfig, c: Couplings) -> float:
    """E = -2*(a1 + a2) * sum_bonds s_i . s_j at the unit-spin convention.

    The two coupling terms share one bond sum, so classically they enter
    only through their sum; at a1 = |a2| every configuration has E = 0.
    """
    j = 2.0 * (c.a1 + c.a2)
    return float(-j * np.sum(config.bond_dots()))


def observables(config: SpinConfig) -> tuple[float, float | None, float]:
    """(m, m_s, parallel_bond_fraction); m_s is None on non-bipartite graphs."""
    if config.model == "ising":
        mean = np.mean(config.values.astype(np.float64))
        m = abs(float(mean))
    else:
        m = float(np.linalg.norm(np.mean(config.values, axis=0)))
    m_s = None
    if config.graph.bipartition is not None:
        signs = np.where(np.array(config.graph.bipartition) == 0, 1.0, -1.0)
        if config.model == "ising":
            m_s = abs(float(np.mean(signs * config.values)))
        else:
            m_s = float(np.linalg.norm(np.mean(signs[:, None] * config.values, axis=0)))
    dots = config.bond_dots()
    fraction = float(np.mean(dots > 0.0)) if dots.size else 0.0
    return m, m_s, fraction


def staggered_or_raise(config: SpinConfig) -> float:
    m, m_s, _ = observables(config)
    if m_s is None:
        raise NotBipartiteError("staggered magnetization needs a bipartite graph")
    return m_s


def random_config(g: LatticeGraph, model: str, state: np.ndarray) -> SpinConfig:
    """Random initial configuration drawn from the documented RNG stream."""
    n = g.n_sites
    if model == "ising":
        vals = np.empty(n, dtype=np.int8)
        for i in range(n):
            vals[i] = 1 if kernels.next_uniform(state) < 0.5 else -1
    elif model == "vector3":
        vals = np.empty((n, 3))
        for i in range(n):
            cos_t = 2.0 * kernels.next_uniform(state) - 1.0
            phi = 2.0 * math.pi * kernels.next_uniform(state)
            sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
            vals[i] = (sin_t * math.cos(phi), sin_t * math.sin(phi), cos_t)
    else:
        raise ValueError(f"unknown spin model: {model}")
    return SpinConfig(model, vals, g)


def metropolis_sweep(config: SpinConfig, c: Couplings, temperature: float,
                     state: np.ndarray,
                     cone_half_angle: float = DEFAULT_CONE_HALF_ANGLE
                     ) -> tuple[int, float]:
    """One in-place sweep; returns (accepted proposals, total energy change)."""
    if temperature <= 0.0:
        raise ValueError("temperature must be > 0")
    neighbors, offsets = adjacency_csr(config.graph)
    return _sweep_raw(config, c, temperature, state, neighbors, offsets, cone_half_angle)


def _sweep_raw(config, c, temperature, state, neighbors, offsets, cone_half_angle):
    j = 2.0 * (c.a1 + c.a2)
    if config.model == "ising":
        return kernels.ising_sweep(config.values, neighbors, offsets, j, temperature, state)
    return kernels.vector_sweep(
        config.values, neighbors, offsets, j, temperature,
        math.cos(cone_half_angle), state,
    )


def derive_replica_seeds(seed: int, replicas: int) -> list[int]:
    """Replica seeds from the master seed via the splitmix64 stream."""
    state = np.array([kernels.seed_state(seed)], dtype=np.uint64)
    seeds = []
    for _ in range(replicas):
        seeds.append(int((kernels.next_uniform(state) * (1 << 53))) ^ seed)
    return seeds


def anneal_single(g: LatticeGraph, c: Couplings, schedule: Schedule, seed: int,
                  model: str = "ising",
                  cone_half_angle: float = DEFAULT_CONE_HALF_ANGLE) -> RunResult:
    """One annealing run; observables averaged over the final schedule step."""
    state = np.array([kernels.seed_state(seed)], dtype=np.uint64)
    config = random_config(g, model, state)
    neighbors, offsets = adjacency_csr(g)

    accepted = 0
    proposed = 0
    temps = schedule.temperatures()
    final_m = []
    final_ms = []
    final_frac = []
    final_energy = []
    for step, temp in enumerate(temps):
        last = step == len(temps) - 1
        for _ in range(schedule.sweeps_per_step):
            acc, _ = _sweep_raw(config, c, float(temp), state, neighbors, offsets,
                                cone_half_angle)
            accepted += acc
            proposed += g.n_sites
            if last:
                m, m_s, frac = observables(config)
                final_m.append(m)
                final_ms.append(m_s)
                final_frac.append(frac)
                final_energy.append(energy(config, c))

    m_s = None
    if g.bipartition is not None:
        m_s = float(np.mean([v for v in final_ms]))
    return RunResult(
        energy_per_site=float(np.mean(final_energy)) / g.n_sites,
        magnetization=float(np.mean(final_m)),
        staggered_magnetization=m_s,
        parallel_bond_fraction=float(np.mean(final_frac)),
        acceptance_rate=accepted / proposed,
        seed=seed,
        schedule=schedule,
    )


def anneal(g: LatticeGraph, c: Couplings, schedule: Schedule, seed: int,
           replicas: int = 1, model: str = "ising",
           cone_half_angle: float = DEFAULT_CONE_HALF_ANGLE
           ) -> tuple[RunResult, list[RunResult]]:
    """Independent replicas with derived seeds; returns (best, all results)."""
    results = [
        anneal_single(g, c, schedule, s, model, cone_half_angle)
        for s in derive_replica_seeds(seed, replicas)
    ]
    best = min(results, key=lambda r: r.energy_per_site)
    return best, results
