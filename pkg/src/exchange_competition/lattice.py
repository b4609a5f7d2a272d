"""Finite interaction graphs: chains, rings and square lattices.

Site indexing is sequential for chains/rings and row-major for squares
(site = row*width + col), so serialized graphs are stable across runs.
Graphs are immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvalidExtentError, NonUniformCoordinationError, NotBipartiteError


@dataclass(frozen=True)
class LatticeSpec:
    """kind in {chain, ring, square}; extent is (length,) or (width, height)."""

    kind: str
    extent: tuple[int, ...]
    boundary: str = "periodic"

    def __post_init__(self):
        if self.kind not in ("chain", "ring", "square"):
            raise InvalidExtentError(f"unknown lattice kind: {self.kind}")
        if self.boundary not in ("open", "periodic"):
            raise InvalidExtentError(f"unknown boundary: {self.boundary}")
        if self.kind == "square":
            if len(self.extent) != 2:
                raise InvalidExtentError("square lattice needs (width, height)")
        elif len(self.extent) != 1:
            raise InvalidExtentError(f"{self.kind} needs a single length")
        if any(e < 2 for e in self.extent):
            raise InvalidExtentError(f"extent components must be >= 2: {self.extent}")


@dataclass(frozen=True)
class LatticeGraph:
    n_sites: int
    bonds: tuple[tuple[int, int], ...]
    z_per_site: tuple[int, ...]
    bipartition: tuple[int, ...] | None = field(default=None)

    def to_json_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "bonds": [list(b) for b in self.bonds],
            "z_per_site": list(self.z_per_site),
            "bipartition": list(self.bipartition) if self.bipartition is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _two_coloring(n_sites: int, bonds) -> tuple[int, ...] | None:
    """BFS two-coloring; None when the graph is not bipartite."""
    adj = [[] for _ in range(n_sites)]
    for i, j in bonds:
        adj[i].append(j)
        adj[j].append(i)
    color = [-1] * n_sites
    for start in range(n_sites):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            site = queue.pop()
            for other in adj[site]:
                if color[other] == -1:
                    color[other] = 1 - color[site]
                    queue.append(other)
                elif color[other] == color[site]:
                    return None
    return tuple(color)


def build(spec: LatticeSpec) -> LatticeGraph:
    """Construct the nearest-neighbour graph for the given spec.

    Periodic boundaries wrap; duplicate wrap bonds (e.g. a 2-site ring)
    collapse to a single bond.  The bipartition is attached whenever the
    graph is two-colorable.
    """
    bond_set: set[tuple[int, int]] = set()

    def add(i: int, j: int):
        if i != j:
            bond_set.add((min(i, j), max(i, j)))

    if spec.kind in ("chain", "ring"):
        length = spec.extent[0]
        n_sites = length
        for i in range(length - 1):
            add(i, i + 1)
        periodic = spec.kind == "ring" and spec.boundary == "periodic"
        if spec.kind == "ring" and spec.boundary == "open":
            periodic = False
        if periodic:
            add(length - 1, 0)
    else:
        width, height = spec.extent
        n_sites = width * height
        for row in range(height):
            for col in range(width):
                site = row * width + col
                if col + 1 < width:
                    add(site, site + 1)
                elif spec.boundary == "periodic":
                    add(site, row * width)
                if row + 1 < height:
                    add(site, site + width)
                elif spec.boundary == "periodic":
                    add(site, col)

    bonds = tuple(sorted(bond_set))
    z = [0] * n_sites
    for i, j in bonds:
        z[i] += 1
        z[j] += 1
    return LatticeGraph(n_sites, bonds, tuple(z), _two_coloring(n_sites, bonds))


def uniform_coordination(g: LatticeGraph) -> int:
    """The common coordination number z; raises when sites differ (open boundaries)."""
    z0 = g.z_per_site[0]
    if any(z != z0 for z in g.z_per_site):
        raise NonUniformCoordinationError(
            "coordination varies across sites; Nz formulas need a periodic graph"
        )
    return z0


def neel_assignment(g: LatticeGraph) -> tuple[int, ...]:
    """Per-site orientation (+1 up / -1 down) alternating across the bipartition."""
    if g.bipartition is None:
        raise NotBipartiteError("graph is not bipartite; no Neel assignment exists")
    return tuple(1 if c == 0 else -1 for c in g.bipartition)
