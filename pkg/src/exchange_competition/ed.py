"""Exact diagonalization of spin-1/2 Heisenberg clusters.

Basis convention: computational z-basis, bit i of the basis index encodes
spin i, with a clear bit meaning up (+1/2) and a set bit meaning down
(-1/2).  The all-up product state is therefore basis vector 0.

The bond Hamiltonian is H = -2*A * sum_bonds (sz_i sz_j + (s+_i s-_j +
s-_i s+_j)/2).  Quantum energies differ from the unit-alignment values
used by the closed-form model by an exact factor 4 (aligned spin-1/2
pairs give s.s = 1/4, not 1); ``convention_rescale`` applies that factor
explicitly and nothing in this module does so silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    DegenerateCouplingsError,
    DimensionMismatchError,
    NonConvergenceError,
    NotBipartiteError,
    SizeLimitError,
)
from .lattice import LatticeGraph, neel_assignment
from .model import Couplings

MAX_SPINS = 20          # 2^20 sparse construction limit
MAX_DENSE_DIM = 4096    # n = 12
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Real-symmetric bond Hamiltonian in the z-basis (sparse CSR storage)."""

    n_spins: int
    matrix: sp.csr_matrix
    coupling: float

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        if self.dimension > MAX_DENSE_DIM:
            raise SizeLimitError(f"dimension {self.dimension} > {MAX_DENSE_DIM} for dense use")
        return self.matrix.toarray()

    def norm_inf(self) -> float:
        return float(abs(self.matrix).sum(axis=1).max())

    def dump_coordinate(self) -> str:
        """Coordinate text dump: one 'row col value' line per stored entry."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [
            f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}" for k in order
        ]
        return "\n".join(lines)


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray      # ascending
    ground_vector: np.ndarray    # unit norm
    ground_degeneracy: int
    method: str

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": [float(e) for e in self.eigenvalues],
            "ground_energy": self.ground_energy,
            "ground_degeneracy": self.ground_degeneracy,
            "method": self.method,
        }


@dataclass(frozen=True)
class CorrelationReport:
    bonds: tuple[tuple[int, int], ...]
    correlators: np.ndarray      # <s_i . s_j> per bond
    parallel_fraction: float     # fraction of bonds with positive correlator
    total_sz: float

    def to_json_dict(self) -> dict:
        return {
            "bonds": [list(b) for b in self.bonds],
            "correlators": [float(c) for c in self.correlators],
            "parallel_fraction": self.parallel_fraction,
            "total_sz": self.total_sz,
        }


def sz_sectors(n_spins: int) -> dict[int, np.ndarray]:
    """Basis indices grouped by 2*Sz_total = n_up - n_down (ascending indices)."""
    dim = 1 << n_spins
    counts = np.array([bin(s).count("1") for s in range(dim)])
    return {
        int(n_spins - 2 * k): np.nonzero(counts == k)[0]
        for k in range(n_spins + 1)
    }


def build_hamiltonian(g: LatticeGraph, coupling: float, max_spins: int = MAX_SPINS) -> HamiltonianMatrix:
    """H = -2*coupling * sum_bonds s_i . s_j as a sparse symmetric matrix."""
    n = g.n_sites
    if n > max_spins:
        raise SizeLimitError(f"{n} spins exceed the limit of {max_spins}")
    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)

    diag = np.zeros(dim)
    rows = []
    cols = []
    vals = []
    for i, j in g.bonds:
        bit_i = (states >> i) & 1
        bit_j = (states >> j) & 1
        same = bit_i == bit_j
        # sz_i sz_j: +1/4 aligned, -1/4 anti-aligned
        diag += np.where(same, -2.0 * coupling * 0.25, 2.0 * coupling * 0.25)
        # transverse flip on anti-aligned pairs, amplitude -2*coupling*(1/2)
        flip_from = states[~same]
        flip_to = flip_from ^ ((1 << i) | (1 << j))
        rows.append(flip_from)
        cols.append(flip_to)
        vals.append(np.full(flip_from.shape, -coupling))

    rows.append(states)
    cols.append(states)
    vals.append(diag)
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    mat.sum_duplicates()
    return HamiltonianMatrix(n, mat, float(coupling))


def build_split_hamiltonians(
    g: LatticeGraph, c: Couplings, max_spins: int = MAX_SPINS
) -> tuple[HamiltonianMatrix, HamiltonianMatrix]:
    """The ferromagnetic-term and antiferromagnetic-term operators on the same bonds."""
    return (
        build_hamiltonian(g, c.a1, max_spins),
        build_hamiltonian(g, c.a2, max_spins),
    )


def operator_identity_report(
    h1: HamiltonianMatrix, h2: HamiltonianMatrix, h_combined: HamiltonianMatrix
) -> float:
    """max entrywise |H1 + H2 - H_combined|; zero by linearity of the bond sum."""
    if not (h1.dimension == h2.dimension == h_combined.dimension):
        raise DimensionMismatchError("Hamiltonians act on different dimensions")
    diff = (h1.matrix + h2.matrix - h_combined.matrix).tocoo()
    if diff.nnz == 0:
        return 0.0
    return float(np.abs(diff.data).max())


def ground_state(h: HamiltonianMatrix, method: str = "dense", seed: int = 0) -> SpectrumResult:
    """Eigendecomposition: full and dense up to dim 4096, else seeded Lanczos."""
    dim = h.dimension
    if method == "dense":
        if dim > MAX_DENSE_DIM:
            raise SizeLimitError(f"dense solver limited to dim {MAX_DENSE_DIM}, got {dim}")
        evals, evecs = np.linalg.eigh(h.dense())
        ground = evecs[:, 0]
    elif method == "iterative":
        if dim > (1 << 20):
            raise SizeLimitError(f"iterative solver limited to dim 2^20, got {dim}")
        k = min(6, dim - 2)
        if k < 1:
            return ground_state(h, "dense", seed)
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(dim)
        try:
            evals, evecs = spla.eigsh(h.matrix, k=k, which="SA", v0=v0)
        except spla.ArpackNoConvergence as exc:
            raise NonConvergenceError(
                "Lanczos failed to converge", iterations=getattr(exc, "maxiter", None)
            ) from exc
        order = np.argsort(evals)
        evals = evals[order]
        evecs = evecs[:, order]
        ground = evecs[:, 0]
        scale = max(h.norm_inf(), 1.0)
        residual = np.linalg.norm(h.matrix @ ground - evals[0] * ground)
        if residual > 1e-9 * scale:
            raise NonConvergenceError(f"residual {residual} exceeds 1e-9*|H|")
    else:
        raise ValueError(f"unknown method: {method}")

    ground = ground / np.linalg.norm(ground)
    degeneracy = int(np.sum(np.abs(evals - evals[0]) <= DEGENERACY_TOL))
    return SpectrumResult(np.asarray(evals, dtype=float), ground, degeneracy, method)


def ferro_state(g: LatticeGraph) -> np.ndarray:
    """All-up product state; an exact eigenstate of every bond-sum Hamiltonian."""
    v = np.zeros(1 << g.n_sites)
    v[0] = 1.0
    return v


def neel_state(g: LatticeGraph) -> np.ndarray:
    """Alternating product state from the bipartition (down spins on class 1)."""
    orientation = neel_assignment(g)
    index = 0
    for site, o in enumerate(orientation):
        if o < 0:
            index |= 1 << site
    v = np.zeros(1 << g.n_sites)
    v[index] = 1.0
    return v


def superposition_state(g: LatticeGraph, c: Couplings) -> np.ndarray:
    """normalize(a1*|ferro> + |a2|*|neel>); the two product states are orthogonal."""
    if c.degenerate:
        raise DegenerateCouplingsError("a1 = a2 = 0: no superposition state")
    if g.bipartition is None:
        raise NotBipartiteError("superposition state needs a bipartite graph")
    v = c.a1 * ferro_state(g) + c.abs_a2 * neel_state(g)
    return v / np.linalg.norm(v)


def expectation(h: HamiltonianMatrix, v: np.ndarray) -> float:
    if v.shape[0] != h.dimension:
        raise DimensionMismatchError("state dimension does not match operator")
    return float(v @ (h.matrix @ v))


def overlap(v: np.ndarray, w: np.ndarray) -> float:
    """|<v|w>|^2 for unit vectors."""
    if v.shape != w.shape:
        raise DimensionMismatchError("states have different dimensions")
    return float(abs(np.vdot(v, w)) ** 2)


def residual_norm(h: HamiltonianMatrix, v: np.ndarray) -> float:
    """||H v - <H> v||, zero iff v is an eigenstate."""
    hv = h.matrix @ v
    return float(np.linalg.norm(hv - (v @ hv) * v))


def convention_rescale(e_quantum: float, mode: str) -> float:
    """Factor-4 bridge between quantum spin-1/2 energies and unit-alignment units."""
    if mode == "to_aligned":
        return 4.0 * e_quantum
    if mode == "to_quantum":
        return e_quantum / 4.0
    raise ValueError(f"unknown mode: {mode}")


def bond_correlators(v: np.ndarray, g: LatticeGraph) -> CorrelationReport:
    """Per-bond <s_i . s_j> plus the fraction of bonds with positive correlator."""
    dim = v.shape[0]
    if dim != (1 << g.n_sites):
        raise DimensionMismatchError("state dimension does not match graph")
    states = np.arange(dim, dtype=np.int64)
    prob = v * v
    correlators = np.empty(len(g.bonds))
    for b, (i, j) in enumerate(g.bonds):
        bit_i = (states >> i) & 1
        bit_j = (states >> j) & 1
        same = bit_i == bit_j
        zz = float(np.sum(prob * np.where(same, 0.25, -0.25)))
        flip_from = states[~same]
        flip_to = flip_from ^ ((1 << i) | (1 << j))
        transverse = 0.5 * float(np.sum(v[flip_to] * v[flip_from]))
        correlators[b] = zz + transverse
    parallel_fraction = float(np.mean(correlators > 0.0)) if len(g.bonds) else 0.0
    sz = 0.5 * (g.n_sites - 2 * np.array([bin(s).count("1") for s in range(dim)]))
    total_sz = float(np.sum(prob * sz))
    return CorrelationReport(g.bonds, correlators, parallel_fraction, total_sz)


def total_sz_operator(n_spins: int) -> sp.csr_matrix:
    dim = 1 << n_spins
    states = np.arange(dim, dtype=np.int64)
    counts = np.array([bin(s).count("1") for s in states])
    return sp.diags(0.5 * (n_spins - 2 * counts)).tocsr()


def total_s2_operator(n_spins: int) -> sp.csr_matrix:
    """S_total^2 = 3n/4 + 2 * sum_{i<j over all pairs} s_i . s_j."""
    dim = 1 << n_spins
    all_pairs = tuple((i, j) for i in range(n_spins) for j in range(i + 1, n_spins))
    pair_graph = LatticeGraph(n_spins, all_pairs, tuple(n_spins - 1 for _ in range(n_spins)))
    # build with coupling -1 so the bond sum enters with +2 overall
    pair_sum = build_hamiltonian(pair_graph, -1.0).matrix
    return (pair_sum + sp.identity(dim) * (0.75 * n_spins)).tocsr()
