import numpy as np
import pytest

from exchange_competition import ed
from exchange_competition.errors import (
    DimensionMismatchError,
    NotBipartiteError,
    SizeLimitError,
)
from exchange_competition.lattice import LatticeSpec, build
from exchange_competition.model import Couplings


def ring(n):
    return build(LatticeSpec("ring", (n,)))


TWO_SITES = ring(2)


class TestBuildHamiltonian:
    def test_two_spin_ferro_spectrum(self):
        # s1.s2 eigenvalues (S(S+1) - 3/2)/2: triplet 1/4, singlet -3/4
        h = ed.build_hamiltonian(TWO_SITES, 1.0)
        evals = np.sort(np.linalg.eigvalsh(h.dense()))
        assert evals == pytest.approx([-0.5, -0.5, -0.5, 1.5], abs=1e-12)

    def test_two_spin_afm_spectrum(self):
        h = ed.build_hamiltonian(TWO_SITES, -1.0)
        evals = np.sort(np.linalg.eigvalsh(h.dense()))
        assert evals == pytest.approx([-1.5, 0.5, 0.5, 0.5], abs=1e-12)

    def test_ring4_structure(self):
        h = ed.build_hamiltonian(ring(4), 1.0)
        assert h.dimension == 16
        dense = h.dense()
        assert np.array_equal(dense, dense.T)

    def test_hermitian_exact(self):
        for coupling in (1.3, -0.7):
            h = ed.build_hamiltonian(ring(6), coupling)
            diff = (h.matrix - h.matrix.T).tocoo()
            assert diff.nnz == 0 or np.abs(diff.data).max() == 0.0

    def test_size_limit(self):
        big = build(LatticeSpec("ring", (22,)))
        with pytest.raises(SizeLimitError):
            ed.build_hamiltonian(big, 1.0)


class TestOperatorIdentity:
    def test_split_cancellation(self):
        h1, h2 = ed.build_split_hamiltonians(TWO_SITES, Couplings(1.0, -1.0))
        total = (h1.matrix + h2.matrix).tocoo()
        assert total.nnz == 0 or np.abs(total.data).max() == 0.0

    def test_linearity_exact(self):
        g = ring(6)
        c = Couplings(1.75, -0.625)
        h1, h2 = ed.build_split_hamiltonians(g, c)
        hc = ed.build_hamiltonian(g, c.combined)
        assert ed.operator_identity_report(h1, h2, hc) == 0.0

    def test_scaling(self):
        h1 = ed.build_hamiltonian(ring(4), 2.0)
        base = ed.build_hamiltonian(ring(4), 1.0)
        diff = (h1.matrix - 2.0 * base.matrix).tocoo()
        assert diff.nnz == 0 or np.abs(diff.data).max() == 0.0

    def test_dimension_mismatch(self):
        h2 = ed.build_hamiltonian(TWO_SITES, 1.0)
        h4 = ed.build_hamiltonian(ring(4), 1.0)
        with pytest.raises(DimensionMismatchError):
            ed.operator_identity_report(h2, h2, h4)


class TestGroundState:
    def test_two_spin_ferro(self):
        spec = ed.ground_state(ed.build_hamiltonian(TWO_SITES, 1.0))
        assert spec.ground_energy == pytest.approx(-0.5, abs=1e-10)
        assert spec.ground_degeneracy == 3

    def test_two_spin_singlet(self):
        spec = ed.ground_state(ed.build_hamiltonian(TWO_SITES, -1.0))
        assert spec.ground_energy == pytest.approx(-1.5, abs=1e-10)
        assert spec.ground_degeneracy == 1

    def test_ring4_ferro_ground(self):
        spec = ed.ground_state(ed.build_hamiltonian(ring(4), 1.0))
        assert spec.ground_energy == pytest.approx(-2.0, abs=1e-10)

    def test_ground_vector_residual(self):
        h = ed.build_hamiltonian(ring(6), -1.0)
        spec = ed.ground_state(h)
        assert np.linalg.norm(spec.ground_vector) == pytest.approx(1.0, abs=1e-12)
        residual = np.linalg.norm(h.matrix @ spec.ground_vector
                                  - spec.ground_energy * spec.ground_vector)
        assert residual <= 1e-9 * h.norm_inf()

    def test_dense_vs_iterative_ring10(self):
        h = ed.build_hamiltonian(ring(10), -1.0)
        dense = ed.ground_state(h, "dense")
        iterative = ed.ground_state(h, "iterative", seed=1)
        assert iterative.ground_energy == pytest.approx(dense.ground_energy, abs=1e-8)

    def test_iterative_deterministic(self):
        h = ed.build_hamiltonian(ring(8), -1.0)
        a = ed.ground_state(h, "iterative", seed=3)
        b = ed.ground_state(h, "iterative", seed=3)
        assert a.ground_energy == b.ground_energy
        assert np.array_equal(a.ground_vector, b.ground_vector)

    def test_dense_size_limit(self):
        h = ed.build_hamiltonian(build(LatticeSpec("ring", (14,))), 1.0)
        with pytest.raises(SizeLimitError):
            ed.ground_state(h, "dense")


class TestProductStates:
    def test_ferro_basis_vector(self):
        v = ed.ferro_state(TWO_SITES)
        assert v[0] == 1.0 and np.sum(np.abs(v)) == 1.0

    def test_ferro_exact_eigenstate(self):
        for coupling in (1.0, -1.0, 0.4):
            h = ed.build_hamiltonian(ring(4), coupling)
            assert ed.residual_norm(h, ed.ferro_state(ring(4))) <= 1e-12

    def test_ferro_correlators(self):
        rep = ed.bond_correlators(ed.ferro_state(ring(4)), ring(4))
        assert rep.correlators == pytest.approx([0.25] * 4, abs=1e-14)
        assert rep.parallel_fraction == 1.0

    def test_neel_ring4_vector(self):
        v = ed.neel_state(ring(4))
        # |up down up down>: down spins at sites 1, 3 -> index 0b1010
        assert v[0b1010] == 1.0

    def test_neel_not_eigenstate(self):
        # the product Neel state has nonzero residual: transverse terms act
        for n in (4, 6, 8):
            g = ring(n)
            h = ed.build_hamiltonian(g, -1.0)
            residual = ed.residual_norm(h, ed.neel_state(g))
            assert residual > 0.1 * h.norm_inf() / h.dimension

    def test_neel_expectation(self):
        g = ring(4)
        h = ed.build_hamiltonian(g, -1.0)
        assert ed.expectation(h, ed.neel_state(g)) == pytest.approx(-2.0, abs=1e-12)

    def test_neel_requires_bipartite(self):
        with pytest.raises(NotBipartiteError):
            ed.neel_state(ring(5))


class TestSuperpositionState:
    def test_equal_weight(self):
        g = ring(4)
        x = ed.superposition_state(g, Couplings(1.0, -1.0))
        expected = np.zeros(16)
        expected[0] = expected[0b1010] = 1.0 / np.sqrt(2.0)
        assert x == pytest.approx(expected, abs=1e-15)

    def test_fm_limit(self):
        g = ring(4)
        assert np.array_equal(ed.superposition_state(g, Couplings(1.0, 0.0)), ed.ferro_state(g))

    def test_three_four_five(self):
        x = ed.superposition_state(TWO_SITES, Couplings(3.0, -4.0))
        assert x[0b00] == pytest.approx(0.6, abs=1e-15)
        assert x[0b10] == pytest.approx(0.8, abs=1e-15)

    def test_zero_correlators_at_symmetric_point(self):
        g = ring(4)
        rep = ed.bond_correlators(ed.superposition_state(g, Couplings(1.0, -1.0)), g)
        assert rep.correlators == pytest.approx([0.0] * 4, abs=1e-14)
        assert rep.parallel_fraction == 0.0


class TestExpectationOverlap:
    def test_ferro_expectation(self):
        g = ring(4)
        assert ed.expectation(ed.build_hamiltonian(g, 1.0), ed.ferro_state(g)) == -2.0

    def test_ground_self_consistency(self):
        h = ed.build_hamiltonian(ring(6), -1.0)
        spec = ed.ground_state(h)
        assert ed.expectation(h, spec.ground_vector) == pytest.approx(
            spec.ground_energy, abs=1e-10)

    def test_overlap_cases(self):
        g = ring(4)
        ferro = ed.ferro_state(g)
        neel = ed.neel_state(g)
        assert ed.overlap(ferro, ferro) == 1.0
        assert ed.overlap(ferro, neel) == 0.0
        x = ed.superposition_state(g, Couplings(1.0, -1.0))
        assert ed.overlap(x, ferro) == pytest.approx(0.5, abs=1e-14)

    def test_variational_bound(self):
        for coupling in (1.0, -1.0):
            for c in (Couplings(1.0, -1.0), Couplings(2.0, -0.5)):
                g = ring(6)
                h = ed.build_hamiltonian(g, c.combined)
                e0 = ed.ground_state(h).ground_energy
                assert e0 <= ed.expectation(h, ed.superposition_state(g, c)) + 1e-12


class TestConventionRescale:
    def test_ring4_reconciliation(self):
        g = ring(4)
        quantum = ed.expectation(ed.build_hamiltonian(g, 1.0), ed.ferro_state(g))
        assert ed.convention_rescale(quantum, "to_aligned") == -8.0

    def test_zero(self):
        assert ed.convention_rescale(0.0, "to_aligned") == 0.0

    def test_round_trip(self):
        x = -3.7
        assert ed.convention_rescale(ed.convention_rescale(x, "to_aligned"), "to_quantum") == x


class TestSymmetries:
    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_commutes_with_sz_and_s2(self, n):
        h = ed.build_hamiltonian(ring(n), -1.0).matrix
        sz = ed.total_sz_operator(n)
        s2 = ed.total_s2_operator(n)
        for op in (sz, s2):
            comm = (h @ op - op @ h).tocoo()
            assert comm.nnz == 0 or np.abs(comm.data).max() <= 1e-12

    def test_sector_consistency(self):
        g = ring(6)
        h = ed.build_hamiltonian(g, -1.0)
        full_e0 = ed.ground_state(h).ground_energy
        dense = h.dense()
        sector_min = min(
            np.linalg.eigvalsh(dense[np.ix_(idx, idx)]).min()
            for idx in ed.sz_sectors(6).values()
        )
        assert sector_min == pytest.approx(full_e0, abs=1e-10)

    def test_sector_partition(self):
        sectors = ed.sz_sectors(5)
        sizes = sum(len(idx) for idx in sectors.values())
        assert sizes == 32
        for idx in sectors.values():
            assert np.all(np.diff(idx) > 0)


def test_coordinate_dump_roundtrip():
    h = ed.build_hamiltonian(TWO_SITES, 1.0)
    lines = h.dump_coordinate().splitlines()
    rebuilt = np.zeros((4, 4))
    for line in lines:
        r, c, v = line.split()
        rebuilt[int(r), int(c)] += float(v)
    assert rebuilt == pytest.approx(h.dense(), abs=0.0)
