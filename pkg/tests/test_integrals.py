import math

import numpy as np
import pytest

from exchange_competition.integrals import (
    QuadratureConfig,
    RadialOrbital,
    TwoCenterGeometry,
    assemble_couplings,
    closed_form_1s_overlap,
    direct_exchange,
    gamma,
    hd_coupling,
    overlap,
    potential_element,
)

ORB = RadialOrbital()
GRID = QuadratureConfig()


def mc_config(samples=400_000, seed=0):
    return QuadratureConfig(scheme="monte-carlo", samples=samples, seed=seed)


class TestOrbitals:
    def test_hydrogenic_normalized(self):
        for z in (1.0, 2.0, 0.5):
            assert RadialOrbital(zeff=z).norm_squared() == pytest.approx(1.0, abs=1e-8)

    def test_tabulated_matches_analytic(self):
        r = np.linspace(0.0, 40.0, 6000)
        tab = RadialOrbital("tabulated", r_grid=r, u_grid=ORB(r))
        assert tab.norm_squared() == pytest.approx(1.0, abs=1e-4)
        assert tab(1.3) == pytest.approx(float(ORB(1.3)), rel=1e-5)
        assert tab(100.0) == 0.0

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            RadialOrbital(zeff=0.0)
        with pytest.raises(ValueError):
            RadialOrbital("tabulated", r_grid=[1.0, 0.5], u_grid=[1.0, 1.0])


class TestOverlap:
    def test_self_overlap(self):
        value, _ = overlap(ORB, ORB, TwoCenterGeometry(0.0), GRID)
        assert value == pytest.approx(1.0, abs=1e-8)

    def test_far_separation(self):
        value, _ = overlap(ORB, ORB, TwoCenterGeometry(50.0), GRID)
        assert abs(value) <= 1e-8

    @pytest.mark.parametrize("rho", [0.5, 1.0, 2.0])
    def test_closed_form_oracle(self, rho):
        value, _ = overlap(ORB, ORB, TwoCenterGeometry(rho), GRID)
        assert value == pytest.approx(closed_form_1s_overlap(rho), abs=1e-6)

    def test_symmetry(self):
        g = TwoCenterGeometry(1.5)
        ab, _ = overlap(ORB, ORB, g, GRID)
        ba, _ = overlap(ORB, ORB, g, GRID)
        assert abs(ab - ba) <= 1e-10

    def test_convergence_vs_error_estimate(self):
        # halving the resolution moves the value by < 4x the reported estimate
        for rho in (0.5, 1.0, 2.0):
            g = TwoCenterGeometry(rho)
            fine, err = overlap(ORB, ORB, g, QuadratureConfig(resolution=128))
            coarse, _ = overlap(ORB, ORB, g, QuadratureConfig(resolution=64))
            assert abs(fine - coarse) <= 4.0 * max(err, 1e-15)


class TestPotentialElement:
    def test_one_center_expectation(self):
        value, _ = potential_element(ORB, ORB, TwoCenterGeometry(0.0), GRID)
        assert value == pytest.approx(-1.0, abs=1e-6)

    def test_far_separation(self):
        value, _ = potential_element(ORB, ORB, TwoCenterGeometry(40.0), GRID)
        assert abs(value) <= 1e-8

    def test_sign_flag(self):
        g = TwoCenterGeometry(1.0)
        attr, _ = potential_element(ORB, ORB, g, GRID, attractive=True)
        rep, _ = potential_element(ORB, ORB, g, GRID, attractive=False)
        assert rep == -attr

    def test_linear_in_charge(self):
        v1, _ = potential_element(ORB, ORB, TwoCenterGeometry(1.0, 1.0), GRID)
        v2, _ = potential_element(ORB, ORB, TwoCenterGeometry(1.0, 2.0), GRID)
        assert v2 == pytest.approx(2.0 * v1, rel=1e-12)


class TestGamma:
    def test_large_denominator(self):
        value, _ = gamma(ORB, ORB, TwoCenterGeometry(1.0), 1e12, GRID)
        assert abs(value) < 1e-11

    def test_ratio_of_equal(self):
        g = TwoCenterGeometry(1.0)
        v, _ = potential_element(ORB, ORB, g, GRID)
        value, _ = gamma(ORB, ORB, g, v, GRID)
        assert value == pytest.approx(1.0, rel=1e-12)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            gamma(ORB, ORB, TwoCenterGeometry(1.0), 0.0, GRID)


class TestDirectExchange:
    def test_one_center_coulomb(self):
        # one-center exchange self-energy is 5/8 hartree for hydrogen 1s
        value, err = direct_exchange(ORB, ORB, TwoCenterGeometry(0.0), mc_config(1_000_000))
        assert value == pytest.approx(0.625, abs=2e-3)
        assert err < 1e-3

    def test_monotone_decay(self):
        values = []
        for r in (4.0, 6.0, 8.0):
            v, e = direct_exchange(ORB, ORB, TwoCenterGeometry(r), mc_config(300_000, seed=5))
            values.append((v, e))
        assert values[0][0] > values[1][0] > values[2][0]
        assert values[0][0] - values[1][0] > 3.0 * math.hypot(values[0][1], values[1][1])

    def test_seed_consistency(self):
        g = TwoCenterGeometry(1.0)
        v1, e1 = direct_exchange(ORB, ORB, g, mc_config(200_000, seed=1))
        v2, e2 = direct_exchange(ORB, ORB, g, mc_config(200_000, seed=2))
        assert abs(v1 - v2) <= 3.0 * math.hypot(e1, e2)

    def test_deterministic_for_seed(self):
        g = TwoCenterGeometry(1.0)
        assert direct_exchange(ORB, ORB, g, mc_config(50_000, seed=9)) == \
            direct_exchange(ORB, ORB, g, mc_config(50_000, seed=9))

    def test_symmetric_under_swap(self):
        g = TwoCenterGeometry(2.0)
        o2 = RadialOrbital(zeff=1.0)
        v_ab, e_ab = direct_exchange(ORB, o2, g, mc_config(200_000, seed=3))
        v_ba, e_ba = direct_exchange(o2, ORB, g, mc_config(200_000, seed=4))
        assert abs(v_ab - v_ba) <= 3.0 * math.hypot(e_ab, e_ba)


class TestAssembleCouplings:
    def test_sign_violation_flagged(self):
        couplings, iset = assemble_couplings(0.4, -0.6, 0.1, 0.5)
        assert iset.a2 == pytest.approx(0.6)
        assert "positive_a2" in iset.flags
        assert couplings is None

    def test_direct_evaluation(self):
        couplings, iset = assemble_couplings(0.4, 0.6, 0.1, 0.5)
        assert iset.a2 == pytest.approx(-0.6)
        assert iset.j_h == pytest.approx(-0.1)
        assert couplings is not None
        assert couplings.a1 == 0.5

    def test_bookkeeping_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            s, v, gm, k = rng.uniform(-1.0, 1.0, size=4)
            _, iset = assemble_couplings(s, v, gm, abs(k))
            assert iset.j_h == iset.a1 + iset.a2


class TestHdCoupling:
    def test_no_kinetic_exchange(self):
        assert hd_coupling(1.0, 0.0, 5.0, "literal") == 1.0
        assert hd_coupling(1.0, 0.0, 5.0, "squared") == 1.0

    def test_squared(self):
        assert hd_coupling(0.0, 2.0, 8.0, "squared") == -1.0

    def test_literal(self):
        assert hd_coupling(0.0, 2.0, 8.0, "literal") == -0.5

    def test_zero_u(self):
        with pytest.raises(ZeroDivisionError):
            hd_coupling(1.0, 1.0, 0.0)
