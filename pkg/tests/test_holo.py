"""Holomorphic representations: evaluation, exact partials, composition, certificates."""

import numpy as np
import pytest

from blochlab.holo import (
    Composition,
    Const,
    HoloSelfMap,
    MoebiusFactor,
    Series,
    certify_self_map,
    compose,
    constant_map,
    identity_map,
    moebius_automorphism,
    power_map_monomial,
)


def fd_partial(f, z, axis, h=1e-6):
    """Test-local central difference, independent of the structural path."""
    zp = np.array(z, dtype=complex)
    zm = zp.copy()
    zp[axis] += h
    zm[axis] -= h
    return (f.value(zp) - f.value(zm)) / (2 * h)


class TestEval:
    def test_monomial_square(self):
        f = Series({(2, 0): 1.0}, 2)
        assert f.value([0.5, 0.3]) == pytest.approx(0.25)

    def test_constant(self):
        f = Const(7.0, 2)
        for z in ([0.1, 0.2], [0.9, -0.9j]):
            assert f.value(z) == pytest.approx(7.0)

    def test_product_monomial(self):
        f = Series({(1, 1): 1.0}, 2)
        assert f.value([0.2, 0.5]) == pytest.approx(0.1)

    def test_batched_matches_single(self):
        f = Series({(2, 1): 1.5, (0, 0): -2j}, 2)
        rng = np.random.default_rng(3)
        Z = 0.9 * (rng.random((20, 2)) + 1j * rng.random((20, 2)) - 0.5 - 0.5j)
        vals = f.val(Z)
        for i in range(20):
            assert vals[i] == pytest.approx(f.value(Z[i]), rel=1e-14)


class TestPartial:
    def test_power_rule(self):
        f = Series({(2, 0): 1.0}, 2)
        df = f.partial(0)
        assert df.value([0.5, 0.1]) == pytest.approx(1.0)  # 2 z_1 at 0.5

    def test_independent_variable(self):
        f = Series({(2, 0): 1.0}, 2)
        assert f.partial(1).value([0.5, 0.1]) == 0

    def test_moebius_factor_derivative_hand_value(self):
        # d/dz (z - a)/(1 - conj(a) z) = (1 - |a|^2)/(1 - conj(a) z)^2; a = 0.5, z = 0 -> 0.75
        m = MoebiusFactor(1, 0, 0.5)
        assert m.partial(0).value([0.0]) == pytest.approx(0.75, rel=1e-14)
        # cross-check by test-local finite differences at a second point
        z = [0.2 + 0.1j]
        assert m.partial(0).value(z) == pytest.approx(fd_partial(m, z, 0), rel=1e-7)

    def test_gradient(self):
        f = Series({(1, 0): 1.0, (0, 1): 1.0}, 2)
        np.testing.assert_allclose(f.gradient([0.3, -0.2j]), [1.0, 1.0])
        g = Series({(1, 1): 1.0}, 2)
        np.testing.assert_allclose(g.gradient([0.2, 0.5]), [0.5, 0.2])
        np.testing.assert_allclose(Const(4.0, 2).gradient([0.1, 0.1]), [0.0, 0.0])


class TestJacobian:
    def test_identity(self):
        phi = identity_map(3)
        np.testing.assert_allclose(phi.jacobian([0.1, 0.2j, -0.3]), np.eye(3))

    def test_swap(self):
        phi = HoloSelfMap([Series.coordinate(1, 2), Series.coordinate(0, 2)])
        np.testing.assert_allclose(phi.jacobian([0.5, 0.1]), [[0, 1], [1, 0]])

    def test_product_map_hand_values(self):
        phi = HoloSelfMap([Series({(1, 1): 1.0}, 2), Series.coordinate(1, 2)])
        J = phi.jacobian([0.2, 0.5])
        np.testing.assert_allclose(J, [[0.5, 0.2], [0.0, 1.0]])


class TestCompose:
    def test_polynomial_substitution(self):
        f = Series({(2, 0): 1.0}, 2)  # z_1^2
        phi = HoloSelfMap([Series({(1, 1): 1.0}, 2), Series.coordinate(1, 2)])
        comp = compose(f, phi)
        assert isinstance(comp, Series)
        assert comp.coeffs == {(2, 2): 1.0 + 0j}

    def test_identity_composition(self):
        f = Series({(2, 1): 3.0, (1, 0): -1j}, 2)
        comp = compose(f, identity_map(2))
        z = [0.4, -0.2 + 0.1j]
        assert comp.value(z) == pytest.approx(f.value(z), rel=1e-14)

    def test_constant_inner(self):
        f = Series.coordinate(0, 2)
        phi = constant_map([0.3 + 0.1j, 0.2])
        comp = compose(f, phi)
        assert comp.value([0.9, -0.9]) == pytest.approx(0.3 + 0.1j)

    def test_chain_rule_structural_vs_manual(self):
        rng = np.random.default_rng(7)
        f = Series({(2, 0): 1.0, (1, 1): 0.5j, (0, 3): -0.25}, 2)
        phi = moebius_automorphism([0.4, -0.2j], [0.1, 2.0])
        comp = compose(f, phi)
        Z = 0.8 * np.sqrt(rng.random((40, 2))) * np.exp(2j * np.pi * rng.random((40, 2)))
        W = phi.val(Z)
        J = phi.jacobian_batch(Z)
        for k in range(2):
            manual = sum(f.partial(m).val(W) * J[..., m, k] for m in range(2))
            structural = comp.partial(k).val(Z)
            np.testing.assert_allclose(structural, manual, rtol=1e-12, atol=1e-12)

    def test_lazy_composition_over_degree_cap(self):
        f = Series({(40,): 1.0}, 1)
        phi = HoloSelfMap([Series({(3,): 0.3}, 1)])
        comp = compose(f, phi, degree_cap=64)
        assert isinstance(comp, Composition)
        z = [0.7]
        assert comp.value(z) == pytest.approx((0.3 * 0.7 ** 3) ** 40, rel=1e-12)


class TestCertification:
    def test_coefficient_sum_certificate(self):
        phi = HoloSelfMap([Series({(1, 0): 0.5, (0, 1): 0.5}, 2), Series.coordinate(1, 2)])
        cert = certify_self_map(phi)
        assert cert.kind == "coefficients"

    def test_identity_certificate(self):
        cert = certify_self_map(identity_map(2))
        assert cert.kind == "coefficients"

    def test_expanding_map_unverified(self):
        phi = HoloSelfMap([Series({(1, 0): 2.0}, 2), Series.coordinate(1, 2)])
        cert = certify_self_map(phi)
        assert cert.kind == "unverified"
        assert cert.evidence > 1.0  # sampling found the escape

    def test_sampling_certificate_for_moebius_component(self):
        # same factor in both components: a genuine self-map but not an automorphism
        comps = [MoebiusFactor(2, 0, 0.3), MoebiusFactor(2, 0, 0.3)]
        phi = HoloSelfMap(comps)
        cert = certify_self_map(phi)
        assert cert.kind == "sampling"
        assert cert.evidence < 1.0


class TestMoebiusAutomorphism:
    def test_identity_parameters(self):
        phi = moebius_automorphism([0.0, 0.0], [0.0, 0.0])
        z = np.array([0.3 + 0.2j, -0.4])
        np.testing.assert_allclose(phi.val(z), z)

    def test_maps_parameter_to_zero(self):
        phi = moebius_automorphism([0.5], [0.0])
        assert phi.components[0].value([0.5]) == pytest.approx(0.0, abs=1e-15)

    def test_certificate_exact(self):
        assert moebius_automorphism([0.5], [0.0]).certificate.kind == "automorphism"

    def test_interior_points_stay_interior(self):
        rng = np.random.default_rng(11)
        phi = moebius_automorphism([0.7, -0.6j], [0.3, 1.2], sigma=(1, 0))
        Z = 0.9999 * np.sqrt(rng.random((500, 2))) * np.exp(2j * np.pi * rng.random((500, 2)))
        assert np.all(np.abs(phi.val(Z)) < 1.0)

    def test_rejects_bad_parameter(self):
        with pytest.raises(Exception):
            moebius_automorphism([1.0], [0.0])


class TestTaylor:
    def test_series_filter(self):
        f = Series({(3,): 1.0, (1,): 2.0}, 1)
        t = f.taylor(2)
        assert t.coeffs == {(1,): 2.0 + 0j}

    def test_moebius_factor_taylor_matches_value(self):
        m = MoebiusFactor(1, 0, 0.4, theta=0.7)
        t = m.taylor(40)
        z = [0.3 - 0.2j]
        assert t.value(z) == pytest.approx(m.value(z), rel=1e-10)

    def test_power_map_taylor_matches_value(self):
        phi = moebius_automorphism([0.4], [0.0])
        f = power_map_monomial(phi, (3,))
        t = f.taylor(60)
        z = [0.25]
        assert t.value(z) == pytest.approx(f.value(z), rel=1e-10)
