"""The three extremal families: values, stored partials, bounds, truncations, tails."""

import numpy as np
import pytest

from blochlab.holo import EvaluationDomainError, Series
from blochlab.norms import bloch_density, bloch_norm_estimate, little_bloch_gap
from blochlab.sampling import SamplingPlan
from blochlab.testfuncs import (
    TestFunction,
    family_norm_bound,
    make_f,
    make_g,
    make_h,
    tail_bound,
    truncate_test,
)

PLAN = SamplingPlan(seed=11)


def fd_partial(f, z, axis, h=1e-6):
    zp = np.array(z, dtype=complex)
    zm = zp.copy()
    zp[axis] += h
    zm[axis] -= h
    return (f.value(zp) - f.value(zm)) / (2 * h)


class TestAntiderivativeFamily:
    def test_zero_parameter_is_monomial(self):
        t = make_f(0, 0.0, 1.0, 2)
        rng = np.random.default_rng(0)
        Z = 0.9 * (rng.random((30, 2)) - 0.5) + 0.4j * rng.random((30, 2))
        np.testing.assert_allclose(t.val(Z), Z[..., 0], rtol=1e-14)

    def test_other_partials_vanish(self):
        t = make_f(0, 0.3 + 0.2j, 1.5, 3)
        for k in (1, 2):
            assert t.partial(k).value([0.1, 0.2, 0.3]) == 0

    def test_stored_partial_hand_value(self):
        # 1/(1 - conj(w) z)^p at p=1, w=0.5, z=0.5 -> 1/0.75 = 4/3
        t = make_f(0, 0.5, 1.0, 1)
        assert t.partial(0).value([0.5]) == pytest.approx(4.0 / 3.0, rel=1e-14)

    def test_value_agrees_with_fd_of_series(self):
        t = make_f(0, 0.6 - 0.2j, 2.0, 2)
        z = [0.4 + 0.3j, 0.1]
        assert t.partial(0).value(z) == pytest.approx(fd_partial(t, z, 0), rel=1e-7)

    def test_flags_near_singular_kernel(self):
        t = make_f(0, 1 - 1e-13, 1.0, 1)
        with pytest.raises(EvaluationDomainError):
            t.partial(0).value([1.0])


class TestKernelFamily:
    def test_zero_parameter_constant_one(self):
        t = make_g(1, 0.0, 1.3, 2)
        assert t.value([0.5, -0.7j]) == pytest.approx(1.0)

    def test_value_hand_substitution(self):
        # (1 - 0.25)/(1 - 0)^1 = 0.75
        t = make_g(0, 0.5, 1.0, 1)
        assert t.value([0.0]) == pytest.approx(0.75)

    def test_partial_hand_substitution(self):
        # p conj(w) (1-|w|^2)/(1 - z conj(w))^{p+1} = 1 * 0.5 * 0.75 = 0.375 at z = 0
        t = make_g(0, 0.5, 1.0, 1)
        assert t.partial(0).value([0.0]) == pytest.approx(0.375, rel=1e-14)

    def test_partial_matches_fd(self):
        t = make_g(1, 0.7j, 0.5, 2)
        z = [0.2, 0.3 - 0.4j]
        assert t.partial(1).value(z) == pytest.approx(fd_partial(t, z, 1), rel=1e-7)


class TestWeightedKernelFamily:
    def test_requires_axis_not_zero(self):
        with pytest.raises(ValueError):
            make_h(0, 0.5, 1.0, 2)
        with pytest.raises(ValueError):
            make_h(1, 0.5, 1.0, 1)

    def test_zero_parameter_affine(self):
        t = make_h(1, 0.0, 1.0, 2)
        assert t.value([0.3, 0.9]) == pytest.approx(2.3)
        assert t.partial(0).value([0.3, 0.9]) == pytest.approx(1.0)
        assert t.partial(1).value([0.3, 0.9]) == pytest.approx(0.0, abs=1e-15)

    def test_other_partials_vanish(self):
        t = make_h(1, 0.4, 1.0, 3)
        assert t.partial(2).value([0.1, 0.2, 0.3]) == 0

    def test_partial_hand_substitution(self):
        # p (z_0+2) conj(w) (1-|w|^2)^p / (1 - z conj(w))^{p+1} at 0: 1*2*0.5*0.75 = 0.75
        t = make_h(1, 0.5, 1.0, 2)
        assert t.partial(1).value([0.0, 0.0]) == pytest.approx(0.75, rel=1e-14)

    def test_both_partials_match_fd(self):
        t = make_h(1, 0.3 - 0.5j, 2.0, 2)
        z = [0.25 - 0.1j, 0.4 + 0.2j]
        for k in (0, 1):
            assert t.partial(k).value(z) == pytest.approx(fd_partial(t, z, k), rel=1e-6)


class TestFamilyNormBound:
    def test_reported_values_at_unit_exponent(self):
        assert family_norm_bound("f", 1.0) == pytest.approx(2.0)
        assert family_norm_bound("g", 1.0) == pytest.approx(5.0)
        assert family_norm_bound("h", 1.0) == pytest.approx(16.0)

    def test_general_forms(self):
        p = 0.5
        assert family_norm_bound("f", p) == pytest.approx(2.0 ** p)
        assert family_norm_bound("g", p) == pytest.approx(1 + p * 2.0 ** (p + 1))
        assert family_norm_bound("h", p) == pytest.approx(2 + 2.0 ** p + 3 * p * 2.0 ** (p + 1))

    def test_estimates_stay_below_bounds(self):
        for p in (0.5, 1.0, 2.0):
            for w in (0.0, 0.5, 0.9, -0.8j):
                for fam, t in (("f", make_f(0, w, p, 2)), ("g", make_g(0, w, p, 2)),
                               ("h", make_h(1, w, p, 2))):
                    est = bloch_norm_estimate(t, p, PLAN)
                    assert est.value <= family_norm_bound(fam, p) + 1e-9


class TestDensityIdentity:
    def test_antiderivative_density_chain(self):
        # |f(0)| + density = (1 - |z_l|^2)^p / |1 - conj(w) z_l|^p pointwise
        rng = np.random.default_rng(1)
        for p in (0.5, 1.0, 2.0):
            t = make_f(0, 0.6 + 0.3j, p, 2)
            Z = 0.95 * np.sqrt(rng.random((200, 2))) * np.exp(2j * np.pi * rng.random((200, 2)))
            for z in Z[:50]:
                lhs = abs(t.value([0.0, 0.0])) + bloch_density(t, p, z)
                zl = z[0]
                rhs = (1 - abs(zl) ** 2) ** p / abs(1 - np.conj(0.6 + 0.3j) * zl) ** p
                assert lhs == pytest.approx(rhs, abs=1e-12)


class TestTruncation:
    def test_antiderivative_zero_parameter(self):
        t = make_f(1, 0.0, 1.0, 2)
        for m in (1, 3, 7):
            poly = truncate_test(t, m)
            assert poly.coeffs == {(0, 1): 1.0 + 0j}

    def test_kernel_order_zero(self):
        t = make_g(0, 0.5, 1.0, 1)
        poly = truncate_test(t, 0)
        assert poly.coeffs == {(0,): 0.75 + 0j}

    def test_weighted_kernel_order_zero(self):
        t = make_h(1, 0.0, 1.0, 2)
        poly = truncate_test(t, 0)
        assert poly.coeffs == {(0, 0): 2.0 + 0j, (1, 0): 1.0 + 0j}

    def test_truncation_converges_to_member(self):
        t = make_g(0, 0.5, 1.0, 1)
        z = [0.4 - 0.3j]
        errs = [abs(truncate_test(t, m).value(z) - t.value(z)) for m in (2, 6, 14)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-6


class TestTailBound:
    def test_zero_parameter(self):
        for m in (0, 3, 9):
            assert tail_bound(1.0, 0.0, m) == 0.0

    def test_geometric_closed_form(self):
        # p = 1: coefficients are all 1, so the tail is |w|^{m+1}/(1-|w|)
        assert tail_bound(1.0, 0.5, 3) == pytest.approx(0.125, abs=1e-12)
        for w in (0.3, 0.7, 0.9):
            for m in (1, 4, 9):
                assert tail_bound(1.0, w, m) == pytest.approx(w ** (m + 1) / (1 - w), rel=1e-12)

    def test_monotone_in_truncation_index(self):
        for p in (0.5, 1.0, 2.0):
            tails = [tail_bound(p, 0.6, m) for m in range(8)]
            assert all(a > b for a, b in zip(tails, tails[1:]))

    def test_gap_below_tail(self):
        t = make_g(0, 0.5, 1.0, 2)
        for m in (2, 4, 8):
            gap = little_bloch_gap(t, 1.0, m, PLAN, truncation=truncate_test(t, m))
            assert gap <= tail_bound(1.0, 0.5, m) + 1e-6


class TestLocalDecay:
    def test_kernel_member_small_on_compacts_as_w_grows(self):
        # sup over |z_k| <= r of |g_w| <= (1-|w|^2)/(1-r)^p
        rng = np.random.default_rng(2)
        r = 0.9
        Z = r * np.sqrt(rng.random((500, 2))) * np.exp(2j * np.pi * rng.random((500, 2)))
        sups = []
        for aw in (0.9, 0.99, 0.999):
            t = make_g(0, aw, 1.5, 2)
            sup = float(np.max(np.abs(t.val(Z))))
            assert sup <= (1 - aw ** 2) / (1 - r) ** 1.5 + 1e-12
            sups.append(sup)
        assert sups[0] > sups[1] > sups[2]


class TestSerialization:
    def test_json_round_trip_fields(self):
        t = make_h(1, 0.25 - 0.5j, 2.0, 2)
        d = t.to_json()
        again = TestFunction(d["family"], d["l"], complex(*d["w"]), d["p"], 2)
        z = [0.2, 0.4j]
        assert again.value(z) == pytest.approx(t.value(z), rel=1e-14)
