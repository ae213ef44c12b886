"""Verification suites and the independent oracle path."""

import numpy as np
import pytest

from blochlab import suites
from blochlab.corpus import default_function_corpus, default_selfmap_corpus, polynomial_corpus
from blochlab.holo import Const, HoloFunction, Series
from blochlab.oracle import (
    antiderivative_results,
    derivative_results,
    fd_gradient,
    q_seminorm_results,
    relative_discrepancy,
    run_oracle,
    sup_results,
    uniform_points,
)
from blochlab.sampling import SamplingPlan
from blochlab.testfuncs import make_f

PLAN = SamplingPlan(seed=1)
QUICK_PLAN = SamplingPlan(seed=1, radial_levels=10, angular_count=24,
                          max_rounds=8, budget=15_000)


class BrokenDerivative(HoloFunction):
    """Deliberate fault: value of z^2 but derivative reported as 3 z."""

    def __init__(self):
        self.dim = 1

    def val(self, Z):
        Z = np.asarray(Z, dtype=complex)
        return Z[..., 0] ** 2

    def partial(self, axis):
        return Series({(1,): 3.0}, 1)


class TestOracle:
    def test_fd_gradient_matches_polynomial(self):
        f = Series({(2, 1): 1.0, (0, 3): -2j}, 2)
        Z = uniform_points(2, 50, seed=0, rmax=0.7)
        G = fd_gradient(f, Z)
        for k in range(2):
            exact = f.partial(k).val(Z)
            assert float(np.max(np.abs(G[..., k] - exact))) < 1e-8

    def test_derivative_rows_clean_on_corpus(self):
        fns = default_function_corpus(2, seed=0, n_poly=4)
        rows = derivative_results(fns, count=300, seed=0)
        assert all(not r.breach for r in rows)
        assert max(r.discrepancy for r in rows) <= 1e-6

    def test_derivative_rows_flag_broken_member(self):
        rows = derivative_results([BrokenDerivative()], count=100, seed=0)
        assert rows[0].breach

    def test_sup_rows_contained(self):
        fns = polynomial_corpus(1, count=6, seed=2)
        rows = sup_results(fns, 1.0, PLAN, count=5_000, seed=0)
        for r in rows:
            assert not r.breach
            assert r.oracle <= r.primary + 1e-12

    def test_q_seminorm_rows(self):
        fns = polynomial_corpus(2, count=4, seed=3)
        rows = q_seminorm_results(fns, count=60, seed=0)
        assert all(not r.breach for r in rows)

    def test_antiderivative_closed_form_agreement(self):
        members = [make_f(0, w, p, 1) for w in (0.3, 0.8, -0.6j) for p in (0.5, 1.0, 2.0)]
        rows = antiderivative_results(members, count=200, seed=0)
        assert rows
        assert all(not r.breach for r in rows)

    def test_run_oracle_aggregates(self):
        fns = polynomial_corpus(1, count=3, seed=4)
        rows = run_oracle(fns, p=1.0, plan=QUICK_PLAN, seed=0,
                          derivative_count=200, sup_count=3_000)
        assert rows
        assert all(not r.breach for r in rows)

    def test_relative_discrepancy_definition(self):
        assert relative_discrepancy(2.0, 1.0) == pytest.approx(0.5)
        assert relative_discrepancy(0.0, 0.0) == 0.0


class TestSuites:
    def test_geometry_rows(self):
        assert suites.metric_homogeneity().passed
        assert suites.segment_telescoping().passed
        assert suites.boundary_distance_positivity().passed

    def test_derivative_and_chain_rows(self):
        fns = default_function_corpus(2, seed=0, n_poly=3)
        maps = default_selfmap_corpus(2, seed=0)
        assert suites.derivative_fd_agreement(fns).passed
        assert suites.chain_rule_identity(maps, fns).passed
        assert suites.moebius_interior_mapping().passed

    def test_chain_rule_row_fails_on_broken_derivative(self):
        maps = default_selfmap_corpus(1, seed=0)
        row = suites.chain_rule_identity(maps, [BrokenDerivative()])
        assert not row.passed

    def test_norm_rows(self):
        fns = default_function_corpus(2, seed=0, n_poly=3)
        polys = polynomial_corpus(2, count=5, seed=0)
        assert suites.q_density_sandwich(fns).passed
        assert suites.point_evaluation_bound(polys, plan=QUICK_PLAN).passed
        assert suites.norm_trace_monotone(fns, plan=QUICK_PLAN).passed

    def test_family_rows(self):
        assert suites.family_uniform_bound(plan=QUICK_PLAN, n_w=4).passed
        assert suites.family_f_density_identity().passed
        assert suites.family_truncation_tails(plan=QUICK_PLAN).passed
        assert suites.kernel_local_decay().passed

    def test_operator_rows(self):
        maps = default_selfmap_corpus(2, seed=0)
        fns = default_function_corpus(2, seed=0, n_poly=3)
        assert suites.density_row_decomposition(maps).passed
        assert suites.chain_rule_domination(maps, fns, plan=QUICK_PLAN).passed
        assert suites.automorphism_metric_equality().passed
        assert suites.expansion_plateau(maps).passed

    def test_consistency_rows(self):
        assert suites.small_exponent_decay(plan=QUICK_PLAN).passed
        assert suites.metric_floor_implies_stay(plan=QUICK_PLAN).passed

    def test_empty_corpus_rows_pass(self):
        assert suites.derivative_fd_agreement([]).passed
        assert suites.q_density_sandwich([]).passed
        assert suites.chain_rule_identity([], []).passed
        assert suites.norm_trace_monotone([], plan=QUICK_PLAN).passed

    def test_band_stability_row(self):
        row, info = suites.lipschitz_band_stability(count=6, plan=QUICK_PLAN)
        assert row.passed
        lo, hi = info["band"]
        assert 0 < lo <= hi
