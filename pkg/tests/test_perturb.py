import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tproduct.algebra import tprod
from tproduct.errors import DimensionMismatch
from tproduct.instances import (conditioned, random_rank_profile, rank_preserving_perturbation,
                                unit_tensor)
from tproduct.inverse import multirank
from tproduct.perturb import (GOLDEN, Applicability, MuLambdaCase, dominated, equation_perturb,
                              inv_perturb_posterior, inv_perturb_prior, lstsq_perturb, mu_lambda,
                              multilinear_smw_perturb, pinv_perturb_general,
                              pinv_perturb_rank_preserving, pinv_perturb_relative)
from tproduct.smw import build_smw_factors, construct_conditioned_instance
from tproduct.tensor import Tensor3, bcirc, identity, zeros

from conftest import rand_tensor

seeds = st.integers(0, 2**32 - 1)


def scalar(x):
    return Tensor3(np.array([[[float(x)]]]))


class TestScalarExamples:
    def test_prior(self):
        r = inv_perturb_prior(scalar(4), scalar(1))
        assert r.bound_2 == pytest.approx(1 / 3)
        assert r.actual_2 == pytest.approx(0.2)
        assert r.gamma_2 == pytest.approx(0.75)
        assert r.holds

    def test_equation(self):
        r = equation_perturb(scalar(4), scalar(1), scalar(8), scalar(0))
        assert r.bound_2 == pytest.approx(1 / 3)
        assert r.actual_2 == pytest.approx(0.2)
        assert r.holds

    def test_posterior_is_tight_for_scaled_identity(self):
        r = inv_perturb_posterior(2 * identity(2, 1), 0.1 * identity(2, 1))
        assert r.actual_2 == pytest.approx(0.1 / 2.1)
        assert r.bound_2 == pytest.approx(0.1 / 2.1)
        assert r.holds_2

    def test_relative_pinv(self):
        r = pinv_perturb_relative(scalar(2), scalar(0.5))
        assert r.gamma_2 == pytest.approx(0.75)
        assert r.extra["size_2"].actual == pytest.approx(0.4)
        assert r.actual_2 == pytest.approx(0.2)
        assert (r.mu, r.lam) == (1.0, 1.0)
        assert r.holds

    def test_prior_hypothesis_violated(self):
        r = inv_perturb_prior(scalar(1), scalar(1))
        assert r.applicability is Applicability.HYPOTHESIS_VIOLATED
        assert ">= 1" in r.reason
        assert r.holds is None and math.isnan(r.bound_F)


class TestZeroPerturbation:
    @pytest.mark.parametrize("fn", [inv_perturb_posterior, inv_perturb_prior,
                                    pinv_perturb_general, pinv_perturb_rank_preserving,
                                    pinv_perturb_relative])
    def test_zero_error_and_bound(self, rng, fn):
        A = conditioned(3, 3, 2, rng)
        r = fn(A, zeros(3, 3, 2))
        assert r.applicable
        assert r.actual_F == pytest.approx(0.0, abs=1e-14)
        assert r.bound_F == 0.0 and r.bound_2 == 0.0
        assert r.holds

    def test_lstsq_zero_perturbation(self, rng):
        A = conditioned(5, 3, 2, rng)
        r = lstsq_perturb(A, zeros(5, 3, 2), rand_tensor(rng, 5, 1, 2), zeros(5, 1, 2))
        assert r.actual_F == pytest.approx(0.0, abs=1e-13)
        assert r.holds


class TestMuLambda:
    def test_cases(self):
        d = mu_lambda((2, 3, 3), (5, 4, 3))
        assert (d.mu, d.lam, d.case) == (math.sqrt(2), GOLDEN, MuLambdaCase.DEFICIENT)
        f = mu_lambda((3, 3), (3, 5, 2))
        assert (f.mu, f.lam, f.case) == (1.0, math.sqrt(2), MuLambdaCase.FULL_NON_SQUARE)
        s = mu_lambda((4, 4, 4), (4, 4, 3))
        assert (s.mu, s.lam, s.case) == (1.0, 1.0, MuLambdaCase.FULL_SQUARE)

    def test_rejects_bad_ranks(self):
        with pytest.raises(DimensionMismatch):
            mu_lambda((5, 1), (4, 4, 2))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), seeds)
    def test_matches_bcirc_rank(self, n1, n2, n3, seed):
        rng = np.random.default_rng(seed)
        A = conditioned(n1, n2, n3, rng, ranks=random_rank_profile(n1, n2, n3, rng, deficient=False))
        M = bcirc(A)
        full = np.linalg.matrix_rank(M) == min(M.shape)
        case = mu_lambda(multirank(A), A.shape).case
        if not full:
            assert case is MuLambdaCase.DEFICIENT
        elif n1 == n2:
            assert case is MuLambdaCase.FULL_SQUARE
        else:
            assert case is MuLambdaCase.FULL_NON_SQUARE


def test_spectral_mu_form_fails_where_lambda_holds():
    # full column rank, non-square: mu = 1 but lambda = sqrt(2)
    A = Tensor3(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])[:, :, None])
    E = 1e-4 * Tensor3(np.array([[0.0, -1.0], [0.0, 0.0], [-1.0, 0.0]])[:, :, None])
    r = pinv_perturb_relative(A, E)
    assert (r.mu, r.lam) == (1.0, math.sqrt(2))
    assert r.holds
    assert r.actual_2 > r.notes["printed_bound_2"]
    assert r.actual_2 / r.notes["printed_bound_2"] == pytest.approx(math.sqrt(2), rel=1e-3)


def test_rank_change_is_a_hypothesis_violation(rng):
    A = conditioned(4, 4, 2, rng, ranks=(2, 2))
    E = 1e-3 * unit_tensor(A.shape, rng)
    for fn in (pinv_perturb_rank_preserving, pinv_perturb_relative):
        r = fn(A, E)
        assert not r.applicable
        assert "multirank changes" in r.reason
    assert pinv_perturb_general(A, E).holds


def test_zero_tensor_relative_bounds_undefined():
    r = pinv_perturb_relative(zeros(3, 2, 2), zeros(3, 2, 2))
    assert not r.applicable and "A is zero" in r.reason


def test_shape_mismatch_raises(rng):
    with pytest.raises(DimensionMismatch):
        inv_perturb_posterior(conditioned(3, 3, 2, rng), zeros(3, 3, 3))


def test_prior_bound_grows_with_perturbation(rng):
    A = conditioned(4, 4, 3, rng)
    W = unit_tensor(A.shape, rng)
    bounds = [inv_perturb_prior(A, t * W).bound_2 for t in (1e-4, 1e-3, 1e-2, 1e-1)]
    assert all(a < b for a, b in zip(bounds, bounds[1:]))


def test_dominated_slack():
    assert dominated(1.0 + 5e-10, 1.0)
    assert not dominated(1.0 + 1e-8, 1.0)
    assert dominated(1e-13, 0.0)
    assert not dominated(1e-11, 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), seeds)
def test_relative_applicable_implies_rank_preserving_applicable(n1, n2, n3, seed):
    rng = np.random.default_rng(seed)
    A = conditioned(n1, n2, n3, rng, ranks=random_rank_profile(n1, n2, n3, rng, deficient=False))
    E = rank_preserving_perturbation(A, 10 ** rng.uniform(-4, 0), rng)
    if pinv_perturb_relative(A, E).applicable:
        assert pinv_perturb_rank_preserving(A, E).applicable


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), seeds, st.floats(-5, -1))
def test_inverse_bounds_dominate(n, n3, seed, logscale):
    rng = np.random.default_rng(seed)
    A = conditioned(n, n, n3, rng)
    E = unit_tensor(A.shape, rng) * 10**logscale
    for r in (inv_perturb_posterior(A, E), inv_perturb_prior(A, E),
              equation_perturb(A, E, rand_tensor(rng, n, 2, n3), 10**logscale * rand_tensor(rng, n, 2, n3))):
        assert r.holds is not False, (r.theorem, r.failing_checks())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4), seeds, st.floats(-5, -1))
def test_pinv_bounds_dominate(n1, n2, n3, seed, logscale):
    rng = np.random.default_rng(seed)
    A = conditioned(n1, n2, n3, rng, ranks=random_rank_profile(n1, n2, n3, rng, deficient=False))
    E = rank_preserving_perturbation(A, 10**logscale, rng)
    B, K = rand_tensor(rng, n1, 2, n3), 10**logscale * rand_tensor(rng, n1, 2, n3)
    for r in (pinv_perturb_general(A, E), pinv_perturb_rank_preserving(A, E),
              pinv_perturb_relative(A, E), lstsq_perturb(A, E, B, K)):
        assert r.holds is not False, (r.theorem, r.failing_checks())
    assert pinv_perturb_general(A, 10**logscale * unit_tensor(A.shape, rng)).holds


class TestMultilinearSmw:
    def _instance(self, seed, t=1.0, h=1e-3):
        rng = np.random.default_rng(seed)
        A, f = construct_conditioned_instance((4, 2, 3), rng)
        D = t * tprod(A, rand_tensor(rng, 4, 2, 3))
        H = h * t * rand_tensor(rng, 4, 2, 3)
        return A, f, D, H

    @pytest.mark.parametrize("seed", range(5))
    def test_holds(self, seed):
        r = multilinear_smw_perturb(*self._instance(seed))
        assert r.applicable and r.holds, r.failing_checks()

    def test_scale_invariant(self):
        a = multilinear_smw_perturb(*self._instance(3))
        b = multilinear_smw_perturb(*self._instance(3, t=1e-3))
        assert b.bound_F == pytest.approx(a.bound_F, rel=1e-9)
        assert b.actual_F == pytest.approx(a.actual_F, rel=1e-6)

    def test_leading_norm_factor_form_fails_for_small_data(self):
        A, f, D, H = self._instance(4, t=1e-3, h=0.0)
        r = multilinear_smw_perturb(A, f, D, H)
        assert r.holds
        assert r.actual_F > r.notes["printed_bound_F"]
        assert r.actual_2 > r.notes["printed_bound_2"]

    def test_form_without_norm_powers_fails_for_large_a(self):
        rng = np.random.default_rng(0)
        A, f = construct_conditioned_instance((4, 2, 2), rng)
        A = 100.0 * A
        f = build_smw_factors(A, f.U, f.B, f.V)
        D = tprod(A, rand_tensor(rng, 4, 2, 2))
        r = multilinear_smw_perturb(A, f, D, zeros(4, 2, 2))
        assert r.holds
        assert r.actual_F > r.notes["reduced_bound_F"]

    def test_data_perturbation_only(self, rng):
        A = conditioned(4, 4, 2, rng, ranks=(3, 2))
        f = build_smw_factors(A, zeros(4, 1, 2), zeros(1, 1, 2), zeros(1, 4, 2))
        D = tprod(A, rand_tensor(rng, 4, 1, 2))
        H = 1e-2 * tprod(A, rand_tensor(rng, 4, 1, 2))
        r = multilinear_smw_perturb(A, f, D, H)
        assert r.notes["eps_A_F"] == 0.0
        assert r.bound_F == pytest.approx(A.n3 * r.notes["eps_D_F"] * r.kappa_F)
        assert r.holds

    def test_supplied_eps_a_too_small_is_named(self):
        r = multilinear_smw_perturb(*self._instance(1), eps_A=1e-6)
        assert not r.applicable
        assert "eps_A" in r.reason and "||X1||_F" in r.reason

    def test_supplied_eps_d_too_small_is_named(self):
        A, f, D, H = self._instance(2)
        r = multilinear_smw_perturb(A, f, D, H, eps_A=1e3, eps_D=1e-9)
        assert not r.applicable and "eps_D" in r.reason

    def test_inconsistent_and_zero_rhs(self, rng):
        A, f, _, H = self._instance(0)
        assert "zero" in multilinear_smw_perturb(A, f, zeros(4, 2, 3), H).reason
        A2 = conditioned(4, 4, 3, rng, ranks=(2, 2, 2))
        f2 = build_smw_factors(A2, zeros(4, 1, 3), zeros(1, 1, 3), zeros(1, 4, 3))
        r = multilinear_smw_perturb(A2, f2, rand_tensor(rng, 4, 1, 3), zeros(4, 1, 3))
        assert "inconsistent" in r.reason
