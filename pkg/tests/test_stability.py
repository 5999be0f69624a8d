import numpy as np
import pytest

from crimedyn import (
    Classification,
    DegenerateParams,
    Method,
    NoEndemicEquilibrium,
    Regime,
    SingularV,
    char_coeffs_e1,
    classify_e0,
    classify_e1,
    crime_free,
    eigen3,
    endemic,
    holling,
    jacobian_at,
    next_gen_r0,
    r0_delta1_form,
    uncontrolled_rhs,
    with_param,
)
from crimedyn.params import ModelParams
from conftest import central_diff, random_params, table2_params


class TestJacobian:
    def test_first_column_zeros_at_crime_free_point(self, params):
        e0 = crime_free(params)
        a0 = jacobian_at(e0.as_array(), params)
        assert a0[1, 0] == 0.0 and a0[2, 0] == 0.0
        assert a0[0, 0] == -params.phi

    def test_no_involvement_kills_incidence_slope(self, params):
        a = jacobian_at((123.0, 0.0, 9.0), params)
        assert a[0, 0] == -params.phi
        assert a[1, 0] == 0.0

    def test_matches_field_finite_differences(self, params):
        rng = np.random.default_rng(211)
        for _ in range(20):
            x = rng.uniform(0.0, 800.0, size=3)
            a = jacobian_at(x, params)
            for row in range(3):
                fd = central_diff(lambda y: uncontrolled_rhs(y, params)[row], x)
                assert a[row] == pytest.approx(fd, rel=1e-5, abs=1e-7)


class TestEigen3:
    def test_identity(self):
        assert eigen3(np.eye(3)) == ((1 + 0j), (1 + 0j), (1 + 0j))

    def test_diagonal_sorted_by_real_part(self):
        roots = eigen3(np.diag([-1.0, 2.0, 3.0]))
        assert [r.imag for r in roots] == [0.0, 0.0, 0.0]
        assert [r.real for r in roots] == pytest.approx([3.0, 2.0, -1.0], abs=1e-12)

    def test_symmetric_trace_det_identities(self):
        rng = np.random.default_rng(223)
        for _ in range(100):
            m = rng.normal(size=(3, 3))
            m = m + m.T
            roots = eigen3(m)
            assert sum(r.real for r in roots) == pytest.approx(np.trace(m), rel=1e-9)
            prod = roots[0] * roots[1] * roots[2]
            assert prod.real == pytest.approx(np.linalg.det(m), rel=1e-9, abs=1e-9)
            assert all(abs(r.imag) < 1e-9 for r in roots)

    def test_against_numpy_on_general_matrices(self):
        rng = np.random.default_rng(227)
        for _ in range(200):
            m = rng.normal(size=(3, 3)) * rng.choice([0.1, 1.0, 10.0])
            mine = eigen3(m)
            ref = sorted(np.linalg.eigvals(m), key=lambda v: (-v.real, -v.imag))
            scale = max(1.0, max(abs(v) for v in ref))
            for a, b in zip(mine, ref):
                assert abs(a - b) <= 1e-8 * scale

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            eigen3(np.eye(2))
        with pytest.raises(ValueError):
            eigen3(np.full((3, 3), np.nan))


class TestClassifyE0:
    def test_table2_beta03_unstable(self, params):
        # both sides of the threshold: 40/12.27 against 0.47 - 0.7*sigma2
        assert 40.0 / 12.27 > 0.47 - 0.7 * (0.01 / 0.49)
        report = classify_e0(params)
        assert report.classification is Classification.UNSTABLE
        assert report.method is Method.CLOSED_FORM_E0
        assert report.r0 > 1.0

    def test_no_incidence_is_asymptotically_stable(self):
        p = with_param(table2_params(), "alpha", 0.0)
        report = classify_e0(p)
        assert report.classification is Classification.ASYMPTOTICALLY_STABLE
        assert report.r0 == 0.0

    def test_beta2_still_unstable(self):
        p = table2_params(beta=2.0)
        assert holling(p.lam / p.phi, p) == pytest.approx(40.0 / 80.27, rel=1e-12)
        assert 40.0 / 80.27 > 0.45571428571428574
        report = classify_e0(p)
        assert report.classification is Classification.UNSTABLE

    def test_closed_form_spectrum_matches_numeric(self):
        rng = np.random.default_rng(229)
        checked = 0
        while checked < 100:
            p = random_params(rng)
            if p.phi < 1e-3:
                continue
            checked += 1
            report = classify_e0(p)
            numeric = eigen3(jacobian_at(crime_free(p).as_array(), p))
            for a, b in zip(report.eigenvalues, numeric):
                assert abs(a - b) <= 1e-9 * max(1.0, abs(a))

    def test_frozen_spectrum_beta03(self, params):
        eig = classify_e0(params).eigenvalues
        assert eig[0] == pytest.approx(2.7921164702203756, rel=1e-12)
        assert eig[1] == pytest.approx(-0.27, rel=1e-12)
        assert eig[2] == pytest.approx(-0.49213277013887646, rel=1e-12)


class TestCharCoeffsE1:
    def test_table2_beta03_signs_and_values(self, params):
        coeffs = char_coeffs_e1(params)
        assert coeffs.tau2 < 0.0 < coeffs.tau1
        assert coeffs.tau2 == pytest.approx(-85.74271093903762, rel=1e-12)
        assert coeffs.tau1 == pytest.approx(73.20900283614378, rel=1e-12)
        assert coeffs.d == pytest.approx(-14.555091241, rel=1e-9)

    def test_determinant_negative_under_a1(self):
        rng = np.random.default_rng(233)
        seen = 0
        while seen < 100:
            p = random_params(rng)
            if p.phi < 1e-6 or p.alpha < 1e-9:
                continue
            if endemic(p).regime is not Regime.A1_ENDEMIC:
                continue
            seen += 1
            assert char_coeffs_e1(p).d < 0.0

    def test_requires_endemic_point(self):
        p = with_param(table2_params(), "alpha", 0.0)
        with pytest.raises(NoEndemicEquilibrium):
            char_coeffs_e1(p)


class TestClassifyE1:
    def test_table2_beta03_matches_spectrum(self, params):
        report = classify_e1(params)
        max_re = max(v.real for v in report.eigenvalues)
        assert report.classification is Classification.ASYMPTOTICALLY_STABLE
        assert max_re < 0.0
        assert report.method is Method.ROUTH_HURWITZ_E1

    def test_routh_hurwitz_agrees_with_spectrum_on_a1_draws(self):
        rng = np.random.default_rng(239)
        seen = 0
        while seen < 150:
            p = random_params(rng)
            if p.phi < 1e-6 or p.alpha < 1e-9:
                continue
            report = endemic(p)
            if report.regime is not Regime.A1_ENDEMIC:
                continue
            seen += 1
            stab = classify_e1(p)
            if stab.classification is Classification.INDETERMINATE:
                continue
            max_re = max(v.real for v in stab.eigenvalues)
            expected = (Classification.ASYMPTOTICALLY_STABLE if max_re < 0.0
                        else Classification.UNSTABLE)
            assert stab.classification is expected

    def test_requires_endemic_point(self):
        p = with_param(table2_params(), "alpha", 0.0)
        with pytest.raises(NoEndemicEquilibrium):
            classify_e1(p)


class TestNextGenR0:
    def test_no_incidence_gives_zero(self):
        p = with_param(table2_params(), "alpha", 0.0)
        assert next_gen_r0(p) == 0.0

    def test_table2_beta03_value(self, params):
        # numerator (phi+delta2+rho) * h(cap), denominator |0.47*0.49 - 0.007|
        expected = 0.49 * (40.0 / 12.27) / abs(0.47 * 0.49 - 0.007)
        assert next_gen_r0(params) == pytest.approx(expected, rel=1e-12)
        assert next_gen_r0(params) == pytest.approx(7.153569247827742, rel=1e-12)

    def test_delta1_closed_form_variant(self, params):
        # the variant numerator uses (phi+delta1+rho) = 0.52
        expected = 0.52 * (40.0 / 12.27) / abs(0.47 * 0.49 - 0.007)
        assert r0_delta1_form(params) == pytest.approx(expected, rel=1e-12)
        assert r0_delta1_form(params) == pytest.approx(7.59, abs=5e-3)
        p2 = table2_params(beta=2.0)
        assert r0_delta1_form(p2) == pytest.approx(1.16, abs=5e-3)

    def test_spectral_radius_identity(self, params):
        # independent route: assemble F and V from the model pieces and let
        # numpy produce the spectrum of F V^-1
        p = params
        h_cap = holling(p.lam / p.phi, p)
        f = np.zeros((3, 3))
        f[0, 0] = h_cap
        v = np.array([
            [p.phi + p.delta1 + p.gamma1 + p.gamma2, -(1 - p.omega) * p.rho, 0.0],
            [-p.gamma1, p.phi + p.delta2 + p.rho, 0.0],
            [h_cap - p.gamma2, -p.omega * p.rho, p.phi],
        ])
        k = f @ np.linalg.inv(v)
        spectral = max(abs(np.linalg.eigvals(k)))
        assert next_gen_r0(p) == pytest.approx(spectral, rel=1e-10)
        assert np.linalg.matrix_rank(k) == 1

    def test_threshold_equivalence_on_random_draws(self):
        rng = np.random.default_rng(241)
        checked = 0
        for _ in range(1000):
            p = random_params(rng)
            if p.phi < 1e-6:
                continue
            r0 = next_gen_r0(p)
            report = classify_e0(p)
            if abs(r0 - 1.0) < 1e-9 or \
                    report.classification is Classification.INDETERMINATE:
                continue
            checked += 1
            assert (r0 > 1.0) == (report.classification is Classification.UNSTABLE)
        assert checked >= 900

    def test_singular_transition_matrix(self):
        p = ModelParams(lam=10.0, phi=1e-8, delta1=0.0, delta2=0.0, omega=0.0,
                        rho=0.5, gamma1=0.5, gamma2=0.0, alpha=0.4, beta=0.3)
        with pytest.raises(SingularV):
            next_gen_r0(p)

    def test_degenerate_phi(self):
        p = ModelParams(lam=10.0, phi=0.0, delta1=0.1, delta2=0.1, omega=0.5,
                        rho=0.2, gamma1=0.1, gamma2=0.1, alpha=0.3, beta=0.2)
        with pytest.raises(DegenerateParams):
            next_gen_r0(p)


class TestAppendixStructure:
    """The hard-coded F and V must be the Jacobians of the new-infection and
    transition splits of the field, and the split must satisfy the sign
    conditions at nonnegative states."""

    @staticmethod
    def _split(params):
        p = params

        def f_new(y):
            i, r, s = y
            return np.array([holling(s, p) * i, 0.0, 0.0])

        def v_trans(y):
            i, r, s = y
            return np.array([
                (p.phi + p.delta1) * i + (p.gamma1 + p.gamma2) * i
                - (1.0 - p.omega) * p.rho * r,
                (p.phi + p.delta2 + p.rho) * r - p.gamma1 * i,
                holling(s, p) * i + p.phi * s - p.lam - p.gamma2 * i
                - p.rho * p.omega * r,
            ])

        return f_new, v_trans

    def test_sign_conditions_at_nonnegative_states(self, params):
        f_new, v_trans = self._split(params)
        rng = np.random.default_rng(251)
        for _ in range(50):
            i, r, s = rng.uniform(0.0, 500.0, size=3)
            assert np.all(f_new((i, r, s)) >= 0.0)
            # infection-free face: no transition flux out of empty classes
            assert v_trans((0.0, 0.0, s))[0] == 0.0
            assert v_trans((0.0, 0.0, s))[1] == 0.0
            assert f_new((0.0, 0.0, s))[0] == 0.0

    def test_field_recovers_from_split(self, params):
        # (I', R', S') = F - V reordered must equal the model field
        f_new, v_trans = self._split(params)
        rng = np.random.default_rng(257)
        for _ in range(30):
            s, i, r = rng.uniform(0.0, 500.0, size=3)
            irs = (i, r, s)
            di, dr, ds = f_new(irs) - v_trans(irs)
            assert np.array([ds, di, dr]) == pytest.approx(
                uncontrolled_rhs((s, i, r), params), rel=1e-12, abs=1e-12)

    def test_hardcoded_jacobians_match_split(self, params):
        f_new, v_trans = self._split(params)
        e_dagger = np.array([0.0, 0.0, params.lam / params.phi])
        from crimedyn.stability import _next_gen_matrices
        f_mat, v_mat = _next_gen_matrices(params)
        for row in range(3):
            fd_f = central_diff(lambda y: f_new(y)[row], e_dagger)
            fd_v = central_diff(lambda y: v_trans(y)[row], e_dagger)
            assert f_mat[row] == pytest.approx(fd_f, rel=1e-6, abs=1e-7)
            assert v_mat[row] == pytest.approx(fd_v, rel=1e-6, abs=1e-7)
