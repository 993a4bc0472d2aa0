import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypbeta import oracle, qseries
from hypbeta.errors import (
    BaseOutOfRange,
    DivergentSeries,
    DivisionByZeroPole,
    NomeOutOfRange,
    OutsideAnnulus,
)

# frozen from the extended-precision oracle (mpmath, 30 digits)
QPOCH_HALF_HALF = 0.2887880950866024
THETA_I_ZERO = 1.0864348112133080
ETA_I = 0.7682254223260567


class TestQPochhammer:
    def test_zero_argument_is_one(self):
        for q in (0.5, -0.3, 0.2 + 0.4j):
            assert qseries.qpoch_inf(0.0, q).value == 1.0

    def test_frozen_value(self):
        sv = qseries.qpoch_inf(0.5, 0.5, tol=1e-14)
        assert abs(sv.value - QPOCH_HALF_HALF) < 1e-13
        assert sv.converged

    def test_unit_argument_is_exact_zero(self):
        for q in (0.5, 0.3j, -0.2 + 0.1j):
            sv = qseries.qpoch_inf(1.0, q)
            assert sv.value == 0
            assert sv.converged

    def test_oracle_agreement(self):
        for a, q in ((0.3 + 0.2j, 0.5), (-1.7, 0.4j), (2.5, -0.6)):
            assert abs(qseries.qpoch_inf(a, q, 1e-14).value
                       - oracle.qpoch_inf_mp(a, q)) < 1e-12

    def test_base_out_of_range(self):
        with pytest.raises(BaseOutOfRange):
            qseries.qpoch_inf(0.5, 1.0)
        with pytest.raises(BaseOutOfRange):
            qseries.QBase(1.2)

    def test_qpoch_many_matches_scalar(self):
        a = np.array([0.2, -0.5 + 0.3j, 1.8])
        q = 0.45
        vals = qseries.qpoch_many(a, q, tol=1e-15)
        for i, ai in enumerate(a):
            assert abs(vals[i] - qseries.qpoch_inf(ai, q, tol=1e-15).value) < 1e-13

    def test_log_route_matches_direct(self):
        q = 0.152
        a = np.array([0.3 + 0.2j, -5.0, 200.0 + 30j, 1e-3])
        logs = qseries.qpoch_log_logarg(np.log(a.astype(complex)), q, 1e-14)
        direct = qseries.qpoch_many(a, q, 1e-14)
        assert np.max(np.abs(np.exp(logs) - direct) / np.abs(direct)) < 1e-13

    def test_log_route_huge_argument(self):
        # the value overflows but its log must match the oracle's log
        import mpmath as mp
        with mp.workdps(40):
            ref = mp.log(mp.qp(mp.mpf(10) ** 80, mp.mpf("0.152")))
        got = complex(qseries.qpoch_log_logarg(
            np.array([cmath.log(1e80)]), 0.152, 1e-14)[0])
        # branches may differ by multiples of 2 pi i
        diff = got - complex(ref)
        k = round(diff.imag / (2 * np.pi))
        assert abs(diff - 2j * np.pi * k) < 1e-10


class TestQPochAlpha:
    def test_empty_product(self):
        assert qseries.qpoch_alpha(0.7, 0.3, 0).value == pytest.approx(1.0)

    def test_single_factor(self):
        sv = qseries.qpoch_alpha(0.7, 0.3, 1)
        assert abs(sv.value - 0.3) < 1e-13  # 1 - z

    def test_finite_product_oracle(self):
        sv = qseries.qpoch_alpha(0.3, 0.2, 2)
        assert abs(sv.value - 0.658) < 1e-13
        assert abs(sv.value - oracle.qpoch_finite_mp(0.3, 0.2, 2)) < 1e-13

    def test_generic_alpha_matches_definition(self):
        z, q, alpha = 0.4 + 0.1j, 0.35, 0.7 - 0.2j
        shift = cmath.exp(alpha * cmath.log(q))
        expected = (qseries.qpoch_inf(z, q, 1e-14).value
                    / qseries.qpoch_inf(z * shift, q, 1e-14).value)
        assert abs(qseries.qpoch_alpha(z, q, alpha).value - expected) < 1e-13

    def test_pole(self):
        # z q^alpha = 1 makes the denominator vanish
        q = 0.3
        with pytest.raises(DivisionByZeroPole):
            qseries.qpoch_alpha(1.0 / q, q, 1.0)


class TestTheta:
    def test_frozen_value_at_i(self):
        sv = qseries.theta(0.0, 1j)
        assert abs(sv.value - THETA_I_ZERO) < 1e-12

    def test_one_periodicity(self):
        a = qseries.theta(0.17, 0.3j).value
        b = qseries.theta(1.17, 0.3j).value
        assert abs(a - b) < 1e-13

    def test_methods_agree(self):
        a = qseries.theta(0.2 + 0.1j, 0.3j, "series")
        b = qseries.theta(0.2 + 0.1j, 0.3j, "triple_product")
        assert abs(a.value - b.value) <= max(1e-12, a.trunc_err + b.trunc_err)

    def test_methods_agree_random_grid(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 2.0))
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            a = qseries.theta(z, tau, "series")
            b = qseries.theta(z, tau, "triple_product")
            scale = max(abs(b.value), a.trunc_err + b.trunc_err, 1e-30)
            assert abs(a.value - b.value) / scale < 1e-10

    def test_oracle(self):
        assert abs(qseries.theta(0.23 + 0.04j, 0.7j).value
                   - oracle.theta_mp(0.23 + 0.04j, 0.7j)) < 1e-12

    def test_quasi_periodicity(self):
        # theta_sigma(z + sigma) = p^(-1/2) e^(-2 pi i z) theta_sigma(z)
        tau = 0.4 + 0.6j
        sigma = -1.0 / tau
        z = 0.17 + 0.05j
        lhs = qseries.theta(z + sigma, sigma).value
        rhs = (cmath.exp(-1j * cmath.pi * sigma) * cmath.exp(-2j * cmath.pi * z)
               * qseries.theta(z, sigma).value)
        assert abs(lhs - rhs) / abs(rhs) < 1e-10

    def test_nome_out_of_range(self):
        with pytest.raises(NomeOutOfRange):
            qseries.theta(0.0, -0.3j)


class TestDedekindEta:
    def test_frozen_value_at_i(self):
        assert abs(qseries.dedekind_eta(1j) - ETA_I) < 1e-12

    def test_fixed_point(self):
        # sigma = i is fixed under inversion and sqrt(-i*i) = 1
        assert abs(qseries.dedekind_eta(-1.0 / 1j) / qseries.dedekind_eta(1j)
                   - 1.0) < 1e-13

    def test_modularity(self):
        sigma = 0.5j
        lhs = qseries.dedekind_eta(-1.0 / sigma)  # eta(2i)
        rhs = qseries.dedekind_eta(sigma) * cmath.sqrt(-1j * sigma)
        assert abs(lhs - rhs) < 1e-12

    def test_nome_out_of_range(self):
        with pytest.raises(NomeOutOfRange):
            qseries.dedekind_eta(1.0)


class TestPhiSeries:
    def test_telescoping_case(self):
        # upper parameter q collapses the q-binomial to 1/(1-z)
        sv = qseries.phi_series([0.2], [], 0.2, 0.4)
        assert abs(sv.value - 1.0 / 0.6) < 1e-12

    def test_q_binomial(self):
        a, q, z = 0.3, 0.2, 0.5
        lhs = qseries.phi_series([a], [], q, z).value
        rhs = (qseries.qpoch_inf(a * z, q, 1e-14).value
               / qseries.qpoch_inf(z, q, 1e-14).value)
        assert abs(lhs - rhs) < 1e-12

    def test_zero_upper_reciprocal(self):
        q, z = 0.25, 0.4
        lhs = qseries.phi_series([0.0], [], q, z).value
        rhs = 1.0 / qseries.qpoch_inf(z, q, 1e-14).value
        assert abs(lhs - rhs) < 1e-12

    def test_terminating_sum(self):
        # upper q^-2 terminates after three terms; compare direct sum
        q = 0.3
        upper = [q ** -2, 0.7]
        lower = [0.4]
        sv = qseries.phi_series(upper, lower, q, 0.9)
        total = 0.0 + 0j
        term = 1.0 + 0j
        for m in range(3):
            total += term
            num = (1 - upper[0] * q**m) * (1 - upper[1] * q**m) * 0.9
            den = (1 - q ** (m + 1)) * (1 - lower[0] * q**m)
            term *= num / den
        assert sv.trunc_err == 0.0
        assert abs(sv.value - total) < 1e-13

    def test_divergent(self):
        with pytest.raises(DivergentSeries):
            qseries.phi_series([0.5], [], 0.3, 1.5)


class TestW87:
    def test_zero_argument(self):
        sv = qseries.w8_7(0.3, [0.1, 0.2, 0.3, 0.4, 0.5], 0.3, 0.0)
        assert sv.value == 1.0

    def test_terminating_two_terms(self):
        # a4 = q^-1 terminates at m = 1
        q = 0.3
        a1 = 0.2
        rest = [1.0 / q, 0.15, 0.25, 0.35, 0.45]
        sv = qseries.w8_7(a1, rest, q, 0.6)
        wp = (1 - a1 * q**2) / (1 - a1)
        t1 = 0.6
        for a in [a1] + rest:
            t1 *= 1 - a
        t1 /= (1 - q)
        for b in [q * a1 / a for a in rest]:
            t1 /= 1 - b
        assert abs(sv.value - (1.0 + wp * t1)) < 1e-13

    def test_w87_vs_brute_force(self):
        q, z = 0.2, 0.15
        a1 = 0.4
        rest = [0.3, 0.25, 0.2, 0.15, 0.1]
        lower = [q * a1 / a for a in rest]
        total = 0j
        for m in range(80):
            num = 1.0 + 0j
            den = 1.0 + 0j
            for a in [a1] + rest:
                for j in range(m):
                    num *= 1 - a * q**j
            for b in [q] + lower:
                for j in range(m):
                    den *= 1 - b * q**j
            total += (1 - a1 * q ** (2 * m)) / (1 - a1) * num / den * z**m
        assert abs(qseries.w8_7(a1, rest, q, z).value - total) < 1e-12


class TestBilateralPsi:
    def test_ramanujan_closed_form(self):
        a, b, q, z = 0.4, 0.1, 0.3, 0.5
        lhs = qseries.bilateral_psi([a], [b], q, z).value
        qp = lambda w: qseries.qpoch_inf(w, q, 1e-14).value
        rhs = (qp(q) * qp(b / a) * qp(a * z) * qp(q / (a * z))
               / (qp(b) * qp(q / a) * qp(z) * qp(b / (a * z))))
        assert abs(lhs - rhs) < 1e-10

    def test_zero_limit_convention(self):
        sv = qseries.bilateral_psi([0.3], [0.3], 0.2, 0.0)
        assert sv.value == 1.0

    def test_outside_annulus(self):
        with pytest.raises(OutsideAnnulus):
            qseries.bilateral_psi([0.4], [0.1], 0.3, 1.2)
        with pytest.raises(OutsideAnnulus):
            # inner bound: |b/a| = 0.75 above |z| = 0.5
            qseries.bilateral_psi([0.4], [0.3], 0.3, 0.5)

    def test_slow_convergence_warning(self):
        sv = qseries.bilateral_psi([0.4], [0.1], 0.3, 0.97)
        assert any("SlowConvergence" in w for w in sv.warnings)


# --- property tests -------------------------------------------------------

small_complex = st.builds(complex,
                          st.floats(-1.5, 1.5, allow_nan=False),
                          st.floats(-1.5, 1.5, allow_nan=False))
bases = st.builds(complex,
                  st.floats(-0.6, 0.6, allow_nan=False),
                  st.floats(-0.6, 0.6, allow_nan=False)).filter(
                      lambda q: abs(q) <= 0.9)


@settings(max_examples=40, deadline=None)
@given(a=small_complex.filter(lambda a: abs(a) <= 2.0), q=bases)
def test_shift_identity(a, q):
    lhs = qseries.qpoch_inf(a, q, 1e-14).value
    rhs = (1 - a) * qseries.qpoch_inf(a * q, q, 1e-14).value
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@settings(max_examples=40, deadline=None)
@given(u=small_complex.filter(lambda u: abs(u) <= 1.2), q=bases)
def test_quadratic_splitting(u, q):
    sq = cmath.sqrt(q)
    lhs = qseries.qpoch_inf(u * u, q, 1e-14).value
    rhs = 1.0 + 0j
    for w in (u, -u, sq * u, -sq * u):
        rhs *= qseries.qpoch_inf(w, q, 1e-14).value
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.05, 0.9), q=st.floats(0.05, 0.8), z=st.floats(0.05, 0.85))
def test_q_binomial_property(a, q, z):
    lhs = qseries.phi_series([a], [], q, z, tol=1e-13).value
    rhs = (qseries.qpoch_inf(a * z, q, 1e-14).value
           / qseries.qpoch_inf(z, q, 1e-14).value)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
