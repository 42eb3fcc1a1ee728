import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qotto import (
    DomainError,
    OscillatorParams,
    ResourceLimitError,
    energy,
    energy_ladder,
    q_number,
)
from qotto.spectrum import _q_number_formula


class TestQNumber:
    def test_harmonic_limit_is_integer(self):
        assert q_number(5, 1.0) == 5.0
        assert q_number(0, 1.0) == 0.0

    def test_unit_level_is_one_for_any_q(self):
        for q in (0.05, 0.3, 0.5, 0.9, 1.0):
            assert q_number(1, q) == 1.0

    def test_direct_value(self):
        # (0.25 - 4) / (0.5 - 2)
        assert math.isclose(q_number(2, 0.5), 2.5, rel_tol=1e-15)

    @pytest.mark.parametrize("q", [0.0, -0.3, 1.5, math.inf, math.nan])
    def test_rejects_q_outside_domain(self, q):
        with pytest.raises(DomainError):
            q_number(2, q)

    def test_rejects_negative_level(self):
        with pytest.raises(DomainError):
            q_number(-1, 0.5)

    @given(st.integers(0, 50), st.floats(0.05, 0.95))
    def test_symmetric_under_q_inversion(self, n, q):
        # the defining formula is unchanged by q -> 1/q, checked outside the
        # clamped public domain
        direct = _q_number_formula(n, q)
        mirrored = _q_number_formula(n, 1.0 / q)
        assert math.isclose(direct, mirrored, rel_tol=1e-9, abs_tol=1e-12)


class TestEnergy:
    def test_ground_level_is_half_omega(self):
        for q in (0.05, 0.5, 1.0):
            for omega in (0.3, 1.0, 4.0):
                assert energy(0, OscillatorParams(omega, q)) == 0.5 * omega

    def test_harmonic_level(self):
        assert energy(3, OscillatorParams(1.0, 1.0)) == 3.5

    def test_deformed_level(self):
        # (1/2)([1] + [2]) with [2] = 2.5
        assert math.isclose(energy(1, OscillatorParams(1.0, 0.5)), 1.75, rel_tol=1e-14)

    def test_grows_beyond_harmonic_value(self):
        # anharmonicity pushes E_4 above the harmonic 4.5 already at q = 0.9
        assert energy(4, OscillatorParams(1.0, 0.9)) > 4.5

    def test_overflow_saturates_to_inf(self):
        assert energy(5000, OscillatorParams(1.0, 0.1)) == math.inf

    @pytest.mark.parametrize("q", [0.1, 0.5, 0.9, 0.999])
    def test_product_and_sinh_forms_agree(self, q):
        params = OscillatorParams(1.3, q)
        ladder = energy_ladder(params, 200)
        for n in range(201):
            product_form = 0.5 * params.omega * (q_number(n, q) + q_number(n + 1, q))
            assert math.isclose(product_form, float(ladder[n]), rel_tol=1e-12)

    def test_continuous_at_the_harmonic_switch(self):
        params = OscillatorParams(1.0, 1.0 - 1e-10)
        for n in range(51):
            assert math.isclose(energy(n, params), 1.0 * (n + 0.5), rel_tol=1e-6)


class TestLadder:
    def test_harmonic_ladder(self):
        np.testing.assert_allclose(
            energy_ladder(OscillatorParams(1.0, 1.0), 2), [0.5, 1.5, 2.5], rtol=0
        )

    def test_deformed_ladder(self):
        np.testing.assert_allclose(
            energy_ladder(OscillatorParams(1.0, 0.5), 1), [0.5, 1.75], rtol=1e-14
        )

    def test_matches_scalar_energy(self):
        params = OscillatorParams(0.7, 0.35)
        ladder = energy_ladder(params, 40)
        for n in (0, 1, 7, 40):
            assert math.isclose(float(ladder[n]), energy(n, params), rel_tol=1e-13)

    @given(st.floats(0.05, 0.999), st.floats(0.1, 5.0))
    def test_strictly_increasing(self, q, omega):
        ladder = energy_ladder(OscillatorParams(omega, q), 150)
        assert np.all(np.diff(ladder) > 0.0)

    @given(st.floats(0.05, 0.999), st.floats(0.1, 5.0))
    def test_gaps_strictly_widen_when_deformed(self, q, omega):
        gaps = np.diff(energy_ladder(OscillatorParams(omega, q), 150))
        assert np.all(np.diff(gaps) > 0.0)

    @given(st.floats(0.1, 5.0))
    def test_gaps_constant_when_harmonic(self, omega):
        gaps = np.diff(energy_ladder(OscillatorParams(omega, 1.0), 100))
        np.testing.assert_allclose(gaps, omega, rtol=1e-12)

    def test_depth_cap(self):
        with pytest.raises(ResourceLimitError):
            energy_ladder(OscillatorParams(1.0, 0.5), 100_001)

    def test_rejects_negative_depth(self):
        with pytest.raises(DomainError):
            energy_ladder(OscillatorParams(1.0, 0.5), -1)


class TestParams:
    @pytest.mark.parametrize(
        "omega,q", [(0.0, 0.5), (-1.0, 0.5), (1.0, 0.0), (1.0, 1.1), (math.nan, 0.5)]
    )
    def test_rejects_invalid(self, omega, q):
        with pytest.raises(DomainError):
            OscillatorParams(omega, q)

    def test_log_q(self):
        assert OscillatorParams(1.0, 1.0).log_q == 0.0
        assert math.isclose(OscillatorParams(1.0, 0.5).log_q, -math.log(2.0))

    def test_harmonic_detection(self):
        assert OscillatorParams(1.0, 1.0).is_harmonic
        assert OscillatorParams(1.0, 1.0 - 1e-10).is_harmonic
        assert not OscillatorParams(1.0, 0.9).is_harmonic
