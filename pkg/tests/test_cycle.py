import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qotto import (
    ComputeError,
    CyclePointError,
    DomainError,
    OscillatorParams,
    OttoCycleSpec,
    evaluate_cycle,
    per_level_diagnostics,
    thermal_state,
)

# Reference cycle from scripts/compute_reference_values.py:
# omega = 1, hot side q = 0.4 at T = 0.5, cold side q = 1 at T = 0.1.
REF_WORK = 0.023674418898296249
REF_HEAT_IN = 0.075949679009730019
REF_HEAT_OUT = -0.05227526011143377
REF_EFFICIENCY = 0.31171190197213719

REFERENCE_SPEC = OttoCycleSpec(
    0.5, 0.1, OscillatorParams(1.0, 0.4), OscillatorParams(1.0, 1.0)
)


def bose_occupation(omega: float, temperature: float) -> float:
    return 1.0 / math.expm1(omega / temperature)


def harmonic_otto_work(omega_hot, omega_cold, t_hot, t_cold) -> float:
    return (omega_hot - omega_cold) * (
        bose_occupation(omega_hot, t_hot) - bose_occupation(omega_cold, t_cold)
    )


deformed_specs = st.builds(
    OttoCycleSpec,
    st.floats(0.5, 10.0),
    st.floats(0.05, 0.45),
    st.builds(OscillatorParams, st.floats(0.1, 5.0), st.floats(0.05, 1.0)),
    st.builds(OscillatorParams, st.floats(0.1, 5.0), st.floats(0.05, 1.0)),
)


class TestEvaluateCycle:
    def test_reference_cycle_matches_oracle(self):
        result = evaluate_cycle(REFERENCE_SPEC)
        assert math.isclose(result.work, REF_WORK, rel_tol=1e-10)
        assert math.isclose(result.heat_in, REF_HEAT_IN, rel_tol=1e-10)
        assert math.isclose(result.heat_out, REF_HEAT_OUT, rel_tol=1e-10)
        assert math.isclose(result.efficiency, REF_EFFICIENCY, rel_tol=1e-10)
        assert result.positive_work
        assert result.carnot == 1.0 - 0.1 / 0.5

    def test_equal_sides_give_exactly_zero_work(self):
        spec = OttoCycleSpec(
            0.7, 0.2, OscillatorParams(1.3, 0.6), OscillatorParams(1.3, 0.6)
        )
        result = evaluate_cycle(spec)
        assert result.work == 0.0
        assert result.heat_in > 0.0
        assert result.efficiency is None
        assert not result.positive_work

    @given(
        st.floats(0.1, 5.0),
        st.floats(0.1, 5.0),
        st.floats(0.5, 10.0),
        st.floats(0.05, 0.45),
    )
    @settings(max_examples=150)
    def test_harmonic_closed_form(self, omega_hot, omega_cold, t_hot, t_cold):
        spec = OttoCycleSpec(
            t_hot, t_cold, OscillatorParams(omega_hot, 1.0), OscillatorParams(omega_cold, 1.0)
        )
        result = evaluate_cycle(spec)
        expected = harmonic_otto_work(omega_hot, omega_cold, t_hot, t_cold)
        assert math.isclose(result.work, expected, rel_tol=1e-8, abs_tol=1e-12)

    @given(deformed_specs)
    @settings(max_examples=150)
    def test_first_law_closure(self, spec):
        result = evaluate_cycle(spec)
        if math.isfinite(result.work):
            assert abs(result.work - (result.heat_in + result.heat_out)) < 1e-10

    @given(deformed_specs)
    @settings(max_examples=150)
    def test_carnot_bound(self, spec):
        result = evaluate_cycle(spec)
        if result.positive_work:
            assert 0.0 < result.efficiency <= result.carnot + 1e-9

    def test_divergent_configuration_saturates(self):
        # cold populations decay slower than the hot spectrum grows, so the
        # cross sum runs off the float range: classified as negative work
        spec = OttoCycleSpec(
            9.0, 5.0, OscillatorParams(0.1, 0.05), OscillatorParams(0.1, 0.99)
        )
        result = evaluate_cycle(spec)
        assert result.work == -math.inf
        assert not result.positive_work
        assert result.efficiency is None

    def test_common_truncation_takes_deeper_state(self):
        spec = OttoCycleSpec(
            0.5, 0.3, OscillatorParams(1.0, 0.3), OscillatorParams(1.0, 1.0)
        )
        hot = thermal_state(spec.params_hot, spec.t_hot)
        cold = thermal_state(spec.params_cold, spec.t_cold)
        result = evaluate_cycle(spec)
        assert result.n_max_used == max(hot.n_max, cold.n_max)

    def test_reports_failing_cycle_point(self):
        # the tiny frequency needs more levels than the cap allows
        bad_hot = OttoCycleSpec(
            1.0, 0.5, OscillatorParams(1e-4, 1.0), OscillatorParams(1.0, 1.0)
        )
        with pytest.raises(CyclePointError, match="hot isochore"):
            evaluate_cycle(bad_hot)
        bad_cold = OttoCycleSpec(
            1.0, 0.5, OscillatorParams(1.0, 1.0), OscillatorParams(1e-4, 1.0)
        )
        with pytest.raises(CyclePointError, match="cold isochore"):
            evaluate_cycle(bad_cold)


class TestSpecValidation:
    @pytest.mark.parametrize("t_hot,t_cold", [(0.1, 0.5), (0.5, 0.5), (0.5, 0.0), (math.nan, 0.1)])
    def test_rejects_bad_temperatures(self, t_hot, t_cold):
        with pytest.raises(DomainError):
            OttoCycleSpec(t_hot, t_cold, OscillatorParams(1, 1), OscillatorParams(1, 1))

    def test_rejects_bad_tail_tol(self):
        with pytest.raises(DomainError):
            OttoCycleSpec(
                0.5, 0.1, OscillatorParams(1, 1), OscillatorParams(1, 1), tail_tol=2.0
            )

    def test_carnot_property(self):
        spec = OttoCycleSpec(2.0, 0.5, OscillatorParams(1, 1), OscillatorParams(1, 1))
        assert spec.carnot == 0.75


class TestPerLevelDiagnostics:
    def test_work_terms_sum_to_cycle_work(self):
        diag = per_level_diagnostics(REFERENCE_SPEC)
        result = evaluate_cycle(REFERENCE_SPEC)
        assert abs(float(np.sum(diag.work_terms)) - result.work) < 1e-12

    def test_population_differences_sum_to_zero(self):
        diag = per_level_diagnostics(REFERENCE_SPEC)
        assert abs(float(np.sum(diag.delta_populations))) < 1e-12

    def test_equal_spectra_have_zero_energy_shift(self):
        spec = OttoCycleSpec(
            0.9, 0.2, OscillatorParams(1.0, 0.7), OscillatorParams(1.0, 0.7)
        )
        diag = per_level_diagnostics(spec)
        assert np.all(diag.delta_energies == 0.0)
        assert abs(float(np.sum(diag.delta_populations))) < 1e-12

    def test_adiabats_preserve_populations_and_entropy(self):
        # the frozen-population sets attached to both ends of each adiabat
        # are the same sequences the heats are built from
        diag = per_level_diagnostics(REFERENCE_SPEC)
        result = evaluate_cycle(REFERENCE_SPEC)
        populations_at_b = diag.populations_hot  # heating endpoint
        populations_at_c = diag.populations_hot  # after the adiabat
        assert np.array_equal(populations_at_b, populations_at_c)
        populations_at_d = diag.populations_cold
        populations_at_a = diag.populations_cold
        assert np.array_equal(populations_at_d, populations_at_a)

        def shannon(p):
            occupied = p[p > 0.0]
            return float(-np.sum(occupied * np.log(occupied)))

        assert shannon(populations_at_b) == shannon(populations_at_c)
        assert shannon(populations_at_d) == shannon(populations_at_a)

        # and the cycle energetics come from exactly these sequences
        e_hot = thermal_state(
            REFERENCE_SPEC.params_hot, REFERENCE_SPEC.t_hot,
            n_max=len(diag.levels) - 1,
        ).energies
        e_cold = thermal_state(
            REFERENCE_SPEC.params_cold, REFERENCE_SPEC.t_cold,
            n_max=len(diag.levels) - 1,
        ).energies
        delta_p = populations_at_b - populations_at_a
        assert math.isclose(float(np.sum(e_hot * delta_p)), result.heat_in, rel_tol=1e-12)
        assert math.isclose(-float(np.sum(e_cold * delta_p)), result.heat_out, rel_tol=1e-12)

    def test_min_levels_extends_the_table(self):
        diag = per_level_diagnostics(REFERENCE_SPEC, min_levels=40)
        assert len(diag.levels) == 40
        assert abs(float(np.sum(diag.delta_populations))) < 1e-12

    @given(deformed_specs)
    @settings(max_examples=60)
    def test_sums_consistent_on_random_specs(self, spec):
        result = evaluate_cycle(spec)
        if not math.isfinite(result.work):
            return
        diag = per_level_diagnostics(spec)
        scale = max(1.0, abs(result.work))
        assert abs(float(np.sum(diag.work_terms)) - result.work) < 1e-12 * scale
        assert abs(float(np.sum(diag.delta_populations))) < 1e-12
