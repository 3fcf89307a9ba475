"""Finite sections of the Hilbert-transform-type matrix."""

import math

import pytest

from smallfock.core import (
    LogComplex,
    Side,
    SpecError,
    TailedSpec,
    TailKind,
    dist_to_sequence,
    node,
    normalize_phase,
)
from smallfock.toperator import (
    SectionNorms,
    TMatrixSection,
    assemble_section,
    decay_fit,
    gamma_phase_choice,
    gamma_spec,
    predicted_log_entry,
    section_norms,
    t_entry,
)
from smallfock.products import TruncationPolicy

from conftest import gamma_one, make_spec


class TestGammaPhaseChoice:
    def test_real_positive_sequence(self):
        spec = gamma_one(p=math.inf)
        phases = gamma_phase_choice(spec)
        assert phases.kind is TailKind.CONSTANT
        assert phases.constant == pytest.approx(math.pi)

    def test_opposite_ray_distance(self):
        spec = gamma_one(p=math.inf)
        gspec = gamma_spec(spec, gamma_phase_choice(spec))
        for m in (0, 3, 9):
            gm = node(gspec, m)
            assert dist_to_sequence(spec, gm).log_dist >= gm.logmod - 1e-12

    def test_alternating_phases_flip(self):
        spec = make_spec(TailedSpec.const(0.0),
                         TailedSpec.periodic([0.0, math.pi]), p=math.inf)
        phases = gamma_phase_choice(spec)
        assert phases.kind is TailKind.PERIODIC
        want = [normalize_phase(spec.theta.at(m) + math.pi) for m in range(2)]
        assert list(phases.values) == pytest.approx(want)


class TestPredictedLogEntry:
    def test_diagonal(self):
        assert predicted_log_entry(gamma_one(), 4, 4) == 0.0

    def test_zero_delta_decay(self):
        spec = gamma_one()
        for d in (1, 5, 12):
            assert predicted_log_entry(spec, d, 0) == pytest.approx(-d / 4.0)
            assert predicted_log_entry(spec, 0, d) == pytest.approx(-d / 4.0)

    def test_constant_delta(self):
        spec = make_spec(TailedSpec.const(0.25), TailedSpec.const(0.0))
        d = 8
        assert predicted_log_entry(spec, d, 0) \
            == pytest.approx((-d - 2.0 * 0.25 * d) / 4.0)
        assert predicted_log_entry(spec, 0, d) \
            == pytest.approx((-d + 2.0 * 0.25 * d) / 4.0)


class TestEntries:
    def test_diagonal_bracket(self):
        # paper-level prediction is only "comparable to 1"; bracket frozen
        # from a calibration run
        spec = gamma_one()
        phases = gamma_phase_choice(spec)
        for m in (0, 7, 30):
            v = t_entry(spec, phases, m, m)
            assert 20.0 <= math.exp(v.logmod) <= 800.0

    def test_off_diagonal_decay(self):
        spec = gamma_one()
        phases = gamma_phase_choice(spec)
        ratio = math.exp(t_entry(spec, phases, 10, 18).logmod
                         - t_entry(spec, phases, 10, 10).logmod)
        assert ratio <= math.exp(-8.0 / 4.0) * 50.0

    def test_single_entry_section(self):
        spec = gamma_one()
        phases = gamma_phase_choice(spec)
        sec = assemble_section(spec, phases, range(0, 1), range(0, 1))
        assert sec.entries[(0, 0)] == t_entry(spec, phases, 0, 0)

    def test_empty_range_rejected(self):
        spec = gamma_one()
        with pytest.raises(SpecError):
            assemble_section(spec, gamma_phase_choice(spec), range(0, 0),
                             range(0, 4))

    def test_determinism(self):
        spec = gamma_one()
        phases = gamma_phase_choice(spec)
        a = assemble_section(spec, phases, range(0, 6), range(0, 6))
        b = assemble_section(spec, phases, range(0, 6), range(0, 6))
        assert a.entries == b.entries


class TestDecayFit:
    def test_small_section_rejected(self):
        spec = gamma_one()
        sec = assemble_section(spec, gamma_phase_choice(spec), range(0, 8),
                               range(0, 8))
        with pytest.raises(SpecError):
            decay_fit(sec)

    def test_zero_delta_slopes(self):
        spec = gamma_one()
        sec = assemble_section(spec, gamma_phase_choice(spec), range(0, 32),
                               range(0, 32))
        su, sl, _ = decay_fit(sec)
        assert su == pytest.approx(-0.25, abs=0.05)
        assert sl == pytest.approx(-0.25, abs=0.05)

    def test_blow_up_certificate(self):
        # constant delta 0.6 > 1/2: predicted super-diagonal slope
        # (1/(4 alpha))(-1 + 1.2) = +0.05; certificate asks >= half of it
        spec = make_spec(TailedSpec.const(0.6), TailedSpec.const(0.0))
        sec = assemble_section(spec, gamma_phase_choice(spec), range(0, 48),
                               range(0, 48))
        su, sl, _ = decay_fit(sec)
        assert su >= 0.025
        assert sl < 0.0

    def test_prediction_tracking(self):
        for delta in (0.0, 0.25):
            spec = make_spec(TailedSpec.const(delta), TailedSpec.const(0.0))
            sec = assemble_section(spec, gamma_phase_choice(spec), range(0, 32),
                                   range(0, 32))
            worst = max(abs(v.logmod - predicted_log_entry(spec, m, k))
                        for (m, k), v in sec.entries.items())
            assert worst <= 8.5  # frozen regression constant


class TestSectionNorms:
    def test_norm_relations(self):
        spec = gamma_one()
        sec = assemble_section(spec, gamma_phase_choice(spec), range(0, 24),
                               range(0, 24))
        norms = section_norms(sec)
        assert norms.p2 <= math.sqrt(norms.p1 * norms.pinf) * (1.0 + 1e-9)
        assert norms.interpolated(2.0) == pytest.approx(
            math.sqrt(norms.p1 * norms.pinf))
        assert norms.interpolated(math.inf) == pytest.approx(norms.pinf)

    def test_no_bound_below_one(self):
        with pytest.raises(SpecError):
            SectionNorms(1.0, 1.0, 1.0).interpolated(0.5)

    def test_growth_for_failing_window(self):
        spec = make_spec(TailedSpec.const(0.6), TailedSpec.const(0.0))
        phases = gamma_phase_choice(spec)
        small = section_norms(assemble_section(spec, phases, range(0, 24),
                                               range(0, 24)))
        large = section_norms(assemble_section(spec, phases, range(0, 48),
                                               range(0, 48)))
        assert large.pinf > small.pinf
