import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from domain.errors import InvalidParameter, MismatchedGrids, TooFewCurves
from domain.models.curve import Curve
from domain.models.envelope import CurveSet, Envelope
from domain.models.rgrid import RGrid
from domain.services.global_envelopes import envelope_area, erl_measures, global_envelope

RGRID = RGrid.linear(0.25, 20)


def curve_set(values, kind: str = "K", mask=None) -> CurveSet:
    values = np.asarray(values, dtype=float)
    rgrid = RGrid(np.linspace(0.0, 0.25, values.shape[1]))
    mask = np.ones(values.shape[1], dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    return CurveSet(rgrid, values, mask, kind)


def random_set(seed: int, s: int, m: int = 20) -> CurveSet:
    return curve_set(np.random.default_rng(seed).normal(size=(s + 1, m)))


class TestErlMeasures:
    def test_three_curve_example(self):
        erl = erl_measures(curve_set([[0, 0], [1, 1], [2, 2]]))
        assert erl.pointwise_ranks.tolist() == [[1, 1], [2, 2], [1, 1]]
        assert erl.classes.tolist() == [0, 1, 0]
        assert erl.class_sizes.tolist() == [2, 1]
        assert erl.ties(0, 2)
        assert erl.more_extreme(0, 1)

    def test_masked_points_are_ignored(self):
        erl = erl_measures(curve_set([[0, 5], [1, 9], [2, -3]], mask=[True, False]))
        assert erl.pointwise_ranks.tolist() == [[1], [2], [1]]


class TestGlobalEnvelope:
    def test_three_curve_p_value(self):
        e = global_envelope(curve_set([[0, 0], [1, 1], [2, 2]]), alpha=0.4)
        assert e.p_value == pytest.approx(2 / 3)
        assert e.data_inside

    def test_identical_curves(self):
        e = global_envelope(curve_set(np.ones((40, 8))), alpha=0.05)
        assert e.p_value == 1.0
        assert e.data_inside
        assert np.all(e.retained)

    def test_data_above_everything(self):
        sims = np.random.default_rng(7).normal(size=(99, 10))
        data = sims.max(axis=0) + 1.0
        e = global_envelope(curve_set(np.vstack([data, sims])), alpha=0.05)
        assert e.p_value == pytest.approx(0.01)
        assert e.rejected
        assert e.outside_points().size == 10

    def test_band_comes_from_retained_curves(self):
        cs = random_set(3, 99)
        e = global_envelope(cs, alpha=0.05)
        kept = cs.values[e.retained]
        assert np.array_equal(e.lower.values, kept.min(axis=0))
        assert np.array_equal(e.upper.values, kept.max(axis=0))
        assert e.n_sims == 99
        assert int((~e.retained).sum()) <= 5

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000), st.sampled_from([19, 39, 99]), st.sampled_from([0.05, 0.1, 0.25]))
    def test_p_value_lattice_and_containment(self, seed, s, alpha):
        e = global_envelope(random_set(seed, s), alpha=alpha)
        j = e.p_value * (s + 1)
        assert j == pytest.approx(round(j))
        assert 1 <= round(j) <= s + 1
        assert e.data_inside == (e.p_value > alpha)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 100_000))
    def test_containment_is_monotone_in_alpha(self, seed):
        cs = random_set(seed, 99)
        inside = [global_envelope(cs, alpha=a).data_inside for a in (0.01, 0.05, 0.1, 0.2, 0.5)]
        assert inside == sorted(inside, reverse=True)
        assert len({global_envelope(cs, alpha=a).p_value for a in (0.01, 0.2)}) == 1

    def test_invariant_under_increasing_transform(self):
        cs = random_set(9, 39)
        moved = CurveSet(cs.rgrid, np.arctan(cs.values) * 3.0 + 1.0, cs.mask, cs.kind)
        a, b = global_envelope(cs, 0.1), global_envelope(moved, 0.1)
        assert a.p_value == b.p_value
        assert np.array_equal(a.retained, b.retained)

    def test_exchangeable_curves_reject_at_level(self):
        trials = 2000
        hits = sum(global_envelope(random_set(10_000 + t, 19), 0.05).rejected for t in range(trials))
        assert hits / trials <= 0.05 + 3 * np.sqrt(0.05 * 0.95 / trials)

    @pytest.mark.slow
    def test_exchangeable_curves_reject_at_level_long(self):
        trials = 10_000
        hits = sum(global_envelope(random_set(50_000 + t, 39), 0.05).rejected for t in range(trials))
        assert 0.04 <= hits / trials <= 0.05 + 3 * np.sqrt(0.05 * 0.95 / trials)

    def test_too_few_curves(self):
        with pytest.raises(TooFewCurves):
            global_envelope(random_set(1, 10), alpha=0.05)

    def test_alpha_range(self):
        with pytest.raises(InvalidParameter):
            global_envelope(random_set(1, 99), alpha=1.0)


class TestCurveSet:
    def test_from_curves_intersects_masks(self):
        data = Curve(RGRID, np.zeros(20), "J", np.arange(20) < 15)
        sim = Curve(RGRID, np.ones(20), "J", np.arange(20) > 2)
        cs = CurveSet.from_curves(data, [sim])
        assert cs.mask.tolist() == [3 <= i < 15 for i in range(20)]
        assert cs.s == 1

    def test_mismatched_grids(self):
        data = Curve(RGRID, np.zeros(20), "K")
        other = Curve(RGrid.linear(0.2, 20), np.zeros(20), "K")
        with pytest.raises(MismatchedGrids):
            CurveSet.from_curves(data, [other])

    def test_mixed_kinds(self):
        with pytest.raises(MismatchedGrids):
            CurveSet.from_curves(Curve(RGRID, np.zeros(20), "K"), [Curve(RGRID, np.zeros(20), "G")])

    def test_needs_a_simulation(self):
        with pytest.raises(TooFewCurves):
            CurveSet.from_curves(Curve(RGRID, np.zeros(20), "K"), [])


def _band(upper, defined=None) -> Envelope:
    rgrid = RGrid([0.0, 0.5, 1.0])
    zero = Curve(rgrid, np.zeros(3), "K", defined)
    return Envelope(
        lower=zero,
        upper=Curve(rgrid, upper, "K", defined),
        observed=zero,
        alpha=0.05,
        p_value=1.0,
        erl_classes=np.zeros(1, dtype=int),
        retained=np.ones(1, dtype=bool),
        n_sims=19,
    )


class TestEnvelopeArea:
    def test_trapezoid(self):
        assert envelope_area(_band([0.0, 1.0, 2.0])) == pytest.approx(1.0)

    def test_skips_undefined_intervals(self):
        assert envelope_area(_band([0.0, 1.0, 2.0], [True, True, False])) == pytest.approx(0.25)

    def test_needs_two_defined_points(self):
        with pytest.raises(InvalidParameter):
            envelope_area(_band([0.0, 1.0, 2.0], [True, False, False]))

    def test_zero_width_band(self):
        assert envelope_area(_band([0.0, 0.0, 0.0])) == 0.0
