import math

import pytest
from hypothesis import given, strategies as st

from corrspread.initcorr import CorModel, cor_between_balls


class TestConstruction:
    def test_bell_pair_needs_distinct_sites(self):
        with pytest.raises(ValueError):
            CorModel.bell_pair(4, 4)

    def test_power_law_rejects_negative_fields(self):
        with pytest.raises(ValueError):
            CorModel.power_law(-0.1, 2.0)
        with pytest.raises(ValueError):
            CorModel.power_law(1.0, -1.0)

    def test_exp_clustered_needs_positive_length(self):
        with pytest.raises(ValueError):
            CorModel.exp_clustered(1.0, 0.0)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            CorModel(variant="mystery")

    def test_config_round_trip(self):
        for model in (
            CorModel.product(),
            CorModel.bell_pair(3, 9),
            CorModel.power_law(0.5, 2.0),
            CorModel.exp_clustered(1.0, 3.0),
        ):
            assert CorModel.from_config(model.to_config()) == model


class TestEnvelopes:
    def test_product_is_zero_everywhere(self):
        model = CorModel.product()
        for i, j, r in ((0, 10, 0), (0, 10, 4), (3, 40, 18)):
            assert cor_between_balls(model, i, j, r) == 0.0

    def test_bell_step_at_symmetric_geometry(self):
        # pair at 95/105 (k = 5 around centre 100), measured at 93/107 (i = 7)
        model = CorModel.bell_pair(95, 105)
        assert cor_between_balls(model, 93, 107, 1) == 0.0
        assert cor_between_balls(model, 93, 107, 2) == 1.0  # boundary counts as inside

    def test_bell_matches_heaviside_for_all_radii(self):
        centre, k = 100, 5
        model = CorModel.bell_pair(centre - k, centre + k)
        for half in range(6, 16):
            i, j = centre - half, centre + half
            for r in range((2 * half - 1) // 2 + 1):
                theta = 1.0 if r >= abs(half - k) else 0.0
                assert cor_between_balls(model, i, j, r) == theta

    def test_bell_pair_inside_one_ball_is_uncorrelated(self):
        model = CorModel.bell_pair(10, 12)
        # both pair members inside the left ball
        assert cor_between_balls(model, 11, 30, 5) == 0.0
        # one member in a ball, partner outside both
        assert cor_between_balls(model, 10, 30, 0) == 0.0

    def test_power_law_worst_pair_value(self):
        model = CorModel.power_law(1.0, 2.0)
        assert cor_between_balls(model, 0, 20, 5) == pytest.approx(0.01, abs=1e-16)

    def test_power_law_caps_at_one(self):
        model = CorModel.power_law(50.0, 1.0)
        assert cor_between_balls(model, 0, 4, 1) == 1.0

    def test_exp_clustered_value(self):
        model = CorModel.exp_clustered(1.0, 2.0)
        expected = math.exp(-5.0 / 2.0)
        assert cor_between_balls(model, 0, 9, 2) == pytest.approx(expected, rel=1e-15)

    def test_zero_amplitude_power_law_equals_product(self):
        zero = CorModel.power_law(0.0, 2.0)
        for i, j, r in ((0, 11, 3), (5, 6, 0), (2, 30, 13)):
            assert cor_between_balls(zero, i, j, r) == 0.0

    def test_overlapping_balls_rejected(self):
        with pytest.raises(ValueError):
            cor_between_balls(CorModel.product(), 0, 10, 5)
        with pytest.raises(ValueError):
            cor_between_balls(CorModel.product(), 4, 4, 0)


@st.composite
def ball_geometries(draw):
    i = draw(st.integers(min_value=0, max_value=40))
    dist = draw(st.integers(min_value=1, max_value=60))
    r = draw(st.integers(min_value=0, max_value=max(0, (dist - 1) // 2)))
    return i, i + dist, r


class TestMonotonicity:
    @given(
        ball_geometries(),
        st.sampled_from([
            CorModel.product(),
            CorModel.bell_pair(20, 34),
            CorModel.power_law(0.8, 2.0),
            CorModel.exp_clustered(1.3, 4.0),
        ]),
    )
    def test_nondecreasing_in_radius(self, geom, model):
        i, j, r = geom
        if r + 1 > (abs(i - j) - 1) // 2:
            return
        assert cor_between_balls(model, i, j, r + 1) >= cor_between_balls(model, i, j, r)

    @given(ball_geometries())
    def test_values_lie_in_unit_interval(self, geom):
        i, j, r = geom
        for model in (
            CorModel.bell_pair(18, 36),
            CorModel.power_law(7.0, 1.5),
            CorModel.exp_clustered(9.0, 2.0),
        ):
            assert 0.0 <= cor_between_balls(model, i, j, r) <= 1.0

    def test_bell_flips_at_most_once_as_r_grows(self):
        model = CorModel.bell_pair(8, 26)
        dist = 20
        i, j = 7, 27
        vals = [cor_between_balls(model, i, j, r) for r in range((dist - 1) // 2 + 1)]
        assert set(vals) <= {0.0, 1.0}
        flips = sum(1 for a, b in zip(vals, vals[1:]) if a != b)
        assert flips <= 1
