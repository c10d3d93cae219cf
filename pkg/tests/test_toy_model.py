import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxlab import toy_model as tm

from oracles import grid_feasible, margin_separated_tables


class TestAngleModel:
    def test_pr_targets(self):
        m = tm.pr_toy_model()
        assert m.correlation("A", "B") == 1.0
        assert m.correlation("A", "B'") == 1.0
        assert m.correlation("A'", "B") == 1.0
        assert m.correlation("A'", "B'") == -1.0
        assert np.array_equal(m.targets(), [[1, 1], [1, -1]])

    def test_chsh_is_four(self):
        assert tm.chsh_from_model(tm.pr_toy_model()) == 4.0

    def test_missing_angle(self):
        with pytest.raises(tm.MissingAngle):
            tm.pr_toy_model().E(math.pi / 3)

    def test_no_interpolation_but_tolerant_lookup(self):
        m = tm.pr_toy_model()
        assert m.E(math.pi / 4 + 1e-13) == 1.0
        with pytest.raises(tm.MissingAngle):
            m.E(math.pi / 4 + 1e-6)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            tm.AngleCorrelationModel({0.0: 1.5})


class TestFeasibility:
    def test_pr_sign_certificate(self):
        res = tm.separable_feasibility([[1, 1], [1, -1]])
        assert isinstance(res, tm.Infeasible)
        assert res.test == "sign" and res.value == -1.0

    def test_product_feasible(self):
        u, v = np.array([0.5, -0.8]), np.array([0.9, 0.3])
        res = tm.separable_feasibility(np.outer(u, v))
        assert isinstance(res, tm.Feasible)
        assert res.residual <= 1e-12
        assert all(abs(x) <= 1 for x in res.u + res.v)

    def test_magnitude_certificate(self):
        res = tm.separable_feasibility([[0.5, 0.5], [0.5, 1.0]])
        assert isinstance(res, tm.Infeasible) and res.test == "magnitude"
        assert res.value == pytest.approx(0.25)

    def test_zero_targets_with_negative_sign_product(self):
        # u = (0, 1), v = (1, -1) solves this although a naive sign test would reject
        res = tm.separable_feasibility([[0, 0], [1, -1]])
        assert isinstance(res, tm.Feasible)

    def test_zero_pattern_infeasible(self):
        # zero on the diagonal only: no zero factor can cover exactly those two cells
        res = tm.separable_feasibility([[0, 1], [1, 0]])
        assert isinstance(res, tm.Infeasible) and res.test == "zero-pattern"

    def test_all_zero(self):
        assert isinstance(tm.separable_feasibility(np.zeros((2, 2))), tm.Feasible)

    def test_out_of_range_targets(self):
        with pytest.raises(ValueError):
            tm.FeasibilitySystem(np.array([[2, 0], [0, 0]]))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1, 1), min_size=4, max_size=4))
    def test_feasible_products_always_found(self, uv):
        t = np.outer(uv[:2], uv[2:])
        res = tm.separable_feasibility(t)
        assert isinstance(res, tm.Feasible)
        assert tm.FeasibilitySystem(t).residual(res.u, res.v) <= 1e-9

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1, 1), min_size=4, max_size=4))
    def test_verdict_consistent_with_witness(self, ts):
        t = np.array(ts).reshape(2, 2)
        res = tm.separable_feasibility(t)
        if isinstance(res, tm.Feasible):
            assert tm.FeasibilitySystem(t).residual(res.u, res.v) <= 1e-9
        elif res.test == "sign":
            assert np.prod(np.sign(t)) < 0 and np.all(t != 0)
        elif res.test == "magnitude":
            assert abs(t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]) > 1e-9
        else:
            assert np.any(np.abs(t) <= 1e-9)

    def test_agrees_with_grid_oracle(self):
        tables = margin_separated_tables(100, seed=23)
        for t in tables:
            res = tm.separable_feasibility(t)
            assert (res.verdict == "Feasible") == grid_feasible(t), t


class TestReport:
    def test_default_report(self):
        rep = tm.paper_inconsistency_report()
        assert rep.verdict == "Infeasible"
        assert rep.chsh == 4.0
        assert rep.targets == (1.0, 1.0, 1.0, -1.0)
        assert len(rep.argument) == 3

    def test_render_and_dict(self):
        rep = tm.paper_inconsistency_report()
        text = rep.render()
        assert "Infeasible" in text and "<A'B'>" in text
        d = rep.to_dict()
        assert d["certificate"]["test"] == "sign"
        assert len(d["equations"]) == 4

    def test_consistent_model_is_feasible(self):
        m = tm.AngleCorrelationModel({math.pi / 4: 0.5, 3 * math.pi / 4: 0.5})
        rep = tm.paper_inconsistency_report(m)
        assert rep.verdict == "Feasible"
        assert rep.argument == ()
