import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohesivefrac.laws import (
    BulkDensity,
    CohesiveLaw,
    LawKind,
    bulk_eval,
    phi_eval,
    plain_laws,
    relax_bulk_oracle,
    rescale_laws,
)

LAW_SLOPES = [0.5, 2.0, 10.0]


def dugdale(a=2.0):
    return CohesiveLaw(LawKind.DUGDALE, a)


def exponential(a=2.0):
    return CohesiveLaw(LawKind.EXPONENTIAL, a)


def test_phi_eval_pinned_values():
    assert phi_eval(dugdale(2.0), 0.25) == 0.5
    assert phi_eval(dugdale(2.0), 0.0) == 0.0
    assert phi_eval(exponential(2.0), 0.0) == 0.0
    assert phi_eval(exponential(2.0), 1.0) == pytest.approx(1.0 - math.exp(-2.0), abs=1e-15)


def test_phi_rejects_negative_opening():
    with pytest.raises(ValueError):
        phi_eval(dugdale(), -0.1)
    with pytest.raises(ValueError):
        phi_eval(exponential(), np.array([0.2, -1e-9]))


def test_law_requires_positive_finite_slope():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            CohesiveLaw(LawKind.DUGDALE, bad)


@pytest.mark.parametrize("kind", list(LawKind))
@pytest.mark.parametrize("a", LAW_SLOPES)
def test_phi_concave_increasing_bounded(kind, a):
    law = CohesiveLaw(kind, a)
    s = np.linspace(0.0, 10.0 / a, 1000)
    v = law(s)
    assert np.all(np.diff(v) >= -1e-14)
    assert np.all(v >= 0.0) and np.all(v <= 1.0)
    # concavity via second differences on the uniform grid
    d2 = np.diff(v, 2)
    assert np.max(d2) <= 1e-10
    # phi(s) <= a*s with equality slope at the origin
    assert np.all(v <= a * s + 1e-12)


@pytest.mark.parametrize("a", LAW_SLOPES)
def test_phi_reaches_one(a):
    assert phi_eval(CohesiveLaw(LawKind.DUGDALE, a), 1.0 / a) == 1.0
    assert phi_eval(CohesiveLaw(LawKind.EXPONENTIAL, a), 21.0 / a) >= 1.0 - 1e-9


def test_bulk_eval_pinned_values():
    f = BulkDensity(2.0)
    assert bulk_eval(f, 0.5) == 0.25
    assert bulk_eval(f, 1.0) == 1.0
    assert bulk_eval(f, 2.0) == 3.0
    assert bulk_eval(f, -2.0) == 3.0


@pytest.mark.parametrize("a", LAW_SLOPES)
def test_bulk_density_shape(a):
    f = BulkDensity(a)
    xi = np.linspace(-5.0 * a, 5.0 * a, 2001)
    v = f(xi)
    assert np.all(v <= xi**2 + 1e-12)
    assert np.all(v >= a * np.abs(xi) - a * a / 4.0 - 1e-12)
    # C1 match across the threshold
    thr = f.threshold
    eps = 1e-7
    assert f(thr + eps) - f(thr - eps) == pytest.approx(2.0 * thr * 2 * eps, abs=1e-9)
    assert f.deriv(thr) == pytest.approx(a, abs=1e-12)
    assert f.deriv(10.0 * a) == a
    assert f.deriv(-10.0 * a) == -a


@given(xi=st.floats(-50.0, 50.0), a=st.floats(0.1, 20.0))
@settings(max_examples=200, deadline=None)
def test_bulk_derivative_is_clipped_gradient(xi, a):
    f = BulkDensity(a)
    assert f.deriv(xi) == pytest.approx(np.clip(2.0 * xi, -a, a), abs=1e-12)


class TestRescale:
    def test_rejects_small_h_and_bad_alpha(self):
        with pytest.raises(ValueError):
            rescale_laws(dugdale(), 2.0, 0.5, 0.5)
        for alpha in (0.0, -1.0, 2.0, 2.5):
            with pytest.raises(ValueError):
                rescale_laws(dugdale(), 2.0, 4.0, alpha)

    def test_identity_at_h_one(self):
        rl = rescale_laws(exponential(2.0), 2.0, 1.0, 0.5)
        s = np.linspace(0.0, 3.0, 50)
        np.testing.assert_allclose(rl.phi(s), exponential(2.0)(s), rtol=0, atol=1e-15)
        assert rl.bulk.a == 2.0
        assert (rl.bulk_weight, rl.surface_weight, rl.cantor_weight) == (1.0, 1.0, 2.0)

    def test_pinned_values_half_exponent(self):
        rl = rescale_laws(exponential(2.0), 2.0, 4.0, 0.5)
        assert rl.phi(0.5) == pytest.approx(1.0 - math.exp(-2.0), abs=1e-15)
        assert rl.bulk(3.0) == pytest.approx(8.0, abs=1e-12)
        assert rl.bulk.threshold == 2.0

    def test_dugdale_large_h(self):
        rl = rescale_laws(dugdale(2.0), 2.0, 100.0, 0.5)
        assert rl.phi(0.02) == pytest.approx(0.4, abs=1e-14)
        assert rl.phi(0.05) == 1.0
        assert rl.bulk.threshold == 10.0

    def test_regime_weights(self):
        rl = rescale_laws(dugdale(2.0), 2.0, 16.0, 0.25)
        assert rl.bulk_weight == 1.0
        assert rl.surface_weight == pytest.approx(4.0)
        assert rl.cantor_weight == pytest.approx(16.0)
        rl = rescale_laws(dugdale(2.0), 2.0, 16.0, 0.75)
        assert rl.bulk_weight == pytest.approx(4.0)
        assert rl.surface_weight == 1.0
        assert rl.cantor_weight == pytest.approx(16.0)
        rl = rescale_laws(dugdale(2.0), 2.0, 9.0, 0.5)
        assert rl.cantor_weight == pytest.approx(6.0)

    @given(
        s=st.floats(0.0, 5.0),
        h=st.floats(1.0, 1e4),
        alpha=st.floats(0.05, 1.95),
        a=st.floats(0.2, 10.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_phi_h_is_dilated_base_law(self, s, h, alpha, a):
        for kind in LawKind:
            law = CohesiveLaw(kind, a)
            rl = rescale_laws(law, a, h, alpha)
            assert rl.phi(s) == pytest.approx(law(h**alpha * s), rel=1e-12, abs=1e-12)

    def test_monotone_in_h_and_limits(self):
        # alpha = 1/2: f_h(xi) grows to |xi|^2 and is exact once the
        # threshold passes |xi|; phi_h grows to 1.
        law = dugdale(2.0)
        xi, s = 3.0, 0.7
        hs = [1.0, 2.0, 5.0, 9.0, 16.0, 100.0, 1e4]
        fvals = [rescale_laws(law, 2.0, h, 0.5).bulk(xi) for h in hs]
        assert all(b - a >= -1e-12 for a, b in zip(fvals, fvals[1:]))
        for h in hs:
            rl = rescale_laws(law, 2.0, h, 0.5)
            if rl.bulk.threshold >= abs(xi):
                assert abs(rl.bulk(xi) - xi**2) < 1e-6
            assert rl.bulk(xi) <= xi**2 + 1e-12
            if h**0.5 * s >= 1.0 / 2.0:
                assert rl.phi(s) == 1.0
        pvals = [rescale_laws(law, 2.0, h, 0.5).phi(s) for h in hs]
        assert all(b - a >= -1e-12 for a, b in zip(pvals, pvals[1:]))


class TestRelaxOracle:
    def test_zero_strain(self):
        assert relax_bulk_oracle(lambda x: x**2, 2.0, 0.0) == pytest.approx(0.0, abs=1e-7)

    def test_pinned_values(self):
        got = relax_bulk_oracle(lambda x: x**2, 2.0, 3.0, grid_step=1e-4)
        assert got == pytest.approx(5.0, abs=1e-3)
        got = relax_bulk_oracle(lambda x: x**2, 2.0, 0.5, grid_step=1e-4)
        assert got == pytest.approx(0.25, abs=1e-3)

    @pytest.mark.parametrize("a", LAW_SLOPES)
    def test_matches_closed_form(self, a):
        f = BulkDensity(a)
        step = 1e-3
        for xi in np.linspace(-5.0 * a, 5.0 * a, 21):
            got = relax_bulk_oracle(lambda x: x**2, a, float(xi), grid_step=step)
            assert abs(got - f(xi)) <= 2.0 * a * step

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError):
            relax_bulk_oracle(lambda x: x**2, 2.0, 1.0, grid_step=0.0)
