"""Planar tearing solver: elastic solves, prefix sweep, alternate minimization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohesivefrac.laws import CohesiveLaw, LawKind, plain_laws, rescale_laws
from cohesivefrac.planar2d import (
    AMResult,
    Field2D,
    Grid2D,
    PlanarNonconvergence,
    alternate_minimize,
    cellwise_bulk,
    evolve_tearing,
    prefix_crack_sweep,
    solve_elastic,
    tearing_gap_ladder,
    write_field,
)

DUGDALE = CohesiveLaw(LawKind.DUGDALE, 2.0)

# Tied elastic compliance of the half-open crack, frozen from the first
# n = 64 run; guards the discretization against silent changes.
HALF_CRACK_BULK_64 = 0.256390567908076


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid2D(7)
    with pytest.raises(ValueError):
        Grid2D(6)
    with pytest.raises(ValueError):
        Grid2D(8, np.zeros(5))
    with pytest.raises(ValueError):
        Grid2D(8, -np.ones(8))


def test_tied_solve_is_linear_profile():
    f = solve_elastic(Grid2D(16), [], 0.3)
    ys = np.linspace(0.0, 0.5, 9)
    assert np.abs(f.lower - 0.3 * (2.0 * ys - 1.0)[:, None]).max() < 1e-12
    assert f.edge_bulk() == pytest.approx(0.36, abs=1e-12)
    assert cellwise_bulk(f) == pytest.approx(0.36, abs=1e-12)
    assert np.all(f.nodal_jumps() == 0.0)


def test_full_tear_blocks_are_constant():
    t = 0.7
    f = solve_elastic(Grid2D(16), range(16), t)
    assert np.abs(f.lower + t).max() < 1e-12
    assert np.abs(f.upper - t).max() < 1e-12
    assert f.edge_bulk() < 1e-24
    assert np.abs(f.nodal_jumps() - 2.0 * t).max() < 1e-12


def test_antisymmetry_of_tearing():
    f = solve_elastic(Grid2D(64), range(32), 0.3)
    assert np.abs(f.lower + f.upper[::-1]).max() < 1e-12


def test_closed_edges_tie_exactly():
    f = solve_elastic(Grid2D(16), range(8), 0.3)
    j = f.nodal_jumps()
    assert np.all(j[9:] == 0.0)
    assert np.all(np.abs(j[:8]) > 0.0)


def test_max_principle():
    f = solve_elastic(Grid2D(16), [2, 3, 11], 0.5)
    for block in (f.lower, f.upper):
        assert block.min() >= -0.5 - 1e-12
        assert block.max() <= 0.5 + 1e-12


def test_half_crack_regression_value():
    f = solve_elastic(Grid2D(64), range(32), 0.3)
    assert f.edge_bulk() == pytest.approx(HALF_CRACK_BULK_64, rel=1e-9)


def test_refinement_changes_bulk_mildly():
    b64 = solve_elastic(Grid2D(64), range(32), 0.3).edge_bulk()
    b128 = solve_elastic(Grid2D(128), range(64), 0.3).edge_bulk()
    assert abs(b64 - b128) / b128 < 0.05


def test_open_edge_validation():
    with pytest.raises(ValueError):
        solve_elastic(Grid2D(8), [8], 0.1)


@settings(max_examples=20, deadline=None)
@given(
    st.sets(st.integers(min_value=0, max_value=11), max_size=12),
    st.floats(min_value=0.05, max_value=2.0),
)
def test_any_pattern_max_principle_and_ties(open_edges, t):
    grid = Grid2D(12)
    f = solve_elastic(grid, open_edges, t)
    for block in (f.lower, f.upper):
        assert block.min() >= -t - 1e-10
        assert block.max() <= t + 1e-10
    j = f.nodal_jumps()
    for i in range(13):
        incident = {e for e in (i - 1, i) if 0 <= e < 12}
        if incident and not incident.issubset(open_edges):
            assert j[i] == 0.0


class TestSweep:
    def test_zero_load_keeps_bar_whole(self):
        res = prefix_crack_sweep(Grid2D(16), 0.0, plain_laws(DUGDALE), mode="griffith")
        assert res.best_length == 0.0

    def test_strong_load_tears_completely(self):
        res = prefix_crack_sweep(Grid2D(16), 3.0, plain_laws(DUGDALE), mode="griffith")
        assert res.best_length == 1.0
        assert res.total[-1] == pytest.approx(1.0, abs=1e-12)

    def test_compliance_monotone(self):
        for mode in ("griffith", "cohesive"):
            res = prefix_crack_sweep(Grid2D(16), 0.8, plain_laws(DUGDALE), mode=mode)
            assert np.all(np.diff(res.bulk) <= 1e-12)

    def test_saturated_memory_surface_is_flat(self):
        psi = np.zeros(16)
        psi[:4] = 0.6  # beyond the Dugdale saturation opening 0.5
        mem = prefix_crack_sweep(Grid2D(16, psi), 0.9, plain_laws(DUGDALE))
        fresh = prefix_crack_sweep(Grid2D(16), 0.9, plain_laws(DUGDALE))
        # same elastic problem, so bulk columns agree; the memory edges
        # pay the sunk phi(psi) = 1 from length 0 on and never more
        assert np.allclose(mem.bulk, fresh.bulk, atol=1e-12)
        assert mem.surface[0] == pytest.approx(4 / 16, abs=1e-12)
        assert mem.surface[4] == pytest.approx(4 / 16, abs=1e-12)
        assert np.all(mem.surface >= fresh.surface - 1e-12)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            prefix_crack_sweep(Grid2D(8), 0.1, plain_laws(DUGDALE), mode="both")


class TestAlternateMinimize:
    def test_small_load_matches_tied_elastic(self):
        grid = Grid2D(16)
        res = alternate_minimize(grid, None, 0.05, plain_laws(DUGDALE))
        ref = solve_elastic(grid, [], 0.05)
        assert np.abs(res.field.lower - ref.lower).max() < 1e-8
        assert np.abs(res.field.upper - ref.upper).max() < 1e-8
        assert np.abs(res.nodal_jumps).max() < 1e-8

    def test_stays_at_full_tear(self):
        grid = Grid2D(16)
        t = 3.0
        res = alternate_minimize(grid, None, t, plain_laws(DUGDALE),
                                 start_jumps=np.full(17, 2.0 * t))
        assert res.field.edge_bulk() < 1e-12
        assert res.energies[-1] == pytest.approx(1.0, abs=1e-12)

    def test_energy_nonincreasing_per_half_step(self):
        psi = np.zeros(16)
        psi[:8] = 0.1
        res = alternate_minimize(Grid2D(16), psi, 0.5, plain_laws(DUGDALE))
        assert np.all(np.diff(res.energies) <= 1e-9)

    def test_nonconvergence_carries_last_energy(self):
        with pytest.raises(PlanarNonconvergence) as err:
            alternate_minimize(Grid2D(16), None, 1.5, plain_laws(DUGDALE),
                               start_jumps=np.linspace(0.0, 1.0, 17),
                               max_iters=1)
        assert err.value.last_energy > 0.0
        assert err.value.iterations == 1

    def test_psi_validation(self):
        with pytest.raises(ValueError):
            alternate_minimize(Grid2D(8), -np.ones(8), 0.1, plain_laws(DUGDALE))
        with pytest.raises(ValueError):
            alternate_minimize(Grid2D(8), None, 0.1, plain_laws(DUGDALE),
                               start_jumps=np.zeros(3))


class TestTearing:
    def test_memory_never_shrinks(self):
        psi = np.zeros(16)
        psi[:8] = 0.1
        steps = evolve_tearing(Grid2D(16, psi), [0.2, 0.5, 0.9], plain_laws(DUGDALE))
        for a, b in zip(steps, steps[1:]):
            assert np.all(b.psi >= a.psi - 1e-15)

    def test_gap_ladder_shrinks(self):
        gaps = tearing_gap_ladder(DUGDALE, 0.25, [1.0, 100.0, 1000.0], n=16,
                                  crack_length=0.5, gamma=0.1,
                                  times=[0.3, 0.6])
        assert np.all(np.diff(gaps) <= 1e-6)
        assert gaps[-1] < 0.1


def test_field_text_roundtrip(tmp_path):
    f = solve_elastic(Grid2D(8), range(4), 0.25)
    path = tmp_path / "field.txt"
    write_field(f, path)
    data = np.loadtxt(path)
    assert data.shape == (10, 9)
    assert np.abs(data[:5][::-1] - f.upper).max() < 1e-12
    assert np.abs(data[5:][::-1] - f.lower).max() < 1e-12
