import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lseigen.duru_kleinert import (
    ExponentialMapWell,
    PseudoEnergyProblem,
    SquareMapWell,
    _PseudoEvaluator,
    cutoff_sensitivity,
    pseudo_energy_curve,
    solve_pseudo,
    unique_energies,
)
from lseigen.kernel import assemble_kernel

COULOMB = PseudoEnergyProblem("coulomb", "corrected")
PRINTED = PseudoEnergyProblem("coulomb", "printed")
VDW = PseudoEnergyProblem("exp", alpha=3.0, beta=5.0)


@pytest.fixture(scope="module")
def coulomb_hits():
    notes = []
    hits = solve_pseudo(COULOMB, COULOMB.default_grid(), (0.01, 0.5), 100, diagnostics=notes)
    return hits, notes


@pytest.fixture(scope="module")
def vdw_hits():
    return solve_pseudo(VDW, VDW.default_grid(), (0.001, 0.1), 100)


def test_square_map_values():
    y = np.array([-2.0, -0.5, 0.5, 1.0])
    assert np.allclose(SquareMapWell(0.25, False).values(y), y**2)
    assert np.allclose(SquareMapWell(0.25, True).values(y), y**2 + 0.75 / y**2)
    assert SquareMapWell(0.25, True).singular
    assert not SquareMapWell(0.25, False).singular


def test_exponential_map_values():
    y = np.array([-1.0, 0.0, 2.0])
    a = np.abs(y)
    want = -5.0 * np.exp(-a) + 0.02 * np.exp(2 * a)
    assert np.allclose(ExponentialMapWell(0.02, 3.0, 5.0).values(y), want)


def test_problem_validation():
    assert COULOMB.target == 4.0 and VDW.target == 0.0
    with pytest.raises(ValueError):
        PseudoEnergyProblem("other")
    with pytest.raises(ValueError):
        PseudoEnergyProblem("coulomb", "guessed")
    with pytest.raises(ValueError):
        PseudoEnergyProblem("exp", alpha=1.5)
    with pytest.raises(ValueError):
        PseudoEnergyProblem("exp", beta=0.0)
    with pytest.raises(ValueError):
        COULOMB.potential(0.0)
    with pytest.raises(ValueError):
        pseudo_energy_curve(COULOMB, COULOMB.default_grid(4.0, 0.1), 0.2, 0.1, 10)


def test_default_grids():
    g = COULOMB.default_grid()
    assert 0.0 not in g.points
    assert g.n_points == 800
    g = VDW.default_grid()
    assert g.n_points == 801 and g.x_max == 8.0


def test_zero_target_kernel_is_linear():
    g = VDW.default_grid(2.0, 0.25)
    y = g.points
    k = assemble_kernel(g, VDW.target, "decaying").entries
    assert np.allclose(k, np.abs(y[:, None] - y[None, :]) / 2, atol=1e-14)


def test_coulomb_levels(coulomb_hits):
    hits, _ = coulomb_hits
    accepted = unique_energies([h for h in hits if h.cross_check_passed])
    # the window reaches down to n = 3; deeper levels fail the stationarity check
    assert accepted == pytest.approx([-1 / 4, -1 / 16, -1 / 36], abs=1e-3)


def test_energies_negative_and_inside_bracket(coulomb_hits, vdw_hits):
    for hit in coulomb_hits[0] + vdw_hits:
        assert hit.energy == -hit.omega < 0
        lo, hi = hit.bracket
        assert lo <= hit.omega <= hi


def test_crossing_direction(coulomb_hits, vdw_hits):
    # eps rises through the target with omega, i.e. falls with E = -omega
    for problem, hits in ((COULOMB, coulomb_hits[0]), (VDW, vdw_hits)):
        for hit in hits:
            ev = _PseudoEvaluator(problem, problem.default_grid(), hit.parity)
            lo, hi = hit.bracket
            assert ev(lo) < problem.target < ev(hi)


def test_falling_crossings_reported(coulomb_hits):
    _, notes = coulomb_hits
    assert any(n[0] == "falling-in-omega" for n in notes)


def test_printed_variant_follows_oscillator_levels():
    hits = solve_pseudo(PRINTED, PRINTED.default_grid(), (0.1, 0.5), 60)
    omegas = sorted({round(h.omega, 3) for h in hits})
    assert omegas == pytest.approx([4 / 25, 4 / 9], abs=1e-3)


def test_van_der_waals_ground_state(vdw_hits):
    accepted = unique_energies([h for h in vdw_hits if h.cross_check_passed])
    assert accepted[0] == pytest.approx(-0.0191353, abs=1e-3)
    assert accepted[0] == pytest.approx(-0.0191353, rel=0.1)


def test_empty_window():
    assert solve_pseudo(COULOMB, COULOMB.default_grid(), (0.3, 0.5), 20) == []


def test_cutoff_table_shape():
    rows = cutoff_sensitivity(VDW, (0.015, 0.025), (4.0, 6.0), h=0.04, steps=10)
    assert [L for L, _ in rows] == [4.0, 6.0]
    for _, energies in rows:
        assert energies and energies[0] == pytest.approx(-0.0191353, rel=0.1)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, -1e-3), min_size=1, max_size=8))
def test_unique_energies_sorted_and_separated(values):
    class H:
        def __init__(self, e):
            self.energy = e

    out = unique_energies([H(v) for v in values])
    assert out == sorted(out)
    assert all(b - a > 1e-4 for a, b in zip(out, out[1:]))
    for v in values:
        assert min(abs(v - e) for e in out) <= 1e-4 * len(values)
