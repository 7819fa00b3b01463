import pytest

from coiso.errors import ArgumentError, NotClosedError
from coiso.foliation import Connection, FoliatedForm, d_F0, gauge_normalize
from coiso.fourier import SparseFourierSeries
from coiso.haefliger import coboundary_test, regular_cover_reduce
from coiso.foliation import l2
from coiso.obstruction import first_obstruction, mc_continue, mc_series_residuals
from coiso.sampling import random_closed_one_form, random_series
from coiso.solver import DIVERGENT, RESONANCE, SOLVED, witness_liouville, witness_rational


def test_first_obstruction_rational(two_thirds):
    res = first_obstruction(witness_rational(2, 3), two_thirds)
    assert res.report.status == RESONANCE and res.report.resonant == [-3, 3]


def test_first_obstruction_liouville(liouville):
    res = first_obstruction(witness_liouville(liouville, 3), liouville)
    assert res.report.status == DIVERGENT


def test_first_obstruction_golden(golden, rng):
    for _ in range(5):
        gamma = random_closed_one_form(rng, golden)
        assert first_obstruction(gamma, golden).report.status == SOLVED
        g, _ = gauge_normalize(gamma, golden)
        assert first_obstruction(g, golden).report.status == SOLVED


def test_first_obstruction_requires_closed(golden):
    bad = FoliatedForm.one_form(SparseFourierSeries.mode((0, 0, 1)), SparseFourierSeries.zero())
    with pytest.raises(NotClosedError):
        first_obstruction(bad, golden)


def test_continue_zero(golden):
    cont = mc_continue(FoliatedForm.zero(1), golden, K=4)
    assert cont.succeeded and all(c.norm() == 0 for c in cont.solution.coefficients)


def test_continue_golden(golden, rng):
    for conn in (Connection.flat(golden), Connection.cutoff(golden)):
        cont = mc_continue(random_closed_one_form(rng, golden), golden, conn, K=4)
        assert cont.succeeded and cont.solution.order == 4
        assert max(cont.residuals) <= 1e-8
        assert max(mc_series_residuals(cont.solution.coefficients, golden, conn)) <= 1e-8
        for g in cont.solution.coefficients:
            assert (g.f - g.f.average_00()).norm() <= 1e-12


def test_continue_rational_fails_at_order_two(two_thirds):
    cont = mc_continue(witness_rational(2, 3).gamma, two_thirds, K=4)
    assert cont.failed_order == 2 and cont.report.status == RESONANCE


def test_continue_liouville_fails_at_order_two(liouville):
    cont = mc_continue(witness_liouville(liouville, 3).gamma, liouville, K=3)
    assert cont.failed_order == 2 and cont.report.status == DIVERGENT


def test_continue_argument_checks(golden):
    with pytest.raises(ArgumentError):
        mc_continue(FoliatedForm.zero(1), golden, K=1)
    with pytest.raises(ArgumentError):
        mc_series_residuals([FoliatedForm.zero(1)] * 6, golden, Connection.flat(golden), samples=32)


def test_kuranishi_invariance(golden, rng):
    conn = Connection.cutoff(golden)
    for _ in range(5):
        gamma = random_closed_one_form(rng, golden, pairs=3)
        shifted = gamma + d_F0(FoliatedForm.function(random_series(rng, 3, 3)), golden)
        diff = regular_cover_reduce(l2(shifted, shifted, conn), golden) - regular_cover_reduce(
            l2(gamma, gamma, conn), golden
        )
        assert coboundary_test(diff).in_span
