import dataclasses
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from sneakernet.pipeline_qldpc import (
    Scenario,
    evaluate,
    stage_lfrs,
    stage_spec,
    storage_and_swap_lfrs,
)
from sneakernet.qec_models import PAPER_DEFAULTS, PAPER_IDLING, HgpConfig, ThresholdWarning
from sneakernet.solvers import transport_slope

import oracle

PAPER = Scenario()


def test_defaults_are_the_table_operating_point():
    assert PAPER.code.n_m == 60_000
    assert PAPER.T_3 == 5400
    assert (PAPER.S, PAPER.truck_capacity_qubits, PAPER.r_e) == (5, 1_000_000, 2300)
    assert (PAPER.R_h, PAPER.C_m) == (150, 2_000_000)
    assert PAPER.params.p_g_base == 0.001


def test_loading_stages_at_paper_point():
    s = stage_lfrs(PAPER)
    assert s.T_2 == pytest.approx(7544.8698606085, rel=1e-10)
    assert s.T_4 == pytest.approx(7546.3095667004, rel=1e-10)
    assert s.R_2 == pytest.approx(2.221800072604e-2, rel=1e-10)
    assert s.R_4 == pytest.approx(1.110900036302e-2, rel=1e-10)
    assert s.R_3 == pytest.approx(8.5226582858116e-4, rel=1e-10)


def test_zero_transport_has_no_transport_failures():
    assert stage_lfrs(PAPER.replace(T_3=0)).R_3 == 0


def test_storage_stages():
    sw = storage_and_swap_lfrs(PAPER, 20491.179427309)
    assert sw.R_store == pytest.approx(6.4681229678595e-3, rel=1e-10)
    assert sw.R_unload == pytest.approx(2.221800072604e-2, rel=1e-10)
    assert storage_and_swap_lfrs(PAPER, 0).R_store == 0
    with pytest.raises(ValueError):
        storage_and_swap_lfrs(PAPER, -1)


@pytest.mark.parametrize("n_m", [10_000, 60_000, 200_000])
def test_bell_measurement_formula(n_m):
    sc = PAPER.replace(code=HgpConfig(n_m))
    sw = storage_and_swap_lfrs(sc, 1000)
    rs = float(oracle.r_s(mpf(n_m) ** 0.5 / 5, "0.001"))
    assert sw.R_BM == pytest.approx(4 * (n_m**0.5 / 5) * rs, rel=1e-12)


def test_bell_measurement_negligible_at_scale():
    # 4 d R_S drops below 1e-20 from about 33,265 qubits (mpmath root of the oracle)
    assert storage_and_swap_lfrs(PAPER.replace(code=HgpConfig(10_000)), 0).R_BM == pytest.approx(1.79366e-11, rel=1e-5)
    for n_m in (33_300, 60_000, 200_000):
        assert storage_and_swap_lfrs(PAPER.replace(code=HgpConfig(n_m)), 0).R_BM < 1e-20


@pytest.mark.parametrize("n_m, T_3, expected", [(60_000, 5400, 0.097045667758171), (53_000, 3600, 0.116806280196)])
def test_total_failure(n_m, T_3, expected):
    bd = evaluate(PAPER.replace(code=HgpConfig(n_m), T_3=T_3))
    assert bd.R_tot == pytest.approx(expected, rel=1e-10)
    assert bd.feasible
    assert bd.warnings == ()


def test_full_breakdown_matches_oracle():
    bd = evaluate(PAPER).as_dict()
    ref = oracle.qldpc(60_000, 5400)
    for key in ("R_0", "R_1", "R_2", "R_3", "R_4", "R_net", "R_store", "R_unload", "R_BM",
                "R_tot", "T_2", "T_4", "T_tot"):
        assert bd[key] == pytest.approx(float(ref[key]), rel=1e-10), key


def test_per_patch_mode_matches_oracle():
    bd = evaluate(PAPER.replace(params=PAPER_IDLING))
    ref = oracle.qldpc(60_000, 5400, p_of=lambda n: mpf("0.0008") * oracle.idling(n))
    assert bd.R_tot == pytest.approx(float(ref["R_tot"]), rel=1e-10)
    assert bd.F_final == pytest.approx(0.933, abs=1e-3)


def test_identities_hold_exactly():
    bd = evaluate(PAPER)
    assert bd.R_net == bd.R_0 + bd.R_1 + bd.R_2 + bd.R_3 + bd.R_4
    assert bd.T_tot == bd.T_2 + bd.T_3 + bd.T_4
    assert bd.R_tot == bd.R_BM + bd.R_unload + bd.R_store + 2 * bd.R_net
    assert bd.F_final == 1 - bd.R_tot
    assert bd.M_t == pytest.approx(5400 / float(oracle.t_cyc(60_000)), rel=1e-12)
    assert bd.M_tot_c == pytest.approx(bd.T_tot / float(oracle.t_cyc(60_000)), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(n_m=st.floats(1_000, 1e6), T_3=st.floats(0, 1e5), p=st.floats(1e-5, 5e-3))
def test_identities_property(n_m, T_3, p):
    sc = Scenario(code=HgpConfig(n_m), params=PAPER_DEFAULTS.replace(p_g_base=p), T_3=T_3)
    bd = evaluate(sc)
    assert bd.R_net == bd.R_0 + bd.R_1 + bd.R_2 + bd.R_3 + bd.R_4
    assert bd.T_tot == bd.T_2 + bd.T_3 + bd.T_4
    assert bd.R_tot == bd.R_BM + bd.R_unload + bd.R_store + 2 * bd.R_net
    assert bd.F_final == 1 - bd.R_tot
    for name in ("R_0", "R_1", "R_2", "R_3", "R_4", "R_store", "R_unload", "R_BM"):
        assert getattr(bd, name) >= 0
    assert bd.feasible == (bd.R_tot < 1)


def test_at_threshold_is_infeasible():
    sc = PAPER.replace(params=PAPER_DEFAULTS.replace(p_g_base=0.006))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ThresholdWarning)
        bd = evaluate(sc)
    assert bd.R_tot > 10
    assert not bd.feasible
    assert any("HGP threshold" in w for w in bd.warnings)
    assert any("R_tot" in w for w in bd.warnings)


def test_large_stage_rate_warns():
    bd = evaluate(PAPER.replace(code=HgpConfig(20_000)))
    assert any(w.startswith("R_store=") for w in bd.warnings)
    assert bd.feasible


def test_transport_slope_by_finite_difference():
    a, b = evaluate(PAPER.replace(T_3=3000)), evaluate(PAPER.replace(T_3=9000))
    assert (b.R_tot - a.R_tot) / 6000 == pytest.approx(transport_slope(PAPER.code), rel=1e-9)
    assert transport_slope(PAPER.code) == pytest.approx(float(oracle.qldpc(60_000, 0)["slope"]), rel=1e-12)


def test_rtot_decreasing_in_patch_size():
    grid = np.linspace(10_000, 200_000, 200)
    for T_3 in (3600, 5400, 10800):
        r = [evaluate(PAPER.replace(code=HgpConfig(n), T_3=T_3)).R_tot for n in grid]
        assert np.all(np.diff(r) < 0)


def test_zero_rates_limit():
    sc = PAPER.replace(params=PAPER_DEFAULTS.replace(p_g_base=1e-300))
    bd = evaluate(sc)
    assert bd.R_tot == 0
    assert bd.F_final == 1


def test_stage_spec_sums_to_total():
    for sc in (PAPER, PAPER.replace(code=HgpConfig(25_000), T_3=10_800), PAPER.replace(params=PAPER_IDLING)):
        spec = stage_spec(sc)
        assert sum(n * p for n, p in spec) == pytest.approx(evaluate(sc).R_tot, rel=1e-12)


@pytest.mark.parametrize("change", [
    {"T_3": -1}, {"S": 0}, {"S": 2.5}, {"r_e": 0}, {"R_h": -1}, {"C_m": -1},
    {"truck_capacity_qubits": 10_000},
])
def test_scenario_validation(change):
    with pytest.raises(ValueError):
        dataclasses.replace(PAPER, **change)
