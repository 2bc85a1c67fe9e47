"""Sweep presets, CSV emission and the (e, f) to angle mapping."""

import io
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from xfid.errors import InfeasibleTargetError
from xfid.sweeps import (
    DEFAULT_POINTS,
    RELATION_NAMES,
    SWEEP_COLUMNS,
    SweepSpec,
    angles_from_e_f,
    csv_text,
    emit_csv,
    figure_preset,
    probe_feasible_range,
    run_sweep,
)
from xfid.xstate import coeff_e, coeff_f

QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2

# figure number -> (relation, swept variable, pinned values)
PRESET_TABLE = {
    1: ("rank2k3", "P", {"C": 0.2, "y": 0.01}),
    2: ("rank2k3", "C", {"P": 0.7, "y": 0.001}),
    3: ("rank3k1", "P", {"C": 0.2, "phi": QUARTER_PI, "psi": HALF_PI}),
    4: ("rank3k1", "C", {"P": 0.7, "phi": QUARTER_PI, "psi": HALF_PI}),
    5: ("rank3k1", "e", {"C": 0.2, "P": 0.7, "f": 0.0}),
    6: ("rank3k1", "f", {"C": 0.2, "P": 0.7, "e": 0.0}),
    7: ("rank4_xcase", "P", {"C": 0.2, "phi": QUARTER_PI, "psi": QUARTER_PI, "y": 0.0}),
    8: ("rank4_xcase", "C", {"P": 0.7, "phi": QUARTER_PI, "psi": QUARTER_PI, "y": 0.0}),
    9: ("rank4_quartic", "P", {"C": 0.2, "phi": QUARTER_PI, "psi": QUARTER_PI, "x": 0.0}),
    10: ("uhlmann_vs_e", "e", {"C": 0.2, "P": 0.7, "f": 1.0 / (2.0 * math.sqrt(2.0)), "y": 0.0}),
}


def test_preset_table():
    for figure, (relation, variable, fixed) in PRESET_TABLE.items():
        spec = figure_preset(figure, points=9)
        assert spec.relation == relation
        assert spec.sweep_variable == variable
        assert set(spec.fixed) == set(fixed)
        for key, value in fixed.items():
            assert_allclose(spec.fixed[key], value, rtol=0, atol=1e-15)
        lo, hi, points = spec.sweep_range
        assert points == 9 and lo < hi
    assert set(PRESET_TABLE[f][0] for f in PRESET_TABLE) <= set(RELATION_NAMES)
    with pytest.raises(Exception):
        figure_preset(11)


def test_presets_run_clean():
    # every preset grid point must evaluate; a skip means the pinned
    # values walked outside the feasible band the probe promised
    for figure in range(1, 11):
        result = run_sweep(figure_preset(figure, points=31))
        assert result.n_points == 31
        skips = [row for row in result.rows if row.skipped]
        assert skips == []
        assert max(row.oracle_residual for row in result.rows) < 1e-8


def test_csv_schema_and_determinism(tmp_path):
    spec = figure_preset(1, points=15)
    text_a = csv_text(run_sweep(spec))
    text_b = csv_text(run_sweep(spec))
    assert text_a == text_b
    lines = text_a.split("\n")
    assert lines[0] == "purity,fidelity,oracle_residual,skipped"
    assert lines[-1] == "" and len(lines) == 17
    # shortest round-trip formatting keeps the file byte deterministic
    for line in lines[1:-1]:
        cells = line.split(",")
        assert len(cells) == 4
        assert float(cells[1]) == float(repr(float(cells[1])))

    out = tmp_path / "fig1.csv"
    written = emit_csv(run_sweep(spec), out)
    assert written == out.stat().st_size
    assert out.read_bytes() == text_a.encode()

    buffer = io.BytesIO()
    emit_csv(run_sweep(spec), buffer)
    assert buffer.getvalue() == text_a.encode()


def test_uhlmann_sweep_has_five_columns():
    result = run_sweep(figure_preset(10, points=11))
    lines = csv_text(result).split("\n")
    assert lines[0] == "e,fidelity,uhlmann,oracle_residual,skipped"
    for line in lines[1:-1]:
        assert len(line.split(",")) == 5
    # both traces live in the same file
    fids = np.array([row.fidelity for row in result.rows])
    uhls = np.array([row.uhlmann for row in result.rows])
    assert np.all(np.isfinite(fids)) and np.all(np.isfinite(uhls))


def test_partially_infeasible_sweep_records_skips():
    spec = SweepSpec(relation="rank2k3", sweep_variable="P",
                     sweep_range=(0.46, 0.6, 15), fixed={"C": 0.2, "y": 0.001})
    result = run_sweep(spec)
    skipped = [row for row in result.rows if row.skipped]
    kept = [row for row in result.rows if not row.skipped]
    assert skipped and kept
    for row in skipped:
        assert row.value < 0.5
        assert row.skipped.startswith("infeasible")
        assert "," not in row.skipped
        assert row.fidelity is None
    for row in kept:
        assert row.value >= 0.5 and math.isfinite(row.fidelity)


def test_fully_infeasible_sweep_raises():
    spec = SweepSpec(relation="rank2k3", sweep_variable="P",
                     sweep_range=(0.30, 0.45, 7), fixed={"C": 0.2, "y": 0.001})
    with pytest.raises(InfeasibleTargetError):
        run_sweep(spec)


def test_probe_feasible_range_brackets_the_presets():
    lo, hi = probe_feasible_range("rank2k3", "P", {"C": 0.2, "y": 0.01})
    assert 0.5 <= lo < hi <= 1.0
    with pytest.raises(InfeasibleTargetError):
        probe_feasible_range("rank2k3", "P", {"C": 0.2, "y": 0.45})


def test_angles_from_e_f_reproduces_the_coefficients():
    rng = np.random.default_rng(21)
    for _ in range(300):
        e = rng.uniform(-0.999, 0.999)
        f_cap = min((1.0 + e) / 4.0, 0.4999)
        f = rng.uniform(0.0, f_cap)
        phi, psi = angles_from_e_f(e, f)
        assert 0.0 <= phi <= HALF_PI and 0.0 <= psi <= HALF_PI
        assert_allclose(float(coeff_e(phi, psi)), e, rtol=0, atol=1e-10)
        assert_allclose(float(coeff_f(phi, psi)), f, rtol=0, atol=1e-10)


def test_angles_from_e_f_edges():
    # f = 0 maps exactly onto the psi = pi/2 slice
    phi, psi = angles_from_e_f(0.3, 0.0)
    assert psi == HALF_PI
    assert_allclose(float(coeff_e(phi, psi)), 0.3, rtol=0, atol=1e-12)
    # the constraint 4 f <= 1 + e bounds the reachable plane
    with pytest.raises(InfeasibleTargetError):
        angles_from_e_f(-0.5, 0.2)
    # boundary point e = 4 f - 1 stays feasible
    phi, psi = angles_from_e_f(0.0, 0.25)
    assert_allclose(float(coeff_f(phi, psi)), 0.25, rtol=0, atol=1e-10)


def test_sweep_columns_cover_the_preset_variables():
    assert set(SWEEP_COLUMNS) == {"P", "C", "e", "f"}
    assert DEFAULT_POINTS == 201
