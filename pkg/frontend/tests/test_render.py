"""Render pipeline against CSVs produced by the real sweep CLI."""

import subprocess
import sys

import numpy as np
import pytest

from xfid_figures import (
    FIGURE_IDS,
    RenderJob,
    SchemaError,
    build_figure,
    read_table,
    render,
)

import matplotlib.pyplot as plt


@pytest.fixture(scope="module")
def sweep_csvs(tmp_path_factory):
    """All ten figure datasets, generated through the public CLI only."""
    root = tmp_path_factory.mktemp("csv")
    paths = {}
    for figure in FIGURE_IDS:
        out = root / f"fig{figure}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "xfid.cli", "sweep", "--figure", str(figure),
             "--points", "25", "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        paths[figure] = out
    return paths


def test_renders_all_ten_presets(sweep_csvs, tmp_path):
    for figure, csv_path in sweep_csvs.items():
        out = tmp_path / f"fig{figure}.png"
        result = render(RenderJob(csv_path=csv_path, figure_id=figure,
                                  output_path=out))
        assert result.exists() and result.stat().st_size > 0
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_single_curve_figure_labels_and_raw_polyline(sweep_csvs):
    table = read_table(sweep_csvs[1], 1)
    fig = build_figure(table, 1)
    try:
        ax = fig.axes[0]
        assert ax.get_xlabel() == "purity"
        assert ax.get_ylabel() == "optimal fidelity"
        lines = ax.get_lines()
        assert len(lines) == 1
        # the polyline is the file data in file order, nothing interpolated
        assert np.array_equal(lines[0].get_xdata(), table["x"])
        assert np.array_equal(lines[0].get_ydata(), table["fidelity"])
        assert np.all(np.diff(lines[0].get_ydata()) >= -1e-12)
    finally:
        plt.close(fig)


def test_figure_ten_draws_two_labeled_curves(sweep_csvs):
    table = read_table(sweep_csvs[10], 10)
    fig = build_figure(table, 10)
    try:
        ax = fig.axes[0]
        assert ax.get_xlabel() == "e"
        labels = [line.get_label() for line in ax.get_lines()]
        assert labels == ["teleportation fidelity", "Uhlmann fidelity"]
        legend_texts = [t.get_text() for t in ax.get_legend().get_texts()]
        assert legend_texts == labels
        for line in ax.get_lines():
            assert np.all(np.diff(line.get_ydata()) <= 1e-12)
    finally:
        plt.close(fig)


def test_two_row_csv_renders(tmp_path):
    csv_path = tmp_path / "tiny.csv"
    csv_path.write_text("purity,fidelity,oracle_residual,skipped\n"
                        "0.5,0.66,1e-12,\n0.6,0.7,1e-12,\n")
    out = tmp_path / "tiny.png"
    render(RenderJob(csv_path=csv_path, figure_id=1, output_path=out))
    assert out.stat().st_size > 0


def test_skipped_rows_are_dropped(tmp_path):
    csv_path = tmp_path / "gap.csv"
    csv_path.write_text("purity,fidelity,oracle_residual,skipped\n"
                        "0.5,0.66,1e-12,\n"
                        "0.55,,,infeasible: outside the class band\n"
                        "0.6,0.7,1e-12,\n")
    table = read_table(csv_path, 1)
    assert table["x"] == [0.5, 0.6]
    assert table["fidelity"] == [0.66, 0.7]


def test_schema_mismatches_are_rejected(sweep_csvs, tmp_path):
    # concurrence data presented as a purity figure
    with pytest.raises(SchemaError):
        read_table(sweep_csvs[2], 1)
    # corrupt numeric cell
    bad = tmp_path / "bad.csv"
    bad.write_text("purity,fidelity,oracle_residual,skipped\n"
                   "0.5,not-a-number,1e-12,\n0.6,0.7,1e-12,\n")
    with pytest.raises(SchemaError):
        read_table(bad, 1)
    # wrong cell count
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("purity,fidelity,oracle_residual,skipped\n0.5,0.66\n")
    with pytest.raises(SchemaError):
        read_table(ragged, 1)
    # a skip reason must blank the metric cell
    lying = tmp_path / "lying.csv"
    lying.write_text("purity,fidelity,oracle_residual,skipped\n"
                     "0.5,0.66,1e-12,infeasible: reason\n0.6,0.7,1e-12,\n")
    with pytest.raises(SchemaError):
        read_table(lying, 1)


def test_figure_ten_requires_the_uhlmann_column(sweep_csvs):
    with pytest.raises(SchemaError, match="uhlmann"):
        read_table(sweep_csvs[5], 10)


def test_fewer_than_two_points_is_an_error(tmp_path):
    csv_path = tmp_path / "one.csv"
    csv_path.write_text("purity,fidelity,oracle_residual,skipped\n0.5,0.66,1e-12,\n")
    with pytest.raises(SchemaError, match="fewer than two"):
        read_table(csv_path, 1)


def test_svg_output(sweep_csvs, tmp_path):
    out = tmp_path / "fig3.svg"
    render(RenderJob(csv_path=sweep_csvs[3], figure_id=3, output_path=out,
                     format="svg"))
    head = out.read_text()[:500]
    assert "<svg" in head


def test_render_job_validates_its_fields(tmp_path):
    with pytest.raises(SchemaError):
        RenderJob(csv_path=tmp_path / "x.csv", figure_id=11,
                  output_path=tmp_path / "x.png")
    with pytest.raises(SchemaError):
        RenderJob(csv_path=tmp_path / "x.csv", figure_id=1,
                  output_path=tmp_path / "x.pdf", format="pdf")


def test_cli_round_trip(sweep_csvs, tmp_path):
    out = tmp_path / "fig7.png"
    ok = subprocess.run(
        [sys.executable, "-m", "xfid_figures.cli", "--csv", str(sweep_csvs[7]),
         "--figure", "7", "--out", str(out)],
        capture_output=True, text=True)
    assert ok.returncode == 0 and out.stat().st_size > 0

    svg = tmp_path / "fig7.svg"
    ok = subprocess.run(
        [sys.executable, "-m", "xfid_figures.cli", "--csv", str(sweep_csvs[7]),
         "--figure", "7", "--out", str(svg), "--svg"],
        capture_output=True, text=True)
    assert ok.returncode == 0 and "<svg" in svg.read_text()[:500]

    mismatch = subprocess.run(
        [sys.executable, "-m", "xfid_figures.cli", "--csv", str(sweep_csvs[2]),
         "--figure", "1", "--out", str(tmp_path / "no.png")],
        capture_output=True, text=True)
    assert mismatch.returncode == 2 and "error:" in mismatch.stderr

    missing = subprocess.run(
        [sys.executable, "-m", "xfid_figures.cli", "--figure", "1"],
        capture_output=True, text=True)
    assert missing.returncode == 2
