import math

import numpy as np
import pytest

from grating_orders.diffraction import order_alpha, sinc_sq
from grating_orders.figures import (
    FIGURE_IDS,
    FigureDataset,
    build_figure,
    emit,
    load_dataset,
    write_dataset,
)


@pytest.fixture()
def small_dataset():
    return FigureDataset(
        figure_id="fig6",
        params={"sigma": 0.5, "note": "unit-test"},
        columns=("alpha_t", "p_r"),
        rows=np.array([[math.pi, 0.9876543210123456], [2 * math.pi, 1.0000000000000002]]),
    )


class TestDatasetAndEmit:
    def test_validation(self):
        with pytest.raises(ValueError, match="unique"):
            FigureDataset("fig6", {}, ("a", "a"), np.zeros((1, 2)))
        with pytest.raises(ValueError, match="finite"):
            FigureDataset("fig6", {}, ("a", "b"), np.array([[1.0, float("nan")]]))
        with pytest.raises(ValueError, match="columns"):
            FigureDataset("fig6", {}, ("a", "b"), np.zeros((2, 3)))

    def test_csv_layout(self, small_dataset):
        text = emit(small_dataset, "csv").decode()
        lines = text.splitlines()
        assert lines[0] == "# figure: fig6"
        assert lines[1].startswith("# version:")
        assert any(line.startswith("# sigma:") for line in lines)
        header_idx = next(i for i, line in enumerate(lines) if not line.startswith("#"))
        assert lines[header_idx] == "alpha_t,p_r"
        assert len(lines) == header_idx + 1 + 2
        assert text.endswith("\n")

    def test_empty_rows_give_header_only(self):
        ds = FigureDataset("fig6", {}, ("a", "b"), np.zeros((0, 2)))
        lines = emit(ds, "csv").decode().splitlines()
        assert lines[-1] == "a,b"

    def test_single_row(self):
        ds = FigureDataset("fig6", {}, ("a",), np.array([[1.25]]))
        lines = emit(ds, "csv").decode().splitlines()
        assert lines[-1] == "1.25"

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_round_trip_is_lossless(self, small_dataset, fmt):
        back = load_dataset(emit(small_dataset, fmt), fmt)
        assert back.figure_id == small_dataset.figure_id
        assert back.columns == small_dataset.columns
        assert np.array_equal(back.rows, small_dataset.rows)

    def test_unknown_format_rejected(self, small_dataset):
        with pytest.raises(ValueError):
            emit(small_dataset, "xml")

    def test_write_is_deterministic_and_atomic(self, small_dataset, tmp_path):
        p1 = write_dataset(small_dataset, tmp_path / "a.csv")
        p2 = write_dataset(small_dataset, tmp_path / "b.csv")
        assert p1.read_bytes() == p2.read_bytes()
        assert not list(tmp_path.glob("*.tmp"))


class TestBuilders:
    def test_all_ids_build(self):
        for fid in FIGURE_IDS:
            ds = build_figure(fid)
            assert ds.rows.shape[0] > 0

    def test_unknown_id(self):
        with pytest.raises(ValueError, match="unknown figure id"):
            build_figure("fig12")

    def test_fig3_envelope_and_orders(self):
        ds = build_figure("fig3", samples=801)
        alpha = ds.rows[:, 0]
        envelope = ds.rows[:, 1]
        resultant = ds.rows[:, 2]
        i0 = np.argmin(np.abs(alpha))
        assert envelope[i0] == pytest.approx(4.0, rel=1e-6)
        assert resultant[i0] == pytest.approx(16.0, rel=1e-6)
        # the resultant rides on top of the collective envelope at the orders
        # but integrates to the same probability (checked via the strip tests)
        assert resultant.max() > envelope.max()

    def test_fig4_params_carry_strip_value(self):
        ds = build_figure("fig4")
        strip = ds.params["riemann_strip"]
        assert strip == pytest.approx(
            math.pi * 0.125 * 4 * sinc_sq(float(order_alpha(12, 0.125))), rel=1e-12
        )
        assert ds.params["peak_base_width"] == pytest.approx(2 * math.pi * 0.125 / 4, rel=1e-12)

    def test_fig6_shows_threshold_jumps(self):
        ds = build_figure("fig6", samples=500)
        alpha, p_r = ds.rows[:, 0], ds.rows[:, 2]
        a3 = float(order_alpha(3, 0.5))
        left = p_r[np.searchsorted(alpha, a3 - 1e-6)]
        right = p_r[np.searchsorted(alpha, a3 + 1e-6)]
        assert right - left == pytest.approx(0.0483643488, rel=1e-4)
        # j-equivalent column is alpha over pi sigma
        assert ds.rows[:, 1] == pytest.approx(alpha / (math.pi * 0.5), rel=1e-14)

    def test_fig6_fig7_reciprocity_row_wise(self):
        p = build_figure("fig6", samples=400)
        w = build_figure("fig7", samples=400)
        assert np.array_equal(p.rows[:, 0], w.rows[:, 0])
        assert np.max(np.abs(p.rows[:, 2] * w.rows[:, 2] - 1.0)) <= 1e-9

    def test_fig8_structure(self):
        ds = build_figure("fig8")
        js = ds.rows[:, 0].astype(int).tolist()
        assert js == list(range(-3, 4))
        by_j = {int(r[0]): r for r in ds.rows}
        # G(3-) excludes the third orders, G(3+) includes them
        assert by_j[3][1] == 0.0 and by_j[3][2] == 0.0
        assert by_j[3][3] > 0.0 and by_j[3][4] > 0.0
        # even orders are envelope nulls for both gratings
        assert by_j[2][1] == by_j[2][3] == 0.0
        assert ds.params["omega_minus"] == pytest.approx(1.0285068327, rel=1e-7)
        assert ds.params["omega_plus"] == pytest.approx(0.9797701272, rel=1e-7)
        assert ds.params["e_r_minus"] == pytest.approx(1.0, abs=1e-9)
        assert ds.params["e_r_plus"] == pytest.approx(1.0, abs=1e-9)

    def test_fig9_step_function(self):
        ds = build_figure("fig9", samples=600)
        alpha, e_r0 = ds.rows[:, 0], ds.rows[:, 2]
        assert e_r0[0] == 1.0
        assert np.all(np.diff(e_r0) <= 1e-15)
        a3 = float(order_alpha(3, 0.5))
        left = e_r0[np.searchsorted(alpha, a3 - 1e-6)]
        right = e_r0[np.searchsorted(alpha, a3 + 1e-6)]
        assert left == pytest.approx(0.5523124172, rel=1e-6)
        assert right == pytest.approx(0.5261405726, rel=1e-6)

    def test_overrides_apply(self):
        ds = build_figure("fig6", sigma=0.5, alpha_min=2.0, alpha_max=9.0, samples=50)
        assert ds.params["alpha_min"] == 2.0
        assert ds.rows[0, 0] == 2.0
        assert ds.rows[-1, 0] == 9.0
