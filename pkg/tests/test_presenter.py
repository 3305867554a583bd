import unittest
from pathlib import Path

from fdafnet.application.presenters import ControllerSummary, ProcessReport, ReportPresenter


def make_summary(name: str, steady: float, reconvergence: float | None = 12.0) -> ControllerSummary:
    return ControllerSummary(
        controller=name,
        runs=4,
        steady_state_db=steady,
        final_db=steady - 1.0,
        mean_erle_db=15.0,
        reconvergence_blocks=reconvergence,
        not_reconverged=0 if reconvergence is not None else 4,
    )


class ReportPresenterTests(unittest.TestCase):
    def setUp(self):
        self.presenter = ReportPresenter()

    def test_summary_is_sorted_by_steady_state(self):
        text = self.presenter.summary_markdown(
            [make_summary("fdaf", -8.0), make_summary("dnn_fdaf", -21.5, None)],
            block_period_s=0.064,
            steady_state_window=50,
            tolerance_db=3.0,
        )

        self.assertIn("`64.0 ms`", text)
        self.assertLess(text.index("`dnn_fdaf`"), text.index("`fdaf`"))
        self.assertIn("| `dnn_fdaf` | 4 | -21.50 | -22.50 | 15.00 | n/a | 4 | 0 |", text)

    def test_gnuplot_script_plots_both_metrics(self):
        script = self.presenter.gnuplot_script({"fdaf": Path("fdaf/aggregate.csv")})

        self.assertIn("set datafile separator ','", script)
        self.assertIn("'fdaf/aggregate.csv' every ::1 using 2:3", script)
        self.assertIn("using 2:4", script)

    def test_checkpoint_text(self):
        summary = {
            "version": 1,
            "meta": {"variant": "dnn_fdaf", "fft_size": 32, "hop": 16, "hidden_size": 4, "epoch": 2, "note": "x"},
            "parameters": 1234,
            "tensors": {"network.input_layer.weight": [4, 34]},
        }

        text = self.presenter.checkpoint_text(summary)

        self.assertIn("variant: dnn_fdaf", text)
        self.assertIn("network parameters: 1,234", text)
        self.assertIn("(4, 34)", text)
        self.assertIn('meta: {"note": "x"}', text)

    def test_process_text_reports_budget_share(self):
        report = ProcessReport(
            blocks=10,
            mean_block_ms=16.0,
            max_block_ms=20.0,
            budget_ms=64.0,
            rejected_updates=1,
            outputs=("out_e.wav",),
            final_nesd_db=-12.346,
        )

        text = self.presenter.process_text(report)

        self.assertIn("25.0% of the 64.0 ms block", text)
        self.assertIn("final NESD_ZP: -12.35 dB", text)
        self.assertIn("wrote out_e.wav", text)


if __name__ == "__main__":
    unittest.main()
