from .report_presenter import ControllerSummary, ProcessReport, ReportPresenter

__all__ = [
    "ControllerSummary",
    "ProcessReport",
    "ReportPresenter",
]
