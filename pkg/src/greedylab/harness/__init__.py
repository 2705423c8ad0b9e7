"""Verification suites for the greedy-type inequalities."""

from .checks import POINTWISE, Constants, MissingConstant
from .config import DEFAULT_NORMS, SUITES, VerifyConfig
from .report import CheckReport, report_document
from .runner import any_failed, replay, run_all, run_document

__all__ = ["POINTWISE", "Constants", "MissingConstant", "DEFAULT_NORMS", "SUITES", "VerifyConfig",
           "CheckReport", "report_document", "any_failed", "replay", "run_all", "run_document"]
