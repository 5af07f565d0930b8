"""Expression language, verification suites, report emitters and the command line."""

from .expr import Context, canonical, eval_expr, parse_expr, to_text
from .suites import SUITES, Case, SuiteResult, run_suite

__all__ = ["Context", "canonical", "eval_expr", "parse_expr", "to_text", "SUITES", "Case", "SuiteResult", "run_suite"]
