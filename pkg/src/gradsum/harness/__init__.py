"""Program enumeration and generation, reference oracles, and the metatheory suites."""

from .enumerate import enum_exprs, enum_types, raw_count, type_count
from .generate import GenConfig, Program, gen_one, gen_welltyped
from .shrink import shrink
from .suites import SUITES, SuiteConfig, SuiteReport, run_suite
from .vary import LOOSEN, TIGHTEN, vary_ctx, vary_precision

__all__ = [
    "enum_types", "enum_exprs", "raw_count", "type_count", "GenConfig", "Program", "gen_one",
    "gen_welltyped", "shrink", "SUITES", "SuiteConfig", "SuiteReport", "run_suite", "LOOSEN",
    "TIGHTEN", "vary_ctx", "vary_precision",
]
