"""Gradual sum types: checking, elaboration to a cast calculus, evaluation, and a metatheory harness."""

from .syntax import parse_expr, parse_type, parse_target, print_expr, print_type, print_target
from .typecheck import check, synth, TypeCheckError, ErrorKind
from .elaborate import ElabMode, elab_check, elab_synth
from .target import evaluate, principal_type, term_precision

__version__ = "0.1.0"
